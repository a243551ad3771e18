#include "uavpp/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <sstream>

#include "uavpp/errors.hpp"

namespace uavpp {

namespace {

constexpr const char* kAlgorithmNames[] = {"nsga2",  "optmpnds", "optmpnds2",
                                           "bpnnia", "bpheia",   "bpaima"};

bool is_immune(Algorithm a) {
    return a == Algorithm::BpNnia || a == Algorithm::BpHeia || a == Algorithm::BpAima;
}

}  // namespace

std::string algorithm_name(Algorithm algorithm) {
    return kAlgorithmNames[static_cast<int>(algorithm)];
}

std::optional<Algorithm> algorithm_from_name(std::string_view name) {
    for (int i = 0; i < 6; ++i) {
        if (name == kAlgorithmNames[i]) return static_cast<Algorithm>(i);
    }
    return std::nullopt;
}

std::vector<Algorithm> all_algorithms() {
    return {Algorithm::Nsga2,  Algorithm::OptMpnds, Algorithm::OptMpnds2,
            Algorithm::BpNnia, Algorithm::BpHeia,   Algorithm::BpAima};
}

void validate_config(const AlgorithmConfig& c) {
    auto fail = [](const std::string& msg) { throw ValidationError("config: " + msg); };
    if (c.population < 1) fail("population must be positive");
    if (c.activation < 1 || c.activation > c.population)
        fail("activation must lie in [1, population]");
    if (c.fe_budget < c.population) fail("fe_budget must be at least the population size");
    for (double p : {c.p_c, c.p_m, c.heia_sbx_probability, c.de1.cr, c.de2.cr, c.de3.cr}) {
        if (p < 0.0 || p > 1.0) fail("probabilities must lie in [0, 1]");
    }
    if (c.dis_c <= 0.0 || c.dis_m <= 0.0) fail("distribution indices must be positive");
    if (c.de_window_generations < 1) fail("de_window_generations must be positive");
    if (c.max_offset_m <= 0.0) fail("max_offset_m must be positive");
}

// ---- variation operators ---------------------------------------------------

double sbx_delta(double u, double dis_c) {
    const double exponent = 1.0 / (1.0 + dis_c);
    if (u < 0.5) return std::pow(2.0 * u, exponent);
    return std::pow(1.0 / (2.0 - 2.0 * u), exponent);
}

double sbx_mix(double clone_gene, double partner_gene, double delta) {
    return 0.5 * ((1.0 + delta) * clone_gene + (1.0 - delta) * partner_gene);
}

Genome sbx(const Genome& clone, const Genome& partner, double dis_c, double p_c,
           const GenomeBounds& bounds, Rng& rng) {
    Genome child = clone;
    for (std::size_t j = 0; j < child.genes.size(); ++j) {
        if (rng.uniform01() < p_c) {
            const double delta = sbx_delta(rng.uniform01(), dis_c);
            child.genes[j] =
                bounds.clamp_gene(j, sbx_mix(clone.genes[j], partner.genes[j], delta));
        }
    }
    return child;
}

Genome de_offspring(const Genome& clone, const std::vector<const Genome*>& parents,
                    DeVariant variant, const DeParams& params, const GenomeBounds& bounds,
                    Rng& rng) {
    Genome child = clone;
    const std::size_t dim = child.genes.size();
    const std::size_t forced = rng.index(dim);  // one gene always crosses
    for (std::size_t j = 0; j < dim; ++j) {
        if (rng.uniform01() >= params.cr && j != forced) continue;
        double v = clone.genes[j] + params.f * (parents[0]->genes[j] - parents[1]->genes[j]);
        if (variant == DeVariant::De1) {
            v += params.f * (parents[2]->genes[j] - parents[3]->genes[j]);
        }
        child.genes[j] = bounds.clamp_gene(j, v);
    }
    return child;
}

double pm_perturbation(double u, double rel_lo, double rel_hi, double dis_m) {
    const double exponent = 1.0 / (dis_m + 1.0);
    if (u <= 0.5) {
        const double base = 2.0 * u + (1.0 - 2.0 * u) * std::pow(1.0 - rel_lo, dis_m + 1.0);
        return std::pow(base, exponent) - 1.0;
    }
    const double base =
        2.0 * (1.0 - u) + 2.0 * (u - 0.5) * std::pow(1.0 - rel_hi, dis_m + 1.0);
    return 1.0 - std::pow(base, exponent);
}

void polynomial_mutation(Genome& genome, double dis_m, double p_m, const GenomeBounds& bounds,
                         Rng& rng) {
    for (std::size_t j = 0; j < genome.genes.size(); ++j) {
        if (rng.uniform01() >= p_m) continue;
        const double range = bounds.ub[j] - bounds.lb[j];
        if (range <= 0.0) continue;
        const double rel_lo = (genome.genes[j] - bounds.lb[j]) / range;
        const double rel_hi = (bounds.ub[j] - genome.genes[j]) / range;
        const double delta = pm_perturbation(rng.uniform01(), rel_lo, rel_hi, dis_m);
        genome.genes[j] = bounds.clamp_gene(j, genome.genes[j] + delta * range);
    }
}

void DeStrategyStats::record_generation(const std::array<long, 3>& uses,
                                        const std::array<long, 3>& successes) {
    uses_.push_back(uses);
    successes_.push_back(successes);
    while (uses_.size() > static_cast<std::size_t>(window_)) {
        uses_.pop_front();
        successes_.pop_front();
    }
}

std::array<double, 3> DeStrategyStats::selection_probabilities() const {
    std::array<double, 3> weight{};
    double total = 0.0;
    for (int s = 0; s < 3; ++s) {
        long uses = 0, successes = 0;
        for (const auto& u : uses_) uses += u[s];
        for (const auto& v : successes_) successes += v[s];
        weight[s] = static_cast<double>(successes + 1) / static_cast<double>(uses + 1);
        total += weight[s];
    }
    for (double& w : weight) w /= total;
    return weight;
}

DeVariant adaptive_de_select(const DeStrategyStats& stats, Rng& rng) {
    const std::array<double, 3> p = stats.selection_probabilities();
    const double u = rng.uniform01();
    if (u < p[0]) return DeVariant::De1;
    if (u < p[0] + p[1]) return DeVariant::De2;
    return DeVariant::De3;
}

// ---- framework steps ---------------------------------------------------------

std::vector<Individual> initialize(int count, const GenomeBounds& bounds, int case_id,
                                   const CityScenario& scenario, Rng& rng) {
    std::vector<Individual> population(count);
    for (Individual& ind : population) {
        ind.genome.genes.resize(bounds.size());
        for (std::size_t j = 0; j < bounds.size(); ++j) {
            ind.genome.genes[j] = rng.uniform(bounds.lb[j], bounds.ub[j]);
        }
        ind.eval = evaluate_case(case_id, ind.genome, scenario);
    }
    return population;
}

namespace {

// Activation/selection order: better layer first, then sparser, then stable.
bool precedes(const RankedPopulation& ranked, std::size_t a, std::size_t b) {
    const RankedIndividual& ia = ranked.individuals[a];
    const RankedIndividual& ib = ranked.individuals[b];
    if (ia.layer != ib.layer) return ia.layer < ib.layer;
    if (ia.crowding != ib.crowding) return ia.crowding > ib.crowding;
    return a < b;
}

}  // namespace

std::vector<std::size_t> activate(const RankedPopulation& ranked, int n_activate) {
    std::vector<std::size_t> order(ranked.individuals.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return precedes(ranked, a, b); });
    order.resize(std::min<std::size_t>(order.size(), n_activate));
    return order;
}

std::vector<int> clone_allocate(const std::vector<std::size_t>& activated,
                                const RankedPopulation& ranked, int n_clone) {
    const std::size_t n = activated.size();
    std::vector<int> counts(n, 0);
    if (n == 0) return counts;

    int worst_layer = 0;
    double max_finite_cd = 0.0;
    bool any_finite = false;
    for (std::size_t i : activated) {
        worst_layer = std::max(worst_layer, ranked.individuals[i].layer);
        const double cd = ranked.individuals[i].crowding;
        if (cd != kCrowdingSentinel) {
            max_finite_cd = std::max(max_finite_cd, cd);
            any_finite = true;
        }
    }
    const double boundary_cd = any_finite ? 2.0 * max_finite_cd : 1.0;

    std::vector<double> weight(n, 0.0);
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const RankedIndividual& ind = ranked.individuals[activated[k]];
        const double cd = ind.crowding == kCrowdingSentinel ? boundary_cd : ind.crowding;
        weight[k] = cd + static_cast<double>(worst_layer - ind.layer);
        total += weight[k];
    }

    if (total <= 0.0) {
        const int each = static_cast<int>(
            std::ceil(static_cast<double>(n_clone) / static_cast<double>(n)));
        std::fill(counts.begin(), counts.end(), each);
        return counts;
    }
    for (std::size_t k = 0; k < n; ++k) {
        counts[k] = static_cast<int>(std::ceil(n_clone * weight[k] / total));
    }
    return counts;
}

std::vector<std::size_t> environmental_selection(const RankedPopulation& ranked,
                                                 std::size_t capacity) {
    const std::size_t n = ranked.individuals.size();
    if (n <= capacity) {
        std::vector<std::size_t> all(n);
        std::iota(all.begin(), all.end(), std::size_t{0});
        return all;
    }

    std::vector<std::size_t> keep;
    keep.reserve(capacity);
    for (int layer = 1; layer <= ranked.layer_count && keep.size() < capacity; ++layer) {
        std::vector<std::size_t> members = ranked.layer_members(layer);
        if (keep.size() + members.size() <= capacity) {
            keep.insert(keep.end(), members.begin(), members.end());
            continue;
        }
        std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
            const double ca = ranked.individuals[a].crowding;
            const double cb = ranked.individuals[b].crowding;
            if (ca != cb) return ca > cb;
            return a < b;
        });
        members.resize(capacity - keep.size());
        keep.insert(keep.end(), members.begin(), members.end());
    }
    std::sort(keep.begin(), keep.end());
    return keep;
}

PopulationView population_view(const std::vector<Individual>& population) {
    PopulationView view;
    view.eff.reserve(population.size());
    view.safe.reserve(population.size());
    view.concatenated.reserve(population.size());
    view.violations.reserve(population.size());
    for (const Individual& ind : population) {
        view.eff.push_back({ind.eval.eff[0], ind.eval.eff[1]});
        view.safe.push_back({ind.eval.safe[0], ind.eval.safe[1]});
        view.concatenated.push_back(
            {ind.eval.eff[0], ind.eval.eff[1], ind.eval.safe[0], ind.eval.safe[1]});
        view.violations.push_back(ind.eval.violation);
    }
    return view;
}

RankedPopulation rank_population(Algorithm variant, const PopulationView& view) {
    RankedPopulation ranked;
    switch (variant) {
        case Algorithm::Nsga2:
            ranked = rank_single_party(view.concatenated, view.violations);
            break;
        case Algorithm::OptMpnds:
            ranked = optmpnds(view.eff, view.safe, view.violations);
            break;
        default:
            ranked = mpnds2(view.eff, view.safe, view.violations);
            break;
    }
    assign_crowding(ranked, view.concatenated);
    return ranked;
}

std::vector<std::size_t> extract_mps(const std::vector<Individual>& population) {
    const PopulationView view = population_view(population);
    return extract_mps(view.eff, view.safe, view.violations);
}

// ---- run loop ----------------------------------------------------------------

namespace {

NormalizationBounds bounds_from_population(const std::vector<Individual>& population) {
    PartyFronts fronts;
    for (const Individual& ind : population) {
        fronts.eff.push_back({ind.eval.eff[0], ind.eval.eff[1]});
        fronts.safe.push_back({ind.eval.safe[0], ind.eval.safe[1]});
    }
    return compute_bounds({fronts});
}

// meanHV of the per-party nondominated fronts of the feasible population.
// The strict common subset can be empty mid-run, so its volume is too spiky
// to serve as a convergence signal; the party fronts carry the same
// progress information smoothly.
double party_front_mean_hv(const std::vector<Individual>& population,
                           const NormalizationBounds& bounds) {
    ObjectiveMatrix eff, safe;
    for (const Individual& ind : population) {
        if (!ind.eval.feasible()) continue;
        eff.push_back({ind.eval.eff[0], ind.eval.eff[1]});
        safe.push_back({ind.eval.safe[0], ind.eval.safe[1]});
    }
    if (eff.empty()) return 0.0;

    PartyFronts fronts;
    const std::vector<int> eff_ranks = fast_nds(eff);
    const std::vector<int> safe_ranks = fast_nds(safe);
    for (std::size_t i = 0; i < eff.size(); ++i) {
        if (eff_ranks[i] == 1) fronts.eff.push_back(eff[i]);
        if (safe_ranks[i] == 1) fronts.safe.push_back(safe[i]);
    }
    return mean_hv(fronts, bounds).mean_hv;
}

// Binary tournament on (layer, crowding, index).
std::size_t tournament(const RankedPopulation& ranked, Rng& rng) {
    const std::size_t a = rng.index(ranked.individuals.size());
    const std::size_t b = rng.index(ranked.individuals.size());
    return precedes(ranked, a, b) ? a : b;
}

// Draw `k` mutually distinct indices from `pool`; falls back to drawing with
// replacement when the pool is too small.
std::vector<std::size_t> draw_distinct(const std::vector<std::size_t>& pool, std::size_t k,
                                       Rng& rng) {
    std::vector<std::size_t> out;
    out.reserve(k);
    if (pool.size() <= k) {
        for (std::size_t i = 0; i < k; ++i) out.push_back(pool[rng.index(pool.size())]);
        return out;
    }
    while (out.size() < k) {
        const std::size_t candidate = pool[rng.index(pool.size())];
        if (std::find(out.begin(), out.end(), candidate) == out.end()) out.push_back(candidate);
    }
    return out;
}

struct TaggedGenome {
    Genome genome;
    int strategy = -1;  // DE variant the genome came from, -1 otherwise
};

}  // namespace

RunResult run_algorithm(const AlgorithmConfig& config, int case_id, const CityScenario& scenario) {
    validate_config(config);
    validate_case_id(case_id);

    RunResult result;
    result.config = config;
    result.case_id = case_id;

    Rng rng(config.seed);
    const GenomeBounds bounds =
        GenomeBounds::for_scenario(scenario, kInteriorWaypoints, config.max_offset_m);
    const double p_m = config.p_m > 0.0 ? config.p_m : 1.0 / static_cast<double>(bounds.size());

    std::vector<Individual> population =
        initialize(config.population, bounds, case_id, scenario, rng);
    long long evaluations = population.size();

    result.history_bounds = bounds_from_population(population);
    {
        const auto mps = extract_mps(population);
        result.history.push_back({0, evaluations,
                                  party_front_mean_hv(population, result.history_bounds),
                                  static_cast<int>(mps.size())});
    }

    // DE1 needs four distinct difference parents, DE2 two; smaller activated
    // sets fall back to sampling with replacement.
    const int distinct_needed = config.variant == Algorithm::BpAima  ? 5
                                : config.variant == Algorithm::BpHeia ? 3
                                                                      : 0;
    if (distinct_needed > 0 && config.activation < distinct_needed) {
        std::cerr << "uavpp: activation " << config.activation
                  << " cannot supply distinct difference parents; sampling with replacement\n";
    }

    DeStrategyStats de_stats(config.de_window_generations);
    int generation = 0;

    while (evaluations < config.fe_budget) {
        ++generation;
        const PopulationView view = population_view(population);
        const RankedPopulation ranked = rank_population(config.variant, view);

        std::vector<TaggedGenome> offspring;
        if (is_immune(config.variant)) {
            const std::vector<std::size_t> activated = activate(ranked, config.activation);
            const std::vector<int> clones = clone_allocate(activated, ranked, config.population);
            for (std::size_t k = 0; k < activated.size(); ++k) {
                const Genome& parent = population[activated[k]].genome;
                for (int c = 0; c < clones[k]; ++c) {
                    TaggedGenome child;
                    switch (config.variant) {
                        case Algorithm::BpNnia: {
                            const Genome& partner =
                                population[activated[rng.index(activated.size())]].genome;
                            child.genome =
                                sbx(parent, partner, config.dis_c, config.p_c, bounds, rng);
                            break;
                        }
                        case Algorithm::BpHeia: {
                            if (rng.uniform01() < config.heia_sbx_probability) {
                                const Genome& partner =
                                    population[activated[rng.index(activated.size())]].genome;
                                child.genome =
                                    sbx(parent, partner, config.dis_c, config.p_c, bounds, rng);
                            } else {
                                const auto picks = draw_distinct(activated, 2, rng);
                                child.genome = de_offspring(
                                    parent,
                                    {&population[picks[0]].genome, &population[picks[1]].genome},
                                    DeVariant::De2, config.de2, bounds, rng);
                            }
                            break;
                        }
                        default: {  // BpAima
                            const DeVariant strategy = adaptive_de_select(de_stats, rng);
                            const std::size_t parents_needed =
                                strategy == DeVariant::De1 ? 4 : 2;
                            const auto picks = draw_distinct(activated, parents_needed, rng);
                            std::vector<const Genome*> parents;
                            for (std::size_t p : picks) parents.push_back(&population[p].genome);
                            const DeParams& params = strategy == DeVariant::De1   ? config.de1
                                                     : strategy == DeVariant::De2 ? config.de2
                                                                                  : config.de3;
                            child.genome =
                                de_offspring(parent, parents, strategy, params, bounds, rng);
                            child.strategy = static_cast<int>(strategy);
                            break;
                        }
                    }
                    polynomial_mutation(child.genome, config.dis_m, p_m, bounds, rng);
                    offspring.push_back(std::move(child));
                }
            }
        } else {
            // Generational loop: tournament parents, paired one-child SBX.
            while (offspring.size() < static_cast<std::size_t>(config.population)) {
                const std::size_t p1 = tournament(ranked, rng);
                const std::size_t p2 = tournament(ranked, rng);
                Genome c1 = sbx(population[p1].genome, population[p2].genome, config.dis_c,
                                config.p_c, bounds, rng);
                polynomial_mutation(c1, config.dis_m, p_m, bounds, rng);
                offspring.push_back({std::move(c1), -1});
                if (offspring.size() < static_cast<std::size_t>(config.population)) {
                    Genome c2 = sbx(population[p2].genome, population[p1].genome, config.dis_c,
                                    config.p_c, bounds, rng);
                    polynomial_mutation(c2, config.dis_m, p_m, bounds, rng);
                    offspring.push_back({std::move(c2), -1});
                }
            }
        }

        const long long room = config.fe_budget - evaluations;
        if (static_cast<long long>(offspring.size()) > room) {
            offspring.resize(static_cast<std::size_t>(room));
        }
        if (offspring.empty()) break;

        const std::size_t parent_count = population.size();
        std::vector<int> offspring_strategy(offspring.size(), -1);
        for (std::size_t i = 0; i < offspring.size(); ++i) {
            Individual ind;
            ind.genome = std::move(offspring[i].genome);
            ind.eval = evaluate_case(case_id, ind.genome, scenario);
            offspring_strategy[i] = offspring[i].strategy;
            population.push_back(std::move(ind));
        }
        evaluations += static_cast<long long>(offspring.size());

        const PopulationView merged_view = population_view(population);
        const RankedPopulation merged_ranked = rank_population(config.variant, merged_view);
        const std::vector<std::size_t> keep = environmental_selection(
            merged_ranked, static_cast<std::size_t>(config.population));

        if (config.variant == Algorithm::BpAima) {
            std::array<long, 3> uses{}, successes{};
            for (int s : offspring_strategy) {
                if (s >= 0) ++uses[s];
            }
            for (std::size_t i : keep) {
                if (i >= parent_count) {
                    const int s = offspring_strategy[i - parent_count];
                    if (s >= 0) ++successes[s];
                }
            }
            de_stats.record_generation(uses, successes);
        }

        std::vector<Individual> next;
        next.reserve(keep.size());
        for (std::size_t i : keep) next.push_back(std::move(population[i]));
        population = std::move(next);

        const auto mps = extract_mps(population);
        result.history.push_back({generation, evaluations,
                                  party_front_mean_hv(population, result.history_bounds),
                                  static_cast<int>(mps.size())});
    }

    result.final_population = std::move(population);
    result.mps = extract_mps(result.final_population);
    result.evaluations_used = evaluations;
    return result;
}

}  // namespace uavpp
