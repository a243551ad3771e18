#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "uavpp/metrics.hpp"
#include "uavpp/objectives.hpp"
#include "uavpp/ranking.hpp"
#include "uavpp/rng.hpp"

namespace uavpp {

enum class Algorithm { Nsga2, OptMpnds, OptMpnds2, BpNnia, BpHeia, BpAima };

std::string algorithm_name(Algorithm algorithm);
std::optional<Algorithm> algorithm_from_name(std::string_view name);
std::vector<Algorithm> all_algorithms();

struct DeParams {
    double cr = 0.5;
    double f = 0.5;
};

struct AlgorithmConfig {
    Algorithm variant = Algorithm::BpAima;
    int population = 105;     // nC, also the clone pool size
    int activation = 20;      // nA, activated antibodies per generation
    long long fe_budget = 80000;
    std::uint64_t seed = 1;
    double dis_c = 20.0;      // SBX distribution index
    double dis_m = 20.0;      // polynomial-mutation distribution index
    double p_c = 1.0;
    double p_m = 0.0;         // 0 -> 1/dimension
    DeParams de1{0.9, 0.7};
    DeParams de2{0.5, 0.5};
    DeParams de3{0.1, 0.5};
    double heia_sbx_probability = 0.5;
    int de_window_generations = 5;
    double max_offset_m = kDefaultMaxOffsetM;
};

// Throws ValidationError naming the offending field.
void validate_config(const AlgorithmConfig& config);

struct Individual {
    Genome genome;
    BipartyEvaluation eval;
};

// Per-generation progress sample. mean_hv tracks the per-party feasible
// fronts of the whole population against the frozen run bounds; the common
// Pareto subset itself can legitimately be empty mid-run, so its volume is
// too spiky to serve as a convergence signal. mps_size reports that subset's
// size alongside.
struct GenerationRecord {
    int generation = 0;
    long long evaluations = 0;
    double mean_hv = 0.0;
    int mps_size = 0;
};

struct RunResult {
    std::vector<Individual> final_population;
    std::vector<std::size_t> mps;  // indices into final_population
    std::vector<GenerationRecord> history;
    AlgorithmConfig config;
    int case_id = 1;
    long long evaluations_used = 0;
    // Normalization box frozen from the initial population; per-generation
    // mean_hv in history is measured against it.
    NormalizationBounds history_bounds;
};

// ---- variation operators ------------------------------------------------

// Spread factor of the simulated binary crossover for one uniform draw.
double sbx_delta(double u, double dis_c);
// One-child SBX blend of a clone gene with a partner gene.
double sbx_mix(double clone_gene, double partner_gene, double delta);

// Whole-genome one-child SBX. Per gene: one draw against p_c, then (when
// crossing) one draw for the spread factor.
Genome sbx(const Genome& clone, const Genome& partner, double dis_c, double p_c,
           const GenomeBounds& bounds, Rng& rng);

enum class DeVariant { De1, De2, De3 };

// Binomial-crossover differential evolution. De1 takes four parents (two
// difference pairs); De2/De3 take two. One gene index always crosses.
Genome de_offspring(const Genome& clone, const std::vector<const Genome*>& parents,
                    DeVariant variant, const DeParams& params, const GenomeBounds& bounds,
                    Rng& rng);

// Boundary-aware polynomial-mutation perturbation, as a fraction of the
// gene range. u is the uniform draw; rel_lo/rel_hi are the distances to the
// bounds as fractions of the range.
double pm_perturbation(double u, double rel_lo, double rel_hi, double dis_m);

void polynomial_mutation(Genome& genome, double dis_m, double p_m, const GenomeBounds& bounds,
                         Rng& rng);

// Sliding-window success statistics for the adaptive DE strategy choice.
class DeStrategyStats {
public:
    explicit DeStrategyStats(int window_generations = 5) : window_(window_generations) {}

    void record_generation(const std::array<long, 3>& uses, const std::array<long, 3>& successes);

    // Laplace-smoothed success rates (successes+1)/(uses+1) over the window,
    // normalized to sum to 1.
    std::array<double, 3> selection_probabilities() const;

private:
    int window_;
    std::deque<std::array<long, 3>> uses_;
    std::deque<std::array<long, 3>> successes_;
};

DeVariant adaptive_de_select(const DeStrategyStats& stats, Rng& rng);

// ---- framework steps -----------------------------------------------------

// Uniform random population within bounds, fully evaluated.
std::vector<Individual> initialize(int count, const GenomeBounds& bounds, int case_id,
                                   const CityScenario& scenario, Rng& rng);

// First n_activate individuals by (layer asc, crowding desc, index asc).
std::vector<std::size_t> activate(const RankedPopulation& ranked, int n_activate);

// Clone counts per activated individual (aligned with `activated`), from
// crowding plus the layer-gap convergence indicator.
std::vector<int> clone_allocate(const std::vector<std::size_t>& activated,
                                const RankedPopulation& ranked, int n_clone);

// Layer-by-layer fill to capacity; the last layer is truncated by descending
// crowding with a stable index tie-break. Returns retained indices sorted
// ascending.
std::vector<std::size_t> environmental_selection(const RankedPopulation& ranked,
                                                 std::size_t capacity);

RunResult run_algorithm(const AlgorithmConfig& config, int case_id,
                        const CityScenario& scenario);

// ---- shared helpers (also used by the experiment layer) ------------------

// Party objective rows + violations for a population.
struct PopulationView {
    ObjectiveMatrix eff;
    ObjectiveMatrix safe;
    ObjectiveMatrix concatenated;
    std::vector<double> violations;
};
PopulationView population_view(const std::vector<Individual>& population);

// Ranking with the sorter the variant prescribes, crowding attached.
RankedPopulation rank_population(Algorithm variant, const PopulationView& view);

std::vector<std::size_t> extract_mps(const std::vector<Individual>& population);

}  // namespace uavpp
