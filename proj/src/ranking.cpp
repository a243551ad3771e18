#include "uavpp/ranking.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>

namespace uavpp {

namespace {

// Pareto dominance on raw objective vectors (minimization).
bool pareto_dominates(const std::vector<double>& a, const std::vector<double>& b) {
    bool strict = false;
    for (std::size_t m = 0; m < a.size(); ++m) {
        if (a[m] > b[m]) return false;
        if (a[m] < b[m]) strict = true;
    }
    return strict;
}

// Feasibility rule: feasible beats infeasible, lower violation beats higher,
// Pareto dominance among feasible.
bool constrained_dominates(const std::vector<double>& a, double va, const std::vector<double>& b,
                           double vb) {
    const bool fa = va <= 0.0;
    const bool fb = vb <= 0.0;
    if (fa != fb) return fa;
    if (!fa) return va < vb;
    return pareto_dominates(a, b);
}

}  // namespace

std::vector<int> fast_nds(const ObjectiveMatrix& points, const std::vector<double>* violations) {
    const std::size_t n = points.size();
    std::vector<int> ranks(n, 0);
    if (n == 0) return ranks;

    std::vector<int> dominated_by(n, 0);
    std::vector<std::vector<std::size_t>> dominates_set(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            bool i_dom, j_dom;
            if (violations) {
                i_dom = constrained_dominates(points[i], (*violations)[i], points[j],
                                              (*violations)[j]);
                j_dom = !i_dom && constrained_dominates(points[j], (*violations)[j], points[i],
                                                        (*violations)[i]);
            } else {
                i_dom = pareto_dominates(points[i], points[j]);
                j_dom = !i_dom && pareto_dominates(points[j], points[i]);
            }
            if (i_dom) {
                dominates_set[i].push_back(j);
                ++dominated_by[j];
            } else if (j_dom) {
                dominates_set[j].push_back(i);
                ++dominated_by[i];
            }
        }
    }

    std::vector<std::size_t> front;
    for (std::size_t i = 0; i < n; ++i) {
        if (dominated_by[i] == 0) front.push_back(i);
    }
    int layer = 1;
    while (!front.empty()) {
        std::vector<std::size_t> next;
        for (std::size_t i : front) {
            ranks[i] = layer;
            for (std::size_t j : dominates_set[i]) {
                if (--dominated_by[j] == 0) next.push_back(j);
            }
        }
        front = std::move(next);
        ++layer;
    }
    return ranks;
}

std::vector<double> crowding_distance(const ObjectiveMatrix& front) {
    const std::size_t n = front.size();
    std::vector<double> cd(n, 0.0);
    if (n == 0) return cd;
    if (n <= 2) {
        std::fill(cd.begin(), cd.end(), kCrowdingSentinel);
        return cd;
    }
    const std::size_t m = front[0].size();
    std::vector<std::size_t> order(n);
    for (std::size_t obj = 0; obj < m; ++obj) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (front[a][obj] != front[b][obj]) return front[a][obj] < front[b][obj];
            return a < b;
        });
        const double range = front[order.back()][obj] - front[order.front()][obj];
        if (range <= 0.0) continue;  // constant column: no boundary, no spread
        cd[order.front()] = kCrowdingSentinel;
        cd[order.back()] = kCrowdingSentinel;
        for (std::size_t k = 1; k + 1 < n; ++k) {
            if (cd[order[k]] == kCrowdingSentinel) continue;
            cd[order[k]] += (front[order[k + 1]][obj] - front[order[k - 1]][obj]) / range;
        }
    }
    return cd;
}

std::vector<std::size_t> RankedPopulation::layer_members(int layer) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < individuals.size(); ++i) {
        if (individuals[i].layer == layer) out.push_back(i);
    }
    return out;
}

RankedPopulation mpnds(const std::vector<ObjectiveMatrix>& parties,
                       const std::vector<double>& violations) {
    RankedPopulation out;
    const std::size_t k = parties.size();
    const std::size_t n = k == 0 ? 0 : parties[0].size();
    out.individuals.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.individuals[i].party_ranks.resize(k);
        out.individuals[i].violation = violations[i];
        out.individuals[i].feasible = violations[i] <= 0.0;
    }

    // One constrained pass per party.
    ObjectiveMatrix rank_vectors(n, std::vector<double>(k, 0.0));
    for (std::size_t p = 0; p < k; ++p) {
        const std::vector<int> ranks = fast_nds(parties[p], &violations);
        ++out.nds_passes;
        for (std::size_t i = 0; i < n; ++i) {
            out.individuals[i].party_ranks[p] = ranks[i];
            rank_vectors[i][p] = static_cast<double>(ranks[i]);
        }
    }

    // Combined pass over the integer rank vectors, unconstrained (feasibility
    // was already folded into every party rank).
    const std::vector<int> layers = fast_nds(rank_vectors, nullptr);
    ++out.nds_passes;
    int max_layer = 0;
    for (std::size_t i = 0; i < n; ++i) {
        out.individuals[i].layer = layers[i];
        max_layer = std::max(max_layer, layers[i]);
    }
    out.layer_count = max_layer;
    return out;
}

RankedPopulation mpnds2(const ObjectiveMatrix& eff, const ObjectiveMatrix& safe,
                        const std::vector<double>& violations) {
    return mpnds({eff, safe}, violations);
}

RankedPopulation optmpnds(const ObjectiveMatrix& eff, const ObjectiveMatrix& safe,
                          const std::vector<double>& violations) {
    RankedPopulation out;
    const std::size_t n = eff.size();
    out.individuals.resize(n);

    const std::vector<int> eff_ranks = fast_nds(eff, &violations);
    const std::vector<int> safe_ranks = fast_nds(safe, &violations);
    out.nds_passes = 2;

    // Layer by ascending rank sum; equal sums share a layer. Rank-vector
    // dominance implies a strictly smaller sum, so dominance is respected.
    std::vector<long> sums(n);
    for (std::size_t i = 0; i < n; ++i) sums[i] = eff_ranks[i] + safe_ranks[i];
    std::vector<long> distinct(sums);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

    int max_layer = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto pos = std::lower_bound(distinct.begin(), distinct.end(), sums[i]);
        const int layer = static_cast<int>(pos - distinct.begin()) + 1;
        out.individuals[i].party_ranks = {eff_ranks[i], safe_ranks[i]};
        out.individuals[i].layer = layer;
        out.individuals[i].violation = violations[i];
        out.individuals[i].feasible = violations[i] <= 0.0;
        max_layer = std::max(max_layer, layer);
    }
    out.layer_count = max_layer;
    return out;
}

RankedPopulation rank_single_party(const ObjectiveMatrix& objectives,
                                   const std::vector<double>& violations) {
    RankedPopulation out;
    const std::size_t n = objectives.size();
    out.individuals.resize(n);
    const std::vector<int> ranks = fast_nds(objectives, &violations);
    out.nds_passes = 1;
    int max_layer = 0;
    for (std::size_t i = 0; i < n; ++i) {
        out.individuals[i].party_ranks = {ranks[i]};
        out.individuals[i].layer = ranks[i];
        out.individuals[i].violation = violations[i];
        out.individuals[i].feasible = violations[i] <= 0.0;
        max_layer = std::max(max_layer, ranks[i]);
    }
    out.layer_count = max_layer;
    return out;
}

std::vector<std::size_t> extract_mps(const ObjectiveMatrix& eff, const ObjectiveMatrix& safe,
                                     const std::vector<double>& violations) {
    const RankedPopulation ranked = mpnds2(eff, safe, violations);
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < ranked.individuals.size(); ++i) {
        const RankedIndividual& ind = ranked.individuals[i];
        if (ind.feasible && ind.party_ranks[0] == 1 && ind.party_ranks[1] == 1) {
            out.push_back(i);
        }
    }
    return out;
}

void assign_crowding(RankedPopulation& ranked, const ObjectiveMatrix& concatenated) {
    for (int layer = 1; layer <= ranked.layer_count; ++layer) {
        const std::vector<std::size_t> members = ranked.layer_members(layer);
        ObjectiveMatrix front;
        front.reserve(members.size());
        for (std::size_t i : members) front.push_back(concatenated[i]);
        const std::vector<double> cd = crowding_distance(front);
        for (std::size_t k = 0; k < members.size(); ++k) {
            ranked.individuals[members[k]].crowding = cd[k];
        }
    }
}

}  // namespace uavpp
