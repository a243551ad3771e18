#pragma once

#include <cstddef>
#include <limits>
#include <vector>

namespace uavpp {

// Row-per-individual objective values; all rows share one dimension.
using ObjectiveMatrix = std::vector<std::vector<double>>;

// Marker for boundary solutions of a front. Consumers that need a finite
// value (clone allocation) substitute their own cap.
inline constexpr double kCrowdingSentinel = std::numeric_limits<double>::infinity();

// Fast nondominated sorting; returns 1-based layer numbers. When violations
// are supplied the feasibility rule applies: feasible beats infeasible,
// lower total violation beats higher, and Pareto dominance decides among
// feasible individuals.
std::vector<int> fast_nds(const ObjectiveMatrix& points,
                          const std::vector<double>* violations = nullptr);

// Crowding distance of one front. Boundary points (per objective, after
// sorting) get the sentinel; fronts of size <= 2 are all-boundary;
// zero-range objectives contribute nothing.
std::vector<double> crowding_distance(const ObjectiveMatrix& front);

struct RankedIndividual {
    std::vector<int> party_ranks;  // per-party nondominated layer, 1-based
    int layer = 0;                 // combined multiparty layer, 1-based
    double crowding = 0.0;
    bool feasible = true;
    double violation = 0.0;
};

struct RankedPopulation {
    std::vector<RankedIndividual> individuals;
    int layer_count = 0;
    int nds_passes = 0;  // fast_nds invocations spent building this ranking

    std::vector<std::size_t> layer_members(int layer) const;
};

// Multiparty nondominated sorting: one constrained NDS pass per party, then
// an unconstrained pass over the integer rank vectors. K+1 passes total.
RankedPopulation mpnds(const std::vector<ObjectiveMatrix>& parties,
                       const std::vector<double>& violations);

// Biparty wrapper; party order in rank vectors is (eff, safe).
RankedPopulation mpnds2(const ObjectiveMatrix& eff, const ObjectiveMatrix& safe,
                        const std::vector<double>& violations);

// Sum-of-party-ranks layering: individuals with equal rank sums share a
// layer, layers ordered by ascending sum. Documented stand-in for the
// original formulation; rank-vector dominance is never inverted.
RankedPopulation optmpnds(const ObjectiveMatrix& eff, const ObjectiveMatrix& safe,
                          const std::vector<double>& violations);

// Single-party ranking over the full objective vector (the NSGA-II sorter).
RankedPopulation rank_single_party(const ObjectiveMatrix& objectives,
                                   const std::vector<double>& violations);

// Indices of feasible individuals nondominated under both parties' dominance
// relations (rank vector all-ones). May be empty.
std::vector<std::size_t> extract_mps(const ObjectiveMatrix& eff, const ObjectiveMatrix& safe,
                                     const std::vector<double>& violations);

// Crowding per combined layer, measured in the concatenated objective space.
void assign_crowding(RankedPopulation& ranked, const ObjectiveMatrix& concatenated);

}  // namespace uavpp
