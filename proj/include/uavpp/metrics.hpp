#pragma once

#include <array>
#include <string>
#include <vector>

#include "uavpp/ranking.hpp"

namespace uavpp {

// Exact 2-D hypervolume of the nondominated subset against a reference
// point (minimization). Dominated points and points outside the reference
// box contribute nothing; empty input gives 0.
double hv_2d(const std::vector<std::array<double, 2>>& points,
             const std::array<double, 2>& reference);

struct ObjectiveBounds {
    double ideal = 0.0;
    double nadir = 0.0;

    bool operator==(const ObjectiveBounds&) const = default;
};

// Per-party, per-objective normalization bounds.
struct NormalizationBounds {
    std::vector<std::vector<ObjectiveBounds>> parties;

    bool operator==(const NormalizationBounds&) const = default;
};

// One solution set seen by both parties: rows are solutions, two objective
// columns per party.
struct PartyFronts {
    ObjectiveMatrix eff;
    ObjectiveMatrix safe;
};

// Componentwise ideal/nadir over the union of all sets. Zero-range
// objectives get their nadir inflated to ideal + 1.
NormalizationBounds compute_bounds(const std::vector<PartyFronts>& sets);

struct MetricRecord {
    std::vector<double> hv_per_party;
    double mean_hv = 0.0;
    int set_size = 0;
};

// Normalizes each party's objectives to [0, 1] via the bounds (clamped to
// [0, reference]), takes the 2-D hypervolume against (reference, reference)
// per party, and averages.
MetricRecord mean_hv(const PartyFronts& set, const NormalizationBounds& bounds,
                     double reference = 1.1);

struct ReplicateStats {
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation
    int runs = 0;
};

ReplicateStats replicate_stats(const std::vector<double>& values);

// Two-sided Wilcoxon rank-sum p-value (normal approximation with tie and
// continuity corrections). Identical samples give 1.
double rank_sum_p_value(const std::vector<double>& a, const std::vector<double>& b);

struct AlgorithmAggregate {
    std::string algorithm;
    ReplicateStats stats;
};

struct PairwiseComparison {
    std::string a;
    std::string b;
    double p_value = 1.0;
};

struct AggregateReport {
    std::vector<AlgorithmAggregate> algorithms;
    std::vector<PairwiseComparison> pairs;
};

// Per-algorithm mean/std plus all pairwise rank-sum p-values. Requires at
// least two runs per algorithm.
AggregateReport aggregate_replicates(
    const std::vector<std::pair<std::string, std::vector<double>>>& per_algorithm);

}  // namespace uavpp
