#include "uavpp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "uavpp/errors.hpp"

namespace uavpp {

double hv_2d(const std::vector<std::array<double, 2>>& points,
             const std::array<double, 2>& reference) {
    // Keep points strictly inside the reference box, then sweep the
    // nondominated staircase left to right.
    std::vector<std::array<double, 2>> pts;
    pts.reserve(points.size());
    for (const auto& p : points) {
        if (p[0] < reference[0] && p[1] < reference[1]) pts.push_back(p);
    }
    if (pts.empty()) return 0.0;
    std::sort(pts.begin(), pts.end());

    std::vector<std::array<double, 2>> staircase;
    for (const auto& p : pts) {
        if (staircase.empty() || p[1] < staircase.back()[1]) staircase.push_back(p);
    }

    double area = 0.0;
    for (std::size_t i = 0; i < staircase.size(); ++i) {
        const double next_x = i + 1 < staircase.size() ? staircase[i + 1][0] : reference[0];
        area += (next_x - staircase[i][0]) * (reference[1] - staircase[i][1]);
    }
    return area;
}

NormalizationBounds compute_bounds(const std::vector<PartyFronts>& sets) {
    NormalizationBounds b;
    b.parties.assign(2, std::vector<ObjectiveBounds>(2));
    constexpr double inf = std::numeric_limits<double>::infinity();
    for (auto& party : b.parties) {
        for (auto& ob : party) ob = {inf, -inf};
    }

    auto fold = [](std::vector<ObjectiveBounds>& party, const ObjectiveMatrix& rows) {
        for (const auto& row : rows) {
            for (std::size_t m = 0; m < party.size(); ++m) {
                party[m].ideal = std::min(party[m].ideal, row[m]);
                party[m].nadir = std::max(party[m].nadir, row[m]);
            }
        }
    };
    for (const PartyFronts& set : sets) {
        fold(b.parties[0], set.eff);
        fold(b.parties[1], set.safe);
    }

    for (auto& party : b.parties) {
        for (ObjectiveBounds& ob : party) {
            if (!std::isfinite(ob.ideal)) ob = {0.0, 1.0};       // empty union
            if (ob.nadir <= ob.ideal) ob.nadir = ob.ideal + 1.0;  // degenerate range
        }
    }
    return b;
}

MetricRecord mean_hv(const PartyFronts& set, const NormalizationBounds& bounds, double reference) {
    MetricRecord rec;
    rec.set_size = static_cast<int>(set.eff.size());

    const std::array<const ObjectiveMatrix*, 2> fronts{&set.eff, &set.safe};
    for (std::size_t party = 0; party < 2; ++party) {
        std::vector<std::array<double, 2>> normalized;
        normalized.reserve(fronts[party]->size());
        for (const auto& row : *fronts[party]) {
            std::array<double, 2> p{};
            for (std::size_t m = 0; m < 2; ++m) {
                const ObjectiveBounds& ob = bounds.parties[party][m];
                p[m] = std::clamp((row[m] - ob.ideal) / (ob.nadir - ob.ideal), 0.0, reference);
            }
            normalized.push_back(p);
        }
        rec.hv_per_party.push_back(hv_2d(normalized, {reference, reference}));
    }
    rec.mean_hv = std::accumulate(rec.hv_per_party.begin(), rec.hv_per_party.end(), 0.0) /
                  static_cast<double>(rec.hv_per_party.size());
    return rec;
}

ReplicateStats replicate_stats(const std::vector<double>& values) {
    ReplicateStats s;
    s.runs = static_cast<int>(values.size());
    if (values.empty()) return s;
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / values.size();
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.stddev = std::sqrt(ss / (values.size() - 1));
    }
    return s;
}

double rank_sum_p_value(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n1 = a.size(), n2 = b.size();
    if (n1 == 0 || n2 == 0) return 1.0;

    struct Entry {
        double value;
        int sample;
    };
    std::vector<Entry> pooled;
    pooled.reserve(n1 + n2);
    for (double v : a) pooled.push_back({v, 0});
    for (double v : b) pooled.push_back({v, 1});
    std::sort(pooled.begin(), pooled.end(),
              [](const Entry& x, const Entry& y) { return x.value < y.value; });

    // Midranks plus the tie-correction term sum(t^3 - t).
    const std::size_t n = n1 + n2;
    double rank_sum_a = 0.0;
    double tie_term = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && pooled[j + 1].value == pooled[i].value) ++j;
        const double t = static_cast<double>(j - i + 1);
        const double midrank = 0.5 * static_cast<double>(i + 1 + j + 1);
        for (std::size_t k = i; k <= j; ++k) {
            if (pooled[k].sample == 0) rank_sum_a += midrank;
        }
        tie_term += t * t * t - t;
        i = j + 1;
    }

    const double u1 = rank_sum_a - 0.5 * n1 * (n1 + 1);
    const double mu = 0.5 * n1 * n2;
    const double var = (static_cast<double>(n1) * n2 / 12.0) *
                       (n + 1.0 - tie_term / (static_cast<double>(n) * (n - 1.0)));
    if (var <= 0.0) return 1.0;
    const double z = (std::abs(u1 - mu) - 0.5) / std::sqrt(var);
    if (z <= 0.0) return 1.0;
    return std::erfc(z / std::sqrt(2.0));
}

AggregateReport aggregate_replicates(
    const std::vector<std::pair<std::string, std::vector<double>>>& per_algorithm) {
    for (const auto& [name, values] : per_algorithm) {
        if (values.size() < 2) {
            throw ValidationError("aggregate_replicates: algorithm \"" + name +
                                  "\" needs at least 2 runs");
        }
    }
    AggregateReport report;
    for (const auto& [name, values] : per_algorithm) {
        report.algorithms.push_back({name, replicate_stats(values)});
    }
    for (std::size_t i = 0; i < per_algorithm.size(); ++i) {
        for (std::size_t j = i + 1; j < per_algorithm.size(); ++j) {
            report.pairs.push_back({per_algorithm[i].first, per_algorithm[j].first,
                                    rank_sum_p_value(per_algorithm[i].second,
                                                     per_algorithm[j].second)});
        }
    }
    return report;
}

}  // namespace uavpp
