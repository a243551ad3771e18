#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "support/oracles.hpp"
#include "uavpp/ranking.hpp"

using namespace uavpp;

namespace {

// The five-solution illustration: four objectives, party split {f1,f2}/{f3,f4}.
const ObjectiveMatrix kAll4 = {
    {1, 3, 3, 1}, {2, 2, 2, 2}, {3, 1, 3, 3}, {3, 3, 1, 3}, {4, 4, 4, 4}};
const ObjectiveMatrix kEff = {{1, 3}, {2, 2}, {3, 1}, {3, 3}, {4, 4}};
const ObjectiveMatrix kSafe = {{3, 1}, {2, 2}, {3, 3}, {1, 3}, {4, 4}};
const std::vector<double> kFeasible5(5, 0.0);

struct RandomInstance {
    ObjectiveMatrix points;
    std::vector<double> violations;
};

RandomInstance random_instance(Rng& rng, std::size_t max_n, std::size_t m, bool with_infeasible) {
    RandomInstance inst;
    const std::size_t n = 1 + rng.index(max_n);
    inst.points.assign(n, std::vector<double>(m, 0.0));
    inst.violations.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) inst.points[i][j] = rng.uniform(0.0, 1.0);
        if (with_infeasible && rng.uniform01() < 0.3) inst.violations[i] = rng.uniform(0.1, 2.0);
    }
    return inst;
}

}  // namespace

TEST_CASE("golden five-solution layers") {
    SUBCASE("single-party sorting over all four objectives") {
        CHECK(fast_nds(kAll4) == std::vector<int>{1, 1, 1, 1, 2});
    }
    SUBCASE("biparty two-round sorting") {
        const RankedPopulation r = mpnds2(kEff, kSafe, kFeasible5);
        CHECK(r.nds_passes == 3);
        CHECK(r.layer_count == 3);
        std::vector<int> layers;
        for (const auto& ind : r.individuals) layers.push_back(ind.layer);
        CHECK(layers == std::vector<int>{1, 1, 2, 2, 3});
        CHECK(r.individuals[0].party_ranks == std::vector<int>{1, 1});
        CHECK(r.individuals[1].party_ranks == std::vector<int>{1, 1});
        CHECK(r.individuals[2].party_ranks == std::vector<int>{1, 2});
        CHECK(r.individuals[3].party_ranks == std::vector<int>{2, 1});
        CHECK(r.individuals[4].party_ranks == std::vector<int>{3, 3});
    }
    SUBCASE("sum-of-ranks layering") {
        const RankedPopulation r = optmpnds(kEff, kSafe, kFeasible5);
        std::vector<int> layers;
        for (const auto& ind : r.individuals) layers.push_back(ind.layer);
        CHECK(layers == std::vector<int>{1, 1, 2, 2, 3});
    }
    SUBCASE("common Pareto subset") {
        CHECK(extract_mps(kEff, kSafe, kFeasible5) == std::vector<std::size_t>{0, 1});
    }
}

TEST_CASE("fast_nds edge cases") {
    CHECK(fast_nds({}).empty());
    CHECK(fast_nds({{1.0, 2.0}}) == std::vector<int>{1});
    // Duplicates are mutually nondominated.
    CHECK(fast_nds({{1.0, 1.0}, {1.0, 1.0}}) == std::vector<int>{1, 1});
}

TEST_CASE("fast_nds agrees with the exhaustive oracle") {
    Rng rng(101);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t m = trial % 2 == 0 ? 2 : 4;
        const RandomInstance inst = random_instance(rng, 64, m, false);
        CHECK(fast_nds(inst.points) == oracle::brute_force_nds(inst.points));
    }
}

TEST_CASE("constrained fast_nds agrees with the exhaustive oracle") {
    Rng rng(202);
    for (int trial = 0; trial < 100; ++trial) {
        const RandomInstance inst = random_instance(rng, 48, 2 + 2 * (trial % 2), true);
        CHECK(fast_nds(inst.points, &inst.violations) ==
              oracle::brute_force_nds(inst.points, &inst.violations));
    }
}

TEST_CASE("feasibility rule ordering") {
    const ObjectiveMatrix pts = {{5, 5}, {1, 1}, {2, 2}};
    const std::vector<double> viol = {0.0, 0.5, 0.1};
    // Feasible (5,5) outranks both infeasible points; lower violation next.
    CHECK(fast_nds(pts, &viol) == std::vector<int>{1, 3, 2});
}

TEST_CASE("crowding distance worked values") {
    SUBCASE("three-point front") {
        const std::vector<double> cd = crowding_distance({{0, 1}, {0.5, 0.5}, {1, 0}});
        CHECK(cd[0] == kCrowdingSentinel);
        CHECK(cd[2] == kCrowdingSentinel);
        CHECK(cd[1] == doctest::Approx(2.0));
    }
    SUBCASE("tiny fronts are all boundary") {
        const std::vector<double> cd2 = crowding_distance({{0, 1}, {1, 0}});
        CHECK(cd2 == std::vector<double>{kCrowdingSentinel, kCrowdingSentinel});
        CHECK(crowding_distance({{3, 4}}) == std::vector<double>{kCrowdingSentinel});
    }
    SUBCASE("zero-range column contributes nothing and no NaN") {
        const std::vector<double> cd = crowding_distance({{1, 0.2}, {1, 0.5}, {1, 0.9}});
        CHECK(cd[0] == kCrowdingSentinel);
        CHECK(cd[2] == kCrowdingSentinel);
        CHECK(cd[1] == doctest::Approx(0.7 / 0.7));
        for (double v : cd) CHECK_FALSE(std::isnan(v));
    }
    SUBCASE("all-duplicate front has zero crowding") {
        const std::vector<double> cd = crowding_distance({{1, 1}, {1, 1}, {1, 1}});
        CHECK(cd == std::vector<double>{0.0, 0.0, 0.0});
    }
}

TEST_CASE("mpnds2 layer-1 equals the brute-force rank-vector front") {
    Rng rng(303);
    int nonempty_all_ones = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng.index(48);
        ObjectiveMatrix eff(n, std::vector<double>(2)), safe(n, std::vector<double>(2));
        std::vector<double> viol(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (int j = 0; j < 2; ++j) {
                eff[i][j] = rng.uniform(0.0, 1.0);
                safe[i][j] = rng.uniform(0.0, 1.0);
            }
            if (trial % 3 == 0 && rng.uniform01() < 0.25) viol[i] = rng.uniform(0.1, 1.0);
        }
        const RankedPopulation ranked = mpnds2(eff, safe, viol);

        const auto oracle_ranks = oracle::brute_force_party_ranks({eff, safe}, viol);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(ranked.individuals[i].party_ranks[0] == oracle_ranks[0][i]);
            CHECK(ranked.individuals[i].party_ranks[1] == oracle_ranks[1][i]);
        }

        CHECK(ranked.layer_members(1) == oracle::brute_force_rank_vector_front(oracle_ranks));

        // Whenever a common rank-(1,1) subset exists, it is exactly layer 1,
        // and it always equals the extracted common Pareto set (violations
        // filtered).
        const auto all_ones = oracle::brute_force_all_ones(oracle_ranks);
        if (!all_ones.empty()) {
            ++nonempty_all_ones;
            CHECK(ranked.layer_members(1) == all_ones);
        }
        std::vector<std::size_t> feasible_all_ones;
        for (std::size_t i : all_ones) {
            if (viol[i] <= 0.0) feasible_all_ones.push_back(i);
        }
        CHECK(extract_mps(eff, safe, viol) == feasible_all_ones);
    }
    CHECK(nonempty_all_ones > 50);  // the stronger claim got real coverage
}

TEST_CASE("mpnds2 invariances") {
    Rng rng(404);
    const std::size_t n = 24;
    ObjectiveMatrix eff(n, std::vector<double>(2)), safe(n, std::vector<double>(2));
    std::vector<double> viol(n, 0.0);
    for (auto& row : eff) {
        row[0] = rng.uniform(0.1, 1.0);
        row[1] = rng.uniform(0.1, 1.0);
    }
    for (auto& row : safe) {
        row[0] = rng.uniform(0.1, 1.0);
        row[1] = rng.uniform(0.1, 1.0);
    }
    const RankedPopulation base = mpnds2(eff, safe, viol);

    SUBCASE("strictly monotone per-objective transforms preserve layers") {
        ObjectiveMatrix eff_t = eff, safe_t = safe;
        for (std::size_t i = 0; i < n; ++i) {
            eff_t[i][0] = std::exp(eff[i][0]);
            eff_t[i][1] = eff[i][1] * eff[i][1] * eff[i][1];
            safe_t[i][0] = std::log(safe[i][0] + 1.0);
            safe_t[i][1] = std::atan(safe[i][1]);
        }
        const RankedPopulation transformed = mpnds2(eff_t, safe_t, viol);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(transformed.individuals[i].layer == base.individuals[i].layer);
            CHECK(transformed.individuals[i].party_ranks == base.individuals[i].party_ranks);
        }
    }
    SUBCASE("permuting objectives within a party preserves layers") {
        ObjectiveMatrix eff_p = eff;
        for (auto& row : eff_p) std::swap(row[0], row[1]);
        const RankedPopulation permuted = mpnds2(eff_p, safe, viol);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(permuted.individuals[i].layer == base.individuals[i].layer);
        }
    }
}

TEST_CASE("mpnds degenerate party counts") {
    Rng rng(505);
    const std::size_t n = 30;
    ObjectiveMatrix pts(n, std::vector<double>(4));
    std::vector<double> viol(n, 0.0);
    for (auto& row : pts) {
        for (double& v : row) v = rng.uniform(0.0, 1.0);
    }

    SUBCASE("K=1 collapses to fast_nds") {
        const RankedPopulation r = mpnds({pts}, viol);
        const std::vector<int> expected = fast_nds(pts, &viol);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(r.individuals[i].layer == expected[i]);
        }
        CHECK(r.nds_passes == 2);
    }
    SUBCASE("uniform party-1 ranks reduce layers to party-2 ranks") {
        ObjectiveMatrix eff(n, std::vector<double>{1.0, 1.0});  // all identical: rank 1
        ObjectiveMatrix safe(n, std::vector<double>(2));
        for (auto& row : safe) {
            row[0] = rng.uniform(0.0, 1.0);
            row[1] = rng.uniform(0.0, 1.0);
        }
        const RankedPopulation r = mpnds2(eff, safe, viol);
        const std::vector<int> safe_ranks = fast_nds(safe, &viol);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(r.individuals[i].layer == safe_ranks[i]);
        }
    }
}

TEST_CASE("optmpnds stand-in properties") {
    SUBCASE("K=1-style degenerate inputs: all mutually nondominated in both parties") {
        const ObjectiveMatrix eff = {{1, 2}, {2, 1}, {1.5, 1.5}};
        const ObjectiveMatrix safe = {{0, 3}, {3, 0}, {1, 1}};
        const std::vector<double> viol(3, 0.0);
        const RankedPopulation r = optmpnds(eff, safe, viol);
        for (const auto& ind : r.individuals) CHECK(ind.layer == 1);
    }
    SUBCASE("rank-vector dominance is never inverted") {
        Rng rng(606);
        for (int trial = 0; trial < 50; ++trial) {
            const std::size_t n = 2 + rng.index(32);
            ObjectiveMatrix eff(n, std::vector<double>(2)), safe(n, std::vector<double>(2));
            std::vector<double> viol(n, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                for (int j = 0; j < 2; ++j) {
                    eff[i][j] = rng.uniform(0.0, 1.0);
                    safe[i][j] = rng.uniform(0.0, 1.0);
                }
            }
            const RankedPopulation r = optmpnds(eff, safe, viol);
            for (std::size_t a = 0; a < n; ++a) {
                for (std::size_t b = 0; b < n; ++b) {
                    const auto& ra = r.individuals[a].party_ranks;
                    const auto& rb = r.individuals[b].party_ranks;
                    const bool dominates = (ra[0] <= rb[0] && ra[1] <= rb[1]) &&
                                           (ra[0] < rb[0] || ra[1] < rb[1]);
                    if (dominates) {
                        CHECK(r.individuals[a].layer < r.individuals[b].layer);
                    }
                }
            }
        }
    }
}

TEST_CASE("assign_crowding works per combined layer") {
    const RankedPopulation base = mpnds2(kEff, kSafe, kFeasible5);
    RankedPopulation ranked = base;
    ObjectiveMatrix concat(5);
    for (std::size_t i = 0; i < 5; ++i) concat[i] = kAll4[i];
    assign_crowding(ranked, concat);
    // Layers 1 and 2 have two members each; layer 3 has one. All boundary.
    for (const auto& ind : ranked.individuals) {
        CHECK(ind.crowding == kCrowdingSentinel);
    }
}
