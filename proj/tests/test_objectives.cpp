#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "support/oracles.hpp"
#include "uavpp/objectives.hpp"

using namespace uavpp;

namespace {

const CityScenario& scenario() {
    static const CityScenario s = generate_default_scenario(7);
    return s;
}

PathPolyline make_path(std::initializer_list<Vec3> pts) {
    PathPolyline p;
    p.points = pts;
    return p;
}

// Agreement within one unit in the quoted value's fourth significant digit.
bool sigfig4(double actual, double quoted) {
    const double unit = std::pow(10.0, std::floor(std::log10(std::fabs(quoted))) - 3.0);
    return std::fabs(actual - quoted) <= unit;
}

CityScenario uniform_pop_scenario(double density) {
    CityScenario s = generate_default_scenario(7);
    s.pop_density.values.assign(s.pop_density.values.size(), density);
    s.traffic_density.values.assign(s.traffic_density.values.size(), 0.0);
    return s;
}

Genome level_genome_for_test() {
    Genome g;
    g.genes.assign(88, 0.0);
    for (int i = 0; i < 44; ++i) g.genes[44 + i] = 65.0;
    return g;
}

}  // namespace

TEST_CASE("f_length basics") {
    CHECK(f_length(make_path({{0, 0, 0}, {3, 4, 0}})) == 5.0);
    CHECK(f_length(make_path({{1, 1, 1}})) == 0.0);

    Genome g;
    g.genes.assign(88, 0.0);
    for (int i = 0; i < 44; ++i) g.genes[44 + i] = 65.0;
    const double chord = 4800.0 * std::sqrt(2.0);
    CHECK(f_length(decode(g, scenario())) == doctest::Approx(chord).epsilon(1e-9));
}

TEST_CASE("f_length respects the straight-line lower bound") {
    Rng rng(3);
    const GenomeBounds b = GenomeBounds::for_scenario(scenario());
    const double chord = norm(scenario().end_m() - scenario().start_m());
    for (int trial = 0; trial < 30; ++trial) {
        const Genome g = oracle::random_genome(b, rng);
        CHECK(f_length(decode(g, scenario())) >= chord - 1e-9);
    }
}

TEST_CASE("f_height telescopes") {
    CHECK(f_height(make_path({{0, 0, 50}, {1, 0, 50}, {2, 0, 50}})) == 0.0);
    CHECK(f_height(make_path({{0, 0, 50}, {1, 0, 60}, {2, 0, 50}})) == doctest::Approx(20.0));
    // Monotone climb: total equals the net rise regardless of spacing.
    CHECK(f_height(make_path({{0, 0, 10}, {1, 0, 17}, {2, 0, 80}, {3, 0, 120}})) ==
          doctest::Approx(110.0));
}

TEST_CASE("air density profile") {
    const UavParams& uav = scenario().uav;
    CHECK(air_density(0, 0, uav) == 1.225);
    const double expected = 1.225 * std::exp(-100.0 / 10700.0);
    CHECK(air_density(100, 100, uav) == doctest::Approx(expected).epsilon(1e-15));
    CHECK(sigfig4(air_density(100, 100, uav), 1.21361));
    CHECK(air_density(100, 100, uav) > air_density(200, 200, uav));
}

TEST_CASE("f_fuel worked values") {
    const UavParams& uav = scenario().uav;
    const double weight = uav.mass_kg * uav.gravity;

    SUBCASE("level 100 m segment at 100 m altitude") {
        const double rho = air_density(100, 100, uav);
        const double expected =
            std::pow(weight, 1.5) / std::sqrt(2.0 * rho * 0.1 * 4.0) * (100.0 / 10.0);
        const double actual = f_fuel(make_path({{0, 0, 100}, {100, 0, 100}}), uav);
        CHECK(actual == doctest::Approx(expected).epsilon(1e-12));
        CHECK(sigfig4(actual, 505.5));
    }
    SUBCASE("10 m climb adds weight * rise") {
        const PathPolyline climb = make_path({{0, 0, 100}, {100, 0, 110}});
        const double rho = air_density(100, 110, uav);
        const double hover = std::pow(weight, 1.5) / std::sqrt(2.0 * rho * 0.1 * 4.0) *
                             (std::sqrt(100.0 * 100.0 + 10.0 * 10.0) / 10.0);
        const double climb_term = f_fuel(climb, uav) - hover;
        CHECK(climb_term == doctest::Approx(weight * 10.0).epsilon(1e-12));
        CHECK(sigfig4(climb_term, 135.4));
    }
    SUBCASE("descents do not pay the climb term") {
        const double down = f_fuel(make_path({{0, 0, 110}, {100, 0, 100}}), uav);
        const double rho = air_density(110, 100, uav);
        const double hover = std::pow(weight, 1.5) / std::sqrt(2.0 * rho * 0.1 * 4.0) *
                             (std::sqrt(100.0 * 100.0 + 10.0 * 10.0) / 10.0);
        CHECK(down == doctest::Approx(hover).epsilon(1e-12));
    }
    SUBCASE("degenerate single-point path costs nothing") {
        CHECK(f_fuel(make_path({{5, 5, 50}}), uav) == 0.0);
    }
    SUBCASE("any climb strictly increases fuel") {
        PathPolyline level = make_path({{0, 0, 65}, {150, 0, 65}, {300, 0, 65}});
        PathPolyline bumped = level;
        bumped.points[1].z = 66.0;
        CHECK(f_fuel(bumped, scenario().uav) > f_fuel(level, scenario().uav));
    }
}

TEST_CASE("f_distance worked values") {
    SUBCASE("path through every hover point scores zero") {
        PathPolyline p;
        p.points = scenario().uhps_m();
        CHECK(f_distance(p, scenario()) == 0.0);
    }
    SUBCASE("single hover point at horizontal distance 30") {
        CityScenario s = generate_default_scenario(7);
        s.mission.uhps = {{25.0, 30.0, {}}};
        const PathPolyline p = make_path({{2530.0, 3000.0, s.mission.endpoint_altitude_m}});
        CHECK(f_distance(p, s) == doctest::Approx(30.0));
    }
    SUBCASE("three hover points with planted nearest points at 10, 20, 30") {
        const auto uhps = scenario().uhps_m();
        const PathPolyline p = make_path({{uhps[0].x + 10.0, uhps[0].y, uhps[0].z},
                                          {uhps[1].x, uhps[1].y + 20.0, uhps[1].z},
                                          {uhps[2].x, uhps[2].y, uhps[2].z + 30.0}});
        CHECK(f_distance(p, scenario()) == doctest::Approx(60.0).epsilon(1e-12));
    }
}

TEST_CASE("impact velocity drag-fall form") {
    const UavParams& uav = scenario().uav;
    const RiskParams& risk = scenario().risk;

    CHECK(impact_velocity(0.0, uav, risk) == 0.0);
    CHECK(impact_velocity(50.0, uav, risk) < impact_velocity(100.0, uav, risk));

    const double terminal = std::sqrt(2.0 * 1.38 * 9.81 / (0.3 * 1.0 * 1.225));
    CHECK(impact_velocity(1e9, uav, risk) == doctest::Approx(terminal).epsilon(1e-12));
    CHECK(sigfig4(terminal, 8.583));

    SUBCASE("printed form diverges near the ground and decreases with altitude") {
        RiskParams printed = risk;
        printed.printed_impact_form = true;
        CHECK(impact_velocity(1.0, uav, printed) > impact_velocity(100.0, uav, printed));
        CHECK(std::isinf(impact_velocity(0.0, uav, printed)));
        CHECK(impact_velocity(1e9, uav, printed) == doctest::Approx(terminal).epsilon(1e-9));
    }
}

TEST_CASE("fatality factor") {
    SUBCASE("alpha == beta halves at the certain-death energy") {
        CHECK(fatality_from_energy(100.0, 100.0, 100.0, 0.5) == doctest::Approx(0.5));
    }
    SUBCASE("quoted value at 508.4 J") {
        const double r = fatality_from_energy(508.4, 1e6, 100.0, 0.5);
        CHECK(r == doctest::Approx(1.0 / (1.0 + 100.0 * std::sqrt(100.0 / 508.4))).epsilon(1e-12));
        CHECK(sigfig4(r, 0.02205));
    }
    SUBCASE("monotone increasing in impact energy") {
        double prev = 0.0;
        for (double e : {1.0, 10.0, 100.0, 1000.0, 1e4}) {
            const double r = fatality_from_energy(e, 1e6, 100.0, 0.5);
            CHECK(r > prev);
            prev = r;
        }
    }
    SUBCASE("continuity convention at zero energy") {
        CHECK(fatality_from_energy(0.0, 1e6, 100.0, 0.5) == 0.0);
        CHECK(fatality_factor(0.0, scenario().uav, scenario().risk) == 0.0);
    }
}

TEST_CASE("f_fatal worked values") {
    SUBCASE("zero densities, zero risk") {
        CityScenario s = generate_default_scenario(7);
        s.pop_density.values.assign(s.pop_density.values.size(), 0.0);
        s.traffic_density.values.assign(s.traffic_density.values.size(), 0.0);
        CHECK(f_fatal(make_path({{100, 100, 50}, {200, 200, 60}}), s) == 0.0);
    }
    SUBCASE("single point is the product of factors") {
        const CityScenario s = uniform_pop_scenario(0.005);
        const double z = 50.0;
        const double expected =
            1e-6 * 1.0 * 0.005 * fatality_factor(z, s.uav, s.risk);
        CHECK(f_fatal(make_path({{1000, 1000, z}}), s) ==
              doctest::Approx(expected).epsilon(1e-12));
    }
    SUBCASE("doubling p_crash doubles the objective") {
        CityScenario s = generate_default_scenario(7);
        const PathPolyline p = decode(level_genome_for_test(), s);
        const double base = f_fatal(p, s);
        s.risk.p_crash *= 2.0;
        CHECK(f_fatal(p, s) == doctest::Approx(2.0 * base).epsilon(1e-12));
    }
}

TEST_CASE("f_eco lognormal plateau and tail") {
    const CityScenario& s = scenario();
    const double median = std::exp(s.building_mu);
    const double plateau =
        1.0 / (median * s.building_sigma * std::sqrt(2.0 * std::numbers::pi));

    SUBCASE("plateau below the median height") {
        const double v15 = f_eco(make_path({{0, 0, 15.0}}), s);
        const double v21 = f_eco(make_path({{0, 0, 21.0}}), s);
        CHECK(v15 == doctest::Approx(plateau).epsilon(1e-12));
        CHECK(v15 == v21);
        CHECK(sigfig4(v15, 0.024928));
    }
    SUBCASE("quoted tail value at 60 m") {
        CHECK(sigfig4(f_eco(make_path({{0, 0, 60.0}}), s), 0.003384));
    }
    SUBCASE("non-increasing beyond the median") {
        double prev = f_eco(make_path({{0, 0, median}}), s);
        for (double z : {22.0, 30.0, 45.0, 60.0, 90.0, 120.0}) {
            const double v = f_eco(make_path({{0, 0, z}}), s);
            CHECK(v <= prev + 1e-15);
            prev = v;
        }
    }
    SUBCASE("non-positive altitude is a domain error") {
        CHECK_THROWS_AS(f_eco(make_path({{0, 0, 0.0}}), s), std::domain_error);
        CHECK_THROWS_AS(f_eco(make_path({{0, 0, -5.0}}), s), std::domain_error);
    }
}

TEST_CASE("f_noise threshold and worked value") {
    const CityScenario uniform = uniform_pop_scenario(0.005);

    SUBCASE("quoted single-point cost") {
        CHECK(f_noise(make_path({{1000, 1000, 50.0}}), uniform) ==
              doctest::Approx(0.005 * 80.0 / 2500.0).epsilon(1e-12));
    }
    SUBCASE("80 dB source is inaudible above 100 m") {
        CHECK(f_noise(make_path({{1000, 1000, 100.0}}), uniform) == 0.0);
        CHECK(f_noise(make_path({{1000, 1000, 120.0}}), uniform) == 0.0);
        CHECK(f_noise(make_path({{1000, 1000, 99.9}}), uniform) > 0.0);
    }
    SUBCASE("zero population field, zero cost") {
        const CityScenario empty = uniform_pop_scenario(0.0);
        CHECK(f_noise(make_path({{1000, 1000, 50.0}}), empty) == 0.0);
    }
}

TEST_CASE("evaluate_case composes per the case table") {
    Rng rng(11);
    const GenomeBounds b = GenomeBounds::for_scenario(scenario());
    const Genome g = oracle::random_feasible_genome(scenario(), b, rng);
    const PathPolyline p = decode(g, scenario());
    const RawObjectives raw = evaluate_raw(p, scenario());

    const BipartyEvaluation c1 = evaluate_case(1, g, scenario());
    CHECK(c1.eff[0] == raw.length);
    CHECK(c1.eff[1] == raw.distance);
    CHECK(c1.safe[0] == raw.fatal);
    CHECK(c1.safe[1] == raw.eco);
    CHECK(c1.raw == raw);
    CHECK(c1.violation == constraint_report(p, scenario()).total);

    const BipartyEvaluation c2 = evaluate_case(2, g, scenario());
    CHECK(c2.eff[0] == raw.length + raw.height);
    CHECK(c2.safe[1] == raw.eco);

    const BipartyEvaluation c3 = evaluate_case(3, g, scenario());
    CHECK(c3.eff[0] == raw.fuel);

    const BipartyEvaluation c4 = evaluate_case(4, g, scenario());
    CHECK(c4.eff[0] == raw.length);
    CHECK(c4.safe[1] == raw.noise);

    const BipartyEvaluation c5 = evaluate_case(5, g, scenario());
    CHECK(c5.eff[0] == raw.length + raw.height);
    CHECK(c5.safe[1] == raw.noise);

    const BipartyEvaluation c6 = evaluate_case(6, g, scenario());
    CHECK(c6.eff[0] == raw.fuel);
    CHECK(c6.safe[0] == raw.fatal);
    CHECK(c6.safe[1] == raw.noise);

    CHECK_THROWS_AS(evaluate_case(0, g, scenario()), ValidationError);
    CHECK_THROWS_AS(evaluate_case(7, g, scenario()), ValidationError);
    CHECK_THROWS_WITH_AS(evaluate_case(7, g, scenario()),
                         doctest::Contains("case id out of range 1..6"), ValidationError);
}

TEST_CASE("objective names follow the case table") {
    CHECK(eff_objective_names(1) == std::array<std::string, 2>{"f_length", "f_distance"});
    CHECK(eff_objective_names(2) ==
          std::array<std::string, 2>{"f_length_plus_height", "f_distance"});
    CHECK(eff_objective_names(3) == std::array<std::string, 2>{"f_fuel", "f_distance"});
    CHECK(safe_objective_names(2) == std::array<std::string, 2>{"f_fatal", "f_eco"});
    CHECK(safe_objective_names(5) == std::array<std::string, 2>{"f_fatal", "f_noise"});
}

TEST_CASE("objectives are non-negative for in-bound genomes") {
    Rng rng(23);
    const GenomeBounds b = GenomeBounds::for_scenario(scenario());
    for (int trial = 0; trial < 20; ++trial) {
        const Genome g = oracle::random_genome(b, rng);
        const PathPolyline p = decode(g, scenario());
        const RawObjectives raw = evaluate_raw(p, scenario());
        CHECK(raw.length >= 0.0);
        CHECK(raw.height >= 0.0);
        CHECK(raw.fuel >= 0.0);
        CHECK(raw.distance >= 0.0);
        CHECK(raw.fatal >= 0.0);
        CHECK(raw.eco >= 0.0);
        CHECK(raw.noise >= 0.0);
        for (double v : {raw.length, raw.height, raw.fuel, raw.distance, raw.fatal, raw.eco,
                         raw.noise}) {
            CHECK(std::isfinite(v));
        }
    }
}

TEST_CASE("every objective matches its independent oracle on random feasible genomes") {
    Rng rng(2024);
    const CityScenario& s = scenario();
    const GenomeBounds b = GenomeBounds::for_scenario(s);
    for (int trial = 0; trial < 100; ++trial) {
        const Genome g = oracle::random_feasible_genome(s, b, rng);
        const PathPolyline p = decode(g, s);
        REQUIRE(constraint_report(p, s).total == 0.0);

        CHECK(f_length(p) == doctest::Approx(oracle::length(p)).epsilon(1e-9));
        CHECK(f_height(p) == doctest::Approx(oracle::height(p)).epsilon(1e-9));
        CHECK(f_fuel(p, s.uav) == doctest::Approx(oracle::fuel(p, s.uav)).epsilon(1e-9));
        CHECK(f_distance(p, s) == doctest::Approx(oracle::distance(p, s)).epsilon(1e-9));
        CHECK(f_fatal(p, s) == doctest::Approx(oracle::fatal(p, s)).epsilon(1e-9));
        CHECK(f_eco(p, s) == doctest::Approx(oracle::eco(p, s)).epsilon(1e-9));
        CHECK(f_noise(p, s) == doctest::Approx(oracle::noise(p, s)).epsilon(1e-9));
        for (const Vec3& q : p.points) {
            CHECK(impact_velocity(q.z, s.uav, s.risk) ==
                  doctest::Approx(oracle::impact_velocity(q.z, s.uav, s.risk)).epsilon(1e-9));
            CHECK(fatality_factor(q.z, s.uav, s.risk) ==
                  doctest::Approx(oracle::fatality(q.z, s.uav, s.risk)).epsilon(1e-9));
        }
    }
}
