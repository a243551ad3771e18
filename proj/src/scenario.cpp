#include "uavpp/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "uavpp/rng.hpp"

namespace uavpp {

namespace {

int clamp_cell(double coord_m, double cell_size, int cells) {
    const int i = static_cast<int>(std::floor(coord_m / cell_size));
    return std::clamp(i, 0, cells - 1);
}

double sq(double v) { return v * v; }

// Distance from a point to a polyline (closest segment).
double distance_to_polyline(double x, double y, const std::vector<std::array<double, 2>>& pts) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
        const double ax = pts[s][0], ay = pts[s][1];
        const double bx = pts[s + 1][0], by = pts[s + 1][1];
        const double dx = bx - ax, dy = by - ay;
        const double len2 = dx * dx + dy * dy;
        double t = len2 > 0.0 ? ((x - ax) * dx + (y - ay) * dy) / len2 : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        best = std::min(best, std::sqrt(sq(x - (ax + t * dx)) + sq(y - (ay + t * dy))));
    }
    return best;
}

}  // namespace

double sample_field(const GridField& field, double x_m, double y_m) {
    const int i = clamp_cell(x_m, field.cell_size_m, field.width_cells);
    const int j = clamp_cell(y_m, field.cell_size_m, field.height_cells);
    return field.at_cell(i, j);
}

Vec3 CityScenario::start_m() const {
    return {mission.start_cells[0] * cell_size(), mission.start_cells[1] * cell_size(),
            mission.endpoint_altitude_m};
}

Vec3 CityScenario::end_m() const {
    return {mission.end_cells[0] * cell_size(), mission.end_cells[1] * cell_size(),
            mission.endpoint_altitude_m};
}

std::vector<Vec3> CityScenario::uhps_m() const {
    std::vector<Vec3> out;
    out.reserve(mission.uhps.size());
    for (const Uhp& u : mission.uhps) {
        out.push_back({u.x_cells * cell_size(), u.y_cells * cell_size(),
                       u.altitude_m.value_or(mission.endpoint_altitude_m)});
    }
    return out;
}

void rebuild_density_fields(CityScenario& scenario) {
    GridField& pop = scenario.pop_density;
    GridField& traffic = scenario.traffic_density;
    traffic.width_cells = pop.width_cells;
    traffic.height_cells = pop.height_cells;
    traffic.cell_size_m = pop.cell_size_m;
    pop.values.assign(static_cast<std::size_t>(pop.width_cells) * pop.height_cells, 0.0);
    traffic.values.assign(pop.values.size(), 0.0);

    for (int j = 0; j < pop.height_cells; ++j) {
        for (int i = 0; i < pop.width_cells; ++i) {
            const double cx = (i + 0.5) * pop.cell_size_m;
            const double cy = (j + 0.5) * pop.cell_size_m;
            double p = 0.0;
            for (const PopCenter& c : scenario.pop_centers) {
                const double d2 = sq(cx - c.x_m) + sq(cy - c.y_m);
                p += c.amplitude * std::exp(-d2 / (2.0 * sq(c.spread_m)));
            }
            double v = 0.0;
            for (const Road& r : scenario.roads) {
                const double d = distance_to_polyline(cx, cy, r.points_m);
                v += r.amplitude * std::exp(-sq(d) / (2.0 * sq(r.width_m)));
            }
            const std::size_t idx = static_cast<std::size_t>(j) * pop.width_cells + i;
            pop.values[idx] = p;
            traffic.values[idx] = v;
        }
    }
}

CityScenario generate_default_scenario(std::uint64_t seed) {
    CityScenario s;
    s.pop_density.width_cells = 50;
    s.pop_density.height_cells = 50;
    s.pop_density.cell_size_m = 100.0;

    // Two metropolitan cores mirrored about the start-goal diagonal (the
    // corridor between them is a density valley) plus a smaller district
    // near the goal. Positions sit on cell centers so field maxima land in
    // unique cells.
    s.pop_centers = {
        {2050.0, 3250.0, 0.016, 450.0},
        {3250.0, 2050.0, 0.016, 450.0},
        {4150.0, 3350.0, 0.005, 450.0},
    };
    s.roads = {
        {{{0.0, 1650.0}, {5000.0, 1650.0}}, 0.012, 150.0},
        {{{2450.0, 0.0}, {2450.0, 5000.0}}, 0.010, 150.0},
        {{{3250.0, 2750.0}, {4900.0, 3800.0}}, 0.008, 120.0},
    };

    // The seed modulates amplitudes and spreads only; geometry stays fixed,
    // and the jitter is kept small so the corridor valley stays put.
    Rng rng(seed);
    for (PopCenter& c : s.pop_centers) {
        c.amplitude *= 0.97 + 0.06 * rng.uniform01();
        c.spread_m *= 0.97 + 0.06 * rng.uniform01();
    }
    for (Road& r : s.roads) {
        r.amplitude *= 0.97 + 0.06 * rng.uniform01();
        r.width_m *= 0.97 + 0.06 * rng.uniform01();
    }

    s.building_mu = 3.04670;
    s.building_sigma = 0.76023;
    s.mission.start_cells = {1.0, 1.0};
    s.mission.end_cells = {49.0, 49.0};
    s.mission.uhps = {{25.0, 30.0, {}}, {34.0, 20.0, {}}, {40.0, 35.0, {}}};
    s.mission.h_min_m = 10.0;
    s.mission.h_max_m = 120.0;
    s.mission.endpoint_altitude_m = 0.5 * (s.mission.h_min_m + s.mission.h_max_m);
    s.alpha_max = std::numbers::pi / 3.0;
    s.beta_max = std::numbers::pi / 4.0;

    rebuild_density_fields(s);
    validate_scenario(s);
    return s;
}

namespace {

void check(bool ok, const std::string& message) {
    if (!ok) throw ValidationError(message);
}

void check_field(const GridField& f, const std::string& name) {
    check(f.width_cells > 0 && f.height_cells > 0, name + ": grid dimensions must be positive");
    check(f.cell_size_m > 0.0, name + ": cell_size_m must be positive");
    check(f.values.size() == static_cast<std::size_t>(f.width_cells) * f.height_cells,
          name + ": values length must equal width_cells * height_cells");
    for (double v : f.values) {
        check(std::isfinite(v) && v >= 0.0, name + ": values must be finite and non-negative");
    }
}

void check_in_grid(const std::array<double, 2>& cell, const GridField& f, const std::string& name) {
    check(cell[0] >= 0.0 && cell[0] <= f.width_cells - 1 && cell[1] >= 0.0 &&
              cell[1] <= f.height_cells - 1,
          name + ": coordinates must lie inside the grid");
}

}  // namespace

void validate_scenario(const CityScenario& s) {
    check_field(s.pop_density, "pop_density");
    check_field(s.traffic_density, "traffic_density");
    check(s.building_sigma > 0.0, "buildings.sigma must be positive");

    const Mission& m = s.mission;
    std::ostringstream hm;
    hm << "mission.h_min must be less than h_max (h_min=" << m.h_min_m << ", h_max=" << m.h_max_m
       << ")";
    check(m.h_min_m < m.h_max_m, hm.str());
    check_in_grid(m.start_cells, s.pop_density, "mission.start");
    check_in_grid(m.end_cells, s.pop_density, "mission.end");
    for (const Uhp& u : m.uhps) {
        check_in_grid({u.x_cells, u.y_cells}, s.pop_density, "mission.uhps");
    }

    check(s.alpha_max > 0.0 && s.alpha_max <= std::numbers::pi,
          "limits.alpha_max must lie in (0, pi]");
    check(s.beta_max > 0.0 && s.beta_max < std::numbers::pi / 2.0,
          "limits.beta_max must lie in (0, pi/2)");

    const UavParams& u = s.uav;
    check(u.mass_kg > 0.0, "uav.mass_kg must be positive");
    check(u.gravity > 0.0, "uav.gravity must be positive");
    check(u.rotor_count >= 1, "uav.rotor_count must be at least 1");
    check(u.disk_area_m2 > 0.0, "uav.disk_area_m2 must be positive");
    check(u.speed_mps > 0.0, "uav.speed_mps must be positive");
    check(u.rho0 > 0.0, "uav.rho0 must be positive");
    check(u.density_scale_height_m > 0.0, "uav.density_scale_height_m must be positive");

    const RiskParams& r = s.risk;
    check(r.p_crash >= 0.0 && r.p_crash <= 1.0, "risk.p_crash must lie in [0, 1]");
    check(r.crash_area_m2 > 0.0, "risk.crash_area_m2 must be positive");
    check(r.alpha_j > r.beta_j && r.beta_j > 0.0, "risk.alpha_j must exceed risk.beta_j > 0");
    check(r.sheltering > 0.0 && r.sheltering <= 1.0, "risk.sheltering must lie in (0, 1]");
    check(r.drag_coeff > 0.0, "risk.drag_coeff must be positive");
    check(r.vehicle_alpha_j > r.vehicle_beta_j && r.vehicle_beta_j > 0.0,
          "risk.vehicle alpha_j must exceed beta_j > 0");
    check(r.vehicle_sheltering > 0.0 && r.vehicle_sheltering <= 1.0,
          "risk.vehicle sheltering must lie in (0, 1]");

    check(s.noise.threshold_db > 0.0, "noise.threshold_db must be positive");
    check(s.noise.source_level_db > s.noise.threshold_db,
          "noise.source_level_db must exceed noise.threshold_db");
}

// ---- JSON ------------------------------------------------------------------

namespace {

using nlohmann::json;

const json& require(const json& j, const char* key, const char* scope) {
    auto it = j.find(key);
    if (it == j.end()) {
        throw ParseError(std::string("scenario: missing required key \"") + scope + key + "\"");
    }
    return *it;
}

double number(const json& j, const char* key, const char* scope) {
    const json& v = require(j, key, scope);
    if (!v.is_number()) {
        throw ParseError(std::string("scenario: key \"") + scope + key + "\" must be a number");
    }
    return v.get<double>();
}

std::array<double, 2> pair2(const json& v, const char* name) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        throw ParseError(std::string("scenario: \"") + name + "\" must be a [x, y] number pair");
    }
    return {v[0].get<double>(), v[1].get<double>()};
}

}  // namespace

json scenario_to_json(const CityScenario& s) {
    json j;
    j["grid"] = {{"width", s.pop_density.width_cells},
                 {"height", s.pop_density.height_cells},
                 {"cell_size_m", s.pop_density.cell_size_m}};
    j["pop_centers"] = json::array();
    for (const PopCenter& c : s.pop_centers) {
        j["pop_centers"].push_back(
            {{"x", c.x_m}, {"y", c.y_m}, {"amplitude", c.amplitude}, {"spread", c.spread_m}});
    }
    j["roads"] = json::array();
    for (const Road& r : s.roads) {
        json pts = json::array();
        for (const auto& p : r.points_m) pts.push_back({p[0], p[1]});
        j["roads"].push_back(
            {{"points", std::move(pts)}, {"amplitude", r.amplitude}, {"width", r.width_m}});
    }
    j["buildings"] = {{"mu", s.building_mu}, {"sigma", s.building_sigma}};
    json uhps = json::array();
    for (const Uhp& u : s.mission.uhps) {
        if (u.altitude_m) {
            uhps.push_back({u.x_cells, u.y_cells, *u.altitude_m});
        } else {
            uhps.push_back({u.x_cells, u.y_cells});
        }
    }
    j["mission"] = {{"start", {s.mission.start_cells[0], s.mission.start_cells[1]}},
                    {"end", {s.mission.end_cells[0], s.mission.end_cells[1]}},
                    {"uhps", std::move(uhps)},
                    {"h_min", s.mission.h_min_m},
                    {"h_max", s.mission.h_max_m},
                    {"endpoint_altitude", s.mission.endpoint_altitude_m}};
    j["limits"] = {{"alpha_max", s.alpha_max}, {"beta_max", s.beta_max}};
    j["uav"] = {{"mass_kg", s.uav.mass_kg},
                {"gravity", s.uav.gravity},
                {"rotor_count", s.uav.rotor_count},
                {"disk_area_m2", s.uav.disk_area_m2},
                {"speed_mps", s.uav.speed_mps},
                {"rho0", s.uav.rho0},
                {"density_scale_height_m", s.uav.density_scale_height_m}};
    j["risk"] = {{"p_crash", s.risk.p_crash},
                 {"crash_area_m2", s.risk.crash_area_m2},
                 {"alpha_j", s.risk.alpha_j},
                 {"beta_j", s.risk.beta_j},
                 {"sheltering", s.risk.sheltering},
                 {"drag_coeff", s.risk.drag_coeff},
                 {"printed_impact_form", s.risk.printed_impact_form},
                 {"vehicle",
                  {{"alpha_j", s.risk.vehicle_alpha_j},
                   {"beta_j", s.risk.vehicle_beta_j},
                   {"sheltering", s.risk.vehicle_sheltering}}}};
    j["noise"] = {{"k", s.noise.k},
                  {"source_level_db", s.noise.source_level_db},
                  {"lateral_offset_m", s.noise.lateral_offset_m},
                  {"threshold_db", s.noise.threshold_db}};
    return j;
}

CityScenario scenario_from_json(const json& doc) {
    if (!doc.is_object()) throw ParseError("scenario: document must be a JSON object");
    CityScenario s;

    const json& grid = require(doc, "grid", "");
    s.pop_density.width_cells = static_cast<int>(number(grid, "width", "grid."));
    s.pop_density.height_cells = static_cast<int>(number(grid, "height", "grid."));
    s.pop_density.cell_size_m = number(grid, "cell_size_m", "grid.");

    for (const json& c : require(doc, "pop_centers", "")) {
        s.pop_centers.push_back({number(c, "x", "pop_centers."), number(c, "y", "pop_centers."),
                                 number(c, "amplitude", "pop_centers."),
                                 number(c, "spread", "pop_centers.")});
    }
    for (const json& r : require(doc, "roads", "")) {
        Road road;
        for (const json& p : require(r, "points", "roads.")) {
            road.points_m.push_back(pair2(p, "roads.points"));
        }
        road.amplitude = number(r, "amplitude", "roads.");
        road.width_m = number(r, "width", "roads.");
        s.roads.push_back(std::move(road));
    }

    const json& buildings = require(doc, "buildings", "");
    s.building_mu = number(buildings, "mu", "buildings.");
    s.building_sigma = number(buildings, "sigma", "buildings.");

    const json& mission = require(doc, "mission", "");
    s.mission.start_cells = pair2(require(mission, "start", "mission."), "mission.start");
    s.mission.end_cells = pair2(require(mission, "end", "mission."), "mission.end");
    s.mission.uhps.clear();
    for (const json& u : require(mission, "uhps", "mission.")) {
        if (!u.is_array() || u.size() < 2 || u.size() > 3) {
            throw ParseError("scenario: \"mission.uhps\" entries must be [x, y] or [x, y, z]");
        }
        Uhp uhp{u[0].get<double>(), u[1].get<double>(), {}};
        if (u.size() == 3) uhp.altitude_m = u[2].get<double>();
        s.mission.uhps.push_back(uhp);
    }
    s.mission.h_min_m = number(mission, "h_min", "mission.");
    s.mission.h_max_m = number(mission, "h_max", "mission.");
    s.mission.endpoint_altitude_m = mission.contains("endpoint_altitude")
                                        ? number(mission, "endpoint_altitude", "mission.")
                                        : 0.5 * (s.mission.h_min_m + s.mission.h_max_m);

    const json& limits = require(doc, "limits", "");
    s.alpha_max = number(limits, "alpha_max", "limits.");
    s.beta_max = number(limits, "beta_max", "limits.");

    const json& uav = require(doc, "uav", "");
    s.uav.mass_kg = number(uav, "mass_kg", "uav.");
    s.uav.gravity = number(uav, "gravity", "uav.");
    s.uav.rotor_count = static_cast<int>(number(uav, "rotor_count", "uav."));
    s.uav.disk_area_m2 = number(uav, "disk_area_m2", "uav.");
    s.uav.speed_mps = number(uav, "speed_mps", "uav.");
    s.uav.rho0 = number(uav, "rho0", "uav.");
    s.uav.density_scale_height_m = number(uav, "density_scale_height_m", "uav.");

    const json& risk = require(doc, "risk", "");
    s.risk.p_crash = number(risk, "p_crash", "risk.");
    s.risk.crash_area_m2 = number(risk, "crash_area_m2", "risk.");
    s.risk.alpha_j = number(risk, "alpha_j", "risk.");
    s.risk.beta_j = number(risk, "beta_j", "risk.");
    s.risk.sheltering = number(risk, "sheltering", "risk.");
    s.risk.drag_coeff = number(risk, "drag_coeff", "risk.");
    s.risk.printed_impact_form =
        risk.contains("printed_impact_form") && risk["printed_impact_form"].get<bool>();
    if (risk.contains("vehicle")) {
        const json& v = risk["vehicle"];
        s.risk.vehicle_alpha_j = number(v, "alpha_j", "risk.vehicle.");
        s.risk.vehicle_beta_j = number(v, "beta_j", "risk.vehicle.");
        s.risk.vehicle_sheltering = number(v, "sheltering", "risk.vehicle.");
    } else {
        s.risk.vehicle_alpha_j = s.risk.alpha_j;
        s.risk.vehicle_beta_j = s.risk.beta_j;
        s.risk.vehicle_sheltering = s.risk.sheltering;
    }

    const json& noise = require(doc, "noise", "");
    s.noise.k = number(noise, "k", "noise.");
    s.noise.source_level_db = number(noise, "source_level_db", "noise.");
    s.noise.lateral_offset_m = number(noise, "lateral_offset_m", "noise.");
    s.noise.threshold_db = number(noise, "threshold_db", "noise.");

    rebuild_density_fields(s);
    validate_scenario(s);
    return s;
}

CityScenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scenario file: " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("scenario: invalid JSON: ") + e.what());
    }
    return scenario_from_json(doc);
}

void save_scenario(const CityScenario& scenario, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write scenario file: " + path.string());
    out << scenario_to_json(scenario).dump(2) << '\n';
}

}  // namespace uavpp
