#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include <json.hpp>

#include "uavpp/errors.hpp"
#include "uavpp/vec.hpp"

namespace uavpp {

// Dense row-major scalar field over a regular grid; cell (i, j) is stored at
// values[j * width_cells + i]. Units depend on the role (persons/m^2 for
// population, vehicles/m^2 for traffic).
struct GridField {
    int width_cells = 0;
    int height_cells = 0;
    double cell_size_m = 0.0;
    std::vector<double> values;

    double at_cell(int i, int j) const { return values[static_cast<std::size_t>(j) * width_cells + i]; }
    double extent_x() const { return width_cells * cell_size_m; }
    double extent_y() const { return height_cells * cell_size_m; }

    bool operator==(const GridField&) const = default;
};

// Nearest-cell lookup in meters; out-of-grid coordinates clamp to the
// boundary cells, so the field is total over the plane.
double sample_field(const GridField& field, double x_m, double y_m);

struct UavParams {
    double mass_kg = 1.38;  // airframe plus battery
    double gravity = 9.81;
    int rotor_count = 4;
    double disk_area_m2 = 0.1;  // rotating blade disk, per rotor
    double speed_mps = 10.0;
    double rho0 = 1.225;  // air density at 0 m
    double density_scale_height_m = 10700.0;

    bool operator==(const UavParams&) const = default;
};

// Ground-impact fatality model. alpha_j/beta_j are impact energies: beta_j
// kills with certainty, alpha_j marks the sheltering-probability point of the
// logistic curve. The vehicle_* block drives the vehicle-occupant curve and
// defaults to the pedestrian values.
struct RiskParams {
    double p_crash = 1e-6;
    double crash_area_m2 = 1.0;
    double alpha_j = 1e6;
    double beta_j = 100.0;
    double sheltering = 0.5;  // in (0, 1]
    double drag_coeff = 0.3;
    double vehicle_alpha_j = 1e6;
    double vehicle_beta_j = 100.0;
    double vehicle_sheltering = 0.5;
    // Evaluate the inverted impact-velocity form (decay factor in the
    // denominator) instead of the drag-fall form. Off by default; kept as a
    // switch for side-by-side comparison.
    bool printed_impact_form = false;

    bool operator==(const RiskParams&) const = default;
};

struct NoiseParams {
    double k = 1.0;  // intensity-to-level conversion factor
    double source_level_db = 80.0;  // at 1 m from the airframe
    double lateral_offset_m = 0.0;
    double threshold_db = 40.0;

    bool operator==(const NoiseParams&) const = default;
};

// Gaussian radial-basis bump of the population field.
struct PopCenter {
    double x_m = 0.0;
    double y_m = 0.0;
    double amplitude = 0.0;  // persons/m^2 at the center
    double spread_m = 1.0;

    bool operator==(const PopCenter&) const = default;
};

// Road polyline with Gaussian falloff of traffic density around it.
struct Road {
    std::vector<std::array<double, 2>> points_m;
    double amplitude = 0.0;  // vehicles/m^2 on the centerline
    double width_m = 1.0;

    bool operator==(const Road&) const = default;
};

// Hover point in cell units; altitude defaults to the mission endpoint
// altitude when unset.
struct Uhp {
    double x_cells = 0.0;
    double y_cells = 0.0;
    std::optional<double> altitude_m;

    bool operator==(const Uhp&) const = default;
};

struct Mission {
    std::array<double, 2> start_cells{1.0, 1.0};
    std::array<double, 2> end_cells{49.0, 49.0};
    std::vector<Uhp> uhps;
    double h_min_m = 10.0;
    double h_max_m = 120.0;
    double endpoint_altitude_m = 65.0;

    bool operator==(const Mission&) const = default;
};

// Immutable once constructed; evaluators may share it across threads.
struct CityScenario {
    GridField pop_density;      // derived from pop_centers
    GridField traffic_density;  // derived from roads
    std::vector<PopCenter> pop_centers;
    std::vector<Road> roads;
    double building_mu = 3.04670;  // lognormal parameters of building height (m)
    double building_sigma = 0.76023;
    Mission mission;
    double alpha_max = 0.0;  // max turning angle, rad
    double beta_max = 0.0;   // max slope angle, rad
    UavParams uav;
    RiskParams risk;
    NoiseParams noise;

    double cell_size() const { return pop_density.cell_size_m; }
    Vec3 start_m() const;
    Vec3 end_m() const;
    std::vector<Vec3> uhps_m() const;

    bool operator==(const CityScenario&) const = default;
};

// Synthetic 50x50 urban scenario, 100 m cells. The layout (center/road
// geometry, mission, limits) is fixed; the seed perturbs field amplitudes and
// spreads, so every seed yields a distinct but structurally equal city.
CityScenario generate_default_scenario(std::uint64_t seed);

// Recompute both density grids from pop_centers/roads, sampling at cell
// centers.
void rebuild_density_fields(CityScenario& scenario);

// Throws ValidationError naming the offending field.
void validate_scenario(const CityScenario& scenario);

nlohmann::json scenario_to_json(const CityScenario& scenario);
CityScenario scenario_from_json(const nlohmann::json& doc);

CityScenario load_scenario(const std::filesystem::path& path);
void save_scenario(const CityScenario& scenario, const std::filesystem::path& path);

}  // namespace uavpp
