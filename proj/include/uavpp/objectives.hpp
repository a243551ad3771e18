#pragma once

#include <array>
#include <string>

#include "uavpp/geometry.hpp"

namespace uavpp {

// All objectives are minimized and non-negative for in-bound genomes.

// Total 3-D path length (m).
double f_length(const PathPolyline& path);

// Total absolute altitude variation (m).
double f_height(const PathPolyline& path);

// Air density at the mean altitude of a segment (kg/m^3), exponential profile.
double air_density(double z1_m, double z2_m, const UavParams& uav);

// Hover-power energy plus climb work over all segments (J).
double f_fuel(const PathPolyline& path, const UavParams& uav);

// Sum over hover points of the distance to the nearest trajectory point (m).
double f_distance(const PathPolyline& path, const CityScenario& scenario);

// Ground-impact velocity after a drag-limited fall from altitude z (m/s);
// increases from 0 toward the terminal velocity. With
// risk.printed_impact_form set, evaluates the inverted variant instead.
double impact_velocity(double z_m, const UavParams& uav, const RiskParams& risk);

// Logistic fatality probability for a given impact energy; 0 at zero energy.
double fatality_from_energy(double impact_energy_j, double alpha_j, double beta_j,
                            double sheltering);

// Fatality probability after a fall from altitude z, pedestrian / vehicle
// parameter blocks.
double fatality_factor(double z_m, const UavParams& uav, const RiskParams& risk);
double vehicle_fatality_factor(double z_m, const UavParams& uav, const RiskParams& risk);

// Expected third-party fatalities along the path (pedestrians + vehicles).
double f_fatal(const PathPolyline& path, const CityScenario& scenario);

// Building-strike risk from the lognormal height distribution; constant
// plateau at or below the median height, pdf tail above it. Throws
// std::domain_error for non-positive altitudes.
double f_eco(const PathPolyline& path, const CityScenario& scenario);

// Population-weighted inverse-square noise cost; points whose ground-level
// sound does not exceed the threshold contribute nothing.
double f_noise(const PathPolyline& path, const CityScenario& scenario);

struct RawObjectives {
    double length = 0.0;
    double height = 0.0;
    double fuel = 0.0;
    double distance = 0.0;
    double fatal = 0.0;
    double eco = 0.0;
    double noise = 0.0;

    bool operator==(const RawObjectives&) const = default;
};

RawObjectives evaluate_raw(const PathPolyline& path, const CityScenario& scenario);

inline constexpr int kCaseCount = 6;

// Throws ValidationError for ids outside 1..6.
void validate_case_id(int case_id);

std::array<std::string, 2> eff_objective_names(int case_id);
std::array<std::string, 2> safe_objective_names(int case_id);

struct BipartyEvaluation {
    std::array<double, 2> eff{};   // efficiency party, per the active case
    std::array<double, 2> safe{};  // safety party
    double violation = 0.0;        // constraint_report total
    RawObjectives raw{};           // all seven objectives, for diagnostics

    bool feasible() const { return violation == 0.0; }
    bool operator==(const BipartyEvaluation&) const = default;
};

BipartyEvaluation evaluate_case(int case_id, const PathPolyline& path, const CityScenario& scenario);
BipartyEvaluation evaluate_case(int case_id, const Genome& genome, const CityScenario& scenario);

}  // namespace uavpp
