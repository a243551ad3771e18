#include "uavpp/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "uavpp/errors.hpp"

namespace uavpp {

double f_length(const PathPolyline& path) {
    double total = 0.0;
    for (std::size_t i = 0; i < path.segment_count(); ++i) {
        total += norm(path.segment(i));
    }
    return total;
}

double f_height(const PathPolyline& path) {
    double total = 0.0;
    for (std::size_t i = 0; i < path.segment_count(); ++i) {
        total += std::abs(path.points[i + 1].z - path.points[i].z);
    }
    return total;
}

double air_density(double z1_m, double z2_m, const UavParams& uav) {
    return uav.rho0 * std::exp(-(z1_m + z2_m) / (2.0 * uav.density_scale_height_m));
}

double f_fuel(const PathPolyline& path, const UavParams& uav) {
    // Hover (induced) power at total thrust W*G, integrated over the segment
    // flight time, plus the potential energy of any climb.
    const double thrust = uav.mass_kg * uav.gravity;
    const double thrust_pow = thrust * std::sqrt(thrust);
    double total = 0.0;
    for (std::size_t i = 0; i < path.segment_count(); ++i) {
        const Vec3 g = path.segment(i);
        const double rho = air_density(path.points[i].z, path.points[i + 1].z, uav);
        const double hover_power =
            thrust_pow / std::sqrt(2.0 * rho * uav.disk_area_m2 * uav.rotor_count);
        const double climb = std::max(0.0, g.z);
        total += hover_power * norm(g) / uav.speed_mps + climb * thrust;
    }
    return total;
}

double f_distance(const PathPolyline& path, const CityScenario& scenario) {
    double total = 0.0;
    for (const Vec3& uhp : scenario.uhps_m()) {
        double best = std::numeric_limits<double>::infinity();
        for (const Vec3& p : path.points) {
            best = std::min(best, norm(p - uhp));
        }
        total += best;
    }
    return total;
}

double impact_velocity(double z_m, const UavParams& uav, const RiskParams& risk) {
    const double rho = uav.rho0;
    const double drag = risk.drag_coeff * risk.crash_area_m2 * rho;
    const double decay = 1.0 - std::exp(-z_m * drag / uav.mass_kg);
    if (risk.printed_impact_form) {
        // As-printed variant: the decay factor divides, so the velocity
        // diverges near the ground and falls with altitude.
        if (decay == 0.0) return std::numeric_limits<double>::infinity();
        return std::sqrt(2.0 * uav.mass_kg * uav.gravity / (drag * decay));
    }
    return std::sqrt(2.0 * uav.mass_kg * uav.gravity / drag * decay);
}

double fatality_from_energy(double impact_energy_j, double alpha_j, double beta_j,
                            double sheltering) {
    if (impact_energy_j <= 0.0) return 0.0;
    const double exponent = 1.0 / (4.0 * sheltering);
    return 1.0 / (1.0 + std::sqrt(alpha_j / beta_j) * std::pow(beta_j / impact_energy_j, exponent));
}

double fatality_factor(double z_m, const UavParams& uav, const RiskParams& risk) {
    const double v = impact_velocity(z_m, uav, risk);
    const double energy = 0.5 * uav.mass_kg * v * v;
    return fatality_from_energy(energy, risk.alpha_j, risk.beta_j, risk.sheltering);
}

double vehicle_fatality_factor(double z_m, const UavParams& uav, const RiskParams& risk) {
    const double v = impact_velocity(z_m, uav, risk);
    const double energy = 0.5 * uav.mass_kg * v * v;
    return fatality_from_energy(energy, risk.vehicle_alpha_j, risk.vehicle_beta_j,
                                risk.vehicle_sheltering);
}

double f_fatal(const PathPolyline& path, const CityScenario& scenario) {
    const double scale = scenario.risk.p_crash * scenario.risk.crash_area_m2;
    double total = 0.0;
    for (const Vec3& p : path.points) {
        total += scale * sample_field(scenario.pop_density, p.x, p.y) *
                 fatality_factor(p.z, scenario.uav, scenario.risk);
        total += scale * sample_field(scenario.traffic_density, p.x, p.y) *
                 vehicle_fatality_factor(p.z, scenario.uav, scenario.risk);
    }
    return total;
}

namespace {

double lognormal_pdf(double z, double mu, double sigma) {
    const double e = (std::log(z) - mu) / sigma;
    return std::exp(-0.5 * e * e) / (z * sigma * std::sqrt(2.0 * std::numbers::pi));
}

}  // namespace

double f_eco(const PathPolyline& path, const CityScenario& scenario) {
    const double mu = scenario.building_mu;
    const double sigma = scenario.building_sigma;
    const double median = std::exp(mu);
    const double plateau = lognormal_pdf(median, mu, sigma);
    double total = 0.0;
    for (const Vec3& p : path.points) {
        if (p.z <= 0.0) {
            throw std::domain_error("f_eco: altitude must be positive");
        }
        total += p.z <= median ? plateau : lognormal_pdf(p.z, mu, sigma);
    }
    return total;
}

double f_noise(const PathPolyline& path, const CityScenario& scenario) {
    const NoiseParams& n = scenario.noise;
    double total = 0.0;
    for (const Vec3& p : path.points) {
        if (p.z <= 0.0) continue;  // threshold test undefined at the ground
        const double ground_level_db = n.source_level_db - 20.0 * std::log10(p.z);
        if (ground_level_db <= n.threshold_db) continue;
        total += n.k * sample_field(scenario.pop_density, p.x, p.y) * n.source_level_db /
                 (p.z * p.z + n.lateral_offset_m * n.lateral_offset_m);
    }
    return total;
}

RawObjectives evaluate_raw(const PathPolyline& path, const CityScenario& scenario) {
    RawObjectives raw;
    raw.length = f_length(path);
    raw.height = f_height(path);
    raw.fuel = f_fuel(path, scenario.uav);
    raw.distance = f_distance(path, scenario);
    raw.fatal = f_fatal(path, scenario);
    raw.eco = f_eco(path, scenario);
    raw.noise = f_noise(path, scenario);
    return raw;
}

void validate_case_id(int case_id) {
    if (case_id < 1 || case_id > kCaseCount) {
        std::ostringstream msg;
        msg << "case id out of range 1..6 (got " << case_id << ")";
        throw ValidationError(msg.str());
    }
}

std::array<std::string, 2> eff_objective_names(int case_id) {
    validate_case_id(case_id);
    switch ((case_id - 1) % 3) {
        case 0: return {"f_length", "f_distance"};
        case 1: return {"f_length_plus_height", "f_distance"};
        default: return {"f_fuel", "f_distance"};
    }
}

std::array<std::string, 2> safe_objective_names(int case_id) {
    validate_case_id(case_id);
    return case_id <= 3 ? std::array<std::string, 2>{"f_fatal", "f_eco"}
                        : std::array<std::string, 2>{"f_fatal", "f_noise"};
}

BipartyEvaluation evaluate_case(int case_id, const PathPolyline& path,
                                const CityScenario& scenario) {
    validate_case_id(case_id);
    BipartyEvaluation ev;
    ev.raw = evaluate_raw(path, scenario);
    switch ((case_id - 1) % 3) {
        case 0: ev.eff[0] = ev.raw.length; break;
        case 1: ev.eff[0] = ev.raw.length + ev.raw.height; break;
        default: ev.eff[0] = ev.raw.fuel; break;
    }
    ev.eff[1] = ev.raw.distance;
    ev.safe[0] = ev.raw.fatal;
    ev.safe[1] = case_id <= 3 ? ev.raw.eco : ev.raw.noise;
    ev.violation = constraint_report(path, scenario).total;
    return ev;
}

BipartyEvaluation evaluate_case(int case_id, const Genome& genome, const CityScenario& scenario) {
    return evaluate_case(case_id, decode(genome, scenario), scenario);
}

}  // namespace uavpp
