#include "uavpp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

namespace uavpp {

GenomeBounds GenomeBounds::for_scenario(const CityScenario& scenario, int interior_waypoints,
                                        double max_offset_m) {
    GenomeBounds b;
    const std::size_t n = static_cast<std::size_t>(interior_waypoints);
    b.lb.assign(2 * n, 0.0);
    b.ub.assign(2 * n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        b.lb[j] = -max_offset_m;
        b.ub[j] = max_offset_m;
        b.lb[n + j] = scenario.mission.h_min_m;
        b.ub[n + j] = scenario.mission.h_max_m;
    }
    return b;
}

double GenomeBounds::clamp_gene(std::size_t j, double v) const {
    return std::clamp(v, lb[j], ub[j]);
}

void GenomeBounds::clamp(Genome& genome) const {
    for (std::size_t j = 0; j < genome.genes.size(); ++j) {
        genome.genes[j] = clamp_gene(j, genome.genes[j]);
    }
}

PathPolyline decode(const Genome& genome, const CityScenario& scenario) {
    const std::size_t interior = genome.genes.size() / 2;
    const Vec3 start = scenario.start_m();
    const Vec3 end = scenario.end_m();
    const double chord_x = end.x - start.x;
    const double chord_y = end.y - start.y;
    const double chord_len = std::sqrt(chord_x * chord_x + chord_y * chord_y);
    // Left normal of the chord; zero-length chords keep the normal at zero so
    // degenerate fixtures still decode.
    const double nx = chord_len > 0.0 ? -chord_y / chord_len : 0.0;
    const double ny = chord_len > 0.0 ? chord_x / chord_len : 0.0;

    PathPolyline path;
    path.points.reserve(interior + 2);
    path.points.push_back(start);
    for (std::size_t i = 1; i <= interior; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(interior + 1);
        const double offset = genome.genes[i - 1];
        path.points.push_back({start.x + t * chord_x + offset * nx,
                               start.y + t * chord_y + offset * ny,
                               genome.genes[interior + i - 1]});
    }
    path.points.push_back(end);
    return path;
}

double turning_angle(const PathPolyline& path, std::size_t joint) {
    const Vec3 a = path.segment(joint);
    const Vec3 b = path.segment(joint + 1);
    const double la = norm_xy(a);
    const double lb = norm_xy(b);
    if (la == 0.0 || lb == 0.0) return 0.0;
    const double c = std::clamp(dot_xy(a, b) / (la * lb), -1.0, 1.0);
    return std::acos(c);
}

double slope_angle(const PathPolyline& path, std::size_t segment) {
    const Vec3 g = path.segment(segment);
    const double horizontal = norm_xy(g);
    if (horizontal == 0.0) {
        if (g.z == 0.0) return 0.0;
        return std::copysign(std::numbers::pi / 2.0, g.z);
    }
    return std::atan(g.z / horizontal);
}

ConstraintReport constraint_report(const PathPolyline& path, const CityScenario& scenario) {
    ConstraintReport r;
    const double h_min = scenario.mission.h_min_m;
    const double h_max = scenario.mission.h_max_m;
    for (const Vec3& p : path.points) {
        r.terrain_violation_m += std::max(0.0, h_min - p.z) + std::max(0.0, p.z - h_max);
    }
    const std::size_t segments = path.segment_count();
    for (std::size_t i = 0; i + 1 < segments; ++i) {
        r.turn_violation_rad += std::max(0.0, std::abs(turning_angle(path, i)) - scenario.alpha_max);
    }
    for (std::size_t i = 0; i < segments; ++i) {
        r.slope_violation_rad += std::max(0.0, std::abs(slope_angle(path, i)) - scenario.beta_max);
    }
    r.total = r.terrain_violation_m / (h_max - h_min) + r.turn_violation_rad / scenario.alpha_max +
              r.slope_violation_rad / scenario.beta_max;
    return r;
}

void write_path_csv(const PathPolyline& path, std::ostream& out) {
    out << "idx,x_m,y_m,z_m\n";
    char line[128];
    for (std::size_t i = 0; i < path.points.size(); ++i) {
        const Vec3& p = path.points[i];
        std::snprintf(line, sizeof line, "%zu,%.17g,%.17g,%.17g\n", i, p.x, p.y, p.z);
        out << line;
    }
}

}  // namespace uavpp
