#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "uavpp/scenario.hpp"
#include "uavpp/vec.hpp"

namespace uavpp {

// Interior waypoints carried by one decision vector; two genes each (lateral
// offset, altitude), giving the 88-variable encoding.
inline constexpr int kInteriorWaypoints = 44;

inline constexpr double kDefaultMaxOffsetM = 150.0;

struct Genome {
    // Layout: lateral offsets (m) first, then altitudes (m).
    std::vector<double> genes;

    bool operator==(const Genome&) const = default;
};

struct GenomeBounds {
    std::vector<double> lb;
    std::vector<double> ub;

    // The default lateral box keeps the turning-angle constraint reachable
    // for uniformly initialized populations; wider boxes are legal but push
    // feasibility beyond practical evaluation budgets.
    static GenomeBounds for_scenario(const CityScenario& scenario,
                                     int interior_waypoints = kInteriorWaypoints,
                                     double max_offset_m = kDefaultMaxOffsetM);

    std::size_t size() const { return lb.size(); }
    double clamp_gene(std::size_t j, double v) const;
    void clamp(Genome& genome) const;
};

// 3-D flight path; first and last points are pinned to the mission endpoints
// at the configured endpoint altitude.
struct PathPolyline {
    std::vector<Vec3> points;

    std::size_t segment_count() const { return points.empty() ? 0 : points.size() - 1; }
    Vec3 segment(std::size_t i) const { return points[i + 1] - points[i]; }
};

// Chord-parameterized decoding: interior waypoint i sits at fraction
// i/(interior+1) along the straight start->end chord, displaced by its offset
// gene along the chord's left normal, at its altitude gene.
PathPolyline decode(const Genome& genome, const CityScenario& scenario);

// Angle between the horizontal projections of segments joint and joint+1,
// in [0, pi]. Degenerate (vertically stacked) segments yield 0.
double turning_angle(const PathPolyline& path, std::size_t joint);

// Climb angle of one segment in [-pi/2, pi/2]; a purely vertical segment
// yields +-pi/2 by the sign of the altitude change.
double slope_angle(const PathPolyline& path, std::size_t segment);

struct ConstraintReport {
    double terrain_violation_m = 0.0;   // altitude band exceedances, all points
    double turn_violation_rad = 0.0;    // turning-angle exceedances, all joints
    double slope_violation_rad = 0.0;   // slope-angle exceedances, all segments
    double total = 0.0;                 // per-term normalized sum

    bool feasible() const { return total == 0.0; }
};

ConstraintReport constraint_report(const PathPolyline& path, const CityScenario& scenario);

// CSV with header idx,x_m,y_m,z_m and one row per waypoint.
void write_path_csv(const PathPolyline& path, std::ostream& out);

}  // namespace uavpp
