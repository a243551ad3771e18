#pragma once

#include <cmath>

namespace uavpp {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    bool operator==(const Vec3&) const = default;
};

inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }

inline double norm(const Vec3& v) { return std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z); }

// Length and dot product of the horizontal (x, y) projection.
inline double norm_xy(const Vec3& v) { return std::sqrt(v.x * v.x + v.y * v.y); }
inline double dot_xy(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y; }

}  // namespace uavpp
