#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace stochsolid {

using Vec3 = Eigen::Vector3d;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kInvPi = std::numbers::inv_pi;
inline constexpr double kFourPi = 4.0 * std::numbers::pi;

/// Uniform direction on the unit sphere from two canonical samples.
inline Vec3 uniform_sphere(double u1, double u2) {
    const double z = 1.0 - 2.0 * u1;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = 2.0 * kPi * u2;
    return {r * std::cos(phi), r * std::sin(phi), z};
}

/// Uniform direction inside the cone of half-angle acos(cos_max) around +z.
inline Vec3 uniform_cone(double u1, double u2, double cos_max) {
    const double z = 1.0 - u1 * (1.0 - cos_max);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = 2.0 * kPi * u2;
    return {r * std::cos(phi), r * std::sin(phi), z};
}

/// Orthonormal frame whose third axis is `n` (Duff et al. branchless construction).
struct Frame {
    Vec3 s, t, n;

    explicit Frame(const Vec3 &normal) : n(normal) {
        const double sign = std::copysign(1.0, n.z());
        const double a = -1.0 / (sign + n.z());
        const double b = n.x() * n.y() * a;
        s = Vec3(1.0 + sign * n.x() * n.x() * a, sign * b, -sign * n.x());
        t = Vec3(b, sign + n.y() * n.y() * a, -n.y());
    }

    Vec3 to_world(const Vec3 &v) const { return s * v.x() + t * v.y() + n * v.z(); }
};

}  // namespace stochsolid
