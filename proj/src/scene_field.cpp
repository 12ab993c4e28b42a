#include "stochsolid/scene_field.hpp"

#include "stochsolid/errors.hpp"
#include "stochsolid/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace stochsolid {

Vec3 SceneField::gradient(const Vec3 &x) const { return finite_difference_gradient(x); }

double SceneField::finite_difference_step() const {
    const auto b = bounds();
    const double diameter = b ? b->diameter() : 1.0;
    return 1e-4 * std::max(diameter, 1e-3);
}

Vec3 SceneField::finite_difference_gradient(const Vec3 &x) const {
    const double h = finite_difference_step();
    Vec3 g;
    for (int axis = 0; axis < 3; ++axis) {
        Vec3 lo = x, hi = x;
        lo[axis] -= h;
        hi[axis] += h;
        g[axis] = (value(hi) - value(lo)) / (2.0 * h);
    }
    return g;
}

// ---------------------------------------------------------------------------

SphereField::SphereField(Vec3 center, double radius) : m_center(std::move(center)), m_radius(radius) {
    if (!(radius > 0.0)) throw ConfigError("sphere radius must be positive");
}

double SphereField::value(const Vec3 &x) const { return (x - m_center).norm() - m_radius; }

Vec3 SphereField::gradient(const Vec3 &x) const {
    const Vec3 d = x - m_center;
    const double len = d.norm();
    if (len == 0.0) return Vec3::Zero();
    return d / len;
}

std::optional<Bounds> SphereField::bounds() const { return Bounds{m_center, m_radius}; }

// ---------------------------------------------------------------------------

BoxField::BoxField(Vec3 center, Vec3 half_extents, double smoothing)
    : m_center(std::move(center)), m_half(std::move(half_extents)), m_smoothing(smoothing) {
    if (!(m_half.minCoeff() > 0.0)) throw ConfigError("box half extents must be positive");
    if (!(smoothing >= 0.0) || smoothing >= m_half.minCoeff())
        throw ConfigError("box smoothing must lie in [0, min half extent)");
}

double BoxField::value(const Vec3 &x) const {
    const Vec3 q = (x - m_center).cwiseAbs() - (m_half - Vec3::Constant(m_smoothing));
    return q.cwiseMax(0.0).norm() + std::min(q.maxCoeff(), 0.0) - m_smoothing;
}

Vec3 BoxField::gradient(const Vec3 &x) const {
    const Vec3 d = x - m_center;
    const Vec3 q = d.cwiseAbs() - (m_half - Vec3::Constant(m_smoothing));
    const Vec3 sign(std::copysign(1.0, d.x()), std::copysign(1.0, d.y()), std::copysign(1.0, d.z()));
    const Vec3 outside = q.cwiseMax(0.0);
    const double len = outside.norm();
    if (len > 0.0) return (outside / len).cwiseProduct(sign);
    Vec3 g = Vec3::Zero();
    int axis = 0;
    q.maxCoeff(&axis);
    g[axis] = sign[axis];
    return g;
}

std::optional<Bounds> BoxField::bounds() const { return Bounds{m_center, m_half.norm()}; }

// ---------------------------------------------------------------------------

SmoothUnionField::SmoothUnionField(std::vector<SceneFieldPtr> children, double blend_radius)
    : m_children(std::move(children)), m_blend(blend_radius) {
    if (m_children.empty()) throw ConfigError("smooth union needs at least one child");
    if (!(blend_radius > 0.0)) throw ConfigError("smooth union blend radius must be positive");
    for (const auto &child : m_children)
        if (!child) throw ConfigError("smooth union child is null");
}

namespace {

struct Blend {
    double value;
    double h;
};

Blend smooth_min(double a, double b, double k) {
    const double h = std::clamp(0.5 + 0.5 * (b - a) / k, 0.0, 1.0);
    return {b + h * (a - b) - k * h * (1.0 - h), h};
}

}  // namespace

double SmoothUnionField::value(const Vec3 &x) const {
    double f = m_children.front()->value(x);
    for (std::size_t i = 1; i < m_children.size(); ++i)
        f = smooth_min(f, m_children[i]->value(x), m_blend).value;
    return f;
}

Vec3 SmoothUnionField::gradient(const Vec3 &x) const {
    // Inside the blend band the derivative with respect to h vanishes, so the
    // gradient is the h-weighted mix of the children's gradients.
    double f = m_children.front()->value(x);
    Vec3 g = m_children.front()->gradient(x);
    for (std::size_t i = 1; i < m_children.size(); ++i) {
        const double b = m_children[i]->value(x);
        const Blend blend = smooth_min(f, b, m_blend);
        g = blend.h * g + (1.0 - blend.h) * m_children[i]->gradient(x);
        f = blend.value;
    }
    return g;
}

std::optional<Bounds> SmoothUnionField::bounds() const {
    Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
    Vec3 hi = -lo;
    for (const auto &child : m_children) {
        const auto b = child->bounds();
        if (!b) return std::nullopt;
        lo = lo.cwiseMin(b->center - Vec3::Constant(b->radius));
        hi = hi.cwiseMax(b->center + Vec3::Constant(b->radius));
    }
    const Vec3 center = 0.5 * (lo + hi);
    return Bounds{center, 0.5 * (hi - lo).norm() + m_blend};
}

// ---------------------------------------------------------------------------

LinearRampField::LinearRampField(Vec3 normal, double offset) : m_offset(offset) {
    const double len = normal.norm();
    if (!(len > 0.0)) throw ConfigError("linear ramp normal must be nonzero");
    m_normal = normal / len;
}

double LinearRampField::value(const Vec3 &x) const { return m_normal.dot(x) - m_offset; }

Vec3 LinearRampField::gradient(const Vec3 &) const { return m_normal; }

// ---------------------------------------------------------------------------

PointCloudField::PointCloudField(std::vector<OrientedPoint> points, double support)
    : m_points(std::move(points)), m_support(support) {
    if (m_points.empty()) throw ConfigError("point cloud field needs at least one point");
    if (!(support > 0.0)) throw ConfigError("point cloud support must be positive");
    Vec3 lo = m_points.front().position, hi = lo;
    for (auto &p : m_points) {
        const double len = p.normal.norm();
        if (!(len > 0.0)) throw ConfigError("point cloud normal must be nonzero");
        p.normal /= len;
        lo = lo.cwiseMin(p.position);
        hi = hi.cwiseMax(p.position);
    }
    m_bounds = Bounds{0.5 * (lo + hi), 0.5 * (hi - lo).norm() + 3.0 * support};
}

PointCloudField::Eval PointCloudField::evaluate(const Vec3 &x, bool with_gradient) const {
    // Weights are shifted by the largest exponent so that far-away queries
    // keep a well-defined normalized average.
    const double inv_h2 = 1.0 / (m_support * m_support);
    double max_exponent = -std::numeric_limits<double>::infinity();
    for (const auto &p : m_points)
        max_exponent = std::max(max_exponent, -0.5 * (x - p.position).squaredNorm() * inv_h2);

    double weight_sum = 0.0, weighted_distance = 0.0;
    Vec3 weighted_normal = Vec3::Zero(), weight_grad = Vec3::Zero(), weight_grad_distance = Vec3::Zero();
    for (const auto &p : m_points) {
        const Vec3 d = x - p.position;
        const double w = std::exp(-0.5 * d.squaredNorm() * inv_h2 - max_exponent);
        const double dist = d.dot(p.normal);
        weight_sum += w;
        weighted_distance += w * dist;
        if (with_gradient) {
            const Vec3 dw = -w * inv_h2 * d;
            weighted_normal += w * p.normal;
            weight_grad += dw;
            weight_grad_distance += dw * dist;
        }
    }
    Eval out;
    out.value = weighted_distance / weight_sum;
    out.gradient = with_gradient
                       ? Vec3((weighted_normal + weight_grad_distance - out.value * weight_grad) / weight_sum)
                       : Vec3::Zero();
    return out;
}

double PointCloudField::value(const Vec3 &x) const { return evaluate(x, false).value; }

Vec3 PointCloudField::gradient(const Vec3 &x) const { return evaluate(x, true).gradient; }

std::optional<Bounds> PointCloudField::bounds() const { return m_bounds; }

std::vector<OrientedPoint> PointCloudField::fibonacci_sphere(const Vec3 &center, double radius,
                                                             int count) {
    if (count < 1) throw ConfigError("point count must be positive");
    std::vector<OrientedPoint> points;
    points.reserve(static_cast<std::size_t>(count));
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
        const double z = 1.0 - (2.0 * i + 1.0) / count;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden * i;
        const Vec3 n(r * std::cos(phi), r * std::sin(phi), z);
        points.push_back({center + radius * n, n});
    }
    return points;
}

// ---------------------------------------------------------------------------

FiniteDifferenceField::FiniteDifferenceField(SceneFieldPtr inner) : m_inner(std::move(inner)) {
    if (!m_inner) throw ConfigError("finite-difference wrapper needs a field");
}

// ---------------------------------------------------------------------------

GridField::GridField(SceneFieldPtr source, int resolution)
    : m_source(std::move(source)), m_resolution(resolution) {
    if (!m_source) throw ConfigError("grid source field is null");
    if (resolution < 2) throw ConfigError("grid resolution must be at least 2");
    const auto b = m_source->bounds();
    if (!b) throw ConfigError("cannot bake an unbounded field into a grid");
    m_lo = b->center - Vec3::Constant(b->radius);
    m_cell = 2.0 * b->radius / (resolution - 1);
    const auto n = static_cast<std::size_t>(resolution);
    m_nodes.resize(n * n * n);
    parallel_for(n, [&](std::size_t k) {
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i) {
                const Vec3 x = m_lo + m_cell * Vec3(double(i), double(j), double(k));
                const Vec3 g = m_source->gradient(x);
                m_nodes[(k * n + j) * n + i] = {m_source->value(x), g.x(), g.y(), g.z()};
            }
    });
}

bool GridField::locate(const Vec3 &x, std::array<std::size_t, 8> &corners,
                       std::array<double, 8> &weights) const {
    const Vec3 u = (x - m_lo) / m_cell;
    const double upper = m_resolution - 1;
    if ((u.array() < 0.0).any() || (u.array() > upper).any()) return false;
    const auto n = static_cast<std::size_t>(m_resolution);
    std::array<std::size_t, 3> base{};
    std::array<double, 3> frac{};
    for (int a = 0; a < 3; ++a) {
        const double cell = std::min(std::floor(u[a]), upper - 1.0);
        base[a] = static_cast<std::size_t>(cell);
        frac[a] = u[a] - cell;
    }
    for (int c = 0; c < 8; ++c) {
        const std::size_t di = c & 1, dj = (c >> 1) & 1, dk = (c >> 2) & 1;
        corners[c] = ((base[2] + dk) * n + base[1] + dj) * n + base[0] + di;
        weights[c] = (di ? frac[0] : 1.0 - frac[0]) * (dj ? frac[1] : 1.0 - frac[1]) *
                     (dk ? frac[2] : 1.0 - frac[2]);
    }
    return true;
}

double GridField::value(const Vec3 &x) const {
    std::array<std::size_t, 8> corners;
    std::array<double, 8> weights;
    if (!locate(x, corners, weights)) return m_source->value(x);
    double f = 0.0;
    for (int c = 0; c < 8; ++c) f += weights[c] * m_nodes[corners[c]][0];
    return f;
}

Vec3 GridField::gradient(const Vec3 &x) const {
    std::array<std::size_t, 8> corners;
    std::array<double, 8> weights;
    if (!locate(x, corners, weights)) return m_source->gradient(x);
    Vec3 g = Vec3::Zero();
    for (int c = 0; c < 8; ++c) {
        const auto &node = m_nodes[corners[c]];
        g += weights[c] * Vec3(node[1], node[2], node[3]);
    }
    return g;
}

}  // namespace stochsolid
