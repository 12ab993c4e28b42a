#pragma once

#include "stochsolid/math.hpp"

#include <array>
#include <memory>
#include <optional>
#include <vector>

namespace stochsolid {

/// Bounding sphere of the region where a field has structure.
struct Bounds {
    Vec3 center = Vec3::Zero();
    double radius = 0.0;

    double diameter() const { return 2.0 * radius; }
};

/// Deterministic mean implicit function f̄ of a scene, negative inside the solid.
///
/// Implementations are immutable after construction and safe to evaluate
/// concurrently. gradient() defaults to central differences with step
/// 1e-4 times the bounding diameter.
class SceneField {
public:
    virtual ~SceneField() = default;

    virtual double value(const Vec3 &x) const = 0;
    virtual Vec3 gradient(const Vec3 &x) const;

    /// Finite region containing the surface, or nullopt for unbounded fields.
    virtual std::optional<Bounds> bounds() const = 0;

    Vec3 finite_difference_gradient(const Vec3 &x) const;
    double finite_difference_step() const;
};

using SceneFieldPtr = std::shared_ptr<const SceneField>;

class SphereField final : public SceneField {
public:
    SphereField(Vec3 center, double radius);

    double value(const Vec3 &x) const override;
    Vec3 gradient(const Vec3 &x) const override;
    std::optional<Bounds> bounds() const override;

private:
    Vec3 m_center;
    double m_radius;
};

/// Box with rounded edges: the signed distance of a box shrunk by
/// `smoothing`, offset outward by the same amount.
class BoxField final : public SceneField {
public:
    BoxField(Vec3 center, Vec3 half_extents, double smoothing);

    double value(const Vec3 &x) const override;
    Vec3 gradient(const Vec3 &x) const override;
    std::optional<Bounds> bounds() const override;

private:
    Vec3 m_center;
    Vec3 m_half;
    double m_smoothing;
};

/// Polynomial smooth minimum of its children, folded left to right.
class SmoothUnionField final : public SceneField {
public:
    SmoothUnionField(std::vector<SceneFieldPtr> children, double blend_radius);

    double value(const Vec3 &x) const override;
    Vec3 gradient(const Vec3 &x) const override;
    std::optional<Bounds> bounds() const override;

private:
    std::vector<SceneFieldPtr> m_children;
    double m_blend;
};

/// Signed distance to the plane n·x = offset.
class LinearRampField final : public SceneField {
public:
    LinearRampField(Vec3 normal, double offset);

    double value(const Vec3 &x) const override;
    Vec3 gradient(const Vec3 &x) const override;
    std::optional<Bounds> bounds() const override { return std::nullopt; }

private:
    Vec3 m_normal;
    double m_offset;
};

struct OrientedPoint {
    Vec3 position;
    Vec3 normal;
};

/// Gaussian-weighted average of signed plane distances to oriented points:
/// f̄(x) = Σ wᵢ (x − pᵢ)·nᵢ / Σ wᵢ with wᵢ = exp(−‖x − pᵢ‖² / (2 h²)).
class PointCloudField final : public SceneField {
public:
    PointCloudField(std::vector<OrientedPoint> points, double support);

    double value(const Vec3 &x) const override;
    Vec3 gradient(const Vec3 &x) const override;
    std::optional<Bounds> bounds() const override;

    const std::vector<OrientedPoint> &points() const { return m_points; }
    double support() const { return m_support; }

    /// Oriented points on a sphere placed on a Fibonacci lattice.
    static std::vector<OrientedPoint> fibonacci_sphere(const Vec3 &center, double radius,
                                                       int count);

private:
    struct Eval {
        double value;
        Vec3 gradient;
    };
    Eval evaluate(const Vec3 &x, bool with_gradient) const;

    std::vector<OrientedPoint> m_points;
    double m_support;
    Bounds m_bounds;
};

/// Wraps a field so that its gradient always comes from central differences.
class FiniteDifferenceField final : public SceneField {
public:
    explicit FiniteDifferenceField(SceneFieldPtr inner);

    double value(const Vec3 &x) const override { return m_inner->value(x); }
    std::optional<Bounds> bounds() const override { return m_inner->bounds(); }

private:
    SceneFieldPtr m_inner;
};

/// Samples another field's value and gradient on a regular grid over the
/// cube enclosing its bounds and interpolates trilinearly. Outside the cube
/// it defers to the source field.
class GridField final : public SceneField {
public:
    GridField(SceneFieldPtr source, int resolution);

    double value(const Vec3 &x) const override;
    Vec3 gradient(const Vec3 &x) const override;
    std::optional<Bounds> bounds() const override { return m_source->bounds(); }

    int resolution() const { return m_resolution; }

private:
    bool locate(const Vec3 &x, std::array<std::size_t, 8> &corners,
                std::array<double, 8> &weights) const;

    SceneFieldPtr m_source;
    int m_resolution;
    Vec3 m_lo;
    double m_cell;
    std::vector<std::array<double, 4>> m_nodes;
};

}  // namespace stochsolid
