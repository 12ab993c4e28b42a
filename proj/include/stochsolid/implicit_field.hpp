#pragma once

#include "stochsolid/distribution.hpp"
#include "stochsolid/math.hpp"
#include "stochsolid/scene_field.hpp"

namespace stochsolid {

/// Scale s(x) > 0 of the stochastic implicit function, either constant or a
/// radial Gaussian bump blending from `outer` far away to `inner` at `center`.
class ScaleField {
public:
    ScaleField() = default;
    explicit ScaleField(double constant);
    static ScaleField radial(Vec3 center, double radius, double inner, double outer);

    double value(const Vec3 &x) const;
    Vec3 gradient(const Vec3 &x) const;
    bool is_constant() const { return m_kind == Kind::Constant; }

private:
    enum class Kind { Constant, Radial };
    Kind m_kind = Kind::Constant;
    double m_outer = 1.0;
    double m_inner = 1.0;
    Vec3 m_center = Vec3::Zero();
    double m_radius = 1.0;
};

/// Stochastic implicit function with mean f̄, scale s and a symmetric law.
///
/// The pointwise vacancy is V(x) = Ψ(s(x) f̄(x)) and occupancy 1 − V(x).
class ImplicitField {
public:
    static constexpr double kGradientFloor = 1e-9;

    ImplicitField(SceneFieldPtr mean, ScaleField scale = ScaleField(1.0),
                  SymmetricDistribution dist = SymmetricDistribution());

    double mean(const Vec3 &x) const { return m_mean->value(x); }
    Vec3 grad_mean(const Vec3 &x) const { return m_mean->gradient(x); }
    double scale(const Vec3 &x) const { return m_scale.value(x); }
    Vec3 grad_scale(const Vec3 &x) const { return m_scale.gradient(x); }

    double vacancy(const Vec3 &x) const;
    double occupancy(const Vec3 &x) const { return 1.0 - vacancy(x); }

    /// ∇V = ψ(s f̄) (s ∇f̄ + f̄ ∇s).
    Vec3 grad_vacancy(const Vec3 &x) const;

    /// Unit normal ∇V/‖∇V‖; throws DegenerateGradient when ‖∇V‖ is below the floor.
    Vec3 normal(const Vec3 &x) const;

    const SceneField &scene() const { return *m_mean; }
    const SceneFieldPtr &scene_ptr() const { return m_mean; }
    const ScaleField &scale_field() const { return m_scale; }
    SymmetricDistribution distribution() const { return m_dist; }

    /// Same stochastic law over a different mean function (e.g. a baked grid).
    ImplicitField with_scene(SceneFieldPtr mean) const;

private:
    SceneFieldPtr m_mean;
    ScaleField m_scale;
    SymmetricDistribution m_dist;
};

/// Pointwise quantities shared by the attenuation models at one location.
struct FieldSample {
    double mean;
    Vec3 grad_mean;
    double scale;
    Vec3 grad_scale;
    double vacancy;
    /// s ∇f̄ + f̄ ∇s, the gradient of the standardized argument s f̄.
    Vec3 grad_argument;
    Vec3 grad_vacancy;

    static FieldSample at(const ImplicitField &field, const Vec3 &x);
};

}  // namespace stochsolid
