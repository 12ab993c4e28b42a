#pragma once

#include "stochsolid/attenuation.hpp"
#include "stochsolid/implicit_field.hpp"
#include "stochsolid/math.hpp"
#include "stochsolid/normal_distribution.hpp"
#include "stochsolid/oracle.hpp"
#include "stochsolid/rng.hpp"

#include <optional>

namespace stochsolid {

/// Two-sided Lambertian microflake BRDF: with m oriented towards −ωo,
/// fr = (scale/π) max(0, ωi·m); equivalently (scale/π)|ωi·m| when ωi and
/// ωo lie on opposite sides of the flake and 0 otherwise.
///
/// ωo is the propagation direction of the ray arriving at the flake and ωi
/// points towards the source being gathered.
double lambertian_flake(const Vec3 &m, const Vec3 &omega_o, const Vec3 &omega_i, double albedo_scale = 1.0);

/// Microflake phase function fp(x, ωo, ωi) = (1/Σ_D(x, ωo)) ∫ fr(m, ωo, ωi) |ωo·m| D_x(m) dm
/// for a Lambertian base BRDF.
class PhaseFunction {
public:
    PhaseFunction(ImplicitField field, NormalModel normals, double albedo_scale = 1.0);

    /// Phase function matching the directional factor of an attenuation model.
    static PhaseFunction for_model(const AttenuationModel &model);

    /// Monte Carlo estimate: the point mass of D is integrated exactly and the
    /// continuous part with uniform directions. Throws GrazingDirection when
    /// Σ_D(x, ωo) = 0.
    Estimate phase(const Vec3 &x, const Vec3 &omega_o, const Vec3 &omega_i, std::size_t samples, Rng &rng) const;

    /// Exact value for Delta, Uniform and Mixture models; nullopt otherwise.
    std::optional<double> phase_closed_form(const Vec3 &x, const Vec3 &omega_o, const Vec3 &omega_i) const;

    /// Closed form when available, otherwise a Monte Carlo estimate.
    double evaluate(const Vec3 &x, const Vec3 &omega_o, const Vec3 &omega_i, std::size_t samples, Rng &rng) const;

    const NormalModel &normal_model() const { return m_normals; }

private:
    struct Local {
        std::optional<Vec3> normal;  // nullopt when the normal is undefined
        double alpha;
        double projected;
    };
    Local local(const Vec3 &x, const Vec3 &omega_o) const;

    ImplicitField m_field;
    NormalModel m_normals;
    double m_albedo_scale;
};

/// ∫_{S²} ⟨a, m⟩₊ ⟨b, m⟩₊ dm for unit a, b: (2/3)(sin φ + (π − φ) cos φ),
/// φ the angle between a and b.
double clamped_cosine_overlap(const Vec3 &a, const Vec3 &b);

/// ((α + 1)/2)|cosine|^α.
double vmf_projected_area(double alpha, double cosine);

}  // namespace stochsolid
