#pragma once

#include "stochsolid/math.hpp"

#include <string>
#include <string_view>

namespace stochsolid {

/// Anisotropy α(x) ∈ [0,1] of the distribution of normals.
///
/// Either a constant, or a logistic bump in |f̄(x)| that equals `surface` on
/// the level set f̄ = 0 and decays to `far` over a band of the given width:
/// α = far + (surface − far) · 2 / (1 + exp(|f̄| / width)).
class AnisotropyField {
public:
    AnisotropyField() = default;
    explicit AnisotropyField(double constant);
    static AnisotropyField surface_adaptive(double width, double surface = 1.0, double far = 0.0);

    double value(double mean_implicit) const;
    bool is_constant() const { return m_width == 0.0; }
    double width() const { return m_width; }
    double surface() const { return m_surface; }
    double far() const { return m_far; }

private:
    double m_surface = 1.0;
    double m_far = 1.0;
    double m_width = 0.0;
};

/// Distribution of normals D_x around a mean normal n, parameterized by α.
///
/// Delta is a point mass on ±n, Uniform the isotropic law, Mixture the convex
/// combination α·Delta + (1 − α)·Uniform, SGGX the surface-like SGGX law and
/// VMF a von Mises-Fisher lobe whose projected area is approximated in closed
/// form.
class NormalModel {
public:
    enum class Kind { Delta, Uniform, Mixture, SGGX, VMF };

    NormalModel() = default;
    NormalModel(Kind kind, AnisotropyField alpha = AnisotropyField(1.0))
        : m_kind(kind), m_alpha(alpha) {}

    Kind kind() const { return m_kind; }
    const AnisotropyField &anisotropy() const { return m_alpha; }
    double alpha(double mean_implicit) const { return m_alpha.value(mean_implicit); }

    /// Projected area for the cosine between ω and n.
    double projected_area(double alpha, double cosine) const;

    /// Weight of the point mass at ±n (1 for Delta, α for Mixture, 0 otherwise).
    double atom_weight(double alpha) const;

    /// Density of the continuous part of D with respect to solid angle, as a
    /// function of the cosine between m and n.
    double continuous_density(double alpha, double cosine) const;

    static Kind parse_kind(std::string_view name);
    static std::string kind_name(Kind kind);

private:
    Kind m_kind = Kind::Mixture;
    AnisotropyField m_alpha;
};

/// Closed-form projected areas, usable without a NormalModel instance.
namespace projected {

double delta(double cosine);
double uniform();
double mixture(double alpha, double cosine);
double sggx(double alpha, double cosine);
double vmf(double alpha, double cosine);

/// C(α) = 1 + (1/α − α) asinh(α / √(1 − α²)); C(0) = 2 and C(1) = 1.
double sggx_projected_normalization(double alpha);

/// Normalizer of the surface-like SGGX density 1 / (N (1 − α² μ²)²) so that it
/// integrates to one over the sphere: N(α) = 2π C(α) / (1 − α²).
double sggx_density_normalization(double alpha);

}  // namespace projected

}  // namespace stochsolid
