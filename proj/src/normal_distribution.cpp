#include "stochsolid/normal_distribution.hpp"

#include "stochsolid/errors.hpp"

#include <algorithm>
#include <cmath>

namespace stochsolid {

namespace {

constexpr double kAlphaMin = 1e-6;
constexpr double kAlphaMax = 1.0 - 1e-6;

double clamp_alpha(double alpha) { return std::clamp(alpha, kAlphaMin, kAlphaMax); }

}  // namespace

AnisotropyField::AnisotropyField(double constant) : m_surface(constant), m_far(constant) {
    if (!(constant >= 0.0 && constant <= 1.0)) throw ConfigError("anisotropy must lie in [0, 1]");
}

AnisotropyField AnisotropyField::surface_adaptive(double width, double surface, double far) {
    if (!(width > 0.0)) throw ConfigError("surface-adaptive anisotropy width must be positive");
    if (!(surface >= 0.0 && surface <= 1.0) || !(far >= 0.0 && far <= 1.0))
        throw ConfigError("anisotropy must lie in [0, 1]");
    AnisotropyField a;
    a.m_width = width;
    a.m_surface = surface;
    a.m_far = far;
    return a;
}

double AnisotropyField::value(double mean_implicit) const {
    if (m_width == 0.0) return m_surface;
    const double bump = 2.0 / (1.0 + std::exp(std::abs(mean_implicit) / m_width));
    return m_far + (m_surface - m_far) * bump;
}

// ---------------------------------------------------------------------------

namespace projected {

double delta(double cosine) { return std::abs(cosine); }

double uniform() { return 0.5; }

double mixture(double alpha, double cosine) {
    return alpha * std::abs(cosine) + (1.0 - alpha) * 0.5;
}

double sggx_projected_normalization(double alpha) {
    if (alpha <= 0.0) return 2.0;
    if (alpha >= 1.0) return 1.0;
    const double a = clamp_alpha(alpha);
    return 1.0 + (1.0 / a - a) * std::asinh(a / std::sqrt(1.0 - a * a));
}

double sggx_density_normalization(double alpha) {
    if (alpha <= 0.0) return 4.0 * kPi;
    const double a = clamp_alpha(alpha);
    return 2.0 * kPi * sggx_projected_normalization(a) / (1.0 - a * a);
}

double sggx(double alpha, double cosine) {
    if (alpha <= 0.0) return 0.5;
    if (alpha >= 1.0) return std::abs(cosine);
    const double a = clamp_alpha(alpha);
    return std::sqrt(a * a * cosine * cosine + (1.0 - a * a)) / sggx_projected_normalization(a);
}

double vmf(double alpha, double cosine) {
    return 0.5 * (alpha + 1.0) * std::pow(std::abs(cosine), alpha);
}

}  // namespace projected

// ---------------------------------------------------------------------------

double NormalModel::projected_area(double alpha, double cosine) const {
    switch (m_kind) {
    case Kind::Delta: return projected::delta(cosine);
    case Kind::Uniform: return projected::uniform();
    case Kind::Mixture: return projected::mixture(alpha, cosine);
    case Kind::SGGX: return projected::sggx(alpha, cosine);
    case Kind::VMF: return projected::vmf(alpha, cosine);
    }
    return 0.5;
}

double NormalModel::atom_weight(double alpha) const {
    switch (m_kind) {
    case Kind::Delta: return 1.0;
    case Kind::Uniform: return 0.0;
    case Kind::Mixture: return alpha;
    case Kind::SGGX:
    case Kind::VMF: return alpha >= 1.0 ? 1.0 : 0.0;
    }
    return 0.0;
}

double NormalModel::continuous_density(double alpha, double cosine) const {
    constexpr double kUniform = 1.0 / (4.0 * kPi);
    switch (m_kind) {
    case Kind::Delta: return 0.0;
    case Kind::Uniform: return kUniform;
    case Kind::Mixture: return (1.0 - alpha) * kUniform;
    case Kind::SGGX: {
        if (alpha <= 0.0) return kUniform;
        if (alpha >= 1.0) return 0.0;
        const double a = clamp_alpha(alpha);
        const double q = 1.0 - a * a * cosine * cosine;
        return 1.0 / (projected::sggx_density_normalization(a) * q * q);
    }
    case Kind::VMF: {
        if (alpha <= 0.0) return kUniform;
        if (alpha >= 1.0) return 0.0;
        const double kappa = alpha / (1.0 - alpha);
        return kappa * std::exp(kappa * (cosine - 1.0)) / (2.0 * kPi * -std::expm1(-2.0 * kappa));
    }
    }
    return 0.0;
}

NormalModel::Kind NormalModel::parse_kind(std::string_view name) {
    if (name == "delta") return Kind::Delta;
    if (name == "uniform") return Kind::Uniform;
    if (name == "mixture") return Kind::Mixture;
    if (name == "sggx") return Kind::SGGX;
    if (name == "vmf") return Kind::VMF;
    throw ConfigError("unknown normal model '" + std::string(name) +
                      "' (expected delta, uniform, mixture, sggx or vmf)");
}

std::string NormalModel::kind_name(Kind kind) {
    switch (kind) {
    case Kind::Delta: return "delta";
    case Kind::Uniform: return "uniform";
    case Kind::Mixture: return "mixture";
    case Kind::SGGX: return "sggx";
    case Kind::VMF: return "vmf";
    }
    return "mixture";
}

}  // namespace stochsolid
