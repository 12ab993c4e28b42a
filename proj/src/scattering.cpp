#include "stochsolid/scattering.hpp"

#include "stochsolid/errors.hpp"

#include <algorithm>
#include <cmath>

namespace stochsolid {

double lambertian_flake(const Vec3 &m, const Vec3 &omega_o, const Vec3 &omega_i, double albedo_scale) {
    const double ci = omega_i.dot(m), co = omega_o.dot(m);
    if (!(ci * co < 0.0)) return 0.0;
    return albedo_scale * kInvPi * std::abs(ci);
}

double clamped_cosine_overlap(const Vec3 &a, const Vec3 &b) {
    const double phi = std::acos(std::clamp(a.dot(b), -1.0, 1.0));
    return (2.0 / 3.0) * (std::sin(phi) + (kPi - phi) * std::cos(phi));
}

double vmf_projected_area(double alpha, double cosine) { return projected::vmf(alpha, cosine); }

// ---------------------------------------------------------------------------

PhaseFunction::PhaseFunction(ImplicitField field, NormalModel normals, double albedo_scale)
    : m_field(std::move(field)), m_normals(normals), m_albedo_scale(albedo_scale) {
    if (!(albedo_scale >= 0.0)) throw ConfigError("albedo scale must be nonnegative");
}

PhaseFunction PhaseFunction::for_model(const AttenuationModel &model) {
    return PhaseFunction(model.field(), model.normal_model());
}

PhaseFunction::Local PhaseFunction::local(const Vec3 &x, const Vec3 &omega_o) const {
    Local l{std::nullopt, 0.0, 0.5};
    const FieldSample s = FieldSample::at(m_field, x);
    const double norm = s.grad_vacancy.norm();
    if (!(norm > ImplicitField::kGradientFloor)) return l;
    l.normal = s.grad_vacancy / norm;
    l.alpha = m_normals.alpha(s.mean);
    l.projected = m_normals.projected_area(l.alpha, omega_o.dot(*l.normal));
    return l;
}

Estimate PhaseFunction::phase(const Vec3 &x, const Vec3 &omega_o, const Vec3 &omega_i, std::size_t samples,
                              Rng &rng) const {
    const Local l = local(x, omega_o);
    if (!(l.projected > 0.0)) throw GrazingDirection();
    // An undefined normal falls back to the isotropic distribution.
    const NormalModel normals = l.normal ? m_normals : NormalModel(NormalModel::Kind::Uniform);
    const Vec3 n = l.normal.value_or(Vec3::UnitZ());
    Estimate e = spherical_integral(
        [&](const Vec3 &m) {
            return lambertian_flake(m, omega_o, omega_i, m_albedo_scale) * std::abs(omega_o.dot(m)) *
                   normals.continuous_density(l.alpha, m.dot(n));
        },
        samples, rng);
    e.mean += normals.atom_weight(l.alpha) * lambertian_flake(n, omega_o, omega_i, m_albedo_scale) *
              std::abs(omega_o.dot(n));
    e.mean /= l.projected;
    e.standard_error /= l.projected;
    return e;
}

std::optional<double> PhaseFunction::phase_closed_form(const Vec3 &x, const Vec3 &omega_o,
                                                       const Vec3 &omega_i) const {
    const Local l = local(x, omega_o);
    double atom = 0.0;
    if (l.normal) {
        switch (m_normals.kind()) {
        case NormalModel::Kind::Delta:
        case NormalModel::Kind::Uniform:
        case NormalModel::Kind::Mixture: atom = m_normals.atom_weight(l.alpha); break;
        default: return std::nullopt;
        }
    }
    if (!(l.projected > 0.0)) throw GrazingDirection();
    const Vec3 n = l.normal.value_or(Vec3::UnitZ());
    const double flake = atom * lambertian_flake(n, omega_o, omega_i, m_albedo_scale) * std::abs(omega_o.dot(n));
    // Uniform part: (1/4π)(scale/π) ∫ |ωi·m||ωo·m| [opposite sides] dm, and the
    // two-sided integral is twice the clamped-cosine overlap of ωi and −ωo.
    const double spread = (1.0 - atom) * m_albedo_scale * 2.0 * clamped_cosine_overlap(omega_i, -omega_o) /
                          (4.0 * kPi * kPi);
    return (flake + spread) / l.projected;
}

double PhaseFunction::evaluate(const Vec3 &x, const Vec3 &omega_o, const Vec3 &omega_i, std::size_t samples,
                               Rng &rng) const {
    if (const auto exact = phase_closed_form(x, omega_o, omega_i)) return *exact;
    return phase(x, omega_o, omega_i, samples, rng).mean;
}

}  // namespace stochsolid
