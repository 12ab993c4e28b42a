#include "stochsolid/implicit_field.hpp"

#include "stochsolid/errors.hpp"

#include <cmath>

namespace stochsolid {

ScaleField::ScaleField(double constant) : m_outer(constant), m_inner(constant) {
    if (!(constant > 0.0) || !std::isfinite(constant)) throw ConfigError("scale must be positive and finite");
}

ScaleField ScaleField::radial(Vec3 center, double radius, double inner, double outer) {
    if (!(inner > 0.0) || !(outer > 0.0)) throw ConfigError("radial scale values must be positive");
    if (!(radius > 0.0)) throw ConfigError("radial scale radius must be positive");
    ScaleField s;
    s.m_kind = Kind::Radial;
    s.m_center = std::move(center);
    s.m_radius = radius;
    s.m_inner = inner;
    s.m_outer = outer;
    return s;
}

double ScaleField::value(const Vec3 &x) const {
    if (m_kind == Kind::Constant) return m_outer;
    const double bump = std::exp(-0.5 * (x - m_center).squaredNorm() / (m_radius * m_radius));
    return m_outer + (m_inner - m_outer) * bump;
}

Vec3 ScaleField::gradient(const Vec3 &x) const {
    if (m_kind == Kind::Constant) return Vec3::Zero();
    const Vec3 d = x - m_center;
    const double r2 = m_radius * m_radius;
    const double bump = std::exp(-0.5 * d.squaredNorm() / r2);
    return -(m_inner - m_outer) * bump / r2 * d;
}

// ---------------------------------------------------------------------------

ImplicitField::ImplicitField(SceneFieldPtr mean, ScaleField scale, SymmetricDistribution dist)
    : m_mean(std::move(mean)), m_scale(std::move(scale)), m_dist(dist) {
    if (!m_mean) throw ConfigError("implicit field needs a mean function");
}

double ImplicitField::vacancy(const Vec3 &x) const { return m_dist.cdf(scale(x) * mean(x)); }

Vec3 ImplicitField::grad_vacancy(const Vec3 &x) const { return FieldSample::at(*this, x).grad_vacancy; }

Vec3 ImplicitField::normal(const Vec3 &x) const {
    const Vec3 g = grad_vacancy(x);
    const double len = g.norm();
    if (!(len > kGradientFloor)) throw DegenerateGradient();
    return g / len;
}

ImplicitField ImplicitField::with_scene(SceneFieldPtr mean) const {
    return ImplicitField(std::move(mean), m_scale, m_dist);
}

FieldSample FieldSample::at(const ImplicitField &field, const Vec3 &x) {
    FieldSample s;
    s.mean = field.mean(x);
    s.grad_mean = field.grad_mean(x);
    s.scale = field.scale(x);
    s.grad_scale = field.grad_scale(x);
    const double u = s.scale * s.mean;
    const SymmetricDistribution dist = field.distribution();
    s.vacancy = dist.cdf(u);
    s.grad_argument = s.scale * s.grad_mean + s.mean * s.grad_scale;
    s.grad_vacancy = dist.pdf(u) * s.grad_argument;
    return s;
}

}  // namespace stochsolid
