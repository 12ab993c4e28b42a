#include "stochsolid/attenuation.hpp"

#include "stochsolid/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace stochsolid {

namespace {

constexpr SymmetricDistribution kLogistic(SymmetricDistribution::Kind::Logistic);
constexpr SymmetricDistribution kLaplace(SymmetricDistribution::Kind::Laplace);

double cap(double sigma) { return std::min(sigma, AttenuationModel::kSigmaMax); }

double relu(double v) { return std::max(0.0, v); }

}  // namespace

double vacancy_density(const FieldSample &sample, SymmetricDistribution dist) {
    return cap(dist.hazard(sample.scale * sample.mean) * sample.grad_argument.norm());
}

double logistic_density(double scale, double mean, double grad_norm) {
    return cap(SymmetricDistribution::logistic_slope() * scale * kLogistic.cdf(-scale * mean) *
               grad_norm);
}

// ---------------------------------------------------------------------------

AttenuationModel AttenuationModel::ours(ImplicitField field, NormalModel normals) {
    AttenuationModel m;
    m.m_variant = Variant::Ours;
    m.m_field = std::move(field);
    m.m_normals = normals;
    return m;
}

AttenuationModel AttenuationModel::neus(ImplicitField field) {
    AttenuationModel m;
    m.m_variant = Variant::NeuS;
    m.m_field = std::move(field);
    m.m_normals = NormalModel(NormalModel::Kind::Delta);
    return m;
}

AttenuationModel AttenuationModel::volsdf(ImplicitField field) {
    AttenuationModel m;
    m.m_variant = Variant::VolSDF;
    m.m_field = std::move(field);
    m.m_normals = NormalModel(NormalModel::Kind::Uniform);
    return m;
}

AttenuationModel AttenuationModel::cosine_annealed(ImplicitField field, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("annealing anisotropy must lie in [0, 1]");
    AttenuationModel m;
    m.m_variant = Variant::CosineAnnealed;
    m.m_field = std::move(field);
    m.m_normals = NormalModel(NormalModel::Kind::Mixture, AnisotropyField(alpha));
    m.m_global = alpha;
    return m;
}

AttenuationModel AttenuationModel::point_cloud_ours(ImplicitField field) {
    AttenuationModel m;
    m.m_variant = Variant::PointCloudOurs;
    m.m_field = std::move(field);
    m.m_normals = NormalModel(NormalModel::Kind::Delta);
    return m;
}

AttenuationModel AttenuationModel::point_cloud_neus(ImplicitField field) {
    AttenuationModel m;
    m.m_variant = Variant::PointCloudNeuS;
    m.m_field = std::move(field);
    m.m_normals = NormalModel(NormalModel::Kind::Delta);
    return m;
}

AttenuationModel AttenuationModel::occupancy_as_sigma(ImplicitField field) {
    AttenuationModel m;
    m.m_variant = Variant::OccupancyAsSigma;
    m.m_field = std::move(field);
    m.m_normals = NormalModel(NormalModel::Kind::Uniform);
    return m;
}

AttenuationModel AttenuationModel::homogeneous(double sigma) {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ConfigError("homogeneous sigma must be finite and >= 0");
    AttenuationModel m;
    m.m_variant = Variant::Homogeneous;
    m.m_normals = NormalModel(NormalModel::Kind::Uniform);
    m.m_global = sigma;
    return m;
}

const ImplicitField &AttenuationModel::field() const {
    if (!m_field) throw ConfigError("attenuation model '" + variant_name(m_variant) + "' has no implicit field");
    return *m_field;
}

bool AttenuationModel::is_reciprocal() const {
    switch (m_variant) {
    case Variant::NeuS:
    case Variant::PointCloudNeuS: return false;
    case Variant::CosineAnnealed: return m_global == 0.0;
    default: return true;
    }
}

AttenuationModel::Local AttenuationModel::local(const Vec3 &x, const Vec3 &omega) const {
    Local l{0.0, std::numeric_limits<double>::quiet_NaN(), 0.0};
    if (m_variant == Variant::Homogeneous) {
        l.density = m_global;
        return l;
    }
    const FieldSample s = FieldSample::at(*m_field, x);
    const SymmetricDistribution dist = m_field->distribution();
    l.mean = s.mean;
    const double grad_norm = s.grad_vacancy.norm();
    if (grad_norm > ImplicitField::kGradientFloor) l.cosine = omega.dot(s.grad_vacancy) / grad_norm;

    switch (m_variant) {
    case Variant::Ours:
    case Variant::PointCloudOurs:
    case Variant::PointCloudNeuS:
        l.density = vacancy_density(s, dist);
        break;
    case Variant::NeuS:
    case Variant::CosineAnnealed:
        l.density = cap(kLogistic.hazard(s.scale * s.mean) * s.grad_argument.norm());
        break;
    case Variant::VolSDF:
        l.density = cap(s.scale * kLaplace.cdf(-s.scale * s.mean) * s.grad_mean.norm());
        break;
    case Variant::OccupancyAsSigma:
        l.density = cap(s.scale * (1.0 - s.vacancy));
        break;
    case Variant::Homogeneous:
        break;
    }
    return l;
}

double AttenuationModel::factor(const Local &l) const {
    const bool degenerate = std::isnan(l.cosine);
    switch (m_variant) {
    case Variant::Ours:
        if (degenerate) return 0.5;
        return m_normals.projected_area(m_normals.alpha(l.mean), l.cosine);
    case Variant::PointCloudOurs:
        return degenerate ? 0.5 : std::abs(l.cosine);
    case Variant::NeuS:
    case Variant::PointCloudNeuS:
        return degenerate ? 0.5 : relu(-l.cosine);
    case Variant::CosineAnnealed:
        return degenerate ? 0.5 : m_global * relu(-l.cosine) + 0.5 * (1.0 - m_global);
    case Variant::VolSDF:
    case Variant::OccupancyAsSigma:
    case Variant::Homogeneous:
        return 1.0;
    }
    return 1.0;
}

double AttenuationModel::sigma(const Vec3 &x, const Vec3 &omega) const {
    const Local l = local(x, omega);
    if (l.density == 0.0) return 0.0;
    return l.density * factor(l);
}

double AttenuationModel::density(const Vec3 &x) const { return local(x, Vec3::UnitZ()).density; }

double AttenuationModel::directional_factor(const Vec3 &x, const Vec3 &omega) const {
    return factor(local(x, omega));
}

AttenuationModel AttenuationModel::with_scene(SceneFieldPtr mean) const {
    AttenuationModel m = *this;
    if (m.m_field) m.m_field = m.m_field->with_scene(std::move(mean));
    return m;
}

AttenuationModel::Variant AttenuationModel::parse_variant(std::string_view name) {
    if (name == "ours") return Variant::Ours;
    if (name == "neus") return Variant::NeuS;
    if (name == "volsdf") return Variant::VolSDF;
    if (name == "cosine_annealed") return Variant::CosineAnnealed;
    if (name == "point_cloud_ours") return Variant::PointCloudOurs;
    if (name == "point_cloud_neus") return Variant::PointCloudNeuS;
    if (name == "occupancy_as_sigma") return Variant::OccupancyAsSigma;
    if (name == "homogeneous") return Variant::Homogeneous;
    throw ConfigError("unknown attenuation variant '" + std::string(name) + "'");
}

std::string AttenuationModel::variant_name(Variant variant) {
    switch (variant) {
    case Variant::Ours: return "ours";
    case Variant::NeuS: return "neus";
    case Variant::VolSDF: return "volsdf";
    case Variant::CosineAnnealed: return "cosine_annealed";
    case Variant::PointCloudOurs: return "point_cloud_ours";
    case Variant::PointCloudNeuS: return "point_cloud_neus";
    case Variant::OccupancyAsSigma: return "occupancy_as_sigma";
    case Variant::Homogeneous: return "homogeneous";
    }
    return "ours";
}

double reciprocity_gap(const AttenuationModel &model,
                       const std::vector<std::pair<Vec3, Vec3>> &probes) {
    if (probes.empty()) throw ConfigError("reciprocity gap needs at least one probe");
    double gap = 0.0;
    for (const auto &[x, omega] : probes)
        gap = std::max(gap, std::abs(model.sigma(x, omega) - model.sigma(x, Vec3(-omega))));
    return gap;
}

}  // namespace stochsolid
