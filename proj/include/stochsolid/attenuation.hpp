#pragma once

#include "stochsolid/implicit_field.hpp"
#include "stochsolid/math.hpp"
#include "stochsolid/normal_distribution.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace stochsolid {

/// Attenuation coefficient σ(x, ω) of a volumetric representation of a solid.
///
/// Every variant is a density times a directional factor:
///  - Ours:            ρ(x) · Σ_D(x, ω) for any normal model
///  - NeuS:            logistic density · max(0, −ω·n)
///  - VolSDF:          s Ψ_Laplace(−s f̄) ‖∇f̄‖, isotropic
///  - CosineAnnealed:  logistic density · (α max(0, −ω·n) + (1 − α)/2), global α
///  - PointCloudOurs:  ‖∇V‖/V · |ω·n|
///  - PointCloudNeuS:  ‖∇V‖/V · max(0, −ω·n)
///  - OccupancyAsSigma: s(x) · O(x), the occupancy used directly as extinction
///  - Homogeneous:     a constant σ, independent of any field
///
/// Here ρ(x) = ‖∇V‖/V, evaluated as ψ(s f̄) ‖s∇f̄ + f̄∇s‖ / Ψ(s f̄) and capped
/// at kSigmaMax. When ‖∇V‖ is below the gradient floor the normal is
/// undefined and directional factors fall back to the isotropic value 1/2.
class AttenuationModel {
public:
    enum class Variant {
        Ours,
        NeuS,
        VolSDF,
        CosineAnnealed,
        PointCloudOurs,
        PointCloudNeuS,
        OccupancyAsSigma,
        Homogeneous,
    };

    static constexpr double kSigmaMax = 1e6;
    static constexpr double kVacancyFloor = 1e-12;

    static AttenuationModel ours(ImplicitField field, NormalModel normals);
    static AttenuationModel neus(ImplicitField field);
    static AttenuationModel volsdf(ImplicitField field);
    static AttenuationModel cosine_annealed(ImplicitField field, double alpha);
    static AttenuationModel point_cloud_ours(ImplicitField field);
    static AttenuationModel point_cloud_neus(ImplicitField field);
    static AttenuationModel occupancy_as_sigma(ImplicitField field);
    static AttenuationModel homogeneous(double sigma);

    Variant variant() const { return m_variant; }
    bool has_field() const { return m_field.has_value(); }
    const ImplicitField &field() const;
    const NormalModel &normal_model() const { return m_normals; }

    /// True for the variants satisfying σ(x, ω) = σ(x, −ω) by construction.
    bool is_reciprocal() const;

    double sigma(const Vec3 &x, const Vec3 &omega) const;

    /// Isotropic factor of σ.
    double density(const Vec3 &x) const;

    /// Directional factor of σ; for Ours this is the projected area Σ_D(x, ω).
    double directional_factor(const Vec3 &x, const Vec3 &omega) const;

    /// Same model over a different mean function (e.g. a baked grid).
    AttenuationModel with_scene(SceneFieldPtr mean) const;

    static Variant parse_variant(std::string_view name);
    static std::string variant_name(Variant variant);

private:
    struct Local {
        double density;
        double cosine;  // ω·n, or NaN when the normal is undefined
        double mean;
    };
    Local local(const Vec3 &x, const Vec3 &omega) const;
    double factor(const Local &l) const;

    Variant m_variant = Variant::Ours;
    std::optional<ImplicitField> m_field;
    NormalModel m_normals;
    double m_global = 0.0;  // annealing α, or σ for Homogeneous
};

/// ρ(x) = ‖∇V‖ / V from precomputed field quantities, capped at kSigmaMax.
double vacancy_density(const FieldSample &sample, SymmetricDistribution dist);

/// Unit-variance logistic density used by the NeuS-style coefficients:
/// s ψ(s f̄) ‖∇f̄‖ / Ψ(s f̄), which equals k s Ψ(−s f̄) ‖∇f̄‖ with the slope k.
double logistic_density(double scale, double mean, double grad_norm);

/// max over probes of |σ(x, ω) − σ(x, −ω)|.
double reciprocity_gap(const AttenuationModel &model,
                       const std::vector<std::pair<Vec3, Vec3>> &probes);

}  // namespace stochsolid
