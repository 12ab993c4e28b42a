#include "stochsolid/attenuation.hpp"
#include "stochsolid/errors.hpp"
#include "stochsolid/normal_distribution.hpp"
#include "stochsolid/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <numbers>

using namespace stochsolid;
using K = NormalModel::Kind;

namespace {

const double kPeakRatio = 2.0 / std::sqrt(2.0 * std::numbers::pi);  // ψ(0)/Ψ(0), Gaussian

ImplicitField unit_sphere(double scale = 1.0, SymmetricDistribution dist = SymmetricDistribution()) {
    return ImplicitField(std::make_shared<SphereField>(Vec3::Zero(), 1.0), ScaleField(scale), dist);
}

/// Unit direction whose cosine with `n` is `c`.
Vec3 with_cosine(const Vec3 &n, double c) {
    const Frame frame(n);
    return c * n + std::sqrt(1.0 - c * c) * frame.s;
}

Vec3 random_direction(Rng &rng) {
    const double u = rng.uniform();
    return uniform_sphere(u, rng.uniform());
}

}  // namespace

TEST(ProjectedArea, ClosedFormExamples) {
    EXPECT_DOUBLE_EQ(NormalModel(K::Uniform).projected_area(0.3, 0.9), 0.5);
    EXPECT_DOUBLE_EQ(NormalModel(K::Mixture).projected_area(1.0, 0.3), 0.3);
    EXPECT_DOUBLE_EQ(NormalModel(K::Mixture).projected_area(0.0, 0.3), 0.5);
    EXPECT_DOUBLE_EQ(NormalModel(K::Delta).projected_area(0.0, -0.4), 0.4);
    EXPECT_NEAR(projected::sggx(1e-6, 0.37), 0.5, 1e-9);
    EXPECT_NEAR(projected::sggx(1.0, 0.7), 0.7, 1e-12);
    EXPECT_NEAR(projected::sggx(0.0, -0.9), 0.5, 1e-9);
    EXPECT_DOUBLE_EQ(projected::vmf(0.0, 0.8), 0.5);
    EXPECT_DOUBLE_EQ(projected::vmf(1.0, 0.3), 0.3);
    EXPECT_DOUBLE_EQ(projected::vmf(0.5, 0.25), 0.375);
}

TEST(ProjectedArea, SggxNormalizationLimits) {
    EXPECT_NEAR(projected::sggx_projected_normalization(1e-9), 2.0, 1e-8);
    EXPECT_DOUBLE_EQ(projected::sggx_projected_normalization(1.0), 1.0);
    EXPECT_NEAR(projected::sggx_projected_normalization(1.0 - 1e-12), 1.0, 1e-4);
    EXPECT_NEAR(projected::sggx_density_normalization(0.0), 4.0 * std::numbers::pi, 1e-6);
}

TEST(ProjectedArea, SggxDensityIntegratesToOne) {
    // Composite midpoint rule in μ on a fine grid; the density depends only on μ = m·n.
    const NormalModel sggx(K::SGGX);
    for (const double alpha : {0.0, 0.3, 0.6, 0.9, 0.99}) {
        const int n = 400000;
        double sum = 0.0;
        for (int i = 0; i < n; ++i) sum += sggx.continuous_density(alpha, -1.0 + (i + 0.5) * 2.0 / n);
        EXPECT_NEAR(2.0 * std::numbers::pi * sum * 2.0 / n, 1.0, 1e-6) << alpha;
    }
}

TEST(ProjectedArea, BoundedAndEven) {
    Rng rng(5);
    for (const K kind : {K::Delta, K::Uniform, K::Mixture, K::SGGX, K::VMF}) {
        const NormalModel model(kind);
        for (int i = 0; i < 200; ++i) {
            const double alpha = rng.uniform(), c = 2.0 * rng.uniform() - 1.0;
            const double value = model.projected_area(alpha, c);
            EXPECT_GE(value, 0.0);
            EXPECT_LE(value, 1.0 + 1e-12);
            EXPECT_DOUBLE_EQ(value, model.projected_area(alpha, -c));
        }
    }
}

TEST(ProjectedArea, VmfMonotoneInCosine) {
    for (const double alpha : {0.1, 0.5, 0.9}) {
        double previous = -1.0;
        for (double c = 0.0; c <= 1.0; c += 0.01) {
            const double v = projected::vmf(alpha, c);
            EXPECT_GE(v, previous);
            previous = v;
        }
    }
}

TEST(NormalModel, AtomWeights) {
    EXPECT_DOUBLE_EQ(NormalModel(K::Delta).atom_weight(0.2), 1.0);
    EXPECT_DOUBLE_EQ(NormalModel(K::Mixture).atom_weight(0.2), 0.2);
    EXPECT_DOUBLE_EQ(NormalModel(K::Uniform).atom_weight(0.2), 0.0);
    EXPECT_DOUBLE_EQ(NormalModel(K::SGGX).atom_weight(0.5), 0.0);
}

TEST(NormalModel, ParseKinds) {
    for (const K kind : {K::Delta, K::Uniform, K::Mixture, K::SGGX, K::VMF})
        EXPECT_EQ(NormalModel::parse_kind(NormalModel::kind_name(kind)), kind);
    EXPECT_THROW(NormalModel::parse_kind("ggx"), ConfigError);
}

TEST(Anisotropy, SurfaceAdaptiveProfile) {
    const AnisotropyField a = AnisotropyField::surface_adaptive(0.1, 1.0, 0.2);
    EXPECT_DOUBLE_EQ(a.value(0.0), 1.0);
    EXPECT_NEAR(a.value(10.0), 0.2, 1e-12);
    EXPECT_DOUBLE_EQ(a.value(0.3), a.value(-0.3));
    EXPECT_GT(a.value(0.05), a.value(0.2));
    EXPECT_DOUBLE_EQ(AnisotropyField(0.4).value(3.0), 0.4);
}

TEST(Density, GaussianSurfaceValue) {
    const AttenuationModel model = AttenuationModel::ours(unit_sphere(), NormalModel(K::Mixture, AnisotropyField(1.0)));
    EXPECT_NEAR(model.density(Vec3(1, 0, 0)), kPeakRatio, 1e-12);
    EXPECT_NEAR(model.density(Vec3(1, 0, 0)), 0.79788456080286541, 1e-12);
}

TEST(Density, VanishesFarOutside) {
    const AttenuationModel model = AttenuationModel::ours(unit_sphere(), NormalModel(K::Uniform));
    EXPECT_LT(model.density(Vec3(40, 0, 0)), 1e-300);
}

TEST(Density, FiniteAndCappedDeepInside) {
    const AttenuationModel model = AttenuationModel::ours(unit_sphere(50.0), NormalModel(K::Uniform));
    const double rho = model.density(Vec3(0.01, 0, 0));
    EXPECT_TRUE(std::isfinite(rho));
    EXPECT_LE(rho, AttenuationModel::kSigmaMax);
    EXPECT_GT(rho, 1e3);
}

TEST(Density, LogisticMatchesSimplifiedForm) {
    const SymmetricDistribution logistic(SymmetricDistribution::Kind::Logistic);
    const AttenuationModel model = AttenuationModel::ours(unit_sphere(3.0, logistic), NormalModel(K::Uniform));
    const double expected = SymmetricDistribution::logistic_slope() * 3.0 * logistic.cdf(-0.6);
    EXPECT_NEAR(model.density(Vec3(1.2, 0, 0)), expected, 1e-12);
    EXPECT_NEAR(logistic_density(3.0, 0.2, 1.0), expected, 1e-12);
}

TEST(Density, MatchesFiniteDifferenceOfVacancy) {
    const ImplicitField field(std::make_shared<SphereField>(Vec3::Zero(), 1.0),
                              ScaleField::radial(Vec3(0.3, 0.2, 0), 0.5, 9.0, 3.0));
    const AttenuationModel model = AttenuationModel::ours(field, NormalModel(K::Uniform));
    Rng rng(21);
    const double h = 1e-6;
    for (int i = 0; i < 200; ++i) {
        const Vec3 x = random_direction(rng) * (0.7 + 0.6 * rng.uniform());
        Vec3 fd;
        for (int k = 0; k < 3; ++k) {
            Vec3 e = Vec3::Zero();
            e[k] = h;
            fd[k] = (field.vacancy(x + e) - field.vacancy(x - e)) / (2.0 * h);
        }
        const double expected = fd.norm() / field.vacancy(x);
        EXPECT_NEAR(model.density(x), expected, 1e-4 * expected) << x.transpose();
    }
}

TEST(Sigma, OursMixtureHeadOn) {
    const AttenuationModel model = AttenuationModel::ours(unit_sphere(), NormalModel(K::Mixture, AnisotropyField(1.0)));
    EXPECT_NEAR(model.sigma(Vec3(1, 0, 0), Vec3(1, 0, 0)), kPeakRatio, 1e-12);
    EXPECT_NEAR(model.sigma(Vec3(1, 0, 0), Vec3(-1, 0, 0)), kPeakRatio, 1e-12);
}

TEST(Sigma, NeusIsZeroOnExit) {
    const AttenuationModel model = AttenuationModel::neus(unit_sphere(2.0));
    const Vec3 x(1.0, 0.0, 0.0), n(1.0, 0.0, 0.0);
    EXPECT_EQ(model.sigma(x, with_cosine(n, 0.5)), 0.0);
    const double entering = model.sigma(x, with_cosine(n, -0.5));
    EXPECT_NEAR(entering, logistic_density(2.0, 0.0, 1.0) * 0.5, 1e-12);
    EXPECT_NEAR(reciprocity_gap(model, {{x, with_cosine(n, 0.5)}}), entering, 1e-15);
}

TEST(Sigma, VolSdfIsIsotropicLaplaceForm) {
    const AttenuationModel model = AttenuationModel::volsdf(unit_sphere(4.0));
    const SymmetricDistribution laplace(SymmetricDistribution::Kind::Laplace);
    const Vec3 x(1.1, 0.0, 0.0);
    const double expected = 4.0 * laplace.cdf(-4.0 * 0.1);
    EXPECT_NEAR(model.sigma(x, Vec3::UnitX()), expected, 1e-12);
    EXPECT_NEAR(model.sigma(x, Vec3::UnitY()), expected, 1e-12);
}

TEST(Sigma, CosineAnnealedBlend) {
    const AttenuationModel model = AttenuationModel::cosine_annealed(unit_sphere(2.0), 0.25);
    const Vec3 x(1.0, 0.0, 0.0), n(1.0, 0.0, 0.0);
    const double rho = logistic_density(2.0, 0.0, 1.0);
    EXPECT_NEAR(model.sigma(x, with_cosine(n, -0.8)), rho * (0.25 * 0.8 + 0.375), 1e-12);
    EXPECT_NEAR(model.sigma(x, with_cosine(n, 0.8)), rho * 0.375, 1e-12);
    EXPECT_FALSE(model.is_reciprocal());
}

TEST(Sigma, PointCloudVariants) {
    const ImplicitField field = unit_sphere(5.0);
    const Vec3 x(1.05, 0.0, 0.0), n(1.0, 0.0, 0.0);
    const double rho = field.grad_vacancy(x).norm() / field.vacancy(x);
    EXPECT_NEAR(AttenuationModel::point_cloud_ours(field).sigma(x, with_cosine(n, 0.6)), rho * 0.6, 1e-12 * rho);
    EXPECT_NEAR(AttenuationModel::point_cloud_neus(field).sigma(x, with_cosine(n, -0.6)), rho * 0.6, 1e-12 * rho);
    EXPECT_EQ(AttenuationModel::point_cloud_neus(field).sigma(x, with_cosine(n, 0.6)), 0.0);
}

TEST(Sigma, OccupancyUsedAsExtinction) {
    const ImplicitField field = unit_sphere(3.0);
    const AttenuationModel model = AttenuationModel::occupancy_as_sigma(field);
    const Vec3 x(0.9, 0.1, 0.0);
    EXPECT_NEAR(model.sigma(x, Vec3::UnitZ()), 3.0 * field.occupancy(x), 1e-15);
}

TEST(Sigma, DegenerateNormalFallsBackToIsotropic) {
    const auto twin = std::make_shared<SmoothUnionField>(
        std::vector<SceneFieldPtr>{std::make_shared<SphereField>(Vec3(-1, 0, 0), 0.5),
                                   std::make_shared<SphereField>(Vec3(1, 0, 0), 0.5)},
        0.3);
    const AttenuationModel model = AttenuationModel::ours(ImplicitField(twin), NormalModel(K::Delta));
    EXPECT_DOUBLE_EQ(model.directional_factor(Vec3::Zero(), Vec3::UnitX()), 0.5);
    EXPECT_TRUE(std::isfinite(model.sigma(Vec3::Zero(), Vec3::UnitY())));
}

TEST(Sigma, HomogeneousIsConstant) {
    const AttenuationModel model = AttenuationModel::homogeneous(2.0);
    EXPECT_DOUBLE_EQ(model.sigma(Vec3(3, 1, 2), Vec3::UnitY()), 2.0);
    EXPECT_FALSE(model.has_field());
    EXPECT_THROW(model.field(), ConfigError);
}

TEST(Reciprocity, ReciprocalVariantsHaveZeroGap) {
    const ImplicitField field = unit_sphere(4.0);
    Rng rng(31);
    std::vector<std::pair<Vec3, Vec3>> probes;
    for (int i = 0; i < 1000; ++i) {
        const Vec3 x = random_direction(rng) * (0.8 + 0.4 * rng.uniform());
        probes.emplace_back(x, random_direction(rng));
    }
    for (const K kind : {K::Delta, K::Uniform, K::Mixture, K::SGGX, K::VMF}) {
        const AttenuationModel model = AttenuationModel::ours(field, NormalModel(kind, AnisotropyField(0.6)));
        EXPECT_TRUE(model.is_reciprocal());
        EXPECT_LE(reciprocity_gap(model, probes), 1e-12) << NormalModel::kind_name(kind);
    }
    EXPECT_LE(reciprocity_gap(AttenuationModel::volsdf(field), probes), 1e-12);
    EXPECT_LE(reciprocity_gap(AttenuationModel::point_cloud_ours(field), probes), 1e-12);
    EXPECT_GT(reciprocity_gap(AttenuationModel::neus(field), probes), 0.01);
    EXPECT_GT(reciprocity_gap(AttenuationModel::point_cloud_neus(field), probes), 0.01);
    EXPECT_THROW(reciprocity_gap(AttenuationModel::volsdf(field), {}), ConfigError);
}

TEST(AttenuationModel, VariantNamesRoundTrip) {
    using V = AttenuationModel::Variant;
    for (const V v : {V::Ours, V::NeuS, V::VolSDF, V::CosineAnnealed, V::PointCloudOurs, V::PointCloudNeuS,
                      V::OccupancyAsSigma, V::Homogeneous})
        EXPECT_EQ(AttenuationModel::parse_variant(AttenuationModel::variant_name(v)), v);
    EXPECT_THROW(AttenuationModel::parse_variant("unisurf"), ConfigError);
}
