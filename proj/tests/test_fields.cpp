#include "stochsolid/errors.hpp"
#include "stochsolid/implicit_field.hpp"
#include "stochsolid/rng.hpp"
#include "stochsolid/scene_field.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <memory>

using namespace stochsolid;

namespace {

Vec3 random_point(Rng &rng, double extent) {
    return Vec3(rng.uniform() - 0.5, rng.uniform() - 0.5, rng.uniform() - 0.5) * 2.0 * extent;
}

void expect_gradient_matches_fd(const SceneField &field, double extent, std::uint64_t seed) {
    Rng rng(seed);
    const double h = 1e-5;
    for (int i = 0; i < 1000; ++i) {
        const Vec3 x = random_point(rng, extent);
        Vec3 fd;
        for (int k = 0; k < 3; ++k) {
            Vec3 e = Vec3::Zero();
            e[k] = h;
            fd[k] = (field.value(x + e) - field.value(x - e)) / (2.0 * h);
        }
        const Vec3 g = field.gradient(x);
        EXPECT_LE((g - fd).norm(), 1e-4 * std::max(1.0, fd.norm())) << "x=" << x.transpose();
    }
}

std::shared_ptr<SmoothUnionField> twin_spheres() {
    return std::make_shared<SmoothUnionField>(
        std::vector<SceneFieldPtr>{std::make_shared<SphereField>(Vec3(-1.0, 0.0, 0.0), 0.5),
                                   std::make_shared<SphereField>(Vec3(1.0, 0.0, 0.0), 0.5)},
        0.3);
}

}  // namespace

TEST(SceneField, SphereIsSignedDistance) {
    const SphereField sphere(Vec3::Zero(), 1.0);
    EXPECT_DOUBLE_EQ(sphere.value(Vec3(2, 0, 0)), 1.0);
    EXPECT_DOUBLE_EQ(sphere.value(Vec3::Zero()), -1.0);
    EXPECT_TRUE(sphere.gradient(Vec3(2, 0, 0)).isApprox(Vec3(1, 0, 0)));
}

TEST(SceneField, LinearRamp) {
    const LinearRampField ramp(Vec3::UnitZ(), 0.0);
    EXPECT_DOUBLE_EQ(ramp.value(Vec3(5, 5, 0.3)), 0.3);
    Rng rng(3);
    for (int i = 0; i < 100; ++i) {
        const Vec3 g = ramp.gradient(random_point(rng, 10.0));
        EXPECT_NEAR(g.norm(), 1.0, 1e-15);
        EXPECT_TRUE(g.isApprox(Vec3::UnitZ()));
    }
    EXPECT_FALSE(ramp.bounds().has_value());
}

TEST(SceneField, AnalyticGradientsMatchFiniteDifferences) {
    expect_gradient_matches_fd(SphereField(Vec3(0.1, -0.2, 0.3), 0.8), 2.0, 1);
    expect_gradient_matches_fd(BoxField(Vec3::Zero(), Vec3(0.8, 0.5, 0.6), 0.1), 1.5, 2);
    expect_gradient_matches_fd(*twin_spheres(), 2.0, 3);
    expect_gradient_matches_fd(LinearRampField(Vec3(1, 2, -1), 0.4), 3.0, 4);
    expect_gradient_matches_fd(PointCloudField(PointCloudField::fibonacci_sphere(Vec3::Zero(), 1.0, 60), 0.3), 1.5, 5);
}

TEST(SceneField, SmoothUnionGradientAtMidpointRegion) {
    const auto field = twin_spheres();
    const Vec3 x(0.0, 0.2, 0.1);
    EXPECT_LE((field->gradient(x) - field->finite_difference_gradient(x)).norm(),
              1e-4 * field->gradient(x).norm());
}

TEST(SceneField, FiniteDifferenceStepScalesWithBounds) {
    const SphereField sphere(Vec3::Zero(), 2.0);
    EXPECT_DOUBLE_EQ(sphere.finite_difference_step(), 1e-4 * 4.0);
    const FiniteDifferenceField wrapped(std::make_shared<SphereField>(Vec3::Zero(), 1.0));
    EXPECT_TRUE(wrapped.gradient(Vec3(0.3, 0.4, 1.2)).isApprox(Vec3(0.3, 0.4, 1.2).normalized(), 1e-6));
}

TEST(PointCloud, SinglePointPlaneDistance) {
    const Vec3 p(0.2, -0.1, 0.4), n = Vec3(1, 1, 0).normalized();
    const PointCloudField field({{p, n}}, 0.3);
    EXPECT_NEAR(field.value(p), 0.0, 1e-15);
    EXPECT_NEAR(field.value(p + 0.1 * n), 0.1, 1e-15);
}

TEST(PointCloud, AntipodalPointsAtCentre) {
    const PointCloudField field({{Vec3(1, 0, 0), Vec3(1, 0, 0)}, {Vec3(-1, 0, 0), Vec3(-1, 0, 0)}}, 0.5);
    EXPECT_NEAR(field.value(Vec3::Zero()), -1.0, 1e-6);
}

TEST(PointCloud, RejectsEmptyInput) {
    EXPECT_THROW(PointCloudField({}, 0.2), ConfigError);
    EXPECT_THROW(PointCloudField({{Vec3::Zero(), Vec3::UnitX()}}, 0.0), ConfigError);
}

TEST(PointCloud, FibonacciSphereLiesOnSphere) {
    const auto points = PointCloudField::fibonacci_sphere(Vec3(1, 2, 3), 0.5, 200);
    ASSERT_EQ(points.size(), 200u);
    for (const auto &p : points) {
        EXPECT_NEAR((p.position - Vec3(1, 2, 3)).norm(), 0.5, 1e-12);
        EXPECT_TRUE(p.normal.isApprox((p.position - Vec3(1, 2, 3)).normalized(), 1e-12));
    }
}

TEST(GridField, InterpolatesSmoothField) {
    const auto sphere = std::make_shared<SphereField>(Vec3::Zero(), 1.0);
    const GridField grid(sphere, 64);
    Rng rng(8);
    for (int i = 0; i < 200; ++i) {
        const Vec3 x = random_point(rng, 1.2);
        EXPECT_NEAR(grid.value(x), sphere->value(x), 2e-3) << x.transpose();
    }
    EXPECT_DOUBLE_EQ(grid.value(Vec3(5, 0, 0)), sphere->value(Vec3(5, 0, 0)));
}

TEST(ImplicitField, VacancyExamples) {
    const auto sphere = std::make_shared<SphereField>(Vec3::Zero(), 1.0);
    EXPECT_DOUBLE_EQ(ImplicitField(sphere).vacancy(Vec3(1, 0, 0)), 0.5);
    EXPECT_NEAR(ImplicitField(sphere).vacancy(Vec3(100, 0, 0)), 1.0, 1e-15);
    EXPECT_NEAR(ImplicitField(sphere, ScaleField(2.0)).vacancy(Vec3(1.5, 0, 0)), 0.8413447460685429, 1e-12);
    const ImplicitField logistic(sphere, ScaleField(1.0), SymmetricDistribution(SymmetricDistribution::Kind::Logistic));
    EXPECT_DOUBLE_EQ(logistic.vacancy(Vec3(0, 1, 0)), 0.5);
    EXPECT_DOUBLE_EQ(logistic.occupancy(Vec3(0, 0, 3)), 1.0 - logistic.vacancy(Vec3(0, 0, 3)));
}

TEST(ImplicitField, NormalExamples) {
    const ImplicitField sphere(std::make_shared<SphereField>(Vec3::Zero(), 1.0), ScaleField(3.0));
    EXPECT_TRUE(sphere.normal(Vec3(2, 0, 0)).isApprox(Vec3(1, 0, 0)));
    const ImplicitField ramp(std::make_shared<LinearRampField>(Vec3::UnitZ(), 0.0));
    EXPECT_TRUE(ramp.normal(Vec3(4, -3, 0.2)).isApprox(Vec3::UnitZ()));
    const ImplicitField saddle(twin_spheres());
    EXPECT_THROW(saddle.normal(Vec3::Zero()), DegenerateGradient);
}

TEST(ImplicitField, VacancyGradientMatchesFiniteDifferences) {
    const ImplicitField field(std::make_shared<SphereField>(Vec3::Zero(), 1.0),
                              ScaleField::radial(Vec3(0.5, 0, 0), 0.6, 8.0, 2.0));
    Rng rng(9);
    const double h = 1e-6;
    for (int i = 0; i < 200; ++i) {
        const Vec3 x = random_point(rng, 1.5);
        Vec3 fd;
        for (int k = 0; k < 3; ++k) {
            Vec3 e = Vec3::Zero();
            e[k] = h;
            fd[k] = (field.vacancy(x + e) - field.vacancy(x - e)) / (2.0 * h);
        }
        EXPECT_LE((field.grad_vacancy(x) - fd).norm(), 1e-6 + 1e-4 * fd.norm()) << x.transpose();
    }
}

TEST(ScaleField, RadialBlendsBetweenValues) {
    const ScaleField s = ScaleField::radial(Vec3::Zero(), 0.5, 10.0, 2.0);
    EXPECT_NEAR(s.value(Vec3::Zero()), 10.0, 1e-12);
    EXPECT_NEAR(s.value(Vec3(50, 0, 0)), 2.0, 1e-12);
    EXPECT_THROW(ScaleField(0.0), ConfigError);
    EXPECT_THROW(ScaleField(-1.0), ConfigError);
}
