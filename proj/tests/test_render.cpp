#include "stochsolid/errors.hpp"
#include "stochsolid/render.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>

using namespace stochsolid;
using K = NormalModel::Kind;

namespace {

Camera small_camera(int size) { return Camera(Vec3(0, 0, 4), Vec3::Zero(), Vec3::UnitY(), 40.0, size, size); }

RenderScene sphere_scene(AttenuationModel model, int size) {
    return RenderScene{std::move(model), small_camera(size), PointLight{}, 0.8, Bounds{Vec3::Zero(), 1.5}};
}

ImplicitField unit_sphere(double scale) {
    return ImplicitField(std::make_shared<SphereField>(Vec3::Zero(), 1.0), ScaleField(scale));
}

ImplicitField point_cloud_sphere(double scale) {
    return ImplicitField(
        std::make_shared<PointCloudField>(PointCloudField::fibonacci_sphere(Vec3::Zero(), 1.0, 100), 0.25),
        ScaleField(scale));
}

}  // namespace

TEST(Camera, ProjectInvertsGenerate) {
    const Camera cam = small_camera(64);
    for (const auto &[px, py] : {std::pair{10.5, 20.5}, std::pair{32.0, 32.0}, std::pair{0.25, 63.75}}) {
        const Ray ray = cam.generate(px, py, 10.0);
        const auto proj = cam.project(ray.at(3.0));
        ASSERT_TRUE(proj.has_value());
        EXPECT_EQ(proj->x, static_cast<int>(px));
        EXPECT_EQ(proj->y, static_cast<int>(py));
        EXPECT_NEAR(proj->distance, 3.0, 1e-12);
    }
    EXPECT_FALSE(cam.project(Vec3(0, 0, 5)).has_value());
    EXPECT_FALSE(cam.project(Vec3(100, 0, 0)).has_value());
}

TEST(Camera, RejectsInvalidSetup) {
    EXPECT_THROW(Camera(Vec3::Zero(), Vec3::Zero(), Vec3::UnitY(), 40.0, 8, 8), ConfigError);
    EXPECT_THROW(Camera(Vec3(0, 0, 4), Vec3::Zero(), Vec3::UnitZ(), 40.0, 8, 8), ConfigError);
    EXPECT_THROW(Camera(Vec3(0, 0, 4), Vec3::Zero(), Vec3::UnitY(), 0.0, 8, 8), ConfigError);
    EXPECT_THROW(Camera(Vec3(0, 0, 4), Vec3::Zero(), Vec3::UnitY(), 40.0, 0, 8), ConfigError);
}

TEST(Render, EmptyMediumIsBlack) {
    const ImplicitField far(std::make_shared<SphereField>(Vec3(50, 0, 0), 1.0), ScaleField(8.0));
    const RenderScene scene = sphere_scene(AttenuationModel::ours(far, NormalModel(K::Uniform)), 8);
    RenderSettings settings;
    settings.spp = 4;
    for (const Image &image : {path_trace(scene, settings), light_trace(scene, settings)})
        for (const double v : image.pixels) EXPECT_EQ(v, 0.0);
}

TEST(Render, DeterministicForSeed) {
    const RenderScene scene = sphere_scene(AttenuationModel::ours(unit_sphere(8.0), NormalModel(K::Uniform)), 12);
    RenderSettings settings;
    settings.spp = 4;
    EXPECT_EQ(path_trace(scene, settings).pixels, path_trace(scene, settings).pixels);
    EXPECT_EQ(light_trace(scene, settings).pixels, light_trace(scene, settings).pixels);
    RenderSettings other = settings;
    other.seed = 2;
    EXPECT_NE(path_trace(scene, settings).pixels, path_trace(scene, other).pixels);
}

TEST(Render, PathAndLightTracingAgreeForReciprocalModel) {
    const RenderScene scene = sphere_scene(AttenuationModel::ours(unit_sphere(8.0), NormalModel(K::Uniform)), 16);
    RenderSettings settings;
    settings.spp = 64;
    const Image pt = path_trace(scene, settings), lt = light_trace(scene, settings);
    EXPECT_GT(pt.mean(), 1e-3);
    EXPECT_NEAR(lt.mean() / pt.mean(), 1.0, 0.05);
}

TEST(Render, RmseOfIdenticalImagesIsZero) {
    Image a(3, 2);
    a.at(1, 1) = 0.5;
    Image b = a;
    EXPECT_EQ(rmse(a, b), 0.0);
    b.at(0, 0) = 0.6;
    EXPECT_NEAR(rmse(a, b), 0.6 / std::sqrt(6.0), 1e-15);
    EXPECT_THROW(rmse(a, Image(2, 2)), std::invalid_argument);
}

TEST(Render, PpmHeaderAndSize) {
    Image image(5, 3);
    image.at(2, 1) = 1.0;
    const auto path = std::filesystem::temp_directory_path() / "stochsolid_test.ppm";
    write_ppm(path, image, 1.0);
    std::ifstream in(path, std::ios::binary);
    std::string magic;
    int w = 0, h = 0, maxval = 0;
    in >> magic >> w >> h >> maxval;
    in.get();
    EXPECT_EQ(magic, "P6");
    EXPECT_EQ(w, 5);
    EXPECT_EQ(h, 3);
    EXPECT_EQ(maxval, 255);
    std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    ASSERT_EQ(body.size(), 45u);
    EXPECT_EQ(static_cast<unsigned char>(body[3 * (1 * 5 + 2)]), 255);
    EXPECT_EQ(static_cast<unsigned char>(body[0]), 0);
    std::filesystem::remove(path);
}

TEST(PointCloudNeus, TransmittanceRatioIsVacancyRatio) {
    // σ_ω − σ_{−ω} = −ω·∇V / V integrates to ln V(a) − ln V(b).
    const ImplicitField field = point_cloud_sphere(6.0);
    const AttenuationModel model = AttenuationModel::point_cloud_neus(field);
    const Ray segments[] = {Ray(Vec3(-2, 0.1, 0), Vec3::UnitX(), 0.0, 1.5), Ray(Vec3(-2, 0.2, 0.1), Vec3::UnitX(), 0.0, 2.5),
                            Ray(Vec3(0.1, -0.3, 0.2), Vec3(0.3, 1, 0.2), 0.0, 1.8)};
    for (const Ray &ray : segments) {
        const double forward = transmittance(model, ray, ray.length(), 40000);
        const double backward = transmittance(model, ray.reversed(), ray.length(), 40000);
        const double expected = field.vacancy(ray.at(ray.t_far)) / field.vacancy(ray.at(ray.t_near));
        EXPECT_NEAR(forward / backward, expected, 1e-4 * expected);
    }
}

TEST(PointCloudNeus, LocalScatteringProductIsSymmetric) {
    const ImplicitField field = point_cloud_sphere(6.0);
    const AttenuationModel model = AttenuationModel::point_cloud_neus(field);
    const PhaseFunction phase = PhaseFunction::for_model(model);
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        const double u = rng.uniform();
        const Vec3 x = uniform_sphere(u, rng.uniform()) * (0.9 + 0.2 * rng.uniform());
        const double v = rng.uniform();
        const Vec3 wo = uniform_sphere(v, rng.uniform());
        const double w = rng.uniform();
        const Vec3 wi = uniform_sphere(w, rng.uniform());
        const double so = model.sigma(x, wo), si = model.sigma(x, -wi);
        if (so == 0.0 || si == 0.0) continue;
        const double lhs = so * *phase.phase_closed_form(x, wo, wi);
        const double rhs = si * *phase.phase_closed_form(x, -wi, -wo);
        EXPECT_NEAR(lhs, rhs, 1e-10 * (1.0 + lhs));
    }
}
