#include "stochsolid/errors.hpp"
#include "stochsolid/scene_io.hpp"

#include <gtest/gtest.h>

#include <string>

using namespace stochsolid;
using V = AttenuationModel::Variant;

namespace {

const std::string kSceneDir = STOCHSOLID_SCENE_DIR;

std::string minimal(const std::string &extra) {
    return R"({"field": {"type": "sphere", "radius": 1.0})" + extra + "}";
}

}  // namespace

TEST(SceneIo, BundledScenesParse) {
    const SceneDescription sphere = load_scene(kSceneDir + "/sphere.json");
    EXPECT_EQ(sphere.model.variant(), V::Ours);
    EXPECT_EQ(sphere.model.normal_model().kind(), NormalModel::Kind::Mixture);
    EXPECT_FALSE(sphere.model.normal_model().anisotropy().is_constant());
    ASSERT_TRUE(sphere.camera.has_value());
    EXPECT_EQ(sphere.camera->width(), 96);
    EXPECT_DOUBLE_EQ(sphere.bounds->radius, 1.6);

    const SceneDescription cloud = load_scene(kSceneDir + "/pointcloud_sphere.json");
    EXPECT_EQ(cloud.model.variant(), V::PointCloudOurs);
    EXPECT_EQ(cloud.render.spp, 256);
    EXPECT_EQ(cloud.render.seed, 7u);
    EXPECT_EQ(cloud.bake_resolution, 96);

    const SceneDescription ramp = load_scene(kSceneDir + "/ramp.json");
    EXPECT_EQ(ramp.model.variant(), V::NeuS);
    EXPECT_EQ(ramp.model.field().distribution().kind(), SymmetricDistribution::Kind::Logistic);
}

TEST(SceneIo, Defaults) {
    const SceneDescription scene = parse_scene(minimal(""));
    EXPECT_EQ(scene.model.variant(), V::Ours);
    EXPECT_FALSE(scene.camera.has_value());
    ASSERT_TRUE(scene.bounds.has_value());
    EXPECT_DOUBLE_EQ(scene.albedo, 0.8);
    EXPECT_THROW(scene.render_scene(), ConfigError);
}

TEST(SceneIo, VariantsAndScales) {
    EXPECT_EQ(parse_scene(minimal(R"(, "attenuation": {"variant": "volsdf"})")).model.variant(), V::VolSDF);
    EXPECT_EQ(parse_scene(minimal(R"(, "attenuation": {"variant": "cosine_annealed", "alpha": 0.3})")).model.variant(),
              V::CosineAnnealed);
    const SceneDescription homogeneous = parse_scene(minimal(R"(, "attenuation": {"variant": "homogeneous", "sigma": 2})"));
    EXPECT_DOUBLE_EQ(homogeneous.model.sigma(Vec3::Zero(), Vec3::UnitX()), 2.0);
    const SceneDescription radial =
        parse_scene(minimal(R"(, "scale": {"type": "radial", "center": [0,0,0], "radius": 0.5, "inner": 9, "outer": 3})"));
    EXPECT_NEAR(radial.model.field().scale(Vec3::Zero()), 9.0, 1e-12);
    const SceneDescription fd = parse_scene(minimal(R"(, "gradient": "finite_difference")"));
    EXPECT_TRUE(fd.field->gradient(Vec3(2, 0, 0)).isApprox(Vec3::UnitX(), 1e-6));
}

TEST(SceneIo, UnknownKeysRejected) {
    EXPECT_THROW(parse_scene(minimal(R"(, "colour": 1)")), ConfigError);
    EXPECT_THROW(parse_scene(R"({"field": {"type": "sphere", "radius": 1, "rad": 2}})"), ConfigError);
    EXPECT_THROW(parse_scene(minimal(R"(, "render": {"sp": 4})")), ConfigError);
    EXPECT_THROW(parse_scene(minimal(R"(, "camera": {"fov": 40, "zoom": 2})")), ConfigError);
}

TEST(SceneIo, BadValuesRejected) {
    EXPECT_THROW(parse_scene("{not json"), ConfigError);
    EXPECT_THROW(parse_scene(R"({"scale": 2})"), ConfigError);
    EXPECT_THROW(parse_scene(R"({"field": {"type": "torus"}})"), ConfigError);
    EXPECT_THROW(parse_scene(minimal(R"(, "scale": -1)")), ConfigError);
    EXPECT_THROW(parse_scene(minimal(R"(, "scale": "big")")), ConfigError);
    EXPECT_THROW(parse_scene(minimal(R"(, "distribution": "cauchy")")), ConfigError);
    EXPECT_THROW(parse_scene(minimal(R"(, "albedo": 1.5)")), ConfigError);
    EXPECT_THROW(parse_scene(minimal(R"(, "render": {"spp": 0})")), ConfigError);
    EXPECT_THROW(parse_scene(minimal(R"(, "render": {"spp": 2.5})")), ConfigError);
    EXPECT_THROW(parse_scene(minimal(R"(, "render": {"seed": -3})")), ConfigError);
    EXPECT_THROW(parse_scene(minimal(R"(, "camera": {"position": [0, 0]})")), ConfigError);
    EXPECT_THROW(parse_scene(minimal(R"(, "attenuation": {"variant": "unisurf"})")), ConfigError);
    EXPECT_THROW(parse_scene(minimal(R"(, "gradient": "numeric")")), ConfigError);
    EXPECT_THROW(load_scene(kSceneDir + "/missing.json"), ConfigError);
}

TEST(SceneIo, BakedRenderSceneKeepsVariant) {
    SceneDescription scene = load_scene(kSceneDir + "/pointcloud_sphere.json");
    scene.bake_resolution = 16;
    const RenderScene render = scene.render_scene();
    EXPECT_EQ(render.model.variant(), V::PointCloudOurs);
    EXPECT_NEAR(render.model.field().mean(Vec3(0, 0, 1)), scene.model.field().mean(Vec3(0, 0, 1)), 0.05);
}
