#pragma once

#include "stochsolid/attenuation.hpp"
#include "stochsolid/render.hpp"
#include "stochsolid/scene_field.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace stochsolid {

/// Parsed scene document.
///
/// Top-level keys: field, distribution, scale, gradient, attenuation, camera,
/// light, albedo, bounds, render. Unknown keys anywhere raise ConfigError.
struct SceneDescription {
    SceneFieldPtr field;
    AttenuationModel model = AttenuationModel::homogeneous(0.0);
    std::optional<Camera> camera;
    PointLight light;
    double albedo = 0.8;
    std::optional<Bounds> bounds;
    RenderSettings render;
    /// Grid resolution used to bake the mean function before rendering; 0 disables baking.
    int bake_resolution = 0;

    /// Render-ready scene; bakes the field into a grid when bake_resolution > 0.
    RenderScene render_scene() const;
};

SceneDescription parse_scene(const std::string &json_text);
SceneDescription load_scene(const std::filesystem::path &path);

}  // namespace stochsolid
