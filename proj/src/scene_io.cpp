#include "stochsolid/scene_io.hpp"

#include "stochsolid/errors.hpp"

#include "json.hpp"

#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

namespace stochsolid {

namespace {

using nlohmann::json;

void check_keys(const json &obj, std::initializer_list<const char *> allowed, const std::string &context) {
    if (!obj.is_object()) throw ConfigError(context + " must be an object");
    const std::set<std::string> names(allowed.begin(), allowed.end());
    for (const auto &item : obj.items())
        if (!names.count(item.key())) throw ConfigError("unknown key '" + item.key() + "' in " + context);
}

const json &require(const json &obj, const char *key, const std::string &context) {
    const auto it = obj.find(key);
    if (it == obj.end()) throw ConfigError("missing key '" + std::string(key) + "' in " + context);
    return *it;
}

double number(const json &value, const std::string &what) {
    if (!value.is_number()) throw ConfigError(what + " must be a number");
    return value.get<double>();
}

double number_or(const json &obj, const char *key, double fallback, const std::string &context) {
    const auto it = obj.find(key);
    return it == obj.end() ? fallback : number(*it, context + "." + key);
}

int integer_or(const json &obj, const char *key, int fallback, const std::string &context) {
    const auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    if (!it->is_number_integer()) throw ConfigError(context + "." + key + " must be an integer");
    return it->get<int>();
}

Vec3 vec3(const json &value, const std::string &what) {
    if (!value.is_array() || value.size() != 3) throw ConfigError(what + " must be an array of 3 numbers");
    return {number(value[0], what), number(value[1], what), number(value[2], what)};
}

Vec3 vec3_or(const json &obj, const char *key, const Vec3 &fallback, const std::string &context) {
    const auto it = obj.find(key);
    return it == obj.end() ? fallback : vec3(*it, context + "." + key);
}

SceneFieldPtr parse_field(const json &node, const std::string &context) {
    const std::string type = require(node, "type", context).get<std::string>();
    if (type == "sphere") {
        check_keys(node, {"type", "center", "radius"}, context);
        return std::make_shared<SphereField>(vec3_or(node, "center", Vec3::Zero(), context),
                                             number(require(node, "radius", context), context + ".radius"));
    }
    if (type == "box") {
        check_keys(node, {"type", "center", "half_extents", "smoothing"}, context);
        return std::make_shared<BoxField>(vec3_or(node, "center", Vec3::Zero(), context),
                                          vec3(require(node, "half_extents", context), context + ".half_extents"),
                                          number_or(node, "smoothing", 0.0, context));
    }
    if (type == "smooth_union") {
        check_keys(node, {"type", "children", "blend_radius"}, context);
        const json &children = require(node, "children", context);
        if (!children.is_array()) throw ConfigError(context + ".children must be an array");
        std::vector<SceneFieldPtr> parsed;
        for (std::size_t i = 0; i < children.size(); ++i)
            parsed.push_back(parse_field(children[i], context + ".children[" + std::to_string(i) + "]"));
        return std::make_shared<SmoothUnionField>(std::move(parsed),
                                                  number(require(node, "blend_radius", context), context));
    }
    if (type == "linear_ramp") {
        check_keys(node, {"type", "normal", "offset"}, context);
        return std::make_shared<LinearRampField>(vec3(require(node, "normal", context), context + ".normal"),
                                                 number_or(node, "offset", 0.0, context));
    }
    if (type == "point_cloud") {
        check_keys(node, {"type", "points", "fibonacci_sphere", "support"}, context);
        std::vector<OrientedPoint> points;
        if (const auto it = node.find("points"); it != node.end()) {
            if (!it->is_array()) throw ConfigError(context + ".points must be an array");
            for (const auto &p : *it) {
                check_keys(p, {"position", "normal"}, context + ".points[]");
                points.push_back({vec3(require(p, "position", context), context + ".points[].position"),
                                  vec3(require(p, "normal", context), context + ".points[].normal")});
            }
        }
        if (const auto it = node.find("fibonacci_sphere"); it != node.end()) {
            const std::string sub = context + ".fibonacci_sphere";
            check_keys(*it, {"center", "radius", "count"}, sub);
            const auto generated = PointCloudField::fibonacci_sphere(
                vec3_or(*it, "center", Vec3::Zero(), sub), number(require(*it, "radius", sub), sub + ".radius"),
                integer_or(*it, "count", 200, sub));
            points.insert(points.end(), generated.begin(), generated.end());
        }
        return std::make_shared<PointCloudField>(std::move(points),
                                                 number(require(node, "support", context), context + ".support"));
    }
    throw ConfigError("unknown field type '" + type + "' in " + context);
}

ScaleField parse_scale(const json &node) {
    if (node.is_number()) return ScaleField(node.get<double>());
    check_keys(node, {"type", "center", "radius", "inner", "outer"}, "scale");
    const std::string type = require(node, "type", "scale").get<std::string>();
    if (type == "constant") return ScaleField(number(require(node, "outer", "scale"), "scale.outer"));
    if (type != "radial") throw ConfigError("unknown scale type '" + type + "'");
    return ScaleField::radial(vec3_or(node, "center", Vec3::Zero(), "scale"),
                              number(require(node, "radius", "scale"), "scale.radius"),
                              number(require(node, "inner", "scale"), "scale.inner"),
                              number(require(node, "outer", "scale"), "scale.outer"));
}

AnisotropyField parse_alpha(const json &node) {
    if (node.is_number()) return AnisotropyField(node.get<double>());
    check_keys(node, {"kind", "width", "surface", "far"}, "attenuation.alpha");
    const std::string kind = require(node, "kind", "attenuation.alpha").get<std::string>();
    if (kind != "surface_adaptive") throw ConfigError("unknown anisotropy kind '" + kind + "'");
    return AnisotropyField::surface_adaptive(number(require(node, "width", "attenuation.alpha"), "alpha.width"),
                                             number_or(node, "surface", 1.0, "attenuation.alpha"),
                                             number_or(node, "far", 0.0, "attenuation.alpha"));
}

AttenuationModel parse_attenuation(const json &node, const ImplicitField &field) {
    check_keys(node, {"variant", "normal_model", "alpha", "sigma"}, "attenuation");
    const auto variant = AttenuationModel::parse_variant(
        node.contains("variant") ? node["variant"].get<std::string>() : std::string("ours"));
    using V = AttenuationModel::Variant;
    switch (variant) {
    case V::Ours: {
        const auto kind = NormalModel::parse_kind(
            node.contains("normal_model") ? node["normal_model"].get<std::string>() : std::string("mixture"));
        const AnisotropyField alpha = node.contains("alpha") ? parse_alpha(node["alpha"]) : AnisotropyField(1.0);
        return AttenuationModel::ours(field, NormalModel(kind, alpha));
    }
    case V::NeuS: return AttenuationModel::neus(field);
    case V::VolSDF: return AttenuationModel::volsdf(field);
    case V::CosineAnnealed: {
        const auto it = node.find("alpha");
        return AttenuationModel::cosine_annealed(field, it == node.end() ? 1.0 : number(*it, "attenuation.alpha"));
    }
    case V::PointCloudOurs: return AttenuationModel::point_cloud_ours(field);
    case V::PointCloudNeuS: return AttenuationModel::point_cloud_neus(field);
    case V::OccupancyAsSigma: return AttenuationModel::occupancy_as_sigma(field);
    case V::Homogeneous:
        return AttenuationModel::homogeneous(number(require(node, "sigma", "attenuation"), "attenuation.sigma"));
    }
    throw ConfigError("unsupported attenuation variant");
}

}  // namespace

SceneDescription parse_scene(const std::string &json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error &e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    try {
        check_keys(doc, {"field", "distribution", "scale", "gradient", "attenuation", "camera", "light", "albedo",
                         "bounds", "render"},
                   "scene");
        SceneDescription scene;
        scene.field = parse_field(require(doc, "field", "scene"), "field");
        if (const auto it = doc.find("gradient"); it != doc.end()) {
            const std::string mode = it->get<std::string>();
            if (mode == "finite_difference")
                scene.field = std::make_shared<FiniteDifferenceField>(scene.field);
            else if (mode != "analytic")
                throw ConfigError("gradient must be 'analytic' or 'finite_difference'");
        }
        const auto dist = SymmetricDistribution::parse(
            doc.contains("distribution") ? doc["distribution"].get<std::string>() : std::string("gaussian"));
        const ScaleField scale = doc.contains("scale") ? parse_scale(doc["scale"]) : ScaleField(1.0);
        const ImplicitField field(scene.field, scale, dist);
        scene.model = parse_attenuation(doc.contains("attenuation") ? doc["attenuation"] : json::object(), field);

        if (const auto it = doc.find("bounds"); it != doc.end()) {
            check_keys(*it, {"center", "radius"}, "bounds");
            scene.bounds = Bounds{vec3_or(*it, "center", Vec3::Zero(), "bounds"),
                                  number(require(*it, "radius", "bounds"), "bounds.radius")};
        } else {
            scene.bounds = scene.field->bounds();
        }
        if (const auto it = doc.find("camera"); it != doc.end()) {
            check_keys(*it, {"position", "look_at", "up", "fov", "width", "height"}, "camera");
            scene.camera.emplace(vec3_or(*it, "position", Vec3(0.0, 0.0, 4.0), "camera"),
                                 vec3_or(*it, "look_at", Vec3::Zero(), "camera"),
                                 vec3_or(*it, "up", Vec3::UnitY(), "camera"), number_or(*it, "fov", 40.0, "camera"),
                                 integer_or(*it, "width", 128, "camera"), integer_or(*it, "height", 128, "camera"));
        }
        if (const auto it = doc.find("light"); it != doc.end()) {
            check_keys(*it, {"position", "intensity"}, "light");
            scene.light.position = vec3_or(*it, "position", scene.light.position, "light");
            scene.light.intensity = number_or(*it, "intensity", scene.light.intensity, "light");
        }
        scene.albedo = number_or(doc, "albedo", scene.albedo, "scene");
        if (!(scene.albedo >= 0.0 && scene.albedo <= 1.0)) throw ConfigError("albedo must lie in [0, 1]");
        if (const auto it = doc.find("render"); it != doc.end()) {
            check_keys(*it, {"spp", "coarse", "fine", "exposure", "seed", "bake_resolution"}, "render");
            scene.render.spp = integer_or(*it, "spp", scene.render.spp, "render");
            scene.render.coarse = integer_or(*it, "coarse", scene.render.coarse, "render");
            scene.render.fine = integer_or(*it, "fine", scene.render.fine, "render");
            scene.render.exposure = number_or(*it, "exposure", scene.render.exposure, "render");
            if (const auto seed = it->find("seed"); seed != it->end()) {
                if (!seed->is_number_unsigned()) throw ConfigError("render.seed must be a nonnegative integer");
                scene.render.seed = seed->get<std::uint64_t>();
            }
            scene.bake_resolution = integer_or(*it, "bake_resolution", 0, "render");
            if (scene.render.spp < 1) throw ConfigError("render.spp must be at least 1");
            if (scene.render.coarse < 3 || scene.render.fine < 3)
                throw ConfigError("render.coarse and render.fine must be at least 3");
            if (scene.bake_resolution < 0) throw ConfigError("render.bake_resolution must be nonnegative");
        }
        return scene;
    } catch (const json::exception &e) {
        throw ConfigError(std::string("malformed scene: ") + e.what());
    }
}

SceneDescription load_scene(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read scene file '" + path.string() + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_scene(text.str());
}

RenderScene SceneDescription::render_scene() const {
    if (!camera) throw ConfigError("scene has no camera");
    if (!bounds) throw ConfigError("rendering an unbounded field needs an explicit 'bounds' entry");
    if (bake_resolution <= 0 || !model.has_field()) return RenderScene{model, *camera, light, albedo, *bounds};
    if (!field->bounds()) throw ConfigError("cannot bake an unbounded field");
    return RenderScene{model.with_scene(std::make_shared<GridField>(field, bake_resolution)), *camera, light, albedo,
                       *bounds};
}

}  // namespace stochsolid
