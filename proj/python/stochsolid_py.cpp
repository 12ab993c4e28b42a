#include "stochsolid/attenuation.hpp"
#include "stochsolid/errors.hpp"
#include "stochsolid/render.hpp"
#include "stochsolid/scene_io.hpp"
#include "stochsolid/transport.hpp"
#include "stochsolid/verification.hpp"

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <memory>
#include <string>

namespace py = pybind11;
using namespace stochsolid;

namespace {

ImplicitField make_field(SceneFieldPtr mean, double scale, const std::string &distribution) {
    return ImplicitField(std::move(mean), ScaleField(scale), SymmetricDistribution::parse(distribution));
}

py::array_t<double> to_array(const Image &image) {
    py::array_t<double> out({image.height, image.width});
    auto view = out.mutable_unchecked<2>();
    for (int y = 0; y < image.height; ++y)
        for (int x = 0; x < image.width; ++x) view(y, x) = image.at(x, y);
    return out;
}

VerifyOptions verify_options(bool quick, std::uint64_t seed) {
    VerifyOptions options;
    options.seed = seed;
    if (quick) {
        options.sphere_samples = 20000;
        options.markov_trials = 5000;
    }
    return options;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Volumetric stochastic opaque solids";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DegenerateGradient>(m, "DegenerateGradient", PyExc_ArithmeticError);
    py::register_exception<GrazingDirection>(m, "GrazingDirection", PyExc_ArithmeticError);

    py::class_<SymmetricDistribution>(m, "SymmetricDistribution")
        .def(py::init([](const std::string &name) { return SymmetricDistribution::parse(name); }),
             py::arg("name") = "gaussian")
        .def("pdf", &SymmetricDistribution::pdf)
        .def("cdf", &SymmetricDistribution::cdf)
        .def("hazard", &SymmetricDistribution::hazard)
        .def_property_readonly("name", &SymmetricDistribution::name);

    py::class_<NormalModel>(m, "NormalModel")
        .def(py::init([](const std::string &kind, double alpha) {
                 return NormalModel(NormalModel::parse_kind(kind), AnisotropyField(alpha));
             }),
             py::arg("kind") = "mixture", py::arg("alpha") = 1.0)
        .def("projected_area", &NormalModel::projected_area, py::arg("alpha"), py::arg("cosine"))
        .def("atom_weight", &NormalModel::atom_weight)
        .def_property_readonly("kind", [](const NormalModel &n) { return NormalModel::kind_name(n.kind()); });

    m.def(
        "projected_area",
        [](const std::string &kind, double alpha, double cosine) {
            return NormalModel(NormalModel::parse_kind(kind)).projected_area(alpha, cosine);
        },
        py::arg("kind"), py::arg("alpha"), py::arg("cosine"));

    py::class_<ImplicitField>(m, "ImplicitField")
        .def_static(
            "sphere",
            [](const Vec3 &center, double radius, double scale, const std::string &distribution) {
                return make_field(std::make_shared<SphereField>(center, radius), scale, distribution);
            },
            py::arg("center") = Vec3::Zero(), py::arg("radius") = 1.0, py::arg("scale") = 1.0,
            py::arg("distribution") = "gaussian")
        .def_static(
            "linear_ramp",
            [](const Vec3 &normal, double offset, double scale, const std::string &distribution) {
                return make_field(std::make_shared<LinearRampField>(normal, offset), scale, distribution);
            },
            py::arg("normal") = Vec3::UnitZ(), py::arg("offset") = 0.0, py::arg("scale") = 1.0,
            py::arg("distribution") = "gaussian")
        .def_static(
            "point_cloud_sphere",
            [](const Vec3 &center, double radius, int count, double support, double scale,
               const std::string &distribution) {
                return make_field(std::make_shared<PointCloudField>(
                                      PointCloudField::fibonacci_sphere(center, radius, count), support),
                                  scale, distribution);
            },
            py::arg("center") = Vec3::Zero(), py::arg("radius") = 1.0, py::arg("count") = 200,
            py::arg("support") = 0.2, py::arg("scale") = 1.0, py::arg("distribution") = "gaussian")
        .def("mean", &ImplicitField::mean)
        .def("vacancy", &ImplicitField::vacancy)
        .def("occupancy", &ImplicitField::occupancy)
        .def("grad_vacancy", &ImplicitField::grad_vacancy)
        .def("normal", &ImplicitField::normal);

    py::class_<AttenuationModel>(m, "AttenuationModel")
        .def_static(
            "ours",
            [](const ImplicitField &field, const std::string &normals, double alpha) {
                return AttenuationModel::ours(field, NormalModel(NormalModel::parse_kind(normals), AnisotropyField(alpha)));
            },
            py::arg("field"), py::arg("normals") = "mixture", py::arg("alpha") = 1.0)
        .def_static(
            "ours_surface_adaptive",
            [](const ImplicitField &field, const std::string &normals, double width) {
                return AttenuationModel::ours(
                    field, NormalModel(NormalModel::parse_kind(normals), AnisotropyField::surface_adaptive(width)));
            },
            py::arg("field"), py::arg("normals") = "mixture", py::arg("width") = 0.01)
        .def_static("neus", &AttenuationModel::neus)
        .def_static("volsdf", &AttenuationModel::volsdf)
        .def_static("cosine_annealed", &AttenuationModel::cosine_annealed, py::arg("field"), py::arg("alpha"))
        .def_static("point_cloud_ours", &AttenuationModel::point_cloud_ours)
        .def_static("point_cloud_neus", &AttenuationModel::point_cloud_neus)
        .def_static("occupancy_as_sigma", &AttenuationModel::occupancy_as_sigma)
        .def_static("homogeneous", &AttenuationModel::homogeneous)
        .def("sigma", &AttenuationModel::sigma, py::arg("x"), py::arg("omega"))
        .def("density", &AttenuationModel::density)
        .def("directional_factor", &AttenuationModel::directional_factor)
        .def("is_reciprocal", &AttenuationModel::is_reciprocal)
        .def_property_readonly("variant",
                               [](const AttenuationModel &a) { return AttenuationModel::variant_name(a.variant()); });

    m.def(
        "transmittance",
        [](const AttenuationModel &model, const Vec3 &origin, const Vec3 &direction, double length, int n_quad) {
            return transmittance(model, Ray(origin, direction, 0.0, length), length, n_quad);
        },
        py::arg("model"), py::arg("origin"), py::arg("direction"), py::arg("length"), py::arg("n_quad") = 4096);

    m.def(
        "reciprocity_gap",
        [](const AttenuationModel &model, const Eigen::Matrix<double, Eigen::Dynamic, 3> &points,
           const Eigen::Matrix<double, Eigen::Dynamic, 3> &directions) {
            if (points.rows() != directions.rows()) throw ConfigError("points and directions differ in length");
            std::vector<std::pair<Vec3, Vec3>> probes;
            for (Eigen::Index i = 0; i < points.rows(); ++i)
                probes.emplace_back(points.row(i).transpose(), directions.row(i).transpose().normalized());
            return reciprocity_gap(model, probes);
        },
        py::arg("model"), py::arg("points"), py::arg("directions"));

    py::class_<Camera>(m, "Camera")
        .def_property_readonly("width", &Camera::width)
        .def_property_readonly("height", &Camera::height);

    py::class_<RenderSettings>(m, "RenderSettings")
        .def(py::init<>())
        .def_readwrite("spp", &RenderSettings::spp)
        .def_readwrite("coarse", &RenderSettings::coarse)
        .def_readwrite("fine", &RenderSettings::fine)
        .def_readwrite("seed", &RenderSettings::seed)
        .def_readwrite("exposure", &RenderSettings::exposure);

    py::class_<RenderScene>(m, "RenderScene").def_readonly("model", &RenderScene::model);

    py::class_<SceneDescription>(m, "SceneDescription")
        .def_readonly("model", &SceneDescription::model)
        .def_readonly("camera", &SceneDescription::camera)
        .def_readwrite("render", &SceneDescription::render)
        .def_readwrite("bake_resolution", &SceneDescription::bake_resolution)
        .def_readonly("albedo", &SceneDescription::albedo);

    m.def("load_scene", &load_scene, py::arg("path"));
    m.def("render_scene", [](const SceneDescription &desc) { return desc.render_scene(); }, py::arg("scene"));
    m.def(
        "path_trace",
        [](const RenderScene &scene, const RenderSettings &s) {
            Image image;
            {
                py::gil_scoped_release release;
                image = path_trace(scene, s);
            }
            return to_array(image);
        },
        py::arg("scene"), py::arg("settings"));
    m.def(
        "light_trace",
        [](const RenderScene &scene, const RenderSettings &s) {
            Image image;
            {
                py::gil_scoped_release release;
                image = light_trace(scene, s);
            }
            return to_array(image);
        },
        py::arg("scene"), py::arg("settings"));

    m.def("check_names", [] {
        return std::vector<std::string>{"projected_area", "sggx_normalization", "logistic_identity", "markov_transmittance",
                                        "reversibility", "reciprocity", "quadrature", "phase_reciprocity",
                                        "anisotropy_curves"};
    });
    m.def(
        "run_verification",
        [](bool quick, std::uint64_t seed) {
            std::vector<CheckResult> results;
            {
                py::gil_scoped_release release;
                results = run_verification(verify_options(quick, seed));
            }
            py::list out;
            for (const CheckResult &r : results) {
                py::dict row;
                row["name"] = r.name;
                row["passed"] = r.passed;
                row["summary"] = r.summary;
                row["seconds"] = r.seconds;
                out.append(row);
            }
            return out;
        },
        py::arg("quick") = true, py::arg("seed") = VerifyOptions().seed);
}
