#include "stochsolid/errors.hpp"
#include "stochsolid/render.hpp"
#include "stochsolid/scene_io.hpp"
#include "stochsolid/transport.hpp"
#include "stochsolid/verification.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

using namespace stochsolid;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitVerification = 2;

/// Runs `write` against --out when given, stdout otherwise.
void emit(const std::string &path, const std::function<void(std::ostream &)> &write) {
    if (path.empty()) {
        write(std::cout);
        return;
    }
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open '" + path + "' for writing");
    write(out);
}

struct RenderArgs {
    std::string config, out, pfm, mode = "path";
    std::optional<int> spp;
    std::optional<std::uint64_t> seed;
};

int run_render(const RenderArgs &args) {
    SceneDescription desc = load_scene(args.config);
    if (args.spp) desc.render.spp = *args.spp;
    if (args.seed) desc.render.seed = *args.seed;
    const RenderScene scene = desc.render_scene();
    const Image image = args.mode == "light" ? light_trace(scene, desc.render) : path_trace(scene, desc.render);
    write_ppm(args.out, image, desc.render.exposure);
    if (!args.pfm.empty()) write_pfm(args.pfm, image);
    std::cerr << args.mode << " traced " << image.width << 'x' << image.height << " at " << desc.render.spp
              << " spp, mean " << image.mean() << '\n';
    return 0;
}

struct CurvesArgs {
    std::string config, out;
    std::optional<int> samples, coarse;
    std::optional<std::uint64_t> seed;
    int grid = 512;
    bool exact = false;
};

int run_curves(const CurvesArgs &args) {
    const SceneDescription desc = load_scene(args.config);
    if (!desc.camera) throw ConfigError("curves need a camera to define the ray");
    if (!desc.bounds) throw ConfigError("curves need scene bounds");
    if (args.grid < 2) throw ConfigError("--grid must be at least 2");
    const Camera &cam = *desc.camera;
    const double far = (cam.position() - desc.bounds->center).norm() + desc.bounds->radius;
    const auto ray =
        clip_to_sphere(cam.generate(0.5 * cam.width(), 0.5 * cam.height(), far), desc.bounds->center, desc.bounds->radius);
    if (!ray) throw ConfigError("the central camera ray misses the scene bounds");

    Rng rng(args.seed.value_or(desc.render.seed));
    const SampleComb comb = sample_comb(desc.model.field(), *ray, args.coarse.value_or(desc.render.coarse),
                                        args.samples.value_or(desc.render.fine), rng);
    const Discretization disc = discretize(desc.model, *ray, comb);
    emit(args.out, [&](std::ostream &out) {
        out << "t,transmittance,free_flight_pdf\n" << std::setprecision(12);
        for (int i = 0; i < args.grid; ++i) {
            const double t = ray->length() * i / (args.grid - 1);
            if (args.exact) {
                out << t << ',' << transmittance(desc.model, *ray, t, 4096) << ','
                    << free_flight_pdf(desc.model, *ray, t, 4096) << '\n';
            } else {
                const CurvePoint p = evaluate_discretization(comb, disc, ray->t_near + t);
                out << t << ',' << p.transmittance << ',' << p.free_flight_pdf << '\n';
            }
        }
    });
    return 0;
}

struct VerifyArgs {
    std::string out, scene;
    std::optional<std::size_t> trials;
    std::optional<std::uint64_t> seed;
    bool quick = false;
};

int run_verify(const VerifyArgs &args) {
    VerifyOptions options;
    if (args.seed) options.seed = *args.seed;
    if (args.trials) options.markov_trials = *args.trials;
    if (args.quick) {
        options.sphere_samples = 20000;
        options.markov_trials = args.trials.value_or(5000);
        options.render_spp = 8;
        options.render_size = 32;
    }
    if (!args.scene.empty()) {
        options.include_render = true;
        options.render_scene = args.scene;
    }
    const auto results = run_verification(options);
    bool all = true;
    for (const CheckResult &r : results) {
        all = all && r.passed;
        std::cout << (r.passed ? "PASS " : "FAIL ") << std::left << std::setw(22) << r.name << std::right
                  << std::fixed << std::setprecision(1) << std::setw(7) << r.seconds << "s  " << r.summary << '\n';
        std::cout.unsetf(std::ios::fixed);
    }
    if (!args.out.empty()) emit(args.out, [&](std::ostream &out) { write_residuals_csv(out, results); });
    return all ? 0 : kExitVerification;
}

struct AnisoArgs {
    std::string config, out;
    int samples = 181;
    std::optional<double> width;
};

int run_aniso(const AnisoArgs &args) {
    const SceneDescription desc = load_scene(args.config);
    const auto bounds = desc.bounds ? desc.bounds : desc.field->bounds();
    if (!bounds) throw ConfigError("aniso needs scene bounds");
    AttenuationModel model = desc.model;
    if (args.width || model.variant() != AttenuationModel::Variant::Ours ||
        model.normal_model().kind() != NormalModel::Kind::Mixture) {
        const AnisotropyField &current = model.normal_model().anisotropy();
        const double width = args.width.value_or(current.is_constant() ? 0.02 : current.width());
        model = AttenuationModel::ours(desc.model.field(),
                                       NormalModel(NormalModel::Kind::Mixture, AnisotropyField::surface_adaptive(width)));
    }
    const AnisotropyCurves curves = anisotropy_curves(model, *bounds, args.samples);
    emit(args.out, [&](std::ostream &out) { write_anisotropy_csv(out, curves); });
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Volumetric stochastic opaque solids: rendering, curves and verification"};
    app.require_subcommand(1);

    RenderArgs render;
    auto *render_cmd = app.add_subcommand("render", "Single-scattering render to a binary PPM");
    render_cmd->add_option("--config", render.config, "Scene JSON")->required()->check(CLI::ExistingFile);
    render_cmd->add_option("--out", render.out, "Output PPM")->required();
    render_cmd->add_option("--mode", render.mode, "path or light")->check(CLI::IsMember({"path", "light"}));
    render_cmd->add_option("--spp", render.spp, "Samples per pixel")->check(CLI::PositiveNumber);
    render_cmd->add_option("--seed", render.seed, "Base seed");
    render_cmd->add_option("--pfm", render.pfm, "Also write linear values as PFM");

    CurvesArgs curves;
    auto *curves_cmd = app.add_subcommand("curves", "Transmittance and free-flight density along the central camera ray");
    curves_cmd->add_option("--config", curves.config, "Scene JSON")->required()->check(CLI::ExistingFile);
    curves_cmd->add_option("--out", curves.out, "Output CSV (default stdout)");
    curves_cmd->add_option("--samples", curves.samples, "Fine comb samples")->check(CLI::Range(3, 1 << 20));
    curves_cmd->add_option("--coarse", curves.coarse, "Coarse sign-change samples")->check(CLI::Range(3, 1 << 20));
    curves_cmd->add_option("--seed", curves.seed, "Comb seed");
    curves_cmd->add_option("--grid", curves.grid, "Number of output rows");
    curves_cmd->add_flag("--exact", curves.exact, "Use fine midpoint quadrature instead of the comb");

    VerifyArgs verify;
    auto *verify_cmd = app.add_subcommand("verify", "Run the oracle suite and print a pass/fail table");
    verify_cmd->add_option("--out", verify.out, "CSV of residuals");
    verify_cmd->add_option("--trials", verify.trials, "Markov simulation trials")->check(CLI::PositiveNumber);
    verify_cmd->add_option("--seed", verify.seed, "Base seed");
    verify_cmd->add_option("--render-scene", verify.scene, "Also run the render ordering check on this scene")
        ->check(CLI::ExistingFile);
    verify_cmd->add_flag("--quick", verify.quick, "Reduced sample counts for smoke testing");

    AnisoArgs aniso;
    auto *aniso_cmd = app.add_subcommand("aniso", "Projected area against angle at a surface and an interior point");
    aniso_cmd->add_option("--config", aniso.config, "Scene JSON")->required()->check(CLI::ExistingFile);
    aniso_cmd->add_option("--out", aniso.out, "Output CSV (default stdout)");
    aniso_cmd->add_option("--samples", aniso.samples, "Number of angles")->check(CLI::Range(2, 1 << 20));
    aniso_cmd->add_option("--width", aniso.width, "Band width of the surface-adaptive anisotropy")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*render_cmd) return run_render(render);
        if (*curves_cmd) return run_curves(curves);
        if (*verify_cmd) return run_verify(verify);
        if (*aniso_cmd) return run_aniso(aniso);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return 0;
}
