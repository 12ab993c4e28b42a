#include "stochsolid/verification.hpp"

#include "stochsolid/errors.hpp"
#include "stochsolid/oracle.hpp"
#include "stochsolid/render.hpp"
#include "stochsolid/rng.hpp"
#include "stochsolid/scattering.hpp"
#include "stochsolid/scene_io.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

namespace stochsolid {

void CheckResult::add(CheckRow row) {
    passed = passed && row.pass;
    rows.push_back(std::move(row));
}

namespace {

constexpr std::array<double, 5> kAlphaGrid{0.0, 0.25, 0.5, 0.75, 0.99};

Vec3 random_direction(Rng &rng) {
    const double u1 = rng.uniform();
    return uniform_sphere(u1, rng.uniform());
}

std::string format(double v) {
    std::ostringstream s;
    s << std::setprecision(4) << v;
    return s.str();
}

std::string alpha_label(double alpha) { return "alpha=" + format(alpha); }

/// Row comparing an estimate against a reference within `k` standard errors.
CheckRow z_row(std::string check, std::string case_name, double value, double reference, double se,
               double k = 3.0) {
    const double residual = std::abs(value - reference);
    return {std::move(check), std::move(case_name), value, reference, residual, k * se, residual <= k * se};
}

CheckRow abs_row(std::string check, std::string case_name, double value, double reference, double tolerance) {
    const double residual = std::abs(value - reference);
    return {std::move(check), std::move(case_name), value, reference, residual, tolerance, residual <= tolerance};
}

CheckRow rel_row(std::string check, std::string case_name, double value, double reference, double tolerance) {
    const double scale = std::max(std::abs(value), std::abs(reference));
    const double residual = scale > 0.0 ? std::abs(value - reference) / scale : 0.0;
    return {std::move(check), std::move(case_name), value, reference, residual, tolerance, residual <= tolerance};
}

/// Composite Gauss-Legendre rule on [a, b] with 16 nodes per panel.
template <class F>
double gauss_legendre(const F &f, double a, double b, int panels) {
    static constexpr std::array<double, 8> nodes{
        0.0950125098376374, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
        0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499};
    static constexpr std::array<double, 8> weights{
        0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
        0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};
    const double width = (b - a) / panels;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * width, half = 0.5 * width;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            sum += weights[i] * half * (f(mid - half * nodes[i]) + f(mid + half * nodes[i]));
    }
    return sum;
}

/// ∫_{S²} g(m) dm in a frame around `axis`, split at the equator of that
/// frame. Exact for integrands that only depend on polynomials of m·axis on
/// each hemisphere when `azimuths` = 1.
template <class G>
double sphere_quadrature(const G &g, const Vec3 &axis, int panels, int azimuths) {
    const Frame frame(axis);
    auto ring = [&](double mu) {
        const double r = std::sqrt(std::max(0.0, 1.0 - mu * mu));
        double sum = 0.0;
        for (int k = 0; k < azimuths; ++k) {
            const double phi = 2.0 * kPi * (k + 0.5) / azimuths;
            sum += g(frame.to_world(Vec3(r * std::cos(phi), r * std::sin(phi), mu)));
        }
        return 2.0 * kPi * sum / azimuths;
    };
    return gauss_legendre(ring, -1.0, 0.0, panels) + gauss_legendre(ring, 0.0, 1.0, panels);
}

template <class Body>
CheckResult timed(std::string name, Body &&body) {
    const auto start = std::chrono::steady_clock::now();
    CheckResult result;
    result.name = std::move(name);
    body(result);
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

ImplicitField sphere_field(double scale, SymmetricDistribution dist = SymmetricDistribution()) {
    return ImplicitField(std::make_shared<SphereField>(Vec3::Zero(), 1.0), ScaleField(scale), dist);
}

/// Point near the unit sphere at radius in [0.8, 1.2].
Vec3 near_surface_point(Rng &rng) {
    const Vec3 dir = random_direction(rng);
    return dir * (0.8 + 0.4 * rng.uniform());
}

double max_abs_z(const CheckResult &r) {
    double z = 0.0;
    for (const CheckRow &row : r.rows)
        if (row.tolerance > 0.0) z = std::max(z, 3.0 * row.residual / row.tolerance);
    return z;
}

std::size_t failures(const CheckResult &r) {
    return static_cast<std::size_t>(std::count_if(r.rows.begin(), r.rows.end(), [](const CheckRow &row) {
        return !row.pass;
    }));
}

}  // namespace

std::vector<NamedScene> standard_scenes() {
    std::vector<NamedScene> scenes;
    const auto through = [](const Vec3 &from, const Vec3 &to) {
        return Ray(from, to - from, 0.0, (to - from).norm());
    };

    scenes.push_back({"sphere", sphere_field(4.0),
                      {through(Vec3(-2.0, 0.3, 0.0), Vec3(2.0, 0.3, 0.0)),
                       through(Vec3(0.5, -2.0, 1.5), Vec3(-0.2, 0.1, -2.0))}});

    scenes.push_back(
        {"box",
         ImplicitField(std::make_shared<BoxField>(Vec3::Zero(), Vec3(0.8, 0.5, 0.6), 0.1), ScaleField(5.0),
                       SymmetricDistribution(SymmetricDistribution::Kind::Laplace)),
         {through(Vec3(-2.0, 0.1, 0.2), Vec3(2.0, -0.1, 0.1)),
          through(Vec3(1.5, 1.5, 1.5), Vec3(-1.5, -1.0, -1.2))}});

    {
        std::vector<SceneFieldPtr> parts{std::make_shared<SphereField>(Vec3(-0.5, 0.0, 0.0), 0.6),
                                         std::make_shared<SphereField>(Vec3(0.5, 0.1, 0.0), 0.5)};
        scenes.push_back({"smooth_union",
                          ImplicitField(std::make_shared<SmoothUnionField>(std::move(parts), 0.3), ScaleField(4.0),
                                        SymmetricDistribution(SymmetricDistribution::Kind::Logistic)),
                          {through(Vec3(-2.0, 0.05, 0.0), Vec3(2.0, 0.05, 0.0)),
                           through(Vec3(0.0, 2.0, 0.3), Vec3(0.1, -2.0, -0.2))}});
    }

    scenes.push_back({"linear_ramp",
                      ImplicitField(std::make_shared<LinearRampField>(Vec3::UnitZ(), 0.0), ScaleField(3.0)),
                      {through(Vec3(0.0, 0.0, 1.0), Vec3(0.0, 0.0, -1.0)),
                       through(Vec3(0.3, -0.2, 1.5), Vec3(-0.4, 0.6, -1.0))}});

    scenes.push_back(
        {"point_cloud",
         ImplicitField(std::make_shared<PointCloudField>(
                           PointCloudField::fibonacci_sphere(Vec3::Zero(), 1.0, 100), 0.25),
                       ScaleField(6.0)),
         {through(Vec3(-2.0, 0.2, 0.1), Vec3(2.0, 0.2, 0.1)),
          through(Vec3(0.3, 2.0, -0.4), Vec3(-0.2, -2.0, 0.5))}});

    scenes.push_back({"sphere_radial_scale",
                      ImplicitField(std::make_shared<SphereField>(Vec3::Zero(), 1.0),
                                    ScaleField::radial(Vec3(0.8, 0.0, 0.0), 0.7, 12.0, 3.0)),
                      {through(Vec3(-2.0, 0.1, 0.0), Vec3(2.0, 0.1, 0.0))}});
    return scenes;
}

// ---------------------------------------------------------------------------

CheckResult check_projected_area(const VerifyOptions &options) {
    return timed("projected_area", [&](CheckResult &r) {
        const NormalModel mixture(NormalModel::Kind::Mixture), sggx(NormalModel::Kind::SGGX);
        const NormalModel delta(NormalModel::Kind::Delta), uniform(NormalModel::Kind::Uniform);
        Rng pairs(options.seed, 1);
        std::uint64_t stream = 100;
        for (const double alpha : kAlphaGrid) {
            for (int i = 0; i < options.direction_pairs; ++i) {
                const Vec3 n = random_direction(pairs), omega = random_direction(pairs);
                const double c = omega.dot(n);
                const std::string label = alpha_label(alpha) + " pair=" + std::to_string(i);
                for (const NormalModel *model : {&mixture, &sggx}) {
                    Rng rng(options.seed, stream++);
                    const Estimate e = projected_area_estimate(*model, alpha, n, omega, options.sphere_samples, rng);
                    r.add(z_row(NormalModel::kind_name(model->kind()), label, e.mean,
                                model->projected_area(alpha, c), e.standard_error));
                }
                if (alpha == 0.0) {
                    Rng rng(options.seed, stream++);
                    const Estimate e = projected_area_estimate(delta, 1.0, n, omega, 16, rng);
                    r.add(abs_row("delta", "pair=" + std::to_string(i), delta.projected_area(1.0, c), std::abs(c),
                                  1e-15));
                    r.add(abs_row("delta_atom", "pair=" + std::to_string(i), e.mean, std::abs(c), 1e-15));
                    const double quad = sphere_quadrature(
                        [&](const Vec3 &m) { return std::abs(omega.dot(m)) * uniform.continuous_density(0.0, m.dot(n)); },
                        omega, 1, 1);
                    r.add(abs_row("uniform", "pair=" + std::to_string(i), uniform.projected_area(0.0, c), quad, 1e-14));
                }
            }
        }
        r.summary = "max |z| = " + format(max_abs_z(r)) + ", " + std::to_string(failures(r)) + " of " +
                    std::to_string(r.rows.size()) + " outside tolerance";
    });
}

CheckResult check_sggx_normalization(const VerifyOptions &options) {
    return timed("sggx_normalization", [&](CheckResult &r) {
        const NormalModel sggx(NormalModel::Kind::SGGX);
        Rng normals(options.seed, 2);
        std::uint64_t stream = 200000;
        for (const double alpha : kAlphaGrid) {
            const Vec3 n = random_direction(normals);
            Rng rng(options.seed, stream++);
            const Estimate e = normalization_estimate(sggx, alpha, n, options.sphere_samples, rng);
            r.add(z_row("monte_carlo", alpha_label(alpha), e.mean, 1.0, e.standard_error));
            const double quad = 2.0 * kPi *
                                (gauss_legendre([&](double mu) { return sggx.continuous_density(alpha, mu); }, -1.0,
                                                0.0, 256) +
                                 gauss_legendre([&](double mu) { return sggx.continuous_density(alpha, mu); }, 0.0,
                                                1.0, 256));
            r.add(abs_row("quadrature", alpha_label(alpha), quad, 1.0, 1e-10));
        }
        r.summary = "max |z| = " + format(max_abs_z(r));
    });
}

CheckResult check_logistic_identity(const VerifyOptions &options) {
    return timed("logistic_identity", [&](CheckResult &r) {
        const SymmetricDistribution logistic(SymmetricDistribution::Kind::Logistic);
        const double k = SymmetricDistribution::logistic_slope();
        Rng rng(options.seed, 3);
        double worst = 0.0;
        for (int i = 0; i < options.logistic_triples; ++i) {
            const double mean = -2.0 + 4.0 * rng.uniform();
            const double scale = 0.5 + 49.5 * rng.uniform();
            const double grad = 0.05 + 2.95 * rng.uniform();
            const double u = scale * mean;
            const double ratio_form = scale * logistic.pdf(u) / logistic.cdf(u) * grad;
            const double simplified = k * scale * logistic.cdf(-u) * grad;
            CheckRow row = rel_row("ratio_vs_simplified", "triple=" + std::to_string(i), ratio_form, simplified, 1e-10);
            worst = std::max(worst, row.residual);
            r.add(std::move(row));
            r.add(rel_row("library", "triple=" + std::to_string(i), logistic_density(scale, mean, grad), simplified,
                          1e-10));
        }
        r.summary = "max relative difference " + format(worst);
    });
}

CheckResult check_markov_transmittance(const VerifyOptions &options) {
    return timed("markov_transmittance", [&](CheckResult &r) {
        const NormalModel mixture(NormalModel::Kind::Mixture, AnisotropyField(0.5));
        struct Case {
            std::string name;
            AttenuationModel model;
            Ray ray;
        };
        const std::vector<Case> cases{
            {"linear_ramp",
             AttenuationModel::ours(
                 ImplicitField(std::make_shared<LinearRampField>(Vec3::UnitZ(), 0.0), ScaleField(3.0)), mixture),
             Ray(Vec3(0.0, 0.0, 1.0), Vec3(0.2, 0.0, -1.0), 0.0, 2.0)},
            {"sphere", AttenuationModel::ours(sphere_field(4.0), mixture),
             Ray(Vec3(-2.0, 0.3, 0.0), Vec3::UnitX(), 0.0, 2.6)},
        };
        constexpr int kCheckpoints = 20;
        constexpr int kQuadrature = 20000;
        std::uint64_t seed = options.seed + 4;
        std::size_t violations = 0;
        for (const Case &c : cases) {
            const FirstJumpSample sample =
                simulate_indicator(TransitionRates::from_model(c.model), c.ray, options.markov_trials, seed++);
            violations += sample.majorant_violations;
            const double n = static_cast<double>(sample.trials());
            for (int k = 1; k <= kCheckpoints; ++k) {
                const double t = c.ray.length() * k / kCheckpoints;
                const double analytic = transmittance(c.model, c.ray, t, kQuadrature);
                const double empirical = 1.0 - sample.empirical_cdf(t);
                const double se = std::sqrt(analytic * (1.0 - analytic) / n);
                r.add(z_row("survival", c.name + " t=" + format(t), empirical, analytic, se));
            }
        }
        r.add(abs_row("majorant_violations", "all", static_cast<double>(violations), 0.0, 0.0));
        r.summary = "max |z| = " + format(max_abs_z(r)) + ", " + std::to_string(violations) + " majorant violations";
    });
}

CheckResult check_reversibility(const VerifyOptions &) {
    return timed("reversibility", [&](CheckResult &r) {
        double worst = 0.0;
        for (const NamedScene &scene : standard_scenes()) {
            const TransitionRates rates = TransitionRates::minimal(scene.field);
            for (std::size_t i = 0; i < scene.rays.size(); ++i) {
                const Ray &ray = scene.rays[i];
                const std::string label = scene.name + " ray=" + std::to_string(i);
                const double v0 = scene.field.vacancy(ray.at(ray.t_near));
                const VacancyProfile forward = integrate_vacancy_ode(rates, ray, v0, false);
                const VacancyProfile backward = integrate_vacancy_ode(rates, ray, forward.final_value(), true);
                CheckRow trip = abs_row("round_trip", label, backward.final_value(), v0, 1e-6);
                worst = std::max(worst, trip.residual);
                r.add(std::move(trip));
                double drift = 0.0;
                for (std::size_t j = 0; j < forward.t.size(); ++j)
                    drift = std::max(drift, std::abs(forward.vacancy[j] - scene.field.vacancy(ray.at(forward.t[j]))));
                r.add(abs_row("forward_vs_vacancy", label, drift, 0.0, 1e-4));
            }
        }
        r.summary = "max round-trip error " + format(worst);
    });
}

CheckResult check_reciprocity(const VerifyOptions &options) {
    return timed("reciprocity", [&](CheckResult &r) {
        const ImplicitField field = sphere_field(4.0);
        Rng rng(options.seed, 6);
        std::vector<std::pair<Vec3, Vec3>> probes;
        for (int i = 0; i < options.reciprocity_probes; ++i) {
            const Vec3 x = near_surface_point(rng);
            probes.emplace_back(x, random_direction(rng));
        }
        using K = NormalModel::Kind;
        const std::vector<std::pair<std::string, AttenuationModel>> reciprocal{
            {"ours_delta", AttenuationModel::ours(field, NormalModel(K::Delta))},
            {"ours_uniform", AttenuationModel::ours(field, NormalModel(K::Uniform))},
            {"ours_mixture", AttenuationModel::ours(field, NormalModel(K::Mixture, AnisotropyField(0.5)))},
            {"ours_mixture_adaptive",
             AttenuationModel::ours(field, NormalModel(K::Mixture, AnisotropyField::surface_adaptive(0.1)))},
            {"ours_sggx", AttenuationModel::ours(field, NormalModel(K::SGGX, AnisotropyField(0.5)))},
            {"ours_vmf", AttenuationModel::ours(field, NormalModel(K::VMF, AnisotropyField(0.5)))},
            {"volsdf", AttenuationModel::volsdf(field)},
            {"cosine_annealed", AttenuationModel::cosine_annealed(field, 0.5)},
        };
        std::string failing;
        for (const auto &[name, model] : reciprocal) {
            CheckRow row = abs_row("gap", name, reciprocity_gap(model, probes), 0.0, 1e-12);
            if (!row.pass) failing += " " + name;
            r.add(std::move(row));
        }
        const double neus = reciprocity_gap(AttenuationModel::neus(field), probes);
        r.add({"gap_exceeds", "neus", neus, 0.01, neus > 0.01 ? 0.0 : 0.01 - neus, 0.0, neus > 0.01});
        r.summary = "neus gap " + format(neus) + (failing.empty() ? "" : ", nonzero gap for" + failing);
    });
}

CheckResult check_quadrature(const VerifyOptions &options) {
    return timed("quadrature", [&](CheckResult &r) {
        const NormalModel mixture(NormalModel::Kind::Mixture, AnisotropyField(0.5));
        Rng rng(options.seed, 7);
        double worst = 0.0;
        for (const NamedScene &scene : standard_scenes()) {
            const AttenuationModel model = AttenuationModel::ours(scene.field, mixture);
            for (std::size_t i = 0; i < scene.rays.size(); ++i) {
                const Ray &ray = scene.rays[i];
                for (int trial = 0; trial < 10; ++trial) {
                    const SampleComb comb = trial % 2 == 0
                                                ? sample_comb(scene.field, ray, 64, 48, rng)
                                                : SampleComb::equidistant(ray.t_near, ray.t_far, 16 + 8 * trial,
                                                                          rng.uniform());
                    const Discretization disc = discretize(model, ray, comb);
                    const std::string label =
                        scene.name + " ray=" + std::to_string(i) + " comb=" + std::to_string(trial);
                    double product = 1.0;
                    for (std::size_t n = 0; n < comb.size(); ++n)
                        product *= std::exp(-disc.sigma[n] * comb.segment_length(n));
                    CheckRow unity = abs_row("partition_of_unity", label, disc.total_mass() + product, 1.0, 1e-13);
                    worst = std::max(worst, unity.residual);
                    r.add(std::move(unity));
                }
            }
        }

        const AttenuationModel model = AttenuationModel::ours(sphere_field(4.0), mixture);
        const Ray ray(Vec3(-3.0, 0.2, 0.1), Vec3::UnitX(), 0.0, 6.0);
        const std::vector<int> resolutions{64, 128, 256, 512, 1024, 2048};
        const RefinementStudy study = refinement_study(model, ray, resolutions, 1 << 17);
        for (std::size_t i = 0; i < resolutions.size(); ++i) {
            const std::string label = "N=" + std::to_string(resolutions[i]);
            r.add({"depth_sigma", label, study.depth_sigma[i], study.reference, study.error_sigma[i], 0.0, true});
            r.add({"depth_fixed", label, study.depth_fixed[i], study.reference, study.error_fixed[i], 0.0, true});
        }
        const double order = study.observed_order_sigma();
        r.add({"observed_order_sigma", "least_squares", order, 1.0, std::max(0.0, 0.9 - order), 0.0, order >= 0.9});
        const double coarse_fixed = study.error_fixed.front(), fine_fixed = study.error_fixed.back();
        const double fine_sigma = study.error_sigma.back();
        r.add({"fixed_occupancy_stalls", "finest/coarsest", fine_fixed / coarse_fixed, 0.5,
               std::max(0.0, 0.5 - fine_fixed / coarse_fixed), 0.0, fine_fixed >= 0.5 * coarse_fixed});
        r.add({"fixed_vs_sigma_error", "finest", fine_fixed / std::max(fine_sigma, 1e-300), 10.0,
               std::max(0.0, 10.0 * fine_sigma - fine_fixed), 0.0, fine_fixed > 10.0 * fine_sigma});
        r.summary = "max partition residual " + format(worst) + ", observed order " + format(order) +
                    ", fixed-occupancy error " + format(coarse_fixed) + " -> " + format(fine_fixed);
    });
}

CheckResult check_phase_reciprocity(const VerifyOptions &options) {
    return timed("phase_reciprocity", [&](CheckResult &r) {
        const ImplicitField field = sphere_field(4.0);
        using K = NormalModel::Kind;
        const std::vector<std::pair<std::string, NormalModel>> models{
            {"uniform", NormalModel(K::Uniform)},
            {"mixture", NormalModel(K::Mixture, AnisotropyField(0.7))},
        };
        Rng pairs(options.seed, 8);
        std::uint64_t stream = 300000;
        for (const auto &[name, normals] : models) {
            const AttenuationModel model = AttenuationModel::ours(field, normals);
            const PhaseFunction phase = PhaseFunction::for_model(model);
            for (int i = 0; i < options.direction_pairs; ++i) {
                const Vec3 x = near_surface_point(pairs);
                const Vec3 wo = random_direction(pairs), wi = random_direction(pairs);
                const std::string label = name + " pair=" + std::to_string(i);
                const double sigma_forward = model.sigma(x, wo), sigma_reverse = model.sigma(x, -wi);
                Rng rf(options.seed, stream++), rr(options.seed, stream++);
                const Estimate forward = phase.phase(x, wo, wi, options.sphere_samples, rf);
                const Estimate reverse = phase.phase(x, -wi, -wo, options.sphere_samples, rr);
                const double se = std::hypot(sigma_forward * forward.standard_error,
                                             sigma_reverse * reverse.standard_error);
                r.add(z_row("monte_carlo", label, sigma_forward * forward.mean, sigma_reverse * reverse.mean, se));
                const double exact_forward = sigma_forward * *phase.phase_closed_form(x, wo, wi);
                const double exact_reverse = sigma_reverse * *phase.phase_closed_form(x, -wi, -wo);
                r.add(rel_row("closed_form", label, exact_forward, exact_reverse, 1e-12));
            }
        }
        r.summary = "max |z| = " + format(max_abs_z(r));
    });
}

CheckResult check_render_reciprocity(const VerifyOptions &options) {
    return timed("render_reciprocity", [&](CheckResult &r) {
        if (options.render_scene.empty()) throw ConfigError("render check needs a scene file");
        SceneDescription desc = load_scene(options.render_scene);
        if (!desc.camera) throw ConfigError("render scene has no camera");
        const Camera &cam = *desc.camera;
        desc.camera = Camera(cam.position(), cam.look_at(), cam.up(), cam.fov_degrees(), options.render_size,
                             options.render_size);
        desc.render.spp = options.render_spp;
        desc.model = AttenuationModel::point_cloud_ours(desc.model.field());
        RenderScene scene = desc.render_scene();
        const ImplicitField baked = scene.model.field();

        double errors[2] = {0.0, 0.0};
        const std::array<std::pair<const char *, AttenuationModel>, 2> variants{{
            {"point_cloud_ours", AttenuationModel::point_cloud_ours(baked)},
            {"point_cloud_neus", AttenuationModel::point_cloud_neus(baked)},
        }};
        for (std::size_t v = 0; v < variants.size(); ++v) {
            scene.model = variants[v].second;
            const Image path = path_trace(scene, desc.render);
            const Image light = light_trace(scene, desc.render);
            errors[v] = rmse(path, light);
            r.add({"rmse", variants[v].first, errors[v], path.mean(), 0.0, 0.0, true});
        }
        const double ratio = errors[1] / std::max(errors[0], 1e-300);
        r.add({"rmse_ratio", "neus/ours", ratio, 5.0, std::max(0.0, 5.0 - ratio), 0.0, ratio >= 5.0});
        r.summary = "rmse ours " + format(errors[0]) + ", neus " + format(errors[1]) + ", ratio " + format(ratio);
    });
}

CheckResult check_anisotropy_curves(const VerifyOptions &) {
    return timed("anisotropy_curves", [&](CheckResult &r) {
        const AttenuationModel model = AttenuationModel::ours(
            sphere_field(4.0), NormalModel(NormalModel::Kind::Mixture, AnisotropyField::surface_adaptive(0.01)));
        const AnisotropyCurves curves = anisotropy_curves(model, Bounds{Vec3::Zero(), 1.5}, 181);
        double worst_surface = 0.0, worst_interior = 0.0;
        for (std::size_t i = 0; i < curves.theta.size(); ++i) {
            const double a = curves.alpha_surface;
            const double expected = a * std::abs(std::cos(curves.theta[i])) + 0.5 * (1.0 - a);
            worst_surface = std::max(worst_surface, std::abs(curves.surface[i] - expected));
            worst_interior = std::max(worst_interior, std::abs(curves.interior[i] - 0.5));
        }
        r.add(abs_row("surface_curve", "max over theta", worst_surface, 0.0, 1e-12));
        r.add(abs_row("interior_curve", "max over theta", worst_interior, 0.0, 1e-12));
        r.add({"alpha", "surface", curves.alpha_surface, 1.0, 1.0 - curves.alpha_surface, 0.0, true});
        r.add({"alpha", "interior", curves.alpha_interior, 0.0, curves.alpha_interior, 0.0, true});
        r.summary = "surface deviation " + format(worst_surface) + ", interior deviation " + format(worst_interior);
    });
}

std::vector<CheckResult> run_verification(const VerifyOptions &options) {
    std::vector<CheckResult> results;
    results.push_back(check_projected_area(options));
    results.push_back(check_sggx_normalization(options));
    results.push_back(check_logistic_identity(options));
    results.push_back(check_markov_transmittance(options));
    results.push_back(check_reversibility(options));
    results.push_back(check_reciprocity(options));
    results.push_back(check_quadrature(options));
    results.push_back(check_phase_reciprocity(options));
    if (options.include_render) results.push_back(check_render_reciprocity(options));
    results.push_back(check_anisotropy_curves(options));
    return results;
}

void write_residuals_csv(std::ostream &out, const std::vector<CheckResult> &results) {
    out << "check,case,value,reference,residual,tolerance,pass\n" << std::setprecision(17);
    for (const CheckResult &result : results)
        for (const CheckRow &row : result.rows)
            out << result.name << '/' << row.check << ',' << row.case_name << ',' << row.value << ','
                << row.reference << ',' << row.residual << ',' << row.tolerance << ',' << (row.pass ? 1 : 0)
                << '\n';
}

// ---------------------------------------------------------------------------

AnisotropyCurves anisotropy_curves(const AttenuationModel &model, const Bounds &bounds, int count) {
    if (count < 2) throw ConfigError("anisotropy curves need at least two angles");
    const ImplicitField &field = model.field();
    const Vec3 direction = Vec3(0.3, 0.5, 0.8).normalized();
    const Vec3 outer = bounds.center + bounds.radius * direction;
    if (!(field.mean(outer) > 0.0 && field.mean(bounds.center) < 0.0))
        throw ConfigError("anisotropy curves need f > 0 on the bounds and f < 0 at their centre");

    double lo = 0.0, hi = 1.0;  // fraction from the centre towards `outer`
    for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (field.mean(bounds.center + mid * (outer - bounds.center)) < 0.0 ? lo : hi) = mid;
    }
    AnisotropyCurves curves;
    curves.surface_point = bounds.center + lo * (outer - bounds.center);
    curves.interior_point = 0.5 * (bounds.center + curves.surface_point);
    curves.alpha_surface = model.normal_model().alpha(field.mean(curves.surface_point));
    curves.alpha_interior = model.normal_model().alpha(field.mean(curves.interior_point));

    const auto sweep = [&](const Vec3 &x, std::vector<double> &out) {
        const Vec3 n = field.normal(x);
        const Vec3 tangent = Frame(n).s;
        for (int i = 0; i < count; ++i) {
            const double theta = kPi * i / (count - 1);
            out.push_back(model.directional_factor(x, std::cos(theta) * n + std::sin(theta) * tangent));
        }
    };
    for (int i = 0; i < count; ++i) curves.theta.push_back(kPi * i / (count - 1));
    sweep(curves.surface_point, curves.surface);
    sweep(curves.interior_point, curves.interior);
    return curves;
}

void write_anisotropy_csv(std::ostream &out, const AnisotropyCurves &curves) {
    out << "theta,sigma_proj_surface,sigma_proj_interior\n" << std::setprecision(17);
    for (std::size_t i = 0; i < curves.theta.size(); ++i)
        out << curves.theta[i] << ',' << curves.surface[i] << ',' << curves.interior[i] << '\n';
}

}  // namespace stochsolid
