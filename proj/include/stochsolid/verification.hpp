#pragma once

#include "stochsolid/attenuation.hpp"
#include "stochsolid/implicit_field.hpp"
#include "stochsolid/transport.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace stochsolid {

/// One compared quantity of a verification check.
struct CheckRow {
    std::string check;
    std::string case_name;
    double value = 0.0;
    double reference = 0.0;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct CheckResult {
    std::string name;
    bool passed = true;
    std::string summary;
    std::vector<CheckRow> rows;
    double seconds = 0.0;

    /// Records a row and folds its outcome into `passed`.
    void add(CheckRow row);
};

struct VerifyOptions {
    std::uint64_t seed = 20240611;
    std::size_t sphere_samples = 1'000'000;
    std::size_t markov_trials = 100'000;
    int direction_pairs = 50;
    int reciprocity_probes = 1000;
    int logistic_triples = 1000;
    bool include_render = false;
    std::filesystem::path render_scene;
    int render_spp = 256;
    int render_size = 128;
};

/// A test scene with rays that cross its surface.
struct NamedScene {
    std::string name;
    ImplicitField field;
    std::vector<Ray> rays;
};
std::vector<NamedScene> standard_scenes();

CheckResult check_projected_area(const VerifyOptions &options);
CheckResult check_sggx_normalization(const VerifyOptions &options);
CheckResult check_logistic_identity(const VerifyOptions &options);
CheckResult check_markov_transmittance(const VerifyOptions &options);
CheckResult check_reversibility(const VerifyOptions &options);
CheckResult check_reciprocity(const VerifyOptions &options);
CheckResult check_quadrature(const VerifyOptions &options);
CheckResult check_phase_reciprocity(const VerifyOptions &options);
CheckResult check_render_reciprocity(const VerifyOptions &options);
CheckResult check_anisotropy_curves(const VerifyOptions &options);

/// Runs every check in order; the render check only when enabled.
std::vector<CheckResult> run_verification(const VerifyOptions &options);

/// CSV with header check,case,value,reference,residual,tolerance,pass.
void write_residuals_csv(std::ostream &out, const std::vector<CheckResult> &results);

/// Projected area against the angle θ between ω and the normal, at a surface
/// point (f̄ = 0) and at an interior point halfway between it and the centre
/// of the scene bounds.
struct AnisotropyCurves {
    std::vector<double> theta;
    std::vector<double> surface;
    std::vector<double> interior;
    double alpha_surface = 0.0;
    double alpha_interior = 0.0;
    Vec3 surface_point = Vec3::Zero();
    Vec3 interior_point = Vec3::Zero();
};
AnisotropyCurves anisotropy_curves(const AttenuationModel &model, const Bounds &bounds, int count);

/// Writes theta,sigma_proj_surface,sigma_proj_interior.
void write_anisotropy_csv(std::ostream &out, const AnisotropyCurves &curves);

}  // namespace stochsolid
