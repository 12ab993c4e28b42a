#pragma once

#include "stochsolid/attenuation.hpp"
#include "stochsolid/implicit_field.hpp"
#include "stochsolid/math.hpp"
#include "stochsolid/rng.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace stochsolid {

/// Ray r(t) = origin + t·direction restricted to [t_near, t_far].
struct Ray {
    Vec3 origin = Vec3::Zero();
    Vec3 direction = Vec3::UnitZ();
    double t_near = 0.0;
    double t_far = 1.0;

    Ray() = default;
    Ray(Vec3 origin, Vec3 direction, double t_near, double t_far);

    Vec3 at(double t) const { return origin + t * direction; }
    double length() const { return t_far - t_near; }

    /// The same segment traversed from its far end towards its near end.
    Ray reversed() const;
};

/// Clips a ray to a sphere; nullopt when they do not overlap.
std::optional<Ray> clip_to_sphere(const Ray &ray, const Vec3 &center, double radius);

/// Ordered samples s_n along a ray, each inside its own segment
/// [bounds[n], bounds[n+1]]; the segments tile [t_near, t_far]. All values are
/// absolute ray parameters.
struct SampleComb {
    std::vector<double> bounds;
    std::vector<double> samples;

    std::size_t size() const { return samples.size(); }
    double segment_length(std::size_t n) const { return bounds[n + 1] - bounds[n]; }

    /// Builds segment bounds from sorted samples: midpoints between
    /// consecutive samples, closed by the interval ends.
    static SampleComb from_samples(std::vector<double> samples, double t_near, double t_far);

    /// `count` samples at t_near + (i + offset)·Δ with Δ = (t_far − t_near)/count.
    static SampleComb equidistant(double t_near, double t_far, int count, double offset);
};

/// Per-segment quadrature quantities of a ray.
struct Discretization {
    std::vector<double> sigma;         // σ̄_n
    std::vector<double> vacancy;       // V̄_n
    std::vector<double> occupancy;     // Ō_n = 1 − V̄_n
    std::vector<double> transmittance; // T̄_n = Π_{m<n} V̄_m
    std::vector<double> mass;          // F_n = Ō_n T̄_n
    double residual = 1.0;             // Π_n V̄_n

    /// Σ_n F_n s_n for the comb the discretization was built from.
    double expected_depth(const SampleComb &comb) const;
    double total_mass() const;
};

/// Midpoint-rule transmittance over distance t past t_near.
double transmittance(const AttenuationModel &model, const Ray &ray, double t, int n_quad);

/// σ(r(t_near + t), ω) · T(t).
double free_flight_pdf(const AttenuationModel &model, const Ray &ray, double t, int n_quad);

/// Max-style quadrature with σ̄_n = σ(r(s_n), ω) and V̄_n = exp(−σ̄_n Δ_n).
Discretization discretize(const AttenuationModel &model, const Ray &ray, const SampleComb &comb);

/// Companion quadrature that assigns each segment the discrete occupancy
/// Ō_n = 1 − exp(−σ(r(s_n), ω)·reference_length), ignoring the segment's own
/// length. It agrees with discretize() only when every Δ_n equals
/// reference_length.
Discretization discretize_fixed_occupancy(const AttenuationModel &model, const Ray &ray,
                                          const SampleComb &comb, double reference_length);

/// Piecewise-exponential transmittance and free-flight density implied by a
/// discretization, at absolute ray parameter t.
struct CurvePoint {
    double transmittance;
    double free_flight_pdf;
};
CurvePoint evaluate_discretization(const SampleComb &comb, const Discretization &disc, double t);

/// Importance comb concentrated around the first sign change of f̄ along the
/// ray. f̄ is evaluated at coarse + 1 equidistant points; ⌊fine/3⌋ samples go
/// before the bracketing segment, ⌊fine/3⌋ inside it and the remainder after
/// it. Each set is an equidistant comb with its own uniform offset. Sets whose
/// interval is empty donate their samples to the bracketing segment. Without a
/// sign change a single comb of `fine` samples covers the ray.
SampleComb sample_comb(const ImplicitField &field, const Ray &ray, int coarse, int fine, Rng &rng);

/// Σ_n T̄_n (1 − V̄_n) e(r(s_n), −ω).
using EmissionFn = std::function<double(const Vec3 &x, const Vec3 &omega)>;
double render_radiance(const AttenuationModel &model, const EmissionFn &emission, const Ray &ray,
                       const SampleComb &comb);

/// Expected depth under both quadratures across comb resolutions, compared
/// against a fine σ̄ reference. Combs are equidistant with midpoint samples.
struct RefinementStudy {
    std::vector<int> resolutions;
    std::vector<double> depth_sigma;
    std::vector<double> depth_fixed;
    std::vector<double> error_sigma;
    std::vector<double> error_fixed;
    double reference = 0.0;

    /// Least-squares slope of log(error_sigma) against log(Δt).
    double observed_order_sigma() const;
};
RefinementStudy refinement_study(const AttenuationModel &model, const Ray &ray,
                                 const std::vector<int> &resolutions, int reference_resolution);

}  // namespace stochsolid
