#include "stochsolid/transport.hpp"

#include "stochsolid/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace stochsolid {

Ray::Ray(Vec3 origin_, Vec3 direction_, double t_near_, double t_far_)
    : origin(std::move(origin_)), direction(std::move(direction_)), t_near(t_near_), t_far(t_far_) {
    const double len = direction.norm();
    if (!(len > 0.0)) throw ConfigError("ray direction must be nonzero");
    direction /= len;
    if (!(t_near >= 0.0) || !(t_far > t_near)) throw ConfigError("ray bounds must satisfy 0 <= t_near < t_far");
}

Ray Ray::reversed() const { return Ray(at(t_far), -direction, 0.0, length()); }

std::optional<Ray> clip_to_sphere(const Ray &ray, const Vec3 &center, double radius) {
    const Vec3 oc = ray.origin - center;
    const double b = oc.dot(ray.direction);
    const double c = oc.squaredNorm() - radius * radius;
    const double disc = b * b - c;
    if (disc <= 0.0) return std::nullopt;
    const double root = std::sqrt(disc);
    const double lo = std::max(ray.t_near, -b - root);
    const double hi = std::min(ray.t_far, -b + root);
    if (!(hi > lo)) return std::nullopt;
    Ray out = ray;
    out.t_near = lo;
    out.t_far = hi;
    return out;
}

// ---------------------------------------------------------------------------

SampleComb SampleComb::from_samples(std::vector<double> samples, double t_near, double t_far) {
    SampleComb comb;
    comb.samples = std::move(samples);
    comb.bounds.reserve(comb.samples.size() + 1);
    comb.bounds.push_back(t_near);
    for (std::size_t i = 1; i < comb.samples.size(); ++i)
        comb.bounds.push_back(0.5 * (comb.samples[i - 1] + comb.samples[i]));
    comb.bounds.push_back(t_far);
    return comb;
}

SampleComb SampleComb::equidistant(double t_near, double t_far, int count, double offset) {
    if (count < 1) throw ConfigError("comb needs at least one sample");
    const double step = (t_far - t_near) / count;
    std::vector<double> samples(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) samples[static_cast<std::size_t>(i)] = t_near + (i + offset) * step;
    return from_samples(std::move(samples), t_near, t_far);
}

double Discretization::expected_depth(const SampleComb &comb) const {
    double depth = 0.0;
    for (std::size_t n = 0; n < mass.size(); ++n) depth += mass[n] * comb.samples[n];
    return depth;
}

double Discretization::total_mass() const { return std::accumulate(mass.begin(), mass.end(), 0.0); }

// ---------------------------------------------------------------------------

double transmittance(const AttenuationModel &model, const Ray &ray, double t, int n_quad) {
    if (n_quad < 2) throw ConfigError("transmittance needs at least two quadrature cells");
    if (t <= 0.0) return 1.0;
    const double h = t / n_quad;
    double optical_depth = 0.0;
    for (int i = 0; i < n_quad; ++i)
        optical_depth += model.sigma(ray.at(ray.t_near + (i + 0.5) * h), ray.direction);
    return std::exp(-optical_depth * h);
}

double free_flight_pdf(const AttenuationModel &model, const Ray &ray, double t, int n_quad) {
    return model.sigma(ray.at(ray.t_near + t), ray.direction) * transmittance(model, ray, t, n_quad);
}

namespace {

Discretization accumulate(std::vector<double> sigma, std::vector<double> occupancy) {
    Discretization d;
    const std::size_t n = occupancy.size();
    d.sigma = std::move(sigma);
    d.occupancy = std::move(occupancy);
    d.vacancy.resize(n);
    d.transmittance.resize(n);
    d.mass.resize(n);
    double running = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        d.vacancy[i] = 1.0 - d.occupancy[i];
        d.transmittance[i] = running;
        d.mass[i] = d.occupancy[i] * running;
        running -= d.mass[i];
    }
    d.residual = running;
    return d;
}

}  // namespace

Discretization discretize(const AttenuationModel &model, const Ray &ray, const SampleComb &comb) {
    const std::size_t n = comb.size();
    std::vector<double> sigma(n), occupancy(n);
    for (std::size_t i = 0; i < n; ++i) {
        sigma[i] = model.sigma(ray.at(comb.samples[i]), ray.direction);
        occupancy[i] = -std::expm1(-sigma[i] * comb.segment_length(i));
    }
    return accumulate(std::move(sigma), std::move(occupancy));
}

Discretization discretize_fixed_occupancy(const AttenuationModel &model, const Ray &ray,
                                          const SampleComb &comb, double reference_length) {
    const std::size_t n = comb.size();
    std::vector<double> sigma(n), occupancy(n);
    for (std::size_t i = 0; i < n; ++i) {
        sigma[i] = model.sigma(ray.at(comb.samples[i]), ray.direction);
        occupancy[i] = -std::expm1(-sigma[i] * reference_length);
    }
    return accumulate(std::move(sigma), std::move(occupancy));
}

CurvePoint evaluate_discretization(const SampleComb &comb, const Discretization &disc, double t) {
    if (t <= comb.bounds.front()) return {1.0, disc.sigma.empty() ? 0.0 : disc.sigma.front()};
    if (t >= comb.bounds.back()) return {disc.residual, 0.0};
    const auto it = std::upper_bound(comb.bounds.begin(), comb.bounds.end(), t);
    const auto n = static_cast<std::size_t>(std::distance(comb.bounds.begin(), it) - 1);
    const double T = disc.transmittance[n] * std::exp(-disc.sigma[n] * (t - comb.bounds[n]));
    return {T, disc.sigma[n] * T};
}

// ---------------------------------------------------------------------------

namespace {

void append_comb(std::vector<double> &out, double lo, double hi, int count, double offset) {
    const double step = (hi - lo) / count;
    for (int i = 0; i < count; ++i) out.push_back(lo + (i + offset) * step);
}

}  // namespace

SampleComb sample_comb(const ImplicitField &field, const Ray &ray, int coarse, int fine, Rng &rng) {
    if (coarse < 3 || fine < 3) throw ConfigError("comb sample counts must be at least 3");
    const double offsets[3] = {rng.uniform(), rng.uniform(), rng.uniform()};
    const double step = ray.length() / coarse;
    auto endpoint = [&](int i) { return i == coarse ? ray.t_far : ray.t_near + i * step; };

    int bracket = -1;
    double previous = field.mean(ray.at(ray.t_near));
    if (previous <= 0.0) {
        bracket = 0;
    } else {
        for (int i = 0; i < coarse; ++i) {
            const double next = field.mean(ray.at(endpoint(i + 1)));
            if (previous > 0.0 && previous * next <= 0.0) {
                bracket = i;
                break;
            }
            previous = next;
        }
    }

    std::vector<double> samples;
    samples.reserve(static_cast<std::size_t>(fine));
    if (bracket < 0) {
        append_comb(samples, ray.t_near, ray.t_far, fine, offsets[0]);
        return SampleComb::from_samples(std::move(samples), ray.t_near, ray.t_far);
    }

    const double a = endpoint(bracket);
    const double b = endpoint(bracket + 1);
    const int third = fine / 3;
    int before = third, after = fine - 2 * third, inside = third;
    if (!(a > ray.t_near)) {
        inside += before;
        before = 0;
    }
    if (!(b < ray.t_far)) {
        inside += after;
        after = 0;
    }
    if (before > 0) append_comb(samples, ray.t_near, a, before, offsets[0]);
    append_comb(samples, a, b, inside, offsets[1]);
    if (after > 0) append_comb(samples, b, ray.t_far, after, offsets[2]);
    return SampleComb::from_samples(std::move(samples), ray.t_near, ray.t_far);
}

double render_radiance(const AttenuationModel &model, const EmissionFn &emission, const Ray &ray,
                       const SampleComb &comb) {
    const Discretization d = discretize(model, ray, comb);
    double radiance = 0.0;
    for (std::size_t n = 0; n < comb.size(); ++n) {
        if (d.mass[n] == 0.0) continue;
        radiance += d.mass[n] * emission(ray.at(comb.samples[n]), -ray.direction);
    }
    return radiance;
}

// ---------------------------------------------------------------------------

double RefinementStudy::observed_order_sigma() const {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(resolutions.size());
    for (std::size_t i = 0; i < resolutions.size(); ++i) {
        const double x = std::log(1.0 / resolutions[i]);
        const double y = std::log(error_sigma[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

RefinementStudy refinement_study(const AttenuationModel &model, const Ray &ray,
                                 const std::vector<int> &resolutions, int reference_resolution) {
    if (resolutions.empty()) throw ConfigError("refinement study needs at least one resolution");
    RefinementStudy study;
    study.resolutions = resolutions;
    const SampleComb reference = SampleComb::equidistant(ray.t_near, ray.t_far, reference_resolution, 0.5);
    study.reference = discretize(model, ray, reference).expected_depth(reference);
    const double coarse_length = ray.length() / resolutions.front();
    for (const int n : resolutions) {
        const SampleComb comb = SampleComb::equidistant(ray.t_near, ray.t_far, n, 0.5);
        const double with_sigma = discretize(model, ray, comb).expected_depth(comb);
        const double with_fixed = discretize_fixed_occupancy(model, ray, comb, coarse_length).expected_depth(comb);
        study.depth_sigma.push_back(with_sigma);
        study.depth_fixed.push_back(with_fixed);
        study.error_sigma.push_back(std::abs(with_sigma - study.reference));
        study.error_fixed.push_back(std::abs(with_fixed - study.reference));
    }
    return study;
}

}  // namespace stochsolid
