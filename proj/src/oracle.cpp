#include "stochsolid/oracle.hpp"

#include "stochsolid/errors.hpp"
#include "stochsolid/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace stochsolid {

namespace {

constexpr double kEps = AttenuationModel::kVacancyFloor;

}  // namespace

TransitionRates TransitionRates::minimal(ImplicitField field) {
    TransitionRates r;
    r.m_kind = Kind::Minimal;
    r.m_field = std::move(field);
    return r;
}

TransitionRates TransitionRates::from_model(AttenuationModel model) {
    TransitionRates r;
    if (!model.has_field()) {
        r.m_kind = Kind::Constant;
        r.m_sigma01 = model.sigma(Vec3::Zero(), Vec3::UnitZ());
        return r;
    }
    r.m_kind = Kind::Model;
    r.m_field = model.field();
    r.m_model = std::move(model);
    return r;
}

TransitionRates TransitionRates::constant(double sigma01, double sigma10) {
    if (!(sigma01 >= 0.0) || !(sigma10 >= 0.0)) throw ConfigError("transition rates must be nonnegative");
    TransitionRates r;
    r.m_kind = Kind::Constant;
    r.m_sigma01 = sigma01;
    r.m_sigma10 = sigma10;
    return r;
}

double TransitionRates::sigma01(const Vec3 &x, const Vec3 &omega) const {
    switch (m_kind) {
    case Kind::Constant: return m_sigma01;
    case Kind::Model: return m_model->sigma(x, omega);
    case Kind::Minimal: {
        const FieldSample s = FieldSample::at(*m_field, x);
        return std::min(std::abs(omega.dot(s.grad_vacancy)) / std::max(s.vacancy, kEps),
                        AttenuationModel::kSigmaMax);
    }
    }
    return 0.0;
}

double TransitionRates::sigma10(const Vec3 &x, const Vec3 &omega) const {
    switch (m_kind) {
    case Kind::Constant: return m_sigma10;
    case Kind::Model: {
        const FieldSample s = FieldSample::at(*m_field, x);
        const double numerator = omega.dot(s.grad_vacancy) + s.vacancy * m_model->sigma(x, omega);
        return std::max(0.0, numerator / std::max(1.0 - s.vacancy, kEps));
    }
    case Kind::Minimal: {
        const FieldSample s = FieldSample::at(*m_field, x);
        return 2.0 * std::max(0.0, omega.dot(s.grad_vacancy)) / std::max(1.0 - s.vacancy, kEps);
    }
    }
    return 0.0;
}

Eigen::Matrix2d TransitionRates::generator(const Vec3 &x, const Vec3 &omega) const {
    const double a = sigma01(x, omega), b = sigma10(x, omega);
    Eigen::Matrix2d g;
    g << -a, a, b, -b;
    return g;
}

// ---------------------------------------------------------------------------

double FirstJumpSample::empirical_cdf(double t) const {
    if (times.empty()) return 0.0;
    const auto hits = std::count_if(times.begin(), times.end(), [t](double s) { return s <= t; });
    return static_cast<double>(hits) / static_cast<double>(times.size());
}

double FirstJumpSample::standard_error(double t) const {
    const double f = empirical_cdf(t);
    return std::sqrt(f * (1.0 - f) / static_cast<double>(times.size()));
}

double FirstJumpSample::mean_uncensored() const {
    double sum = 0.0;
    std::size_t count = 0;
    for (const double s : times)
        if (std::isfinite(s)) {
            sum += s;
            ++count;
        }
    return count ? sum / static_cast<double>(count) : std::numeric_limits<double>::quiet_NaN();
}

double FirstJumpSample::ks_statistic(const std::function<double(double)> &cdf) const {
    std::vector<double> sorted;
    sorted.reserve(times.size());
    for (const double s : times)
        if (std::isfinite(s)) sorted.push_back(s);
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(times.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = cdf(sorted[i]);
        d = std::max({d, std::abs(static_cast<double>(i + 1) / n - f), std::abs(static_cast<double>(i) / n - f)});
    }
    return d;
}

FirstJumpSample simulate_indicator(const TransitionRates &rates, const Ray &ray, std::size_t trials,
                                   std::uint64_t seed, int segments) {
    if (trials == 0) throw ConfigError("simulation needs at least one trial");
    if (segments < 1) throw ConfigError("simulation needs at least one majorant segment");
    const double width = ray.length() / segments;
    std::vector<double> majorant(static_cast<std::size_t>(segments));
    for (int k = 0; k < segments; ++k) {
        double peak = 0.0;
        for (const double f : {0.0, 0.5, 1.0})
            peak = std::max(peak, rates.sigma01(ray.at(ray.t_near + (k + f) * width), ray.direction));
        majorant[static_cast<std::size_t>(k)] = std::min(AttenuationModel::kSigmaMax, 1.5 * peak);
    }

    FirstJumpSample out;
    out.length = ray.length();
    out.times.assign(trials, std::numeric_limits<double>::infinity());
    std::vector<std::size_t> violations(trials, 0);
    parallel_for(trials, [&](std::size_t trial) {
        Rng rng(seed, trial);
        double t = 0.0;
        for (int k = 0; k < segments; ++k) {
            const double bound = majorant[static_cast<std::size_t>(k)];
            const double end = (k + 1) * width;
            if (bound <= 0.0) {
                t = end;
                continue;
            }
            while (true) {
                t += -std::log1p(-rng.uniform()) / bound;
                if (t >= end) {
                    t = end;
                    break;
                }
                const double rate = rates.sigma01(ray.at(ray.t_near + t), ray.direction);
                if (rate > bound) ++violations[trial];
                if (rng.uniform() * bound < rate) {
                    out.times[trial] = t;
                    return;
                }
            }
        }
    });
    for (const auto v : violations) out.majorant_violations += v;
    return out;
}

// ---------------------------------------------------------------------------

VacancyProfile integrate_vacancy_ode(const TransitionRates &rates, const Ray &ray, double v0, bool reverse,
                                     double steps_per_unit) {
    if (!(v0 > 0.0 && v0 < 1.0)) throw ConfigError("initial vacancy must lie in (0, 1)");
    const auto steps = std::max<long>(1, static_cast<long>(std::ceil(ray.length() * steps_per_unit)));
    const double h = ray.length() / static_cast<double>(steps);
    const Vec3 omega = reverse ? Vec3(-ray.direction) : ray.direction;
    const double start = reverse ? ray.t_far : ray.t_near;
    const double sign = reverse ? -1.0 : 1.0;

    auto rhs = [&](double u, double v) {
        const Vec3 x = ray.at(start + sign * u);
        return -v * rates.sigma01(x, omega) + (1.0 - v) * rates.sigma10(x, omega);
    };

    VacancyProfile profile;
    profile.t.reserve(static_cast<std::size_t>(steps) + 1);
    profile.vacancy.reserve(static_cast<std::size_t>(steps) + 1);
    double v = v0;
    profile.t.push_back(start);
    profile.vacancy.push_back(v);
    for (long i = 0; i < steps; ++i) {
        const double u = static_cast<double>(i) * h;
        const double k1 = rhs(u, v);
        const double k2 = rhs(u + 0.5 * h, v + 0.5 * h * k1);
        const double k3 = rhs(u + 0.5 * h, v + 0.5 * h * k2);
        const double k4 = rhs(u + h, v + h * k3);
        v += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (v < kEps || v > 1.0 - kEps) {
            v = std::clamp(v, kEps, 1.0 - kEps);
            ++profile.clamped_steps;
        }
        profile.t.push_back(start + sign * static_cast<double>(i + 1) * h);
        profile.vacancy.push_back(v);
    }
    return profile;
}

// ---------------------------------------------------------------------------

Estimate spherical_integral(const std::function<double(const Vec3 &)> &g, std::size_t samples, Rng &rng) {
    if (samples == 0) throw ConfigError("spherical integral needs at least one sample");
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        const double u1 = rng.uniform(), u2 = rng.uniform();
        const double value = kFourPi * g(uniform_sphere(u1, u2));
        sum += value;
        sum_sq += value * value;
    }
    const double n = static_cast<double>(samples);
    const double mean = sum / n;
    const double variance = std::max(0.0, sum_sq / n - mean * mean);
    return {mean, std::sqrt(variance / std::max(1.0, n - 1.0))};
}

Estimate projected_area_estimate(const NormalModel &model, double alpha, const Vec3 &normal,
                                 const Vec3 &omega, std::size_t samples, Rng &rng) {
    Estimate e = spherical_integral(
        [&](const Vec3 &m) { return std::abs(omega.dot(m)) * model.continuous_density(alpha, m.dot(normal)); },
        samples, rng);
    e.mean += model.atom_weight(alpha) * std::abs(omega.dot(normal));
    return e;
}

Estimate normalization_estimate(const NormalModel &model, double alpha, const Vec3 &normal,
                                std::size_t samples, Rng &rng) {
    Estimate e = spherical_integral(
        [&](const Vec3 &m) { return model.continuous_density(alpha, m.dot(normal)); }, samples, rng);
    e.mean += model.atom_weight(alpha);
    return e;
}

}  // namespace stochsolid
