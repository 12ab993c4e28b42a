#pragma once

#include "stochsolid/attenuation.hpp"
#include "stochsolid/implicit_field.hpp"
#include "stochsolid/normal_distribution.hpp"
#include "stochsolid/rng.hpp"
#include "stochsolid/transport.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace stochsolid {

/// Transition rates of the binary indicator process along a ray: σ₀₁ for a
/// vacant point becoming occupied and σ₁₀ for the reverse jump.
class TransitionRates {
public:
    /// Minimal reversible rates derived from the vacancy:
    /// σ₀₁ = |ω·∇V| / V and σ₁₀ = 2 max(0, ω·∇V) / (1 − V).
    static TransitionRates minimal(ImplicitField field);

    /// σ₀₁ taken from an attenuation model; σ₁₀ solves the local Kolmogorov
    /// equation ω·∇V = −V σ₀₁ + (1 − V) σ₁₀ and is clipped at zero.
    static TransitionRates from_model(AttenuationModel model);

    static TransitionRates constant(double sigma01, double sigma10 = 0.0);

    double sigma01(const Vec3 &x, const Vec3 &omega) const;
    double sigma10(const Vec3 &x, const Vec3 &omega) const;

    /// Generator [[−σ₀₁, σ₀₁], [σ₁₀, −σ₁₀]] over states (vacant, occupied).
    Eigen::Matrix2d generator(const Vec3 &x, const Vec3 &omega) const;

private:
    enum class Kind { Minimal, Model, Constant };
    Kind m_kind = Kind::Constant;
    std::optional<ImplicitField> m_field;
    std::optional<AttenuationModel> m_model;
    double m_sigma01 = 0.0;
    double m_sigma10 = 0.0;
};

/// First 0→1 jump distances (past t_near) of simulated indicator processes.
/// Censored trials, which never jump before t_far, are stored as +infinity.
struct FirstJumpSample {
    std::vector<double> times;
    double length = 0.0;
    /// Proposals where the local rate exceeded its segment majorant.
    std::size_t majorant_violations = 0;

    std::size_t trials() const { return times.size(); }
    double empirical_cdf(double t) const;
    /// Binomial standard error sqrt(F (1 − F) / n) of the empirical CDF.
    double standard_error(double t) const;
    /// Mean of the uncensored jump distances.
    double mean_uncensored() const;
    /// Kolmogorov-Smirnov distance to a reference CDF over the uncensored range.
    double ks_statistic(const std::function<double(double)> &cdf) const;
};

/// Simulates the indicator process starting vacant at t_near by thinning
/// against per-segment majorants min(σ_max, 1.5 × max σ₀₁ at the segment's
/// endpoints and midpoint). Trial i uses the stream Rng(seed, i).
FirstJumpSample simulate_indicator(const TransitionRates &rates, const Ray &ray, std::size_t trials,
                                   std::uint64_t seed, int segments = 256);

/// Vacancy along a ray from RK4 integration of the local Kolmogorov equation.
struct VacancyProfile {
    std::vector<double> t;  // absolute parameters of the input ray
    std::vector<double> vacancy;
    std::size_t clamped_steps = 0;

    double final_value() const { return vacancy.back(); }
};

/// Integrates dV/dt = −V σ₀₁ + (1 − V) σ₁₀ from t_near to t_far, or, with
/// `reverse`, from t_far back to t_near using the rates of direction −ω.
/// V is clamped to [ε, 1 − ε] with ε = 1e-12; clamped steps are counted.
VacancyProfile integrate_vacancy_ode(const TransitionRates &rates, const Ray &ray, double v0, bool reverse,
                                     double steps_per_unit = 1e4);

/// Monte Carlo estimate with its standard error.
struct Estimate {
    double mean = 0.0;
    double standard_error = 0.0;
};

/// ∫_{S²} g(m) dm from uniform directions with weight 4π.
Estimate spherical_integral(const std::function<double(const Vec3 &)> &g, std::size_t samples, Rng &rng);

/// ∫ |ω·m| D(m) dm; any point mass on ±n is integrated exactly.
Estimate projected_area_estimate(const NormalModel &model, double alpha, const Vec3 &normal,
                                 const Vec3 &omega, std::size_t samples, Rng &rng);

/// ∫ D(m) dm; any point mass on ±n is integrated exactly.
Estimate normalization_estimate(const NormalModel &model, double alpha, const Vec3 &normal,
                                std::size_t samples, Rng &rng);

}  // namespace stochsolid
