#include "stochsolid/distribution.hpp"

#include "stochsolid/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace stochsolid {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
const double kLogisticSlope = std::numbers::pi / std::sqrt(3.0);

double clamp_cdf(double v) {
    return std::clamp(v, SymmetricDistribution::kCdfFloor, SymmetricDistribution::kCdfCeil);
}

}  // namespace

double SymmetricDistribution::logistic_slope() { return kLogisticSlope; }

double SymmetricDistribution::pdf(double u) const {
    switch (m_kind) {
    case Kind::Gaussian:
        return kInvSqrt2Pi * std::exp(-0.5 * u * u);
    case Kind::Laplace:
        return std::exp(-kSqrt2 * std::abs(u)) / kSqrt2;
    case Kind::Logistic: {
        // Written in terms of |u| so that the exponential never overflows.
        const double e = std::exp(-kLogisticSlope * std::abs(u));
        return kLogisticSlope * e / ((1.0 + e) * (1.0 + e));
    }
    }
    return 0.0;
}

double SymmetricDistribution::cdf(double u) const {
    switch (m_kind) {
    case Kind::Gaussian:
        return clamp_cdf(0.5 * std::erfc(-u / kSqrt2));
    case Kind::Laplace: {
        const double tail = 0.5 * std::exp(-kSqrt2 * std::abs(u));
        return clamp_cdf(u < 0.0 ? tail : 1.0 - tail);
    }
    case Kind::Logistic: {
        const double e = std::exp(-kLogisticSlope * std::abs(u));
        const double lower = e / (1.0 + e);
        return clamp_cdf(u < 0.0 ? lower : 1.0 / (1.0 + e));
    }
    }
    return 0.5;
}

double SymmetricDistribution::hazard(double u) const {
    switch (m_kind) {
    case Kind::Gaussian: {
        if (u > -20.0) return pdf(u) / cdf(u);
        // Lower tail: Psi(u) = psi(u) * R(-u) with the Mills ratio R given by
        // its continued fraction, which converges quickly for large arguments.
        const double x = -u;
        double tail = x;
        for (int k = 40; k >= 1; --k) tail = x + k / tail;
        return tail;
    }
    case Kind::Laplace:
        return u < 0.0 ? kSqrt2 : pdf(u) / cdf(u);
    case Kind::Logistic:
        return kLogisticSlope * cdf(-u);
    }
    return 0.0;
}

SymmetricDistribution SymmetricDistribution::parse(std::string_view name) {
    if (name == "gaussian") return SymmetricDistribution(Kind::Gaussian);
    if (name == "laplace") return SymmetricDistribution(Kind::Laplace);
    if (name == "logistic") return SymmetricDistribution(Kind::Logistic);
    throw ConfigError("unknown distribution '" + std::string(name) +
                      "' (expected gaussian, laplace or logistic)");
}

std::string SymmetricDistribution::name() const {
    switch (m_kind) {
    case Kind::Gaussian: return "gaussian";
    case Kind::Laplace: return "laplace";
    case Kind::Logistic: return "logistic";
    }
    return "gaussian";
}

}  // namespace stochsolid
