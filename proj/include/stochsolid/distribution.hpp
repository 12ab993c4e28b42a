#pragma once

#include <string>
#include <string_view>

namespace stochsolid {

/// Zero-mean, unit-variance symmetric law of the stochastic implicit function.
///
/// pdf() is the density psi and cdf() the sigmoid Psi. Both satisfy
/// psi(u) = psi(-u) and Psi(u) = 1 - Psi(-u). The CDF is clamped to
/// [kCdfFloor, kCdfCeil] so that callers dividing by a vacancy never see zero.
class SymmetricDistribution {
public:
    enum class Kind { Gaussian, Laplace, Logistic };

    static constexpr double kCdfFloor = 1e-300;
    static constexpr double kCdfCeil = 1.0 - 1e-16;

    constexpr SymmetricDistribution() = default;
    constexpr explicit SymmetricDistribution(Kind kind) : m_kind(kind) {}

    constexpr Kind kind() const { return m_kind; }

    double pdf(double u) const;
    double cdf(double u) const;

    /// Hazard ratio psi(u) / Psi(u), evaluated without underflow deep in the
    /// lower tail where both factors vanish.
    double hazard(double u) const;

    /// Logistic slope constant pi/sqrt(3); for the unit-variance logistic law
    /// pdf(u) = slope * cdf(u) * cdf(-u).
    static double logistic_slope();

    static SymmetricDistribution parse(std::string_view name);
    std::string name() const;

    friend constexpr bool operator==(SymmetricDistribution, SymmetricDistribution) = default;

private:
    Kind m_kind = Kind::Gaussian;
};

}  // namespace stochsolid
