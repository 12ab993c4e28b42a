#include "stochsolid/distribution.hpp"
#include "stochsolid/errors.hpp"
#include "stochsolid/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace stochsolid;
using Kind = SymmetricDistribution::Kind;

namespace {

const SymmetricDistribution kAll[] = {SymmetricDistribution(Kind::Gaussian), SymmetricDistribution(Kind::Laplace),
                                      SymmetricDistribution(Kind::Logistic)};

/// Simpson's rule on [a, b] with an even number of intervals.
template <class F>
double simpson(const F &f, double a, double b, int intervals) {
    const double h = (b - a) / intervals;
    double sum = f(a) + f(b);
    for (int i = 1; i < intervals; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return sum * h / 3.0;
}

}  // namespace

TEST(Distribution, GaussianPeak) {
    EXPECT_NEAR(SymmetricDistribution(Kind::Gaussian).pdf(0.0), 1.0 / std::sqrt(2.0 * std::numbers::pi), 1e-15);
}

TEST(Distribution, GaussianCdfAtOne) {
    EXPECT_NEAR(SymmetricDistribution(Kind::Gaussian).cdf(1.0), 0.8413447460685429, 1e-12);
}

TEST(Distribution, LogisticPdfIsSlopeTimesCdfProduct) {
    const SymmetricDistribution d(Kind::Logistic);
    const double k = SymmetricDistribution::logistic_slope();
    EXPECT_NEAR(k, std::numbers::pi / std::sqrt(3.0), 1e-15);
    EXPECT_NEAR(d.pdf(0.0), 0.25 * k, 1e-15);
    for (const double u : {-2.0, 0.0, 2.0}) EXPECT_NEAR(d.pdf(u), k * d.cdf(u) * d.cdf(-u), 1e-15) << u;
}

TEST(Distribution, CdfAtZeroIsHalf) {
    for (const auto &d : kAll) EXPECT_DOUBLE_EQ(d.cdf(0.0), 0.5) << d.name();
}

TEST(Distribution, LaplaceUpperLimit) {
    EXPECT_NEAR(SymmetricDistribution(Kind::Laplace).cdf(50.0), 1.0, 1e-15);
}

TEST(Distribution, SymmetryOnRandomArguments) {
    Rng rng(11);
    for (const auto &d : kAll)
        for (int i = 0; i < 100; ++i) {
            const double u = -8.0 + 16.0 * rng.uniform();
            EXPECT_EQ(d.pdf(u), d.pdf(-u)) << d.name() << " u=" << u;
            EXPECT_LT(std::abs(d.cdf(u) + d.cdf(-u) - 1.0), 1e-12) << d.name() << " u=" << u;
        }
}

TEST(Distribution, PdfIsDerivativeOfCdf) {
    Rng rng(12);
    const double h = 1e-5;
    for (const auto &d : kAll)
        for (int i = 0; i < 100; ++i) {
            double u = -6.0 + 12.0 * rng.uniform();
            if (d.kind() == Kind::Laplace && std::abs(u) < 2 * h) u += 4 * h;
            const double fd = (d.cdf(u + h) - d.cdf(u - h)) / (2.0 * h);
            EXPECT_NEAR(fd, d.pdf(u), 1e-6) << d.name() << " u=" << u;
        }
}

TEST(Distribution, UnitVariance) {
    for (const auto &d : kAll) {
        const double var = 2.0 * simpson([&](double u) { return u * u * d.pdf(u); }, 0.0, 40.0, 200000);
        EXPECT_NEAR(var, 1.0, 1e-4) << d.name();
        const double mass = 2.0 * simpson([&](double u) { return d.pdf(u); }, 0.0, 40.0, 200000);
        EXPECT_NEAR(mass, 1.0, 1e-8) << d.name();
    }
}

TEST(Distribution, CdfIsMonotone) {
    for (const auto &d : kAll) {
        double previous = 0.0;
        for (double u = -40.0; u <= 40.0; u += 0.01) {
            const double c = d.cdf(u);
            EXPECT_GE(c, previous) << d.name() << " u=" << u;
            previous = c;
        }
    }
}

TEST(Distribution, CdfClampedInTails) {
    for (const auto &d : kAll) {
        EXPECT_GE(d.cdf(-1e4), SymmetricDistribution::kCdfFloor) << d.name();
        EXPECT_LE(d.cdf(1e4), SymmetricDistribution::kCdfCeil) << d.name();
    }
}

TEST(Distribution, HazardMatchesRatioWhereBothAreRepresentable) {
    for (const auto &d : kAll)
        for (double u = -20.0; u <= 10.0; u += 0.37)
            EXPECT_NEAR(d.hazard(u), d.pdf(u) / d.cdf(u), 1e-10 * (1.0 + std::abs(d.hazard(u)))) << d.name() << " u=" << u;
}

TEST(Distribution, HazardDeepInLowerTail) {
    // Gaussian hazard grows like -u, Laplace tends to sqrt(2), logistic to its slope.
    const SymmetricDistribution g(Kind::Gaussian), l(Kind::Laplace), s(Kind::Logistic);
    EXPECT_NEAR(g.hazard(-100.0) / 100.0, 1.0, 1e-3);
    EXPECT_NEAR(l.hazard(-500.0), std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(s.hazard(-500.0), SymmetricDistribution::logistic_slope(), 1e-12);
    for (const auto &d : kAll) EXPECT_TRUE(std::isfinite(d.hazard(-1e4))) << d.name();
}

TEST(Distribution, ParseNames) {
    EXPECT_EQ(SymmetricDistribution::parse("gaussian").kind(), Kind::Gaussian);
    EXPECT_EQ(SymmetricDistribution::parse("laplace").kind(), Kind::Laplace);
    EXPECT_EQ(SymmetricDistribution::parse("logistic").kind(), Kind::Logistic);
    EXPECT_THROW(SymmetricDistribution::parse("cauchy"), ConfigError);
    for (const auto &d : kAll) EXPECT_EQ(SymmetricDistribution::parse(d.name()), d);
}
