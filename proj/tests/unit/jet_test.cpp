// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "finsler/derive.hpp"
#include "finsler/error.hpp"
#include "finsler/jet.hpp"

namespace {

using finsler::ad::Jet;
using finsler::ad::JetSpace;

TEST(JetSpace, MonomialCountMatchesBinomial) {
  // C(n + d, d) monomials of degree <= d in n variables
  EXPECT_EQ(JetSpace::get(2, 4).size(), 15u);
  EXPECT_EQ(JetSpace::get(4, 6).size(), 210u);
  EXPECT_EQ(JetSpace::get(1, 0).size(), 1u);
}

TEST(JetSpace, CapLimitsJointDegreeOfLeadingVariables) {
  const auto& capped = JetSpace::get(4, 6, 2, 2);
  for (std::size_t m = 0; m < capped.size(); ++m) {
    const auto e = capped.exponents(m);
    EXPECT_LE(e[0] + e[1], 2);
    EXPECT_LE(capped.degree(m), 6);
  }
  EXPECT_LT(capped.size(), JetSpace::get(4, 6).size());
}

TEST(JetSpace, SharedInstances) { EXPECT_EQ(&JetSpace::get(3, 4), &JetSpace::get(3, 4)); }

TEST(Jet, PolynomialPartialsAreExact) {
  const auto& sp = JetSpace::get(2, 4);
  const Jet x = Jet::variable(sp, 0, 1.5);
  const Jet y = Jet::variable(sp, 1, -0.5);
  const Jet f = x * x * x * y + 2.0 * y * y;  // f_xxy = 6, f_xy = 3x^2, f_yy = 4
  const int xxy[] = {2, 1};
  const int xy[] = {1, 1};
  const int yy[] = {0, 2};
  EXPECT_DOUBLE_EQ(f.partial(xxy), 6.0 * 1.5);
  EXPECT_DOUBLE_EQ(f.partial(xy), 3.0 * 1.5 * 1.5);
  EXPECT_DOUBLE_EQ(f.partial(yy), 4.0);
}

TEST(Jet, ElementaryFunctionsMatchClosedForms) {
  const auto& sp = JetSpace::get(1, 6);
  const double x0 = 0.7;
  const Jet x = Jet::variable(sp, 0, x0);
  for (int k = 0; k <= 6; ++k) {
    const int e[] = {k};
    EXPECT_NEAR(exp(x).partial(e), std::exp(x0), 1e-13 * std::exp(x0)) << k;
    EXPECT_NEAR(sin(x).partial(e), std::sin(x0 + k * M_PI / 2), 1e-13) << k;
    EXPECT_NEAR(cos(x).partial(e), std::cos(x0 + k * M_PI / 2), 1e-13) << k;
  }
  // d^k/dx^k x^p = p (p-1) ... (p-k+1) x^(p-k)
  const double p = 0.25;
  double falling = 1.0;
  for (int k = 0; k <= 6; ++k) {
    const int e[] = {k};
    EXPECT_NEAR(pow(x, p).partial(e), falling * std::pow(x0, p - k), 1e-12 * std::abs(falling * std::pow(x0, p - k)));
    falling *= (p - k);
  }
  const int e3[] = {3};
  EXPECT_NEAR(log(x).partial(e3), 2.0 / (x0 * x0 * x0), 1e-12);
  EXPECT_NEAR(sqrt(x).partial(e3), 3.0 / 8.0 * std::pow(x0, -2.5), 1e-12);
  EXPECT_NEAR((1.0 / x).partial(e3), -6.0 / std::pow(x0, 4), 1e-11);
}

TEST(Jet, DivisionInvertsMultiplication) {
  const auto& sp = JetSpace::get(3, 5);
  const Jet a = Jet::variable(sp, 0, 0.3) + 2.0 * Jet::variable(sp, 1, 1.1);
  const Jet b = exp(Jet::variable(sp, 2, -0.4)) + a * a;
  const Jet r = (a * b) / b - a;
  for (double c : r.coefficients()) EXPECT_NEAR(c, 0.0, 1e-13);
}

TEST(Jet, DerivativeLowersOrder) {
  const auto& sp = JetSpace::get(2, 4);
  const Jet x = Jet::variable(sp, 0, 2.0);
  const Jet y = Jet::variable(sp, 1, 3.0);
  const Jet f = x * x * y;
  const Jet fx = f.derivative(0);
  EXPECT_EQ(fx.order(), 3);
  EXPECT_DOUBLE_EQ(fx.value(), 12.0);  // 2xy
  const int xy[] = {0, 1};
  EXPECT_DOUBLE_EQ(fx.partial(xy), 4.0);  // d/dy (2xy) = 2x
}

TEST(Jet, ScalarMixesWithAnySpace) {
  const auto& sp = JetSpace::get(2, 3);
  const Jet zero;
  const Jet x = Jet::variable(sp, 0, 1.0);
  const Jet s = zero + x;
  EXPECT_DOUBLE_EQ(s.value(), 1.0);
  EXPECT_EQ(&s.space(), &sp);
}

TEST(Jet, NonFiniteDetected) {
  const auto& sp = JetSpace::get(1, 2);
  const Jet x = Jet::variable(sp, 0, 0.0);
  EXPECT_TRUE(isfinite(x));
  const Jet big = Jet::variable(sp, 0, 1e300);
  EXPECT_FALSE(isfinite(big * big));
  try {
    (void)sqrt(x);  // derivatives of sqrt blow up at 0
    FAIL();
  } catch (const finsler::Error& e) {
    EXPECT_EQ(e.kind(), finsler::ErrorKind::regularity_failure);
  }
}

TEST(FdCheck, AgreesWithCentralDifferences) {
  const finsler::ScalarField f = [](std::span<const Jet> x, std::span<const Jet> y) {
    return sqrt(y[0] * y[0] + y[1] * y[1]) * exp(0.3 * x[0]) + sin(x[1]) * y[0];
  };
  const double x[] = {0.2, -0.4};
  const double y[] = {0.8, 0.6};
  const int yi[] = {0, 1};
  const int xi[] = {0};
  const auto c1 = finsler::fd_check(f, x, y, {}, yi);
  EXPECT_LT(std::abs(c1.diff), 1e-6) << c1.ad << " vs " << c1.fd;
  const auto c2 = finsler::fd_check(f, x, y, xi, yi);
  EXPECT_LT(std::abs(c2.diff), 1e-5) << c2.ad << " vs " << c2.fd;
}

TEST(SeedPoint, SlitBundleRejectsZeroDirection) {
  const double x[] = {0.0, 0.0};
  const double y[] = {0.0, 0.0};
  try {
    (void)finsler::seed_point(x, y, 2, 0);
    FAIL() << "expected slit-bundle error";
  } catch (const finsler::Error& e) {
    EXPECT_EQ(e.kind(), finsler::ErrorKind::slit_bundle);
  }
}

}  // namespace
