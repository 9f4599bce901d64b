// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include <gtest/gtest.h>

#include "finsler/catalog.hpp"
#include "finsler/connection.hpp"
#include "finsler/curvature.hpp"
#include "support.hpp"

namespace {

using namespace finsler;
using finsler::testing::points;

TEST(Curvature, MinkowskiIsFlat) {
  for (const auto& s : catalog::minkowski_catalog()) {
    for (const auto& p : points(s, 20)) {
      const auto r = ricci(s, p.x, p.y);
      EXPECT_NEAR(r.scalar, 0.0, 1e-12) << s.label();
      EXPECT_LT(r.tensor.max_abs(), 1e-10) << s.label();
    }
  }
}

TEST(Curvature, UnitSphereIsEinstein) {
  for (int n : {2, 3}) {
    const auto s = catalog::sphere_chart(n, 1.0);
    for (const auto& p : points(s, 24)) {
      const auto r = ricci(s, p.x, p.y);
      EXPECT_NEAR(r.scalar, n - 1.0, 1e-9);
      const auto g = metric_tensor(s, p.x, p.y);
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) EXPECT_NEAR(r.tensor(j, k), (n - 1.0) * g(j, k), 1e-8);
    }
  }
}

TEST(Curvature, SphereOfRadiusTwo) {
  // flag curvature 1/r^2, so Ric = (n-1)/4 for r = 2
  const auto s = catalog::sphere_chart(2, 2.0);
  for (const auto& p : points(s, 12)) EXPECT_NEAR(ricci_scalar(s, p.x, p.y), 0.25, 1e-9);
}

TEST(Curvature, FunkConstantFlagCurvature) {
  for (int n : {2, 3}) {
    const auto s = catalog::funk(n);
    for (const auto& p : points(s, 24)) {
      EXPECT_NEAR(ricci_scalar(s, p.x, p.y), -(n - 1.0) / 4.0, 1e-8);
      // constant flag curvature K: R^i_k = K (delta^i_k - F_{y^k} y^i / F) for F = 1
      const auto R = reduced_curvature(s, p.x, p.y);
      double trace = 0.0;
      for (int i = 0; i < n; ++i) trace += R(i, i);
      EXPECT_NEAR(trace, -(n - 1.0) / 4.0, 1e-8);
    }
  }
}

TEST(Curvature, WarpedPlaneGaussCurvature) {
  const auto s = catalog::warped_plane();
  for (const auto& p : points(s, 24)) {
    const double K = -1.0 / std::pow(1.0 + p.x[0] * p.x[0], 2);
    EXPECT_NEAR(ricci_scalar(s, p.x, p.y), K, 1e-9);
  }
}

TEST(Curvature, RiemannianInputsMatchClassicalOracle) {
  for (const auto& s : catalog::standard_catalog()) {
    if (!s.riemannian_metric()) continue;
    for (const auto& p : points(s, 24)) {
      const auto oracle = riemannian_ricci_oracle(*s.riemannian_metric(), s.dim(), p.x);
      EXPECT_LT(ricci_tensor(s, p.x, p.y).max_abs_diff(oracle), 1e-8) << s.label();
    }
  }
}

TEST(Curvature, ScalarAndTensorAgree) {
  // Ric(x, y) = Ric_jk y^j y^k / F^2 by Euler's theorem
  for (const auto& s : catalog::standard_catalog()) {
    const int n = s.dim();
    for (const auto& p : points(s, 8)) {
      const auto r = ricci(s, p.x, p.y);
      double q = 0.0;
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) q += r.tensor(j, k) * p.y[j] * p.y[k];
      EXPECT_NEAR(q, r.scalar, 1e-8) << s.label();
      EXPECT_LT(r.tensor.symmetry_defect(), 1e-9) << s.label();
    }
  }
}

}  // namespace
