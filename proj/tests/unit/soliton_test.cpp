// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "finsler/catalog.hpp"
#include "finsler/connection.hpp"
#include "finsler/error.hpp"
#include "finsler/soliton.hpp"
#include "support.hpp"

namespace {

using namespace finsler;
using finsler::testing::points;

ErrorKind bound_error(double lambda, double D, int n) {
  try {
    (void)diameter_bound(lambda, D, n);
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error";
  return ErrorKind::usage;
}

TEST(DiameterBound, ClosedForms) {
  EXPECT_NEAR(diameter_bound(1.0, 0.0, 2), std::numbers::pi, 1e-15);
  EXPECT_NEAR(diameter_bound(2.0, 0.0, 3), std::numbers::pi, 1e-15);
  EXPECT_NEAR(diameter_bound(1.0, 1.0, 2), std::numbers::pi * (1.0 + std::sqrt(2.0)), 1e-12);
  EXPECT_NEAR(diameter_bound(0.5, 2.0, 3), 2.0 * std::numbers::pi * (2.0 + std::sqrt(5.0)), 1e-12);
}

TEST(DiameterBound, Preconditions) {
  EXPECT_EQ(bound_error(0.0, 0.0, 2), ErrorKind::shrinking_required);
  EXPECT_EQ(bound_error(-1.0, 0.0, 2), ErrorKind::shrinking_required);
  EXPECT_EQ(bound_error(1.0, -0.1, 2), ErrorKind::invalid_params);
  EXPECT_EQ(bound_error(1.0, 0.0, 1), ErrorKind::invalid_params);
}

TEST(Classify, SignOfLambda) {
  EXPECT_EQ(classify(0.5), SolitonClass::shrinking);
  EXPECT_EQ(classify(0.0), SolitonClass::steady);
  EXPECT_EQ(classify(-2.0), SolitonClass::expanding);
  EXPECT_EQ(to_string(SolitonClass::shrinking), "shrinking");
}

TEST(LieDerivative, RoutesAgreeOnRandomFields) {
  std::mt19937_64 rng(11);
  for (const auto& s : catalog::standard_catalog()) {
    const auto V = VectorField::random_polynomial(s.dim(), rng);
    for (const auto& p : points(s, 8)) {
      const auto a = lie_derivative_complete_lift(s, V, p.x, p.y);
      const auto b = lie_derivative_cartan(s, V, p.x, p.y);
      EXPECT_LT(a.max_abs_diff(b), 1e-9) << s.label();
    }
  }
}

TEST(LieDerivative, KillingFieldOfEuclideanPlane) {
  const auto s = catalog::euclidean(2);
  const auto V = VectorField::rotation(2, 0, 1);
  for (const auto& p : points(s, 8)) EXPECT_LT(lie_derivative_complete_lift(s, V, p.x, p.y).max_abs(), 1e-13);
}

TEST(LieDerivative, RadialFieldScalesMetric) {
  // L_{c x} g = 2 c g on any Minkowski space
  for (const auto& s : catalog::minkowski_catalog()) {
    const auto V = VectorField::radial(s.dim(), 0.7);
    for (const auto& p : points(s, 8)) {
      auto L = lie_derivative_cartan(s, V, p.x, p.y);
      const auto g = metric_tensor(s, p.x, p.y);
      for (std::size_t k = 0; k < L.components().size(); ++k) EXPECT_NEAR(L(int(k)), 1.4 * g(int(k)), 1e-11);
    }
  }
}

TEST(SolitonResidual, GaussianShrinkers) {
  for (const auto& s : catalog::minkowski_catalog()) {
    for (double lambda : {0.5, 1.0, 2.0}) {
      SolitonOptions o;
      o.compute_norm = false;
      const auto r = soliton_residual(s, VectorField::radial(s.dim(), lambda), lambda, soliton_samples(s, 3, 6, 6), o);
      EXPECT_LE(r.residual_sup, 1e-8) << s.label() << " lambda=" << lambda;
      EXPECT_TRUE(r.soliton_certified());
      EXPECT_EQ(r.classification, SolitonClass::shrinking);
    }
  }
}

TEST(SolitonResidual, SphereEinstein) {
  for (int n : {2, 3}) {
    const auto s = catalog::sphere_chart(n, 1.0);
    const auto r = soliton_residual(s, VectorField::zero(n), n - 1.0, soliton_samples(s, 3, 6, 6));
    EXPECT_LE(r.residual_sup, 1e-6);
    ASSERT_TRUE(r.bound.has_value());
    EXPECT_NEAR(*r.bound, std::numbers::pi, 1e-12);
    EXPECT_DOUBLE_EQ(r.norm_sup, 0.0);
  }
}

TEST(SolitonResidual, FlatWithPositiveLambdaRejected) {
  const auto s = catalog::euclidean(2);
  const auto r = soliton_residual(s, VectorField::zero(2), 1.0, soliton_samples(s, 3, 6, 6));
  EXPECT_FALSE(r.soliton_certified());
  EXPECT_NEAR(r.hypothesis_min_eig, -2.0, 1e-10);
  EXPECT_NEAR(r.residual_sup, 2.0, 1e-10);
}

TEST(SolitonResidual, ReportJson) {
  const auto s = catalog::sphere_chart(2, 1.0);
  const auto j = soliton_residual(s, VectorField::zero(2), 1.0, soliton_samples(s, 3, 2, 2)).to_json();
  EXPECT_EQ(j["classification"], "shrinking");
  EXPECT_TRUE(j.contains("bound"));
  EXPECT_TRUE(j.contains("residual_witness"));
}

TEST(IndicatrixNorm, EuclideanIsLength) {
  const auto s = catalog::euclidean(3);
  const double x[] = {0.1, 0.2, 0.3};
  const double v[] = {1.0, -2.0, 2.0};
  EXPECT_NEAR(indicatrix_norm(s, x, v), 3.0, 1e-9);
}

TEST(IndicatrixNorm, RandersMaximisesAlongDrift) {
  // |y| + 0.3 y^1: max over F = 1 of sqrt(g(V, V)) for V = e1 is 1 + 0.3
  const auto s = catalog::randers({0.3, 0.0});
  const double x[] = {0.0, 0.0};
  const double v[] = {1.0, 0.0};
  EXPECT_NEAR(indicatrix_norm(s, x, v), 1.3, 1e-6);
}

TEST(IndicatrixNorm, ZeroField) {
  const auto s = catalog::funk(2);
  const double x[] = {0.2, 0.1};
  EXPECT_DOUBLE_EQ(indicatrix_norm(s, VectorField::zero(2), x), 0.0);
}

TEST(VectorField, JsonForms) {
  const auto rot = VectorField::from_json(nlohmann::json::parse(R"({"type":"rotation","plane":[1,2]})"), 2);
  const double x[] = {2.0, 3.0};
  const auto v = rot.values(x);
  EXPECT_DOUBLE_EQ(v[0], -3.0);
  EXPECT_DOUBLE_EQ(v[1], 2.0);
  const auto e = VectorField::from_json(nlohmann::json::parse(R"j(["(* x1 x2)", "(- x1)"])j"), 2);
  const auto J = e.jacobian(x);
  EXPECT_DOUBLE_EQ(J[0], 3.0);
  EXPECT_DOUBLE_EQ(J[1], 2.0);
  EXPECT_DOUBLE_EQ(J[2], -1.0);
  EXPECT_DOUBLE_EQ(J[3], 0.0);
  EXPECT_THROW((void)VectorField::from_json(nlohmann::json::parse(R"(["x1"])"), 2), Error);
}

}  // namespace
