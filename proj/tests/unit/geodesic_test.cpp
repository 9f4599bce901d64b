// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "finsler/catalog.hpp"
#include "finsler/error.hpp"
#include "finsler/geodesic.hpp"
#include "support.hpp"

namespace {

using namespace finsler;
using finsler::testing::euclid_norm;

DistanceOptions quick() {
  DistanceOptions o;
  o.seeds = 96;
  return o;
}

TEST(Geodesic, EquatorIsClosedGreatCircle) {
  const auto s = catalog::sphere_chart(2, 1.0);
  const double x0[] = {1.0, 0.0};
  const auto y0 = normalize_direction(s, x0, std::vector<double>{0.0, 1.0});
  GeodesicOptions o;
  o.sample_dt = std::numbers::pi / 64;
  const auto path = integrate_geodesic(s, x0, y0, 2.0 * std::numbers::pi, o);
  ASSERT_FALSE(path.exited_domain);
  for (const auto& smp : path.samples) EXPECT_NEAR(euclid_norm(smp.x), 1.0, 1e-9);
  const auto& end = path.samples.back();
  EXPECT_NEAR(end.t, 2.0 * std::numbers::pi, 1e-12);
  EXPECT_NEAR(end.x[0], 1.0, 1e-9);
  EXPECT_NEAR(end.x[1], 0.0, 1e-9);
}

TEST(Geodesic, FunkGeodesicsAreStraight) {
  const auto s = catalog::funk(2);
  const std::vector<double> x0{0.2, -0.1};
  const auto y0 = normalize_direction(s, x0, std::vector<double>{0.6, 0.8});
  const auto path = integrate_geodesic(s, x0, y0, 4.0);
  for (const auto& smp : path.samples) {
    const double cross = (smp.x[0] - x0[0]) * y0[1] - (smp.x[1] - x0[1]) * y0[0];
    EXPECT_NEAR(cross, 0.0, 1e-9);
    EXPECT_LT(euclid_norm(smp.x), 1.0);
  }
}

TEST(Geodesic, DriftAcrossCatalog) {
  std::mt19937_64 rng(5);
  for (const auto& s : catalog::standard_catalog()) {
    const auto x0 = s.chart().sample_region.sample(s.dim(), rng);
    const auto y0 = normalize_direction(s, x0, uniform_direction(s.dim(), rng));
    const auto path = integrate_geodesic(s, x0, y0, 10.0, 1e-10);
    EXPECT_LE(path.F_drift, 1e-8) << s.label();
    EXPECT_NEAR(path.F0, 1.0, 1e-14);
  }
}

TEST(Geodesic, SamplesAreUniform) {
  const auto s = catalog::euclidean(2);
  const double x0[] = {0.0, 0.0};
  const double y0[] = {1.0, 0.0};
  GeodesicOptions o;
  o.sample_dt = 0.3;
  const auto path = integrate_geodesic(s, x0, y0, 1.0, o);
  ASSERT_EQ(path.samples.size(), 5u);  // ceil(1 / 0.3) = 4 intervals
  EXPECT_DOUBLE_EQ(path.samples[1].t, 0.25);
  EXPECT_NEAR(path.samples.back().x[0], 1.0, 1e-12);
}

TEST(Geodesic, ChartExitReturnsPartialPath) {
  FinslerStructure drift = catalog::euclidean(2);
  for (const auto& s : catalog::standard_catalog())
    if (s.label().rfind("randers_drift", 0) == 0) drift = s;
  ASSERT_EQ(drift.label().rfind("randers_drift", 0), 0u);
  const double z[] = {0.0, 0.0};
  const auto u = normalize_direction(drift, z, std::vector<double>{1.0, 0.0});
  const auto p = integrate_geodesic(drift, z, u, 10.0);
  EXPECT_TRUE(p.exited_domain);
  EXPECT_LT(p.end_time(), 10.0);
  EXPECT_TRUE(drift.chart().contains(p.samples.back().x));
}

TEST(Distance, EuclideanPlane) {
  const auto s = catalog::euclidean(2);
  const double p[] = {0.0, 0.0};
  const double q[] = {3.0, 4.0};
  EXPECT_NEAR(forward_distance(s, p, q, quick()), 5.0, 1e-8);
}

TEST(Distance, RandersAsymmetry) {
  // straight lines are geodesics of a Minkowski norm, so d(p, q) = F(q - p)
  const auto s = catalog::randers({0.3, 0.0});
  const double p[] = {0.0, 0.0};
  const double q[] = {1.0, 0.0};
  EXPECT_NEAR(forward_distance(s, p, q, quick()), 1.3, 1e-6);
  EXPECT_NEAR(forward_distance(s, q, p, quick()), 0.7, 1e-6);
}

TEST(Distance, TriangleInequalityFunk) {
  const auto s = catalog::funk(2);
  const std::vector<std::vector<double>> pts{{0.0, 0.0}, {0.4, 0.1}, {-0.2, 0.5}};
  std::vector<std::vector<double>> d(3, std::vector<double>(3, 0.0));
  for (int i = 0; i < 3; ++i) {
    std::vector<std::vector<double>> targets;
    for (int j = 0; j < 3; ++j) targets.push_back(pts[static_cast<std::size_t>(j == i ? (i + 1) % 3 : j)]);
    const auto r = forward_distances(s, pts[static_cast<std::size_t>(i)], targets, quick());
    for (int j = 0; j < 3; ++j)
      if (j != i) d[i][j] = r[static_cast<std::size_t>(j)].distance;
  }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        if (i != j && j != k && i != k) {
          EXPECT_LE(d[i][k], d[i][j] + d[j][k] + 1e-7);
        }
  // the Funk metric is not reversible
  EXPECT_GT(std::abs(d[0][1] - d[1][0]), 1e-3);
}

TEST(Distance, FunkRadialClosedForm) {
  // d(0, x) = -log(1 - |x|) along a ray of the unit-ball Funk metric
  const auto s = catalog::funk(2);
  const double o[] = {0.0, 0.0};
  const double q[] = {0.5, 0.0};
  EXPECT_NEAR(forward_distance(s, o, q, quick()), -std::log(0.5), 1e-6);
  EXPECT_NEAR(forward_distance(s, q, o, quick()), std::log(1.5), 1e-6);
}

TEST(Diameter, SymmetricOrbitMatchesFullGrid) {
  const auto s = catalog::sphere_chart(2, 1.0);
  std::vector<std::vector<double>> grid;
  for (int k = 0; k < 6; ++k) grid.push_back({std::cos(k * std::numbers::pi / 3), std::sin(k * std::numbers::pi / 3)});
  DiameterOptions o;
  o.distance = quick();
  o.symmetric_orbit = true;
  const auto r = diameter_estimate(s, grid, o);
  EXPECT_NEAR(r.estimate, std::numbers::pi, 1e-6);
  EXPECT_EQ(r.pairs, 5);
  EXPECT_NEAR(r.resolution, 1.0, 1e-12);  // chord between neighbours on the unit circle
}

TEST(Audit, SphereWithRandomField) {
  const auto s = catalog::sphere_chart(2, 1.0);
  std::mt19937_64 rng(9);
  const auto V = VectorField::random_polynomial(2, rng);
  const std::vector<double> x0{0.3, -0.2};
  const auto y0 = normalize_direction(s, x0, std::vector<double>{1.0, 0.4});
  GeodesicOptions go;
  go.sample_dt = 0.01;
  const auto path = integrate_geodesic(s, x0, y0, 1.0, go);
  const auto a = proof_step_audit(s, V, path);
  EXPECT_LE(a.cartan_term, 1e-9);
  EXPECT_LE(a.compatibility, 1e-6);
  EXPECT_LE(a.cauchy_schwarz_excess, 1e-6);
  EXPECT_GT(a.samples, 0);
}

}  // namespace
