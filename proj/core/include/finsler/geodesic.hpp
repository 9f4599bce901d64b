// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "finsler/soliton.hpp"
#include "finsler/structure.hpp"
#include "finsler/vector_field.hpp"

namespace finsler {

struct GeodesicOptions {
  /// Per-step absolute and relative error bound of the Runge-Kutta-Fehlberg 7(8) controller.
  double tol = 1e-10;
  /// Upper bound on the sample spacing; samples are uniform in t.
  double sample_dt = 0.01;
  std::size_t max_steps = 2'000'000;
  /// Throw integration-failure when F drifts by more than 100 tol (scaled by F(x0, y0) when above 1).
  bool check_drift = true;
};

struct GeodesicSample {
  double t = 0.0;
  std::vector<double> x;
  std::vector<double> v;
};

struct GeodesicPath {
  std::vector<GeodesicSample> samples;
  double F0 = 0.0;
  double F_drift = 0.0;
  /// Requested parameter length; the path stops earlier when it leaves the chart.
  double length = 0.0;
  bool exited_domain = false;
  double tol = 0.0;
  std::size_t steps = 0;

  [[nodiscard]] double end_time() const { return samples.empty() ? 0.0 : samples.back().t; }
  [[nodiscard]] nlohmann::json to_json(bool include_samples = true) const;
};

/// Solves x'' + 2 G(x, x') = 0 from (x0, y0) for t in [0, length]. The caller normalizes
/// F(x0, y0) = 1 for an arc-length parameter. F is never renormalized during integration.
GeodesicPath integrate_geodesic(const FinslerStructure& s, std::span<const double> x0, std::span<const double> y0,
                                double length, const GeodesicOptions& opt = {});
GeodesicPath integrate_geodesic(const FinslerStructure& s, std::span<const double> x0, std::span<const double> y0,
                                double length, double tol);

struct DistanceOptions {
  /// Target accuracy of the refined shot (arrival miss and distance).
  double tol = 1e-8;
  /// Directions in the initial fan; 0 selects default_seed_count(dim).
  int seeds = 0;
  /// Fan candidates refined by Newton shooting.
  int refine = 6;
  /// Integrator settings of the coarse fan.
  double fan_tol = 1e-8;
  double fan_sample_dt = 0.05;
  /// How far fan geodesics run. Unset: 1.25 times the F-length of the longest straight
  /// segment to a target (an upper bound on the distance), when that segment lies in the chart.
  std::optional<double> max_length;
  std::size_t workers = 0;
};

struct DistanceResult {
  double distance = 0.0;
  double miss = 0.0;
  std::vector<double> initial_velocity;
  int hits = 0;
};

/// Forward distances d(p, q) for every target using one fan of geodesics from p.
/// Throws unreachable-in-chart for a target no refined shot reaches.
std::vector<DistanceResult> forward_distances(const FinslerStructure& s, std::span<const double> p,
                                              const std::vector<std::vector<double>>& targets,
                                              const DistanceOptions& opt = {});

/// Forward distance d(p, q), not symmetric in general.
double forward_distance(const FinslerStructure& s, std::span<const double> p, std::span<const double> q,
                        const DistanceOptions& opt = {});
double forward_distance(const FinslerStructure& s, std::span<const double> p, std::span<const double> q, double tol);

struct DiameterOptions {
  DistanceOptions distance;
  /// Only distances from the first grid point are computed. Valid when a symmetry of the
  /// metric acts transitively on the grid (e.g. equally spaced points on a sphere's equator).
  bool symmetric_orbit = false;
};

struct DiameterResult {
  double estimate = 0.0;
  /// Largest nearest-neighbour coordinate spacing of the grid.
  double resolution = 0.0;
  int pairs = 0;
  std::vector<double> from, to;
  [[nodiscard]] nlohmann::json to_json() const;
};

/// max over ordered grid pairs of forward_distance; a lower bound of the diameter.
DiameterResult diameter_estimate(const FinslerStructure& s, const std::vector<std::vector<double>>& grid,
                                 const DiameterOptions& opt = {});

struct AuditOptions {
  /// Seeds of the indicatrix norm in step (c); the path velocity is always added as a seed.
  IndicatrixOptions norm = {64, {}, 2, 1e-6, 200};
  /// Check every k-th interior sample.
  int stride = 1;
};

struct AuditReport {
  /// max |C_ljk(g, g') g'^j g'^k nabla_0 V^l|
  double cartan_term = 0.0;
  /// max |g'^j g'^k (L_V g)_jk - 2 d/dt (g'^k V_k)|
  double compatibility = 0.0;
  /// max of |g'^k V_k| - ||V||_g(t); non-positive when Cauchy-Schwarz holds
  double cauchy_schwarz_excess = -INFINITY;
  int samples = 0;
  [[nodiscard]] nlohmann::json to_json() const;
};

/// Checks the three identities used along a unit-speed geodesic in the compactness proof.
/// d/dt uses fourth-order centered differences on the path samples.
AuditReport proof_step_audit(const FinslerStructure& s, const VectorField& V, const GeodesicPath& path,
                             const AuditOptions& opt = {});

}  // namespace finsler
