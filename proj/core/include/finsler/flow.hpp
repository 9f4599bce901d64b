// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "finsler/sampling.hpp"
#include "finsler/structure.hpp"

namespace finsler {

/// Finite-dimensional family of Finsler structures F_theta on a common chart.
class ParametricFamily {
 public:
  using Field = std::function<Jet(std::span<const Jet> theta, std::span<const Jet> x, std::span<const Jet> y)>;
  /// Returns a reason when theta lies outside the admissible parameter set.
  using Constraint = std::function<std::optional<std::string>(std::span<const double> theta)>;

  ParametricFamily(std::string name, int dim, MetricKind kind, Chart chart, std::vector<std::string> theta_names,
                   Field field, std::optional<int> scale_index, nlohmann::json description = {},
                   Constraint constraint = {});

  /// F_c = c F0; theta = (c).
  static ParametricFamily scale(const FinslerStructure& base);
  /// F_(a, b) = a |y| + b y^1 on R^n; admissible for a > |b|.
  static ParametricFamily randers(int dim);

  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] int dim() const noexcept { return dim_; }
  [[nodiscard]] int parameters() const noexcept { return static_cast<int>(theta_names_.size()); }
  [[nodiscard]] const std::vector<std::string>& theta_names() const noexcept { return theta_names_; }
  /// Index of a parameter that must stay positive; crossing zero is a singularity.
  [[nodiscard]] std::optional<int> scale_index() const noexcept { return scale_index_; }
  [[nodiscard]] const nlohmann::json& description() const noexcept { return description_; }
  /// Empty when theta is admissible, otherwise the violated condition.
  [[nodiscard]] std::optional<std::string> violation(std::span<const double> theta) const;

  /// The structure at fixed theta.
  [[nodiscard]] FinslerStructure at(std::span<const double> theta) const;

  /// d(log F_theta)/d(theta_q) at (x, y).
  [[nodiscard]] std::vector<double> dlogF(std::span<const double> theta, std::span<const double> x,
                                          std::span<const double> y) const;

  /// d g_jk / d theta_q, stored [q][j*n + k].
  [[nodiscard]] std::vector<std::vector<double>> dg(std::span<const double> theta, std::span<const double> x,
                                                    std::span<const double> y) const;

 private:
  std::string name_;
  int dim_;
  MetricKind kind_;
  Chart chart_;
  std::vector<std::string> theta_names_;
  Field field_;
  std::optional<int> scale_index_;
  nlohmann::json description_;
  Constraint constraint_;
};

struct FlowRhs {
  std::vector<double> velocity;
  /// max over probes of |sum_q dlogF/dtheta_q dtheta_q/dt + Ric|, the part of the flow
  /// the family cannot follow, divided by max(1, max |Ric|).
  double residual = 0.0;
};

/// Least-squares projection of d(log F)/dt = -Ric onto the family's tangent directions.
/// Throws degenerate-family when the probe design matrix is rank deficient, and
/// strong-convexity when F_theta is not admissible at a probe.
FlowRhs scalar_flow_rhs(const ParametricFamily& family, std::span<const double> theta,
                        std::span<const SamplePoint> probes, std::size_t workers = 0);

struct FlowOptions {
  /// Step-doubling relative error bound.
  double rtol = 1e-8;
  /// Steps below this mark a singularity.
  double min_dt = 1e-10;
  std::size_t max_steps = 200000;
  std::size_t workers = 0;
};

struct FlowPoint {
  double t = 0.0;
  std::vector<double> theta;
  double residual = 0.0;
};

struct FlowTrajectory {
  std::vector<FlowPoint> points;
  bool singular = false;
  double singular_time = 0.0;
  std::string witness;
  std::size_t rejected_steps = 0;
  [[nodiscard]] nlohmann::json to_json() const;
};

/// Adaptive RK4 with step doubling. Stops early, flagging a singularity, when the scale
/// parameter reaches zero, the metric stops being admissible or the step size collapses.
FlowTrajectory run_flow(const ParametricFamily& family, std::span<const double> theta0, double t_end, double dt,
                        std::span<const SamplePoint> probes, const FlowOptions& opt = {});

/// max over probes of max_jk |d g_jk/dt + 2 Ric_jk| with d g/dt from the theta velocity,
/// divided by max(1, max |2 Ric_jk|).
double tensor_flow_residual(const ParametricFamily& family, std::span<const double> theta,
                            std::span<const double> theta_velocity, std::span<const SamplePoint> probes,
                            std::size_t workers = 0);

}  // namespace finsler
