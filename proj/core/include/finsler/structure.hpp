// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "finsler/derive.hpp"

namespace finsler {

enum class MetricKind { euclidean, minkowski, riemannian, randers, funk, sphere_chart, user_config };

std::string to_string(MetricKind kind);
MetricKind metric_kind_from_string(const std::string& name);

/// Box, ball or all of R^n. Membership of a ball or box is open at the boundary.
struct Domain {
  enum class Shape { whole, box, ball };

  Shape shape = Shape::whole;
  std::vector<double> lo;  // box
  std::vector<double> hi;  // box
  double radius = 0.0;     // ball, centred at the origin

  static Domain whole();
  static Domain box(std::vector<double> lo, std::vector<double> hi);
  static Domain cube(int dim, double half_width);
  static Domain ball(double radius);

  [[nodiscard]] bool contains(std::span<const double> x) const;
  /// Uniform sample; `whole` is not samplable and throws.
  [[nodiscard]] std::vector<double> sample(int dim, std::mt19937_64& rng) const;
  [[nodiscard]] nlohmann::json to_json() const;
  static Domain from_json(const nlohmann::json& j, int dim);
};

struct Chart {
  std::string name;
  Domain domain;
  /// Where validation and experiments draw base points; a subset of `domain`.
  Domain sample_region;
  std::string metric_note;

  [[nodiscard]] bool contains(std::span<const double> x) const { return domain.contains(x); }
};

/// a_ij(x) as a row-major n*n list of jets.
using MetricField = std::function<std::vector<Jet>(std::span<const Jet> x)>;

class FinslerStructure {
 public:
  FinslerStructure(int dim, MetricKind kind, Chart chart, ScalarField evaluator, nlohmann::json params,
                   bool reversible, std::optional<MetricField> riemannian = std::nullopt);

  [[nodiscard]] int dim() const noexcept { return dim_; }
  [[nodiscard]] MetricKind kind() const noexcept { return kind_; }
  [[nodiscard]] const Chart& chart() const noexcept { return chart_; }
  [[nodiscard]] const nlohmann::json& params() const noexcept { return params_; }
  [[nodiscard]] bool reversible() const noexcept { return reversible_; }
  [[nodiscard]] const ScalarField& field() const noexcept { return evaluator_; }
  /// The quadratic form a_ij(x) when F^2 is quadratic in y.
  [[nodiscard]] const std::optional<MetricField>& riemannian_metric() const noexcept { return riemannian_; }
  [[nodiscard]] std::string label() const;

  /// F on jets, no checks.
  [[nodiscard]] Jet operator()(std::span<const Jet> x, std::span<const Jet> y) const { return evaluator_(x, y); }

  /// ScalarField for (1/2) F^2.
  [[nodiscard]] ScalarField half_square() const;

 private:
  int dim_;
  MetricKind kind_;
  Chart chart_;
  ScalarField evaluator_;
  nlohmann::json params_;
  bool reversible_;
  std::optional<MetricField> riemannian_;
};

/// F(x, y) with the chart-domain, slit-bundle and finiteness checks.
double evaluate_F(const FinslerStructure& s, std::span<const double> x, std::span<const double> y);

/// Unchecked double evaluation.
double evaluate_F_unchecked(const FinslerStructure& s, std::span<const double> x, std::span<const double> y);

/// y / F(x, y).
std::vector<double> normalize_direction(const FinslerStructure& s, std::span<const double> x,
                                        std::span<const double> y);

void require_in_domain(const FinslerStructure& s, std::span<const double> x);

}  // namespace finsler
