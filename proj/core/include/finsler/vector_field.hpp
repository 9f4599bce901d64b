// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "finsler/expression.hpp"
#include "finsler/jet.hpp"

namespace finsler {

/// A vector field V = V^i(x) d/dx^i on the base manifold, evaluatable on jets so that its
/// x-derivatives, and hence its complete lift, are available.
class VectorField {
 public:
  using Components = std::function<std::vector<ad::Jet>(std::span<const ad::Jet> x)>;

  VectorField(int dim, Components components, nlohmann::json description);

  static VectorField zero(int dim);
  /// V^i = scale * x^i.
  static VectorField radial(int dim, double scale);
  /// Infinitesimal rotation in the (i, j) plane: V = x^i d/dx^j - x^j d/dx^i.
  static VectorField rotation(int dim, int i, int j);
  static VectorField from_expressions(const std::vector<Expression>& components);
  /// Accepts a list of expressions (JSON arrays or S-expression strings).
  static VectorField from_json(const nlohmann::json& j, int dim);
  /// Polynomial of degree <= 2 with coefficients uniform in [-scale, scale].
  static VectorField random_polynomial(int dim, std::mt19937_64& rng, double scale = 0.5);

  [[nodiscard]] int dim() const noexcept { return dim_; }
  [[nodiscard]] const nlohmann::json& description() const noexcept { return description_; }
  [[nodiscard]] std::vector<ad::Jet> operator()(std::span<const ad::Jet> x) const { return components_(x); }

  [[nodiscard]] std::vector<double> values(std::span<const double> x) const;
  /// Row-major J[m * n + p] = dV^m / dx^p.
  [[nodiscard]] std::vector<double> jacobian(std::span<const double> x) const;
  /// Values and Jacobian from one jet evaluation.
  void evaluate(std::span<const double> x, std::vector<double>& values, std::vector<double>& jacobian) const;

 private:
  int dim_;
  Components components_;
  nlohmann::json description_;
};

}  // namespace finsler
