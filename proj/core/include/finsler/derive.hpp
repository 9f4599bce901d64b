// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <span>
#include <vector>

#include "finsler/jet.hpp"

namespace finsler {

using ad::Jet;
using ad::JetSpace;

/// A scalar field f(x, y) on a chart of the tangent bundle, evaluatable on jets.
using ScalarField = std::function<Jet(std::span<const Jet> x, std::span<const Jet> y)>;

/// Highest x-order supported by the mixed derivative routines.
inline constexpr int kMaxXOrder = 2;

/// Jets for a single evaluation point. Variables are laid out x first (when seeded), then y.
struct SeededPoint {
  const JetSpace* space = nullptr;
  std::vector<Jet> x;
  std::vector<Jet> y;
  int dim = 0;
  bool x_is_variable = false;

  [[nodiscard]] int x_var(int i) const noexcept { return i; }
  [[nodiscard]] int y_var(int i) const noexcept { return (x_is_variable ? dim : 0) + i; }
};

/// Seeds x and y as jet variables. With `x_order == 0` the x coordinates are constants and the
/// space only spans y. Throws slit-bundle on y == 0.
SeededPoint seed_point(std::span<const double> x, std::span<const double> y, int order, int x_order);

/// Plain double evaluation of a scalar field.
double evaluate(const ScalarField& f, std::span<const double> x, std::span<const double> y);

/// d^|idx| f / dy^idx, where idx lists coordinate indices (e.g. {0, 0} is d^2/dy1^2).
double derive_y(const ScalarField& f, std::span<const double> x, std::span<const double> y,
                std::span<const int> y_index);

/// Mixed partial d_x^x_index d_y^y_index f.
double derive_x(const ScalarField& f, std::span<const double> x, std::span<const double> y,
                std::span<const int> x_index, std::span<const int> y_index);

struct FdComparison {
  double ad = 0.0;
  double fd = 0.0;
  double diff = 0.0;
};

/// Automatic-differentiation value against a Richardson-extrapolated central difference.
FdComparison fd_check(const ScalarField& f, std::span<const double> x, std::span<const double> y,
                      std::span<const int> x_index, std::span<const int> y_index);

/// Central-difference base step used by fd_check for a given total order (before coordinate scaling).
double fd_base_step(int total_order) noexcept;

}  // namespace finsler
