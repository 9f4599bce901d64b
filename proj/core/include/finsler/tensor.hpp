// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace finsler {

enum class Variance { covariant, contravariant };

/// Dense components of a tensor at a point (x, y) of the slit tangent bundle.
/// Components are stored row-major over the slots.
class TensorAtPoint {
 public:
  TensorAtPoint() = default;
  TensorAtPoint(std::vector<double> x, std::vector<double> y, std::vector<Variance> slots,
                std::vector<std::pair<int, int>> symmetries = {});
  TensorAtPoint(std::vector<double> x, std::vector<double> y, std::vector<Variance> slots,
                std::vector<std::pair<int, int>> symmetries, std::vector<double> components);

  [[nodiscard]] int dim() const noexcept { return static_cast<int>(x_.size()); }
  [[nodiscard]] int rank() const noexcept { return static_cast<int>(slots_.size()); }
  [[nodiscard]] const std::vector<double>& x() const noexcept { return x_; }
  [[nodiscard]] const std::vector<double>& y() const noexcept { return y_; }
  [[nodiscard]] const std::vector<Variance>& variance() const noexcept { return slots_; }
  [[nodiscard]] const std::vector<std::pair<int, int>>& symmetries() const noexcept { return symmetries_; }
  [[nodiscard]] const std::vector<double>& components() const noexcept { return c_; }
  [[nodiscard]] std::vector<double>& components() noexcept { return c_; }

  double& operator()(std::initializer_list<int> index) { return c_[offset(index)]; }
  double operator()(std::initializer_list<int> index) const { return c_[offset(index)]; }
  double& operator()(int i) { return c_[static_cast<std::size_t>(i)]; }
  double operator()(int i) const { return c_[static_cast<std::size_t>(i)]; }
  double& operator()(int i, int j) { return c_[static_cast<std::size_t>(i * dim() + j)]; }
  double operator()(int i, int j) const { return c_[static_cast<std::size_t>(i * dim() + j)]; }
  double& operator()(int i, int j, int k) { return c_[static_cast<std::size_t>((i * dim() + j) * dim() + k)]; }
  double operator()(int i, int j, int k) const { return c_[static_cast<std::size_t>((i * dim() + j) * dim() + k)]; }

  [[nodiscard]] double max_abs() const noexcept;
  /// Largest violation among the declared slot symmetries.
  [[nodiscard]] double symmetry_defect() const;
  /// max-abs of (this - other); dimensions must match.
  [[nodiscard]] double max_abs_diff(const TensorAtPoint& other) const;

  [[nodiscard]] nlohmann::json to_json() const;

 private:
  [[nodiscard]] std::size_t offset(std::initializer_list<int> index) const;

  std::vector<double> x_, y_;
  std::vector<Variance> slots_;
  std::vector<std::pair<int, int>> symmetries_;
  std::vector<double> c_;
};

}  // namespace finsler
