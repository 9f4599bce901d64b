// SPDX-License-Identifier: Apache-2.0
#include "finsler/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace finsler {

TensorAtPoint::TensorAtPoint(std::vector<double> x, std::vector<double> y, std::vector<Variance> slots,
                             std::vector<std::pair<int, int>> symmetries)
    : x_(std::move(x)), y_(std::move(y)), slots_(std::move(slots)), symmetries_(std::move(symmetries)) {
  std::size_t size = 1;
  for (std::size_t k = 0; k < slots_.size(); ++k) size *= x_.size();
  c_.assign(size, 0.0);
}

TensorAtPoint::TensorAtPoint(std::vector<double> x, std::vector<double> y, std::vector<Variance> slots,
                             std::vector<std::pair<int, int>> symmetries, std::vector<double> components)
    : TensorAtPoint(std::move(x), std::move(y), std::move(slots), std::move(symmetries)) {
  if (components.size() != c_.size()) throw std::invalid_argument("tensor component count mismatch");
  c_ = std::move(components);
}

std::size_t TensorAtPoint::offset(std::initializer_list<int> index) const {
  std::size_t off = 0;
  for (int i : index) off = off * x_.size() + static_cast<std::size_t>(i);
  return off;
}

double TensorAtPoint::max_abs() const noexcept {
  double m = 0.0;
  for (double v : c_) m = std::max(m, std::abs(v));
  return m;
}

double TensorAtPoint::symmetry_defect() const {
  const std::size_t n = x_.size();
  const std::size_t r = slots_.size();
  double worst = 0.0;
  std::vector<std::size_t> idx(r, 0);
  for (std::size_t flat = 0; flat < c_.size(); ++flat) {
    std::size_t rem = flat;
    for (std::size_t s = r; s-- > 0;) {
      idx[s] = rem % n;
      rem /= n;
    }
    for (const auto& [a, b] : symmetries_) {
      auto swapped = idx;
      std::swap(swapped[static_cast<std::size_t>(a)], swapped[static_cast<std::size_t>(b)]);
      std::size_t other = 0;
      for (std::size_t s = 0; s < r; ++s) other = other * n + swapped[s];
      worst = std::max(worst, std::abs(c_[flat] - c_[other]));
    }
  }
  return worst;
}

double TensorAtPoint::max_abs_diff(const TensorAtPoint& other) const {
  if (other.c_.size() != c_.size()) throw std::invalid_argument("tensor shape mismatch");
  double m = 0.0;
  for (std::size_t k = 0; k < c_.size(); ++k) m = std::max(m, std::abs(c_[k] - other.c_[k]));
  return m;
}

nlohmann::json TensorAtPoint::to_json() const {
  nlohmann::json slots = nlohmann::json::array();
  for (auto v : slots_) slots.push_back(v == Variance::covariant ? "co" : "contra");
  return {{"x", x_}, {"y", y_}, {"variance", slots}, {"components", c_}};
}

}  // namespace finsler
