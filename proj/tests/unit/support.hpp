// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "finsler/sampling.hpp"
#include "finsler/structure.hpp"

namespace finsler::testing {

/// Relative error with an absolute floor of 1.
inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

/// Sample points on the indicatrix of `s`, deterministic in `seed`.
inline std::vector<SamplePoint> points(const FinslerStructure& s, int count, std::uint64_t seed = 7) {
  const int ny = 4;
  return sample_grid(s, std::max(1, count / ny), ny, seed);
}

inline double euclid_norm(std::span<const double> v) {
  double acc = 0.0;
  for (double c : v) acc += c * c;
  return std::sqrt(acc);
}

}  // namespace finsler::testing
