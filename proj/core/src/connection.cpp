// SPDX-License-Identifier: Apache-2.0
#include "finsler/connection.hpp"

#include "finsler/geometry.hpp"

namespace finsler {
namespace {

using V = Variance;

std::vector<double> vec(std::span<const double> s) { return {s.begin(), s.end()}; }

}  // namespace

TensorAtPoint metric_tensor(const FinslerStructure& s, std::span<const double> x, std::span<const double> y) {
  auto f = local_frame(s, x, y, FrameLevel::metric);
  return {vec(x), vec(y), {V::covariant, V::covariant}, {{0, 1}}, std::move(f.g)};
}

TensorAtPoint inverse_metric(const FinslerStructure& s, std::span<const double> x, std::span<const double> y) {
  auto f = local_frame(s, x, y, FrameLevel::metric);
  return {vec(x), vec(y), {V::contravariant, V::contravariant}, {{0, 1}}, std::move(f.ginv)};
}

TensorAtPoint cartan_tensor(const FinslerStructure& s, std::span<const double> x, std::span<const double> y) {
  auto f = local_frame(s, x, y, FrameLevel::connection);
  return {vec(x), vec(y), {V::covariant, V::covariant, V::covariant}, {{0, 1}, {1, 2}}, std::move(f.C)};
}

TensorAtPoint christoffel(const FinslerStructure& s, std::span<const double> x, std::span<const double> y) {
  auto f = local_frame(s, x, y, FrameLevel::connection);
  return {vec(x), vec(y), {V::contravariant, V::covariant, V::covariant}, {{1, 2}}, std::move(f.gamma)};
}

std::vector<double> spray(const FinslerStructure& s, std::span<const double> x, std::span<const double> y) {
  const auto f = local_frame(s, x, y, FrameLevel::connection);
  const int n = f.n;
  std::vector<double> G(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) acc += f.gamma[idx3(n, i, j, k)] * y[static_cast<std::size_t>(j)] * y[static_cast<std::size_t>(k)];
    G[static_cast<std::size_t>(i)] = 0.5 * acc;
  }
  return G;
}

TensorAtPoint nonlinear_connection(const FinslerStructure& s, std::span<const double> x, std::span<const double> y) {
  auto f = local_frame(s, x, y, FrameLevel::connection);
  return {vec(x), vec(y), {V::contravariant, V::covariant}, {}, std::move(f.N)};
}

TensorAtPoint cartan_horizontal_coeffs(const FinslerStructure& s, std::span<const double> x,
                                       std::span<const double> y) {
  auto f = local_frame(s, x, y, FrameLevel::connection);
  return {vec(x), vec(y), {V::contravariant, V::covariant, V::covariant}, {{1, 2}}, std::move(f.cartan)};
}

}  // namespace finsler
