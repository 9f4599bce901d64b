// SPDX-License-Identifier: Apache-2.0
#include "finsler/derive.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "finsler/error.hpp"

namespace finsler {
namespace {

void require_slit(std::span<const double> y) {
  if (std::all_of(y.begin(), y.end(), [](double v) { return v == 0.0; })) {
    throw Error(ErrorKind::slit_bundle, "y = 0 is outside the slit tangent bundle");
  }
}

void require_index(std::span<const int> idx, int dim, const char* which) {
  for (int i : idx) {
    if (i < 0 || i >= dim) {
      throw Error(ErrorKind::usage, std::string(which) + "-index " + std::to_string(i) + " out of range");
    }
  }
}

std::vector<int> exponent_vector(std::span<const int> x_index, std::span<const int> y_index, int dim,
                                 bool with_x) {
  std::vector<int> e(static_cast<std::size_t>((with_x ? dim : 0) + dim), 0);
  for (int i : x_index) ++e[static_cast<std::size_t>(i)];
  for (int i : y_index) ++e[static_cast<std::size_t>((with_x ? dim : 0) + i)];
  return e;
}

double binomial(int k, int j) {
  double r = 1.0;
  for (int i = 1; i <= j; ++i) r = r * (k - j + i) / i;
  return r;
}

// Tensor-product central difference with per-coordinate steps h[v] (counts[v] = derivative order).
double central_difference(const ScalarField& f, std::span<const double> x, std::span<const double> y,
                          std::span<const int> counts, std::span<const double> h) {
  const int dim = static_cast<int>(x.size());
  std::vector<int> active;
  for (int v = 0; v < 2 * dim; ++v) {
    if (counts[static_cast<std::size_t>(v)] > 0) active.push_back(v);
  }
  std::vector<int> j(active.size(), 0);
  std::vector<double> xs(x.begin(), x.end());
  std::vector<double> ys(y.begin(), y.end());
  double sum = 0.0;
  while (true) {
    double weight = 1.0;
    for (std::size_t a = 0; a < active.size(); ++a) {
      const int v = active[a];
      const int k = counts[static_cast<std::size_t>(v)];
      const double offset = (0.5 * k - j[a]) * h[static_cast<std::size_t>(v)];
      weight *= ((j[a] % 2 == 0) ? 1.0 : -1.0) * binomial(k, j[a]);
      if (v < dim) {
        xs[static_cast<std::size_t>(v)] = x[static_cast<std::size_t>(v)] + offset;
      } else {
        ys[static_cast<std::size_t>(v - dim)] = y[static_cast<std::size_t>(v - dim)] + offset;
      }
    }
    sum += weight * evaluate(f, xs, ys);
    std::size_t a = 0;
    for (; a < active.size(); ++a) {
      if (++j[a] <= counts[static_cast<std::size_t>(active[a])]) break;
      j[a] = 0;
    }
    if (a == active.size()) break;
  }
  double scale = 1.0;
  for (int v : active) scale *= std::pow(h[static_cast<std::size_t>(v)], counts[static_cast<std::size_t>(v)]);
  return sum / scale;
}

}  // namespace

SeededPoint seed_point(std::span<const double> x, std::span<const double> y, int order, int x_order) {
  require_slit(y);
  const int dim = static_cast<int>(y.size());
  SeededPoint p;
  p.dim = dim;
  p.x_is_variable = x_order > 0;
  const int vars = (p.x_is_variable ? dim : 0) + dim;
  p.space = &JetSpace::get(vars, order, p.x_is_variable ? dim : 0, x_order);
  p.x.reserve(static_cast<std::size_t>(dim));
  p.y.reserve(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) {
    p.x.push_back(p.x_is_variable ? Jet::variable(*p.space, p.x_var(i), x[static_cast<std::size_t>(i)])
                                  : Jet(*p.space, x[static_cast<std::size_t>(i)]));
  }
  for (int i = 0; i < dim; ++i) p.y.push_back(Jet::variable(*p.space, p.y_var(i), y[static_cast<std::size_t>(i)]));
  return p;
}

double evaluate(const ScalarField& f, std::span<const double> x, std::span<const double> y) {
  std::vector<Jet> xs(x.begin(), x.end());
  std::vector<Jet> ys(y.begin(), y.end());
  return f(xs, ys).value();
}

double derive_y(const ScalarField& f, std::span<const double> x, std::span<const double> y,
                std::span<const int> y_index) {
  return derive_x(f, x, y, {}, y_index);
}

double derive_x(const ScalarField& f, std::span<const double> x, std::span<const double> y,
                std::span<const int> x_index, std::span<const int> y_index) {
  const int dim = static_cast<int>(y.size());
  const int x_order = static_cast<int>(x_index.size());
  const int order = x_order + static_cast<int>(y_index.size());
  if (order > ad::kMaxOrder) {
    throw Error(ErrorKind::unsupported_order, "total order " + std::to_string(order) + " exceeds " +
                                                  std::to_string(ad::kMaxOrder));
  }
  if (x_order > kMaxXOrder) {
    throw Error(ErrorKind::unsupported_order, "x-order " + std::to_string(x_order) + " exceeds " +
                                                  std::to_string(kMaxXOrder));
  }
  require_index(x_index, dim, "x");
  require_index(y_index, dim, "y");
  const SeededPoint p = seed_point(x, y, order, x_order);
  const Jet value = f(p.x, p.y);
  return value.partial(exponent_vector(x_index, y_index, dim, p.x_is_variable));
}

double fd_base_step(int total_order) noexcept {
  // Balances O(h^6) truncation after two Richardson levels against eps / h^order rounding.
  static constexpr double steps[] = {1e-3, 1e-3, 1e-2, 2e-2, 4e-2, 6e-2, 8e-2};
  return steps[std::clamp(total_order, 0, 6)];
}

FdComparison fd_check(const ScalarField& f, std::span<const double> x, std::span<const double> y,
                      std::span<const int> x_index, std::span<const int> y_index) {
  FdComparison out;
  out.ad = derive_x(f, x, y, x_index, y_index);
  const int dim = static_cast<int>(y.size());
  const std::vector<int> counts = exponent_vector(x_index, y_index, dim, true);
  const int order = static_cast<int>(x_index.size() + y_index.size());
  if (order == 0) {
    out.fd = evaluate(f, x, y);
  } else {
    const double base = fd_base_step(order);
    std::vector<double> h(static_cast<std::size_t>(2 * dim));
    for (int v = 0; v < 2 * dim; ++v) {
      const double z = v < dim ? x[static_cast<std::size_t>(v)] : y[static_cast<std::size_t>(v - dim)];
      h[static_cast<std::size_t>(v)] = base * std::max(1.0, std::abs(z));
    }
    double d[3];
    for (double& level : d) {
      level = central_difference(f, x, y, counts, h);
      for (double& hv : h) hv *= 0.5;
    }
    const double r0 = (4.0 * d[1] - d[0]) / 3.0;
    const double r1 = (4.0 * d[2] - d[1]) / 3.0;
    out.fd = (16.0 * r1 - r0) / 15.0;
  }
  out.diff = std::abs(out.ad - out.fd);
  return out;
}

}  // namespace finsler
