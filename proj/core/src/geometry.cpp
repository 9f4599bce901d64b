// SPDX-License-Identifier: Apache-2.0
#include "finsler/geometry.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "finsler/error.hpp"

namespace finsler {
namespace {

std::string point_string(std::span<const double> x, std::span<const double> y) {
  std::ostringstream os;
  os.precision(6);
  os << "x=(";
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? "," : "") << x[i];
  os << ") y=(";
  for (std::size_t i = 0; i < y.size(); ++i) os << (i ? "," : "") << y[i];
  os << ")";
  return os.str();
}

Eigen::MatrixXd to_matrix(std::span<const double> m, int n) {
  Eigen::MatrixXd out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = m[idx2(n, i, j)];
  return out;
}

}  // namespace

SeededFinsler seed_finsler(const FinslerStructure& s, std::span<const double> x, std::span<const double> y,
                           int order, int x_order) {
  require_in_domain(s, x);
  SeededFinsler p;
  static_cast<SeededPoint&>(p) = seed_point(x, y, order, x_order);
  p.F = s(p.x, p.y);
  if (!std::isfinite(p.F.value())) throw Error(ErrorKind::regularity_failure, "F not finite at " + point_string(x, y));
  p.h = 0.5 * (p.F * p.F);
  return p;
}

std::vector<Jet> metric_jets(const SeededFinsler& p) {
  const int n = p.dim;
  std::vector<Jet> g(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i) {
    const Jet hi = p.h.derivative(p.y_var(i));
    for (int j = i; j < n; ++j) {
      g[idx2(n, i, j)] = hi.derivative(p.y_var(j));
      g[idx2(n, j, i)] = g[idx2(n, i, j)];
    }
  }
  return g;
}

std::vector<Jet> solve_spd(std::vector<Jet> a, std::vector<Jet> b, int n) {
  // forward elimination; SPD matrices need no pivoting
  for (int k = 0; k < n; ++k) {
    if (!(a[idx2(n, k, k)].value() > 0.0)) {
      throw Error(ErrorKind::strong_convexity, "non-positive pivot in fundamental tensor");
    }
    const Jet inv = ad::reciprocal(a[idx2(n, k, k)]);
    for (int i = k + 1; i < n; ++i) {
      const Jet factor = a[idx2(n, i, k)] * inv;
      for (int j = k + 1; j < n; ++j) a[idx2(n, i, j)] -= factor * a[idx2(n, k, j)];
      b[static_cast<std::size_t>(i)] -= factor * b[static_cast<std::size_t>(k)];
    }
    a[idx2(n, k, k)] = inv;  // keep the reciprocal for back substitution
  }
  std::vector<Jet> z(static_cast<std::size_t>(n));
  for (int i = n - 1; i >= 0; --i) {
    Jet acc = b[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < n; ++j) acc -= a[idx2(n, i, j)] * z[static_cast<std::size_t>(j)];
    z[static_cast<std::size_t>(i)] = acc * a[idx2(n, i, i)];
  }
  return z;
}

std::vector<Jet> spray_jets(const SeededFinsler& p) {
  const int n = p.dim;
  std::vector<Jet> g = metric_jets(p);
  std::vector<Jet> rhs(static_cast<std::size_t>(n));
  std::vector<Jet> hx(static_cast<std::size_t>(n));
  for (int l = 0; l < n; ++l) hx[static_cast<std::size_t>(l)] = p.h.derivative(p.x_var(l));
  for (int l = 0; l < n; ++l) {
    Jet acc = -hx[static_cast<std::size_t>(l)];
    for (int k = 0; k < n; ++k) acc += hx[static_cast<std::size_t>(k)].derivative(p.y_var(l)) * p.y[static_cast<std::size_t>(k)];
    rhs[static_cast<std::size_t>(l)] = 0.5 * acc;
  }
  return solve_spd(std::move(g), std::move(rhs), n);
}

std::pair<double, double> eigen_range(std::span<const double> m, int n) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_matrix(m, n), Eigen::EigenvaluesOnly);
  return {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
}

LocalFrame local_frame(const FinslerStructure& s, std::span<const double> x, std::span<const double> y,
                       FrameLevel level) {
  const int n = s.dim();
  const int order = level == FrameLevel::connection ? 3 : 2;
  const int x_order = level == FrameLevel::metric ? 0 : 1;
  const SeededFinsler p = seed_finsler(s, x, y, order, x_order);

  LocalFrame f;
  f.n = n;
  f.F = p.F.value();
  const std::vector<Jet> gj = metric_jets(p);
  f.g.resize(static_cast<std::size_t>(n * n));
  for (std::size_t k = 0; k < f.g.size(); ++k) f.g[k] = gj[k].value();

  const Eigen::MatrixXd gm = to_matrix(f.g, n);
  const Eigen::LLT<Eigen::MatrixXd> llt(gm);
  if (llt.info() != Eigen::Success || !gm.allFinite()) {
    throw Error(ErrorKind::strong_convexity, "fundamental tensor not positive definite at " + point_string(x, y));
  }
  const Eigen::MatrixXd gi = llt.solve(Eigen::MatrixXd::Identity(n, n));
  f.ginv.resize(f.g.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) f.ginv[idx2(n, i, j)] = 0.5 * (gi(i, j) + gi(j, i));
  if (level == FrameLevel::metric) return f;

  const std::vector<Jet> G = spray_jets(p);
  f.G.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) f.G[static_cast<std::size_t>(i)] = G[static_cast<std::size_t>(i)].value();
  if (level == FrameLevel::spray) return f;

  const auto n3 = static_cast<std::size_t>(n * n * n);
  f.C.assign(n3, 0.0);
  f.dgdx.assign(n3, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Jet& gij = gj[idx2(n, i, j)];
      for (int k = 0; k < n; ++k) {
        f.C[idx3(n, i, j, k)] = 0.5 * gij.derivative(p.y_var(k)).value();
        f.dgdx[idx3(n, k, i, j)] = gij.derivative(p.x_var(k)).value();
      }
    }
  }
  f.N.assign(static_cast<std::size_t>(n * n), 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) f.N[idx2(n, i, j)] = G[static_cast<std::size_t>(i)].derivative(p.y_var(j)).value();

  // formal Christoffel symbols and Cartan horizontal coefficients share the same index gymnastics
  f.gamma.assign(n3, 0.0);
  f.cartan.assign(n3, 0.0);
  std::vector<double> delta(n3);  // delta[(m*n+a)*n+b] = delta_m g_ab
  for (int m = 0; m < n; ++m) {
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        double v = f.dgdx[idx3(n, m, a, b)];
        for (int q = 0; q < n; ++q) v -= f.N[idx2(n, q, m)] * 2.0 * f.C[idx3(n, q, a, b)];
        delta[idx3(n, m, a, b)] = v;
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        double gam = 0.0;
        double car = 0.0;
        for (int q = 0; q < n; ++q) {
          const double gi_q = f.ginv[idx2(n, i, q)];
          gam += gi_q * (f.dgdx[idx3(n, k, q, j)] - f.dgdx[idx3(n, q, j, k)] + f.dgdx[idx3(n, j, k, q)]);
          car += gi_q * (delta[idx3(n, j, q, k)] + delta[idx3(n, k, j, q)] - delta[idx3(n, q, j, k)]);
        }
        f.gamma[idx3(n, i, j, k)] = 0.5 * gam;
        f.cartan[idx3(n, i, j, k)] = 0.5 * car;
      }
    }
  }
  return f;
}

std::vector<double> spray_values(const FinslerStructure& s, std::span<const double> x, std::span<const double> y) {
  const SeededFinsler p = seed_finsler(s, x, y, 2, 1);
  const std::vector<Jet> G = spray_jets(p);
  std::vector<double> out(G.size());
  for (std::size_t i = 0; i < G.size(); ++i) out[i] = G[i].value();
  return out;
}

}  // namespace finsler
