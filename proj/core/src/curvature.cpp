// SPDX-License-Identifier: Apache-2.0
#include "finsler/curvature.hpp"

#include <vector>

#include "finsler/error.hpp"
#include "finsler/geometry.hpp"

namespace finsler {
namespace {

using V = Variance;

// Jet orders: the spray costs two orders of h (one x, one y); the bracket
// costs two more. Ric_jk needs two further y-derivatives of the bracket.
constexpr int kScalarOrder = 4;
constexpr int kTensorOrder = 6;
constexpr int kXCap = 2;

struct Prepared {
  std::vector<double> x, y;
  SeededFinsler p;
};

Prepared prepare(const FinslerStructure& s, std::span<const double> x, std::span<const double> y, int order,
                 const CurvatureOptions& opt) {
  Prepared out{{x.begin(), x.end()}, {y.begin(), y.end()}, {}};
  std::vector<double> yy = opt.normalize ? normalize_direction(s, x, y) : out.y;
  out.p = seed_finsler(s, x, yy, order, kXCap);
  return out;
}

// Bracket of the reduced curvature before the 1/F^2 factor; trace_only skips i != k.
std::vector<Jet> bracket(const SeededFinsler& p, bool trace_only) {
  const int n = p.dim;
  const std::vector<Jet> G = spray_jets(p);
  std::vector<Jet> Gy(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) Gy[idx2(n, i, j)] = G[static_cast<std::size_t>(i)].derivative(p.y_var(j));

  std::vector<Jet> R(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i) {
    const Jet& Gi = G[static_cast<std::size_t>(i)];
    for (int k = 0; k < n; ++k) {
      if (trace_only && i != k) continue;
      const Jet Giyk = Gy[idx2(n, i, k)];
      Jet acc = 2.0 * Gi.derivative(p.x_var(k));
      for (int j = 0; j < n; ++j) {
        acc -= Giyk.derivative(p.x_var(j)) * p.y[static_cast<std::size_t>(j)];
        acc += 2.0 * G[static_cast<std::size_t>(j)] * Giyk.derivative(p.y_var(j));
        acc -= Gy[idx2(n, i, j)] * Gy[idx2(n, j, k)];
      }
      R[idx2(n, i, k)] = std::move(acc);
    }
  }
  return R;
}

}  // namespace

TensorAtPoint reduced_curvature(const FinslerStructure& s, std::span<const double> x, std::span<const double> y,
                                CurvatureOptions opt) {
  const Prepared pr = prepare(s, x, y, kScalarOrder, opt);
  const std::vector<Jet> R = bracket(pr.p, false);
  const double F2 = pr.p.F.value() * pr.p.F.value();
  std::vector<double> c(R.size());
  for (std::size_t k = 0; k < R.size(); ++k) c[k] = R[k].value() / F2;
  return {pr.x, pr.y, {V::contravariant, V::covariant}, {}, std::move(c)};
}

double ricci_scalar(const FinslerStructure& s, std::span<const double> x, std::span<const double> y,
                    CurvatureOptions opt) {
  const Prepared pr = prepare(s, x, y, kScalarOrder, opt);
  const int n = s.dim();
  const std::vector<Jet> R = bracket(pr.p, true);
  double trace = 0.0;
  for (int i = 0; i < n; ++i) trace += R[idx2(n, i, i)].value();
  return trace / (pr.p.F.value() * pr.p.F.value());
}

RicciData ricci(const FinslerStructure& s, std::span<const double> x, std::span<const double> y,
                CurvatureOptions opt) {
  const Prepared pr = prepare(s, x, y, kTensorOrder, opt);
  const SeededFinsler& p = pr.p;
  const int n = s.dim();
  const std::vector<Jet> R = bracket(p, true);
  // F^2/2 * (trace / F^2) is half the trace, a 2-homogeneous field whose Hessian is Ric_jk
  Jet half_trace = R[0];
  for (int i = 1; i < n; ++i) half_trace += R[idx2(n, i, i)];
  half_trace *= 0.5;

  RicciData out;
  out.scalar = 2.0 * half_trace.value() / (p.F.value() * p.F.value());
  std::vector<double> c(static_cast<std::size_t>(n * n));
  for (int j = 0; j < n; ++j) {
    const Jet dj = half_trace.derivative(p.y_var(j));
    for (int k = j; k < n; ++k) {
      c[idx2(n, j, k)] = dj.derivative(p.y_var(k)).value();
      c[idx2(n, k, j)] = c[idx2(n, j, k)];
    }
  }
  out.tensor = TensorAtPoint(pr.x, pr.y, {V::covariant, V::covariant}, {{0, 1}}, std::move(c));
  return out;
}

TensorAtPoint ricci_tensor(const FinslerStructure& s, std::span<const double> x, std::span<const double> y,
                           CurvatureOptions opt) {
  return ricci(s, x, y, opt).tensor;
}

TensorAtPoint riemannian_ricci_oracle(const MetricField& a, int dim, std::span<const double> x) {
  const int n = dim;
  const auto N = static_cast<std::size_t>(n);
  const JetSpace& space = JetSpace::get(n, 2);
  std::vector<Jet> xj;
  xj.reserve(N);
  for (int i = 0; i < n; ++i) xj.push_back(Jet::variable(space, i, x[static_cast<std::size_t>(i)]));
  const std::vector<Jet> A = a(xj);
  if (A.size() != N * N) throw Error(ErrorKind::invalid_params, "metric field has wrong component count");

  // Gauss-Jordan inverse on jets
  std::vector<Jet> m = A;
  std::vector<Jet> inv(N * N, Jet(0.0));
  for (int i = 0; i < n; ++i) inv[idx2(n, i, i)] = Jet(1.0);
  for (int c = 0; c < n; ++c) {
    if (!(m[idx2(n, c, c)].value() > 0.0)) throw Error(ErrorKind::strong_convexity, "metric not positive definite");
    const Jet piv = ad::reciprocal(m[idx2(n, c, c)]);
    for (int j = 0; j < n; ++j) {
      m[idx2(n, c, j)] *= piv;
      inv[idx2(n, c, j)] *= piv;
    }
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      const Jet f = m[idx2(n, r, c)];
      for (int j = 0; j < n; ++j) {
        m[idx2(n, r, j)] -= f * m[idx2(n, c, j)];
        inv[idx2(n, r, j)] -= f * inv[idx2(n, c, j)];
      }
    }
  }

  // Gamma^i_jk as order-1 jets
  std::vector<Jet> dA(N * N * N);  // dA[(l*n+i)*n+j] = d_l a_ij
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) dA[idx3(n, l, i, j)] = A[idx2(n, i, j)].derivative(l);
  std::vector<Jet> Gam(N * N * N);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        Jet acc;
        for (int l = 0; l < n; ++l)
          acc += inv[idx2(n, i, l)] * (dA[idx3(n, j, l, k)] + dA[idx3(n, k, l, j)] - dA[idx3(n, l, j, k)]);
        Gam[idx3(n, i, j, k)] = 0.5 * acc;
      }
    }
  }

  // R_jk = d_i Gamma^i_jk - d_k Gamma^i_ji + Gamma^i_ip Gamma^p_jk - Gamma^i_kp Gamma^p_ji
  std::vector<double> c(N * N, 0.0);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i) {
        acc += Gam[idx3(n, i, j, k)].derivative(i).value();
        acc -= Gam[idx3(n, i, j, i)].derivative(k).value();
        for (int q = 0; q < n; ++q) {
          acc += Gam[idx3(n, i, i, q)].value() * Gam[idx3(n, q, j, k)].value();
          acc -= Gam[idx3(n, i, k, q)].value() * Gam[idx3(n, q, j, i)].value();
        }
      }
      c[idx2(n, j, k)] = acc;
    }
  }
  return {{x.begin(), x.end()}, {}, {V::covariant, V::covariant}, {{0, 1}}, std::move(c)};
}

}  // namespace finsler
