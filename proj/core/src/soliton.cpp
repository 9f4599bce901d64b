// SPDX-License-Identifier: Apache-2.0
#include "finsler/soliton.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include <Eigen/Dense>

#include "finsler/curvature.hpp"
#include "finsler/error.hpp"
#include "finsler/geometry.hpp"
#include "finsler/parallel.hpp"

namespace finsler {
namespace {

using Vec = std::vector<double>;

struct FieldAt {
  Vec v;  // V^m
  Vec J;  // dV^m/dx^p
};

FieldAt field_at(const VectorField& V, std::span<const double> x, int n) {
  if (V.dim() != n) throw Error(ErrorKind::invalid_params, "vector field dimension does not match the metric");
  FieldAt f;
  V.evaluate(x, f.v, f.J);
  return f;
}

// g_ij(x, u) V^i V^j and its y-gradient 2 C_ijm V^i V^j.
double quadratic_form(const FinslerStructure& s, std::span<const double> x, std::span<const double> u,
                      std::span<const double> v, Vec* grad) {
  const int n = s.dim();
  const SeededFinsler p = seed_finsler(s, x, u, grad ? 3 : 2, 0);
  const std::vector<Jet> g = metric_jets(p);
  Jet q;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) q += v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(j)] * g[idx2(n, i, j)];
  if (grad) {
    grad->assign(static_cast<std::size_t>(n), 0.0);
    for (int m = 0; m < n; ++m) (*grad)[static_cast<std::size_t>(m)] = q.derivative(p.y_var(m)).value();
  }
  return q.value();
}

double norm2(const Vec& a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return std::sqrt(s);
}

}  // namespace

std::string to_string(SolitonClass c) {
  switch (c) {
    case SolitonClass::shrinking: return "shrinking";
    case SolitonClass::steady: return "steady";
    case SolitonClass::expanding: return "expanding";
  }
  return "steady";
}

SolitonClass classify(double lambda) noexcept {
  if (lambda > 0.0) return SolitonClass::shrinking;
  if (lambda < 0.0) return SolitonClass::expanding;
  return SolitonClass::steady;
}

TensorAtPoint lie_derivative_complete_lift(const FinslerStructure& s, const VectorField& V,
                                           std::span<const double> x, std::span<const double> y) {
  const int n = s.dim();
  const LocalFrame f = local_frame(s, x, y, FrameLevel::connection);
  const FieldAt V_ = field_at(V, x, n);
  TensorAtPoint L({x.begin(), x.end()}, {y.begin(), y.end()}, {Variance::covariant, Variance::covariant}, {{0, 1}});
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      double acc = 0.0;
      for (int m = 0; m < n; ++m) {
        acc += V_.v[static_cast<std::size_t>(m)] * f.dgdx[idx3(n, m, j, k)];
        double ydV = 0.0;
        for (int p = 0; p < n; ++p) ydV += y[static_cast<std::size_t>(p)] * V_.J[idx2(n, m, p)];
        acc += ydV * 2.0 * f.C[idx3(n, j, k, m)];
        acc += V_.J[idx2(n, m, j)] * f.g[idx2(n, m, k)] + V_.J[idx2(n, m, k)] * f.g[idx2(n, j, m)];
      }
      L(j, k) = acc;
    }
  }
  return L;
}

TensorAtPoint lie_derivative_cartan(const FinslerStructure& s, const VectorField& V, std::span<const double> x,
                                    std::span<const double> y) {
  const int n = s.dim();
  const auto N3 = static_cast<std::size_t>(n * n * n);
  const LocalFrame f = local_frame(s, x, y, FrameLevel::connection);
  const FieldAt V_ = field_at(V, x, n);

  Vec Vlow(static_cast<std::size_t>(n), 0.0);  // V_k = g_kl V^l
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) Vlow[static_cast<std::size_t>(k)] += f.g[idx2(n, k, l)] * V_.v[static_cast<std::size_t>(l)];

  // delta_j g_kl = dg_kl/dx^j - N^q_j dg_kl/dy^q
  Vec delta_g(N3);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        double d = f.dgdx[idx3(n, j, k, l)];
        for (int q = 0; q < n; ++q) d -= f.N[idx2(n, q, j)] * 2.0 * f.C[idx3(n, q, k, l)];
        delta_g[idx3(n, j, k, l)] = d;
      }

  // nabla_j V_k = delta_j(V_k) - Gamma*^m_jk V_m; V^l depends only on x, so delta_j V^l = dV^l/dx^j
  Vec cov(static_cast<std::size_t>(n * n));
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      double d = 0.0;
      for (int l = 0; l < n; ++l) {
        d += delta_g[idx3(n, j, k, l)] * V_.v[static_cast<std::size_t>(l)] + f.g[idx2(n, k, l)] * V_.J[idx2(n, l, j)];
      }
      for (int m = 0; m < n; ++m) d -= f.cartan[idx3(n, m, j, k)] * Vlow[static_cast<std::size_t>(m)];
      cov[idx2(n, j, k)] = d;
    }

  // nabla_0 V^l = y^p (dV^l/dx^p + Gamma*^l_pm V^m)
  Vec nabla0(static_cast<std::size_t>(n), 0.0);
  for (int l = 0; l < n; ++l)
    for (int p = 0; p < n; ++p) {
      double d = V_.J[idx2(n, l, p)];
      for (int m = 0; m < n; ++m) d += f.cartan[idx3(n, l, p, m)] * V_.v[static_cast<std::size_t>(m)];
      nabla0[static_cast<std::size_t>(l)] += y[static_cast<std::size_t>(p)] * d;
    }

  TensorAtPoint L({x.begin(), x.end()}, {y.begin(), y.end()}, {Variance::covariant, Variance::covariant}, {{0, 1}});
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      double acc = cov[idx2(n, j, k)] + cov[idx2(n, k, j)];
      for (int l = 0; l < n; ++l) acc += 2.0 * nabla0[static_cast<std::size_t>(l)] * f.C[idx3(n, l, j, k)];
      L(j, k) = acc;
    }
  return L;
}

double indicatrix_norm(const FinslerStructure& s, std::span<const double> x, std::span<const double> v,
                       const IndicatrixOptions& opt) {
  const int n = s.dim();
  if (static_cast<int>(v.size()) != n) throw Error(ErrorKind::invalid_params, "vector dimension mismatch");
  if (std::all_of(v.begin(), v.end(), [](double c) { return c == 0.0; })) return 0.0;
  require_in_domain(s, x);

  std::vector<Vec> seeds = seed_directions(n, opt.seeds > 0 ? opt.seeds : default_seed_count(n));
  for (const auto& e : opt.extra_seeds) {
    const double r = norm2(e);
    if (r > 0.0) {
      Vec u(e);
      for (double& c : u) c /= r;
      seeds.push_back(std::move(u));
    }
  }
  // g is 0-homogeneous in y, so the search runs on the Euclidean unit sphere
  std::vector<double> val(seeds.size());
  for (std::size_t k = 0; k < seeds.size(); ++k) val[k] = quadratic_form(s, x, seeds[k], v, nullptr);

  std::vector<std::size_t> order(seeds.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  const auto top = std::min<std::size_t>(static_cast<std::size_t>(std::max(opt.refine, 1)), order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(top), order.end(),
                    [&](std::size_t a, std::size_t b) { return val[a] > val[b] || (val[a] == val[b] && a < b); });

  // seed spacing sets the initial step
  const double spacing = n == 2 ? 2.0 * std::numbers::pi / static_cast<double>(seeds.size())
                                : std::sqrt(4.0 * std::numbers::pi / static_cast<double>(seeds.size()));
  double best = val[order[0]];
  for (std::size_t r = 0; r < top; ++r) {
    Vec u = seeds[order[r]];
    Vec grad;
    double f = quadratic_form(s, x, u, v, &grad);
    double step = spacing;
    for (int it = 0; it < opt.max_iterations && step > opt.step_tol * 1e-3; ++it) {
      double gu = 0.0;
      for (int i = 0; i < n; ++i) gu += grad[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(i)];
      Vec t(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = grad[static_cast<std::size_t>(i)] - gu * u[static_cast<std::size_t>(i)];
      const double tn = norm2(t);
      if (tn < 1e-15 * std::max(1.0, std::abs(f))) break;
      Vec cand(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) cand[static_cast<std::size_t>(i)] = u[static_cast<std::size_t>(i)] + step * t[static_cast<std::size_t>(i)] / tn;
      const double cn = norm2(cand);
      for (double& c : cand) c /= cn;
      Vec cgrad;
      const double cf = quadratic_form(s, x, cand, v, &cgrad);
      if (cf > f) {
        u = std::move(cand);
        grad = std::move(cgrad);
        f = cf;
        step *= 1.5;
      } else {
        if (step < opt.step_tol) break;
        step *= 0.3;
      }
    }
    best = std::max(best, f);
  }
  return std::sqrt(std::max(best, 0.0));
}

double indicatrix_norm(const FinslerStructure& s, const VectorField& V, std::span<const double> x,
                       const IndicatrixOptions& opt) {
  return indicatrix_norm(s, x, V.values(x), opt);
}

double diameter_bound(double lambda, double D, int n) {
  if (!(lambda > 0.0)) throw Error(ErrorKind::shrinking_required, "diameter bound needs lambda > 0");
  if (!(D >= 0.0)) throw Error(ErrorKind::invalid_params, "D must be non-negative");
  if (n < 2) throw Error(ErrorKind::invalid_params, "dimension must be >= 2");
  return (std::numbers::pi / lambda) * (D + std::sqrt(D * D + lambda * (n - 1)));
}

std::vector<SamplePoint> soliton_samples(const FinslerStructure& s, std::uint64_t seed, int nx, int ny) {
  return sample_grid(s, nx, ny, seed);
}

SolitonReport soliton_residual(const FinslerStructure& s, const VectorField& V, double lambda,
                               std::span<const SamplePoint> samples, const SolitonOptions& opt) {
  if (samples.empty()) throw Error(ErrorKind::invalid_params, "soliton check needs at least one sample");
  const int n = s.dim();
  struct Out {
    double residual = 0.0;
    double min_eig = 0.0;
  };
  std::vector<Out> out(samples.size());
  parallel_for(
      samples.size(),
      [&](std::size_t i) {
        const SamplePoint& p = samples[i];
        const RicciData ric = ricci(s, p.x, p.y);
        const TensorAtPoint L = lie_derivative_complete_lift(s, V, p.x, p.y);
        const LocalFrame f = local_frame(s, p.x, p.y, FrameLevel::metric);
        Vec E(static_cast<std::size_t>(n * n));
        double res = 0.0;
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            const double e = 2.0 * ric.tensor(j, k) + L(j, k) - 2.0 * lambda * f.g[idx2(n, j, k)];
            E[idx2(n, j, k)] = e;
            res = std::max(res, std::abs(e));
          }
        for (int j = 0; j < n; ++j)
          for (int k = j + 1; k < n; ++k) E[idx2(n, j, k)] = E[idx2(n, k, j)] = 0.5 * (E[idx2(n, j, k)] + E[idx2(n, k, j)]);
        out[i] = {res, eigen_range(E, n).first};
      },
      opt.workers);

  SolitonReport r;
  r.lambda = lambda;
  r.samples = static_cast<int>(samples.size());
  r.classification = classify(lambda);
  r.residual_tol = opt.residual_tol;
  r.eigen_tol = opt.eigen_tol;
  r.hypothesis_min_eig = INFINITY;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!(out[i].residual <= r.residual_sup) || i == 0) {
      r.residual_sup = out[i].residual;
      r.residual_witness = samples[i];
    }
    if (out[i].min_eig < r.hypothesis_min_eig || i == 0) {
      r.hypothesis_min_eig = out[i].min_eig;
      r.eigen_witness = samples[i];
    }
  }

  if (opt.compute_norm) {
    // distinct base points, in first-appearance order
    std::vector<Vec> xs;
    std::map<Vec, bool> seen;
    for (const auto& p : samples)
      if (seen.emplace(p.x, true).second) xs.push_back(p.x);
    std::vector<double> norms(xs.size());
    parallel_for(xs.size(), [&](std::size_t i) { norms[i] = indicatrix_norm(s, V, xs[i], opt.norm); }, opt.workers);
    for (double v : norms) r.norm_sup = std::max(r.norm_sup, v);
  }
  if (lambda > 0.0) r.bound = diameter_bound(lambda, r.norm_sup, n);
  return r;
}

nlohmann::json SolitonReport::to_json() const {
  nlohmann::json j = {{"lambda", lambda},
                      {"samples", samples},
                      {"residual_sup", residual_sup},
                      {"residual_tol", residual_tol},
                      {"hypothesis_min_eig", hypothesis_min_eig},
                      {"eigen_tol", eigen_tol},
                      {"soliton_certified", soliton_certified()},
                      {"hypothesis_certified", hypothesis_certified()},
                      {"classification", to_string(classification)},
                      {"norm_sup", norm_sup},
                      {"residual_witness", {{"x", residual_witness.x}, {"y", residual_witness.y}}},
                      {"eigen_witness", {{"x", eigen_witness.x}, {"y", eigen_witness.y}}}};
  j["bound"] = bound ? nlohmann::json(*bound) : nlohmann::json(nullptr);
  return j;
}

}  // namespace finsler
