// SPDX-License-Identifier: Apache-2.0
#include "finsler/geodesic.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>

#include "finsler/error.hpp"
#include "finsler/geometry.hpp"
#include "finsler/parallel.hpp"
#include "finsler/sampling.hpp"
#include "finsler/soliton.hpp"

namespace finsler {
namespace {

namespace odeint = boost::numeric::odeint;
using State = std::vector<double>;
using Vec = std::vector<double>;

double dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

// F-length of the straight segment p -> q (Simpson, 64 panels); nullopt if it leaves the chart.
std::optional<double> segment_length(const FinslerStructure& s, std::span<const double> p,
                                     std::span<const double> q) {
  const std::size_t n = p.size();
  constexpr int kPanels = 64;
  Vec d(n), x(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = q[i] - p[i];
  if (std::all_of(d.begin(), d.end(), [](double v) { return v == 0.0; })) return 0.0;
  double acc = 0.0;
  for (int k = 0; k <= kPanels; ++k) {
    const double u = static_cast<double>(k) / kPanels;
    for (std::size_t i = 0; i < n; ++i) x[i] = p[i] + u * d[i];
    if (!s.chart().contains(x)) return std::nullopt;
    const double w = (k == 0 || k == kPanels) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    acc += w * evaluate_F_unchecked(s, x, d);
  }
  return acc / (3.0 * kPanels);
}

struct Endpoint {
  Vec x;
  bool ok = false;
};

// x(1) of the geodesic with initial velocity w.
Endpoint shoot(const FinslerStructure& s, std::span<const double> p, std::span<const double> w, double tol) {
  GeodesicOptions o;
  o.tol = tol;
  o.sample_dt = 1.0;
  o.check_drift = false;
  try {
    const GeodesicPath path = integrate_geodesic(s, p, w, 1.0, o);
    if (path.exited_domain) return {};
    return {path.samples.back().x, true};
  } catch (const Error&) {
    return {};
  }
}

struct Refined {
  double distance = INFINITY;
  double miss = INFINITY;
  Vec w;
};

// Levenberg-Marquardt on x(1; p, w) = q with a forward-difference Jacobian.
Refined refine_shot(const FinslerStructure& s, std::span<const double> p, std::span<const double> q, Vec w,
                    const DistanceOptions& opt) {
  const int n = s.dim();
  const double shot_tol = std::min(1e-12, opt.tol * 1e-3);
  Endpoint e = shoot(s, p, w, shot_tol);
  if (!e.ok) return {};
  Eigen::VectorXd r(n);
  for (int i = 0; i < n; ++i) r(i) = e.x[static_cast<std::size_t>(i)] - q[static_cast<std::size_t>(i)];
  double mu = 1e-6;
  for (int it = 0; it < 40 && r.norm() > 0.1 * opt.tol; ++it) {
    Eigen::MatrixXd J(n, n);
    double wn = 0.0;
    for (double c : w) wn = std::max(wn, std::abs(c));
    const double h = 1e-7 * std::max(1.0, wn);
    bool ok = true;
    for (int j = 0; j < n && ok; ++j) {
      Vec wj(w);
      wj[static_cast<std::size_t>(j)] += h;
      const Endpoint ej = shoot(s, p, wj, shot_tol);
      ok = ej.ok;
      if (ok)
        for (int i = 0; i < n; ++i) J(i, j) = (ej.x[static_cast<std::size_t>(i)] - e.x[static_cast<std::size_t>(i)]) / h;
    }
    if (!ok) break;
    bool improved = false;
    for (int attempt = 0; attempt < 12 && !improved; ++attempt) {
      const Eigen::MatrixXd A = J.transpose() * J + mu * Eigen::MatrixXd::Identity(n, n);
      const Eigen::VectorXd delta = A.ldlt().solve(-J.transpose() * r);
      Vec cand(w);
      for (int i = 0; i < n; ++i) cand[static_cast<std::size_t>(i)] += delta(i);
      const Endpoint ec = shoot(s, p, cand, shot_tol);
      if (ec.ok) {
        Eigen::VectorXd rc(n);
        for (int i = 0; i < n; ++i) rc(i) = ec.x[static_cast<std::size_t>(i)] - q[static_cast<std::size_t>(i)];
        if (rc.norm() < r.norm()) {
          w = std::move(cand);
          e = ec;
          r = rc;
          mu = std::max(mu * 0.1, 1e-12);
          improved = true;
          continue;
        }
      }
      mu *= 10.0;
    }
    if (!improved) break;
  }
  Refined out;
  out.miss = r.norm();
  out.w = w;
  out.distance = evaluate_F_unchecked(s, p, w);
  return out;
}

// Closest approach of a fan path to q: (miss, t), refined on the cubic Hermite interpolant.
std::pair<double, double> closest_approach(const GeodesicPath& path, std::span<const double> q) {
  const auto& S = path.samples;
  std::size_t best = 0;
  double bd = INFINITY;
  for (std::size_t k = 0; k < S.size(); ++k) {
    const double d = dist(S[k].x, q);
    if (d < bd) {
      bd = d;
      best = k;
    }
  }
  double bt = S[best].t;
  const std::size_t n = q.size();
  Vec x(n);
  for (std::size_t seg = best > 0 ? best - 1 : 0; seg < std::min(best + 1, S.size() - 1); ++seg) {
    const auto& a = S[seg];
    const auto& b = S[seg + 1];
    const double h = b.t - a.t;
    for (int k = 1; k < 32; ++k) {
      const double u = k / 32.0;
      const double h00 = 2 * u * u * u - 3 * u * u + 1, h10 = u * u * u - 2 * u * u + u;
      const double h01 = -2 * u * u * u + 3 * u * u, h11 = u * u * u - u * u;
      for (std::size_t i = 0; i < n; ++i) x[i] = h00 * a.x[i] + h10 * h * a.v[i] + h01 * b.x[i] + h11 * h * b.v[i];
      const double d = dist(x, q);
      if (d < bd) {
        bd = d;
        bt = a.t + u * h;
      }
    }
  }
  return {bd, bt};
}

}  // namespace

GeodesicPath integrate_geodesic(const FinslerStructure& s, std::span<const double> x0, std::span<const double> y0,
                                double length, const GeodesicOptions& opt) {
  const int n = s.dim();
  const auto N = static_cast<std::size_t>(n);
  if (!(length > 0.0)) throw Error(ErrorKind::invalid_params, "geodesic length must be positive");
  if (x0.size() != N || y0.size() != N) throw Error(ErrorKind::invalid_params, "geodesic start has wrong dimension");
  GeodesicPath path;
  path.length = length;
  path.tol = opt.tol;
  path.F0 = evaluate_F(s, x0, y0);

  auto system = [&](const State& z, State& dz, double) {
    const std::span<const double> x(z.data(), N), v(z.data() + N, N);
    const Vec G = spray_values(s, x, v);
    for (std::size_t i = 0; i < N; ++i) {
      dz[i] = z[N + i];
      dz[N + i] = -2.0 * G[i];
    }
  };
  auto stepper = odeint::make_controlled<odeint::runge_kutta_fehlberg78<State>>(opt.tol, opt.tol);

  const auto count = static_cast<std::size_t>(std::max(1.0, std::ceil(length / opt.sample_dt - 1e-9)));
  const double spacing = length / static_cast<double>(count);
  State z(2 * N);
  std::copy(x0.begin(), x0.end(), z.begin());
  std::copy(y0.begin(), y0.end(), z.begin() + n);
  path.samples.push_back({0.0, {x0.begin(), x0.end()}, {y0.begin(), y0.end()}});

  double t = 0.0;
  double dt = std::min(spacing, 0.05);
  const double dt_floor = 1e-12 * std::max(1.0, length);
  for (std::size_t k = 1; k <= count && !path.exited_domain; ++k) {
    const double target = k == count ? length : spacing * static_cast<double>(k);
    while (t < target) {
      if (++path.steps > opt.max_steps) throw Error(ErrorKind::integration_failure, "geodesic step budget exhausted");
      const bool landing = dt >= target - t;
      double step = landing ? target - t : dt;
      const State saved = z;
      const double t_saved = t;
      odeint::controlled_step_result res;
      try {
        res = stepper.try_step(system, z, t, step);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::domain_violation && e.kind() != ErrorKind::regularity_failure &&
            e.kind() != ErrorKind::strong_convexity) {
          throw;
        }
        z = saved;
        t = t_saved;
        dt = 0.5 * (landing ? target - t : dt);
        if (dt < dt_floor) {
          path.exited_domain = true;
          break;
        }
        continue;
      }
      if (res == odeint::fail) {
        dt = step;
        if (dt < dt_floor) throw Error(ErrorKind::integration_failure, "step size underflow");
        continue;
      }
      if (!s.chart().contains(std::span<const double>(z.data(), N))) {
        z = saved;
        t = t_saved;
        path.exited_domain = true;
        break;
      }
      if (landing) t = target;
      // the controller's proposal after a short landing step would shrink the stride needlessly
      dt = landing ? std::max(step, dt) : step;
    }
    if (path.exited_domain) break;
    path.samples.push_back({t, {z.begin(), z.begin() + n}, {z.begin() + n, z.end()}});
  }

  for (const auto& smp : path.samples) {
    path.F_drift = std::max(path.F_drift, std::abs(evaluate_F_unchecked(s, smp.x, smp.v) - path.F0));
  }
  if (opt.check_drift && path.F_drift > 100.0 * opt.tol * std::max(1.0, path.F0)) {
    throw Error(ErrorKind::integration_failure, "F drift " + std::to_string(path.F_drift) + " exceeds 100 * tol");
  }
  return path;
}

GeodesicPath integrate_geodesic(const FinslerStructure& s, std::span<const double> x0, std::span<const double> y0,
                                double length, double tol) {
  GeodesicOptions o;
  o.tol = tol;
  return integrate_geodesic(s, x0, y0, length, o);
}

nlohmann::json GeodesicPath::to_json(bool include_samples) const {
  nlohmann::json j = {{"F0", F0},          {"F_drift", F_drift}, {"length", length},
                      {"end_time", end_time()}, {"exited_domain", exited_domain}, {"tol", tol},
                      {"steps", steps},    {"sample_count", samples.size()}};
  if (include_samples) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& smp : samples) arr.push_back({{"t", smp.t}, {"x", smp.x}, {"v", smp.v}});
    j["samples"] = std::move(arr);
  }
  return j;
}

std::vector<DistanceResult> forward_distances(const FinslerStructure& s, std::span<const double> p,
                                              const std::vector<std::vector<double>>& targets,
                                              const DistanceOptions& opt) {
  const int n = s.dim();
  require_in_domain(s, p);
  for (const auto& q : targets) require_in_domain(s, q);
  std::vector<DistanceResult> results(targets.size());
  std::vector<std::size_t> open;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (dist(p, targets[i]) == 0.0) {
      results[i] = {0.0, 0.0, Vec(static_cast<std::size_t>(n), 0.0), 1};
    } else {
      open.push_back(i);
    }
  }
  if (open.empty()) return results;

  double L = 0.0;
  if (opt.max_length) {
    L = *opt.max_length;
  } else {
    for (std::size_t i : open) {
      const auto seg = segment_length(s, p, targets[i]);
      if (!seg) throw Error(ErrorKind::invalid_params, "straight segment leaves the chart; set max_length");
      L = std::max(L, 1.25 * *seg);
    }
  }

  const auto dirs = seed_directions(n, opt.seeds > 0 ? opt.seeds : default_seed_count(n));
  std::vector<GeodesicPath> fan(dirs.size());
  std::vector<char> fan_ok(dirs.size(), 0);
  GeodesicOptions fo;
  fo.tol = opt.fan_tol;
  fo.sample_dt = opt.fan_sample_dt;
  fo.check_drift = false;
  parallel_for(
      dirs.size(),
      [&](std::size_t k) {
        try {
          fan[k] = integrate_geodesic(s, p, normalize_direction(s, p, dirs[k]), L, fo);
          fan_ok[k] = fan[k].samples.size() > 1;
        } catch (const Error&) {
          fan_ok[k] = 0;
        }
      },
      opt.workers);

  for (std::size_t i : open) {
    const auto& q = targets[i];
    struct Cand {
      double miss, t;
      std::size_t k;
    };
    std::vector<Cand> cands;
    for (std::size_t k = 0; k < dirs.size(); ++k) {
      if (!fan_ok[k]) continue;
      const auto [miss, t] = closest_approach(fan[k], q);
      if (t > 0.0) cands.push_back({miss, t, k});
    }
    std::sort(cands.begin(), cands.end(),
              [](const Cand& a, const Cand& b) { return a.miss < b.miss || (a.miss == b.miss && a.k < b.k); });
    if (cands.size() > static_cast<std::size_t>(opt.refine)) cands.resize(static_cast<std::size_t>(opt.refine));

    std::vector<Refined> refined(cands.size());
    parallel_for(
        cands.size(),
        [&](std::size_t c) {
          // unit-speed direction travelled for time t reaches q at parameter 1 with velocity t * u
          Vec w = fan[cands[c].k].samples.front().v;
          for (double& v : w) v *= cands[c].t;
          refined[c] = refine_shot(s, p, q, std::move(w), opt);
        },
        opt.workers);

    DistanceResult best;
    best.distance = INFINITY;
    for (const auto& r : refined) {
      if (!(r.miss <= opt.tol)) continue;
      ++best.hits;
      if (r.distance < best.distance) {
        best.distance = r.distance;
        best.miss = r.miss;
        best.initial_velocity = r.w;
      }
    }
    if (best.hits == 0) {
      throw Error(ErrorKind::unreachable_in_chart, "no geodesic shot reached the target within the chart");
    }
    results[i] = std::move(best);
  }
  return results;
}

double forward_distance(const FinslerStructure& s, std::span<const double> p, std::span<const double> q,
                        const DistanceOptions& opt) {
  return forward_distances(s, p, {Vec(q.begin(), q.end())}, opt).front().distance;
}

double forward_distance(const FinslerStructure& s, std::span<const double> p, std::span<const double> q, double tol) {
  DistanceOptions o;
  o.tol = tol;
  return forward_distance(s, p, q, o);
}

DiameterResult diameter_estimate(const FinslerStructure& s, const std::vector<std::vector<double>>& grid,
                                 const DiameterOptions& opt) {
  if (grid.empty()) throw Error(ErrorKind::invalid_params, "diameter grid is empty");
  DiameterResult r;
  r.from = r.to = grid.front();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double nn = INFINITY;
    for (std::size_t j = 0; j < grid.size(); ++j)
      if (i != j) nn = std::min(nn, dist(grid[i], grid[j]));
    if (std::isfinite(nn)) r.resolution = std::max(r.resolution, nn);
  }
  const std::size_t sources = opt.symmetric_orbit ? 1 : grid.size();
  for (std::size_t i = 0; i < sources; ++i) {
    std::vector<Vec> targets;
    for (std::size_t j = 0; j < grid.size(); ++j)
      if (j != i) targets.push_back(grid[j]);
    if (targets.empty()) continue;
    const auto d = forward_distances(s, grid[i], targets, opt.distance);
    for (std::size_t j = 0; j < d.size(); ++j) {
      ++r.pairs;
      if (d[j].distance > r.estimate) {
        r.estimate = d[j].distance;
        r.from = grid[i];
        r.to = targets[j];
      }
    }
  }
  return r;
}

nlohmann::json DiameterResult::to_json() const {
  return {{"estimate", estimate}, {"resolution", resolution}, {"pairs", pairs}, {"from", from}, {"to", to}};
}

AuditReport proof_step_audit(const FinslerStructure& s, const VectorField& V, const GeodesicPath& path,
                             const AuditOptions& opt) {
  const int n = s.dim();
  const auto& S = path.samples;
  AuditReport r;
  if (S.size() < 5) throw Error(ErrorKind::invalid_params, "audit needs at least five path samples");
  const double h = S[1].t - S[0].t;
  for (std::size_t k = 1; k < S.size(); ++k) {
    if (std::abs((S[k].t - S[k - 1].t) - h) > 1e-9 * std::max(1.0, h)) {
      throw Error(ErrorKind::invalid_params, "audit needs uniformly spaced samples");
    }
  }

  // phi(t) = g'^k V_k with V_k = g_kl(g, g') V^l
  std::vector<double> phi(S.size());
  for (std::size_t k = 0; k < S.size(); ++k) {
    const LocalFrame f = local_frame(s, S[k].x, S[k].v, FrameLevel::metric);
    const Vec v = V.values(S[k].x);
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) acc += S[k].v[static_cast<std::size_t>(i)] * f.g[idx2(n, i, j)] * v[static_cast<std::size_t>(j)];
    phi[k] = acc;
  }

  const auto stride = static_cast<std::size_t>(std::max(1, opt.stride));
  for (std::size_t k = 2; k + 2 < S.size(); k += stride) {
    const auto& x = S[k].x;
    const auto& y = S[k].v;
    const LocalFrame f = local_frame(s, x, y, FrameLevel::connection);
    Vec v, J;
    V.evaluate(x, v, J);

    // (a) C_ljk y^j y^k nabla_0 V^l
    double cart = 0.0;
    for (int l = 0; l < n; ++l) {
      double n0 = 0.0;
      for (int p = 0; p < n; ++p) {
        double d = J[idx2(n, l, p)];
        for (int m = 0; m < n; ++m) d += f.cartan[idx3(n, l, p, m)] * v[static_cast<std::size_t>(m)];
        n0 += y[static_cast<std::size_t>(p)] * d;
      }
      double cyy = 0.0;
      for (int j = 0; j < n; ++j)
        for (int kk = 0; kk < n; ++kk) cyy += f.C[idx3(n, l, j, kk)] * y[static_cast<std::size_t>(j)] * y[static_cast<std::size_t>(kk)];
      cart += cyy * n0;
    }
    r.cartan_term = std::max(r.cartan_term, std::abs(cart));

    // (b) y^j y^k (L_V g)_jk against 2 d/dt phi
    const TensorAtPoint L = lie_derivative_complete_lift(s, V, x, y);
    double lyy = 0.0;
    for (int j = 0; j < n; ++j)
      for (int kk = 0; kk < n; ++kk) lyy += L(j, kk) * y[static_cast<std::size_t>(j)] * y[static_cast<std::size_t>(kk)];
    const double dphi = (phi[k - 2] - 8.0 * phi[k - 1] + 8.0 * phi[k + 1] - phi[k + 2]) / (12.0 * h);
    r.compatibility = std::max(r.compatibility, std::abs(lyy - 2.0 * dphi));

    // (c) |phi| <= ||V|| on the indicatrix
    IndicatrixOptions no = opt.norm;
    no.extra_seeds.push_back(y);
    const double norm = indicatrix_norm(s, x, v, no);
    r.cauchy_schwarz_excess = std::max(r.cauchy_schwarz_excess, std::abs(phi[k]) - norm);
    ++r.samples;
  }
  return r;
}

nlohmann::json AuditReport::to_json() const {
  return {{"cartan_term", cartan_term},
          {"compatibility", compatibility},
          {"cauchy_schwarz_excess", cauchy_schwarz_excess},
          {"samples", samples}};
}

}  // namespace finsler
