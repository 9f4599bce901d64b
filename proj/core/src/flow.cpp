// SPDX-License-Identifier: Apache-2.0
#include "finsler/flow.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "finsler/curvature.hpp"
#include "finsler/error.hpp"
#include "finsler/geometry.hpp"
#include "finsler/parallel.hpp"

namespace finsler {
namespace {

using Vec = std::vector<double>;

std::vector<Jet> constants(std::span<const double> v) { return {v.begin(), v.end()}; }

void require_admissible(const ParametricFamily& family, std::span<const double> theta) {
  for (double v : theta)
    if (!std::isfinite(v)) throw Error(ErrorKind::regularity_failure, "non-finite family parameter");
  if (const auto k = family.scale_index(); k && !(theta[static_cast<std::size_t>(*k)] > 0.0)) {
    throw Error(ErrorKind::strong_convexity, "scale parameter reached " +
                                                 std::to_string(theta[static_cast<std::size_t>(*k)]));
  }
  if (auto why = family.violation(theta)) throw Error(ErrorKind::strong_convexity, *why);
}

// F > 0 and g positive definite at the probe; local_frame throws otherwise.
void require_admissible_at(const FinslerStructure& s, const SamplePoint& p) {
  const LocalFrame f = local_frame(s, p.x, p.y, FrameLevel::metric);
  if (!(f.F > 0.0)) throw Error(ErrorKind::strong_convexity, "F not positive at a probe");
}

}  // namespace

ParametricFamily::ParametricFamily(std::string name, int dim, MetricKind kind, Chart chart,
                                   std::vector<std::string> theta_names, Field field, std::optional<int> scale_index,
                                   nlohmann::json description, Constraint constraint)
    : name_(std::move(name)),
      dim_(dim),
      kind_(kind),
      chart_(std::move(chart)),
      theta_names_(std::move(theta_names)),
      field_(std::move(field)),
      scale_index_(scale_index),
      description_(std::move(description)),
      constraint_(std::move(constraint)) {
  if (theta_names_.empty()) throw Error(ErrorKind::invalid_params, "family needs at least one parameter");
}

std::optional<std::string> ParametricFamily::violation(std::span<const double> theta) const {
  if (!constraint_) return std::nullopt;
  return constraint_(theta);
}

ParametricFamily ParametricFamily::scale(const FinslerStructure& base) {
  const ScalarField F0 = base.field();
  return {"scale(" + base.label() + ")",
          base.dim(),
          base.kind(),
          base.chart(),
          {"c"},
          [F0](std::span<const Jet> th, std::span<const Jet> x, std::span<const Jet> y) { return th[0] * F0(x, y); },
          0,
          {{"type", "scale"}, {"base", base.label()}}};
}

ParametricFamily ParametricFamily::randers(int dim) {
  Chart chart{"R^" + std::to_string(dim), Domain::whole(), Domain::cube(dim, 1.0), "global chart"};
  return {"randers(a, b)",
          dim,
          MetricKind::randers,
          std::move(chart),
          {"a", "b"},
          [](std::span<const Jet> th, std::span<const Jet>, std::span<const Jet> y) {
            Jet q = y[0] * y[0];
            for (std::size_t i = 1; i < y.size(); ++i) q += y[i] * y[i];
            return th[0] * ad::sqrt(q) + th[1] * y[0];
          },
          0,
          {{"type", "randers"}},
          [](std::span<const double> th) -> std::optional<std::string> {
            // strongly convex and positive exactly when a > |b|
            if (th[0] > std::abs(th[1])) return std::nullopt;
            return "randers family needs a > |b|, got a = " + std::to_string(th[0]) + ", b = " + std::to_string(th[1]);
          }};
}

FinslerStructure ParametricFamily::at(std::span<const double> theta) const {
  if (static_cast<int>(theta.size()) != parameters()) throw Error(ErrorKind::invalid_params, "theta size mismatch");
  std::vector<Jet> th = constants(theta);
  const Field field = field_;
  nlohmann::json params = {{"family", name_}, {"theta", Vec(theta.begin(), theta.end())}};
  return FinslerStructure(
      dim_, kind_, chart_, [field, th](std::span<const Jet> x, std::span<const Jet> y) { return field(th, x, y); },
      std::move(params), false);
}

Vec ParametricFamily::dlogF(std::span<const double> theta, std::span<const double> x,
                            std::span<const double> y) const {
  const int q = parameters();
  const JetSpace& space = JetSpace::get(q, 1);
  std::vector<Jet> th;
  for (int i = 0; i < q; ++i) th.push_back(Jet::variable(space, i, theta[static_cast<std::size_t>(i)]));
  const Jet lf = ad::log(field_(th, constants(x), constants(y)));
  Vec out(static_cast<std::size_t>(q));
  for (int i = 0; i < q; ++i) out[static_cast<std::size_t>(i)] = lf.coefficient(space.variable_monomial(i));
  return out;
}

std::vector<Vec> ParametricFamily::dg(std::span<const double> theta, std::span<const double> x,
                                      std::span<const double> y) const {
  const int q = parameters();
  const int n = dim_;
  // theta first and capped at order 1, then y
  const JetSpace& space = JetSpace::get(q + n, 3, q, 1);
  std::vector<Jet> th, yj;
  for (int i = 0; i < q; ++i) th.push_back(Jet::variable(space, i, theta[static_cast<std::size_t>(i)]));
  for (int i = 0; i < n; ++i) yj.push_back(Jet::variable(space, q + i, y[static_cast<std::size_t>(i)]));
  const Jet F = field_(th, constants(x), yj);
  const Jet h = 0.5 * (F * F);
  std::vector<Vec> out(static_cast<std::size_t>(q), Vec(static_cast<std::size_t>(n * n)));
  for (int j = 0; j < n; ++j) {
    const Jet hj = h.derivative(q + j);
    for (int k = 0; k < n; ++k) {
      const Jet gjk = hj.derivative(q + k);
      for (int a = 0; a < q; ++a) out[static_cast<std::size_t>(a)][idx2(n, j, k)] = gjk.derivative(a).value();
    }
  }
  return out;
}

FlowRhs scalar_flow_rhs(const ParametricFamily& family, std::span<const double> theta,
                        std::span<const SamplePoint> probes, std::size_t workers) {
  if (probes.empty()) throw Error(ErrorKind::invalid_params, "flow needs at least one probe");
  require_admissible(family, theta);
  const FinslerStructure s = family.at(theta);
  const int q = family.parameters();
  const auto P = static_cast<Eigen::Index>(probes.size());
  Eigen::MatrixXd A(P, q);
  Eigen::VectorXd r(P);
  std::vector<Vec> rows(probes.size());
  std::vector<double> target(probes.size());
  parallel_for(
      probes.size(),
      [&](std::size_t i) {
        require_admissible_at(s, probes[i]);
        rows[i] = family.dlogF(theta, probes[i].x, probes[i].y);
        target[i] = -ricci_scalar(s, probes[i].x, probes[i].y);
      },
      workers);
  for (Eigen::Index i = 0; i < P; ++i) {
    for (int a = 0; a < q; ++a) A(i, a) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)];
    r(i) = target[static_cast<std::size_t>(i)];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  qr.setThreshold(1e-10);
  if (qr.rank() < q) {
    throw Error(ErrorKind::degenerate_family, "probe design matrix has rank " + std::to_string(qr.rank()) +
                                                  " < " + std::to_string(q));
  }
  const Eigen::VectorXd v = qr.solve(r);
  FlowRhs out;
  out.velocity.assign(v.data(), v.data() + v.size());
  for (double& c : out.velocity)
    if (c == 0.0) c = 0.0;  // normalizes -0.0 for byte-stable reports
  // relative to the curvature scale: Ric of c F0 grows like 1/c^2 towards a shrinking singularity
  out.residual = (A * v - r).cwiseAbs().maxCoeff() / std::max(1.0, r.cwiseAbs().maxCoeff());
  return out;
}

FlowTrajectory run_flow(const ParametricFamily& family, std::span<const double> theta0, double t_end, double dt,
                        std::span<const SamplePoint> probes, const FlowOptions& opt) {
  if (!(dt > 0.0)) throw Error(ErrorKind::invalid_params, "flow dt must be positive");
  if (!(t_end >= 0.0)) throw Error(ErrorKind::invalid_params, "flow t_end must be non-negative");
  const std::size_t q = theta0.size();
  FlowTrajectory traj;
  Vec theta(theta0.begin(), theta0.end());

  auto rhs = [&](const Vec& th) { return scalar_flow_rhs(family, th, probes, opt.workers); };
  auto axpy = [](const Vec& a, double h, const Vec& b) {
    Vec out(a);
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += h * b[i];
    return out;
  };
  auto rk4 = [&](const Vec& th, const Vec& k1, double h) {
    const Vec k2 = rhs(axpy(th, 0.5 * h, k1)).velocity;
    const Vec k3 = rhs(axpy(th, 0.5 * h, k2)).velocity;
    const Vec k4 = rhs(axpy(th, h, k3)).velocity;
    Vec out(th);
    for (std::size_t i = 0; i < th.size(); ++i) out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
  };

  FlowRhs here;
  try {
    here = rhs(theta);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::degenerate_family || e.kind() == ErrorKind::invalid_params) throw;
    traj.singular = true;
    traj.witness = e.what();
    traj.points.push_back({0.0, theta, NAN});
    return traj;
  }
  double t = 0.0;
  traj.points.push_back({t, theta, here.residual});
  double h = std::min(dt, t_end);
  std::size_t steps = 0;
  while (t < t_end) {
    if (++steps > opt.max_steps) throw Error(ErrorKind::integration_failure, "flow step budget exhausted");
    const double step = std::min(h, t_end - t);
    Vec next;
    FlowRhs next_rhs;
    double err = INFINITY;
    bool failed = false;
    std::string why;
    try {
      const Vec full = rk4(theta, here.velocity, step);
      const Vec mid = rk4(theta, here.velocity, 0.5 * step);
      const Vec half = rk4(mid, rhs(mid).velocity, 0.5 * step);
      err = 0.0;
      next.resize(q);
      for (std::size_t i = 0; i < q; ++i) {
        const double e = (half[i] - full[i]) / 15.0;
        next[i] = half[i] + e;
        err = std::max(err, std::abs(e) / std::max(std::abs(next[i]), 1e-12));
      }
      if (err <= opt.rtol) next_rhs = rhs(next);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::degenerate_family || e.kind() == ErrorKind::invalid_params) throw;
      failed = true;
      why = e.what();
    }
    if (failed || !(err <= opt.rtol)) {
      ++traj.rejected_steps;
      h = failed ? 0.25 * step : step * std::clamp(0.9 * std::pow(opt.rtol / err, 0.2), 0.1, 0.9);
      if (h < opt.min_dt) {
        traj.singular = true;
        traj.singular_time = t;
        traj.witness = failed ? why : "step size fell below " + std::to_string(opt.min_dt);
        break;
      }
      continue;
    }
    t = (step == t_end - t) ? t_end : t + step;
    theta = std::move(next);
    here = std::move(next_rhs);
    traj.points.push_back({t, theta, here.residual});
    const double grow = err > 0.0 ? 0.9 * std::pow(opt.rtol / err, 0.2) : 4.0;
    h = step * std::clamp(grow, 0.2, 4.0);
    if (h < opt.min_dt && t < t_end) {
      traj.singular = true;
      traj.singular_time = t;
      traj.witness = "step size fell below " + std::to_string(opt.min_dt);
      break;
    }
  }
  return traj;
}

double tensor_flow_residual(const ParametricFamily& family, std::span<const double> theta,
                            std::span<const double> theta_velocity, std::span<const SamplePoint> probes,
                            std::size_t workers) {
  require_admissible(family, theta);
  const FinslerStructure s = family.at(theta);
  const int n = family.dim();
  std::vector<double> worst(probes.size(), 0.0);
  std::vector<double> scale(probes.size(), 0.0);
  parallel_for(
      probes.size(),
      [&](std::size_t i) {
        const auto d = family.dg(theta, probes[i].x, probes[i].y);
        const TensorAtPoint ric = ricci_tensor(s, probes[i].x, probes[i].y);
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            double dgdt = 0.0;
            for (std::size_t a = 0; a < d.size(); ++a) dgdt += d[a][idx2(n, j, k)] * theta_velocity[a];
            worst[i] = std::max(worst[i], std::abs(dgdt + 2.0 * ric(j, k)));
            scale[i] = std::max(scale[i], std::abs(2.0 * ric(j, k)));
          }
      },
      workers);
  double m = 0.0, big = 1.0;
  for (std::size_t i = 0; i < worst.size(); ++i) {
    m = std::max(m, worst[i]);
    big = std::max(big, scale[i]);
  }
  return m / big;
}

nlohmann::json FlowTrajectory::to_json() const {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : points) pts.push_back({{"t", p.t}, {"theta", p.theta}, {"residual", p.residual}});
  return {{"points", std::move(pts)},
          {"singular", singular},
          {"singular_time", singular ? nlohmann::json(singular_time) : nlohmann::json(nullptr)},
          {"witness", witness},
          {"rejected_steps", rejected_steps}};
}

}  // namespace finsler
