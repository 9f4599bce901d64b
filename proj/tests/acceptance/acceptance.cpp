// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one PASS/FAIL line per criterion. Exit status is 0 iff every selected
// criterion passes; `--criterion N` runs a single one.
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include <CLI11.hpp>

#include "cli.hpp"
#include "finsler/catalog.hpp"
#include "finsler/connection.hpp"
#include "finsler/curvature.hpp"
#include "finsler/expression.hpp"
#include "finsler/flow.hpp"
#include "finsler/geometry.hpp"
#include "finsler/geodesic.hpp"
#include "finsler/sampling.hpp"
#include "finsler/soliton.hpp"
#include "finsler/validation.hpp"

namespace {

using namespace finsler;
using Vec = std::vector<double>;

// Pinned thresholds.
namespace tol {
constexpr int axiom_samples = 1000;
constexpr int euler_samples = 1000;
constexpr double euler_rel = 1e-9;
constexpr double minkowski_ricci = 1e-10;
constexpr double curvature_oracle = 1e-6;
constexpr int oracle_samples = 200;
constexpr int route_configs = 200;
constexpr double route_equivalence = 1e-7;
constexpr double gaussian_residual = 1e-8;
constexpr double sphere_residual = 1e-6;
constexpr double flat_eigenvalue = 1e-10;
constexpr double bound_formula = 1e-12;
constexpr double diameter_gap = 5e-3;
constexpr int audit_geodesics = 20;
constexpr double audit_cartan = 1e-9;
constexpr double audit_compatibility = 1e-6;
constexpr double audit_cauchy_schwarz = 1e-6;
constexpr double drift = 1e-8;
constexpr double geodesic_tol = 1e-10;
constexpr double asymmetry = 1e-4;
constexpr double flow_curve = 1e-3;
constexpr double flow_singular_time = 1e-3;
constexpr double flow_residual = 1e-6;
}  // namespace tol

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back("violated: " + what);
    }
  }
};

std::string num(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

std::string fixed(double v, int digits = 6) {
  std::ostringstream os;
  os.precision(digits);
  os << std::fixed << v;
  return os.str();
}

std::vector<SamplePoint> grid_points(const FinslerStructure& s, int count, std::uint64_t seed) {
  return sample_grid(s, count / 4, 4, seed);
}

double rel(double a, double b, double scale) { return std::abs(a - b) / std::max(1.0, scale); }

// ---------------------------------------------------------------- 1

Outcome axiom_suite() {
  Outcome o;
  int passed = 0;
  const auto cat = catalog::standard_catalog();
  for (const auto& s : cat) {
    const auto r = validate_structure(s, tol::axiom_samples);
    o.require(r.passed(), s.label() + " fails validation");
    passed += r.passed();
  }
  const auto randers = catalog::randers({1.2, 0.0}, false);
  const auto rr = validate_structure(randers, tol::axiom_samples);
  const auto& rw = rr.positivity.passed ? rr.convexity : rr.positivity;
  o.require(!rr.passed() && !rw.witness_y.empty(), "Randers b=1.2 not rejected with a witness");
  const auto quartic = catalog::minkowski(2, Expression::parse(std::string("(pow (+ (pow y1 4) (pow y2 4)) 0.25)")));
  const auto qr = validate_structure(quartic, tol::axiom_samples);
  o.require(!qr.convexity.passed && !qr.convexity.witness_y.empty(), "quartic norm not rejected at the axes");
  o.detail = std::to_string(passed) + "/" + std::to_string(cat.size()) + " catalog metrics pass; Randers b=1.2 fails " +
             rw.name + " at y=(" + (rw.witness_y.empty() ? "" : fixed(rw.witness_y[0], 3) + "," + fixed(rw.witness_y[1], 3)) +
             "); quartic fails convexity (" + std::to_string(qr.convexity.failures) + " axis samples)";
  return o;
}

// ---------------------------------------------------------------- 2

Outcome euler_homogeneity() {
  Outcome o;
  const double c = 2.5;
  const CurvatureOptions raw{false};
  double worst = 0.0;
  std::string worst_what;
  auto track = [&](double err, const std::string& what) {
    if (err > worst) {
      worst = err;
      worst_what = what;
    }
  };
  auto degree_check = [&](const Vec& a, const Vec& b, double degree, const std::string& what) {
    const double f = std::pow(c, degree);
    double scale = 0.0;
    for (double v : a) scale = std::max(scale, std::abs(f * v));
    for (std::size_t k = 0; k < a.size(); ++k) track(rel(b[k], f * a[k], scale), what);
  };
  for (const auto& s : catalog::standard_catalog()) {
    const int n = s.dim();
    const auto pts = grid_points(s, tol::euler_samples, 101);
    for (const auto& p : pts) {
      Vec yc = p.y;
      for (double& v : yc) v *= c;
      const LocalFrame f = local_frame(s, p.x, p.y, FrameLevel::connection);
      const LocalFrame fc = local_frame(s, p.x, yc, FrameLevel::connection);
      double gyy = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) gyy += f.g[idx2(n, i, j)] * p.y[i] * p.y[j];
      track(rel(gyy, f.F * f.F, f.F * f.F), s.label() + " g(y,y)=F^2");
      double cmax = 0.0, cy = 0.0;
      for (double v : f.C) cmax = std::max(cmax, std::abs(v));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double acc = 0.0;
          for (int k = 0; k < n; ++k) acc += f.C[idx3(n, i, j, k)] * p.y[k];
          cy = std::max(cy, std::abs(acc));
        }
      track(cy / std::max(1.0, cmax), s.label() + " C(.,.,y)=0");
      degree_check(f.g, fc.g, 0, s.label() + " g");
      degree_check(f.C, fc.C, -1, s.label() + " C");
      degree_check(f.G, fc.G, 2, s.label() + " G");
      degree_check(f.N, fc.N, 1, s.label() + " N");
      degree_check(reduced_curvature(s, p.x, p.y, raw).components(), reduced_curvature(s, p.x, yc, raw).components(),
                   0, s.label() + " R^i_k");
      const auto r = ricci(s, p.x, p.y, raw);
      const auto rc = ricci(s, p.x, yc, raw);
      degree_check({r.scalar}, {rc.scalar}, 0, s.label() + " Ric");
      degree_check(r.tensor.components(), rc.tensor.components(), 0, s.label() + " Ric_jk");
    }
  }
  o.require(worst <= tol::euler_rel, "worst relative defect " + num(worst) + " (" + worst_what + ")");
  o.detail = "worst relative defect " + num(worst) + " (" + worst_what + ") <= " + num(tol::euler_rel);
  return o;
}

// ---------------------------------------------------------------- 3

Outcome curvature_oracles() {
  Outcome o;
  double flat = 0.0, sphere = 0.0, funk = 0.0, riem = 0.0;
  for (const auto& s : catalog::minkowski_catalog())
    for (const auto& p : grid_points(s, tol::oracle_samples, 202)) flat = std::max(flat, ricci_tensor(s, p.x, p.y).max_abs());
  for (int n : {2, 3}) {
    const auto s = catalog::sphere_chart(n, 1.0);
    for (const auto& p : grid_points(s, tol::oracle_samples, 203)) {
      const auto r = ricci(s, p.x, p.y);
      const auto g = metric_tensor(s, p.x, p.y);
      sphere = std::max(sphere, std::abs(r.scalar - (n - 1.0)));
      for (std::size_t k = 0; k < g.components().size(); ++k)
        sphere = std::max(sphere, std::abs(r.tensor.components()[k] - (n - 1.0) * g.components()[k]));
    }
    const auto f = catalog::funk(n);
    for (const auto& p : grid_points(f, tol::oracle_samples, 204))
      funk = std::max(funk, std::abs(ricci_scalar(f, p.x, p.y) + (n - 1.0) / 4.0));
  }
  int riemannian_metrics = 0;
  for (const auto& s : catalog::standard_catalog()) {
    if (!s.riemannian_metric()) continue;
    ++riemannian_metrics;
    for (const auto& p : grid_points(s, tol::oracle_samples, 205)) {
      const auto oracle = riemannian_ricci_oracle(*s.riemannian_metric(), s.dim(), p.x);
      riem = std::max(riem, ricci_tensor(s, p.x, p.y).max_abs_diff(oracle));
    }
  }
  o.require(flat <= tol::minkowski_ricci, "Minkowski Ric " + num(flat));
  o.require(sphere <= tol::curvature_oracle, "sphere " + num(sphere));
  o.require(funk <= tol::curvature_oracle, "Funk " + num(funk));
  o.require(riem <= tol::curvature_oracle, "Riemannian oracle " + num(riem));
  o.detail = "Minkowski |Ric| " + num(flat) + "; sphere n=2,3 " + num(sphere) + "; Funk n=2,3 " + num(funk) +
             "; classical oracle on " + std::to_string(riemannian_metrics) + " Riemannian metrics " + num(riem);
  return o;
}

// ---------------------------------------------------------------- 4

Outcome route_equivalence() {
  Outcome o;
  const auto cat = catalog::standard_catalog();
  std::mt19937_64 rng(404);
  double worst = 0.0;
  for (int k = 0; k < tol::route_configs; ++k) {
    const auto& s = cat[static_cast<std::size_t>(k) % cat.size()];
    const auto V = VectorField::random_polynomial(s.dim(), rng);
    const Vec x = s.chart().sample_region.sample(s.dim(), rng);
    const Vec y = normalize_direction(s, x, uniform_direction(s.dim(), rng));
    worst = std::max(worst, lie_derivative_cartan(s, V, x, y).max_abs_diff(lie_derivative_complete_lift(s, V, x, y)));
  }
  o.require(worst <= tol::route_equivalence, "max-abs difference " + num(worst));
  o.detail = std::to_string(tol::route_configs) + " configurations, max-abs difference " + num(worst);
  return o;
}

// ---------------------------------------------------------------- 5

Outcome soliton_certification() {
  Outcome o;
  SolitonOptions fast;
  fast.compute_norm = false;
  double gauss = 0.0;
  for (const auto& s : catalog::minkowski_catalog())
    for (double lambda : {0.5, 1.0, 2.0}) {
      const auto r = soliton_residual(s, VectorField::radial(s.dim(), lambda), lambda, soliton_samples(s, 55), fast);
      gauss = std::max(gauss, r.residual_sup);
    }
  double sphere = 0.0;
  for (int n : {2, 3}) {
    const auto s = catalog::sphere_chart(n, 1.0);
    sphere = std::max(sphere, soliton_residual(s, VectorField::zero(n), n - 1.0, soliton_samples(s, 56), fast).residual_sup);
  }
  const auto e = catalog::euclidean(2);
  const auto flat = soliton_residual(e, VectorField::zero(2), 1.0, soliton_samples(e, 57), fast);
  o.require(gauss <= tol::gaussian_residual, "Gaussian shrinker residual " + num(gauss));
  o.require(sphere <= tol::sphere_residual, "sphere residual " + num(sphere));
  o.require(!flat.soliton_certified() && std::abs(flat.hypothesis_min_eig + 2.0) <= tol::flat_eigenvalue,
            "flat eigenvalue " + fixed(flat.hypothesis_min_eig, 12));
  o.detail = "Gaussian shrinkers " + num(gauss) + "; sphere Einstein " + num(sphere) +
             "; flat lambda=1 rejected with eigenvalue " + fixed(flat.hypothesis_min_eig, 12);
  return o;
}

// ---------------------------------------------------------------- 6

Outcome bound_reproduction() {
  Outcome o;
  double formula = 0.0;
  std::string estimates;
  for (int n : {2, 3}) {
    const double b = diameter_bound(n - 1.0, 0.0, n);
    formula = std::max(formula, std::abs(b - std::numbers::pi));
    const auto s = catalog::sphere_chart(n, 1.0);
    std::vector<Vec> grid;
    const int count = 24;
    for (int k = 0; k < count; ++k) {
      Vec x(static_cast<std::size_t>(n), 0.0);
      x[0] = std::cos(2.0 * std::numbers::pi * k / count);
      x[1] = std::sin(2.0 * std::numbers::pi * k / count);
      grid.push_back(x);
    }
    DiameterOptions opt;
    opt.symmetric_orbit = true;
    if (n == 3) opt.distance.seeds = 512;
    const auto d = diameter_estimate(s, grid, opt);
    const double delta = std::numbers::pi - d.estimate;
    o.require(delta >= -1e-9 && delta <= tol::diameter_gap, "n=" + std::to_string(n) + " delta " + num(delta));
    o.require(d.estimate <= b + 1e-9, "estimate above bound");
    estimates += " n=" + std::to_string(n) + " estimate " + fixed(d.estimate, 9);
  }
  const double b11 = diameter_bound(1.0, 1.0, 2);
  formula = std::max(formula, std::abs(b11 - std::numbers::pi * (1.0 + std::sqrt(2.0))));
  o.require(formula <= tol::bound_formula, "formula error " + num(formula));
  o.detail = "sphere bound pi (error " + num(formula) + ");" + estimates + "; D=1 bound " + fixed(b11, 9);
  return o;
}

// ---------------------------------------------------------------- 7

Outcome proof_audits() {
  Outcome o;
  double a = 0.0, b = 0.0, c = -INFINITY;
  int checked = 0;
  std::mt19937_64 rng(707);
  GeodesicOptions go;
  // d/dt is a five-point difference on the samples, O(dt^4) accurate
  go.sample_dt = 0.005;
  AuditOptions ao;
  ao.stride = 20;
  for (const auto& s : catalog::standard_catalog()) {
    for (int k = 0; k < tol::audit_geodesics; ++k) {
      const auto V = VectorField::random_polynomial(s.dim(), rng);
      const Vec x0 = s.chart().sample_region.sample(s.dim(), rng);
      const Vec y0 = normalize_direction(s, x0, uniform_direction(s.dim(), rng));
      const auto path = integrate_geodesic(s, x0, y0, 0.5, go);
      const auto r = proof_step_audit(s, V, path, ao);
      a = std::max(a, r.cartan_term);
      b = std::max(b, r.compatibility);
      c = std::max(c, r.cauchy_schwarz_excess);
      checked += r.samples;
    }
  }
  o.require(a <= tol::audit_cartan, "(a) " + num(a));
  o.require(b <= tol::audit_compatibility, "(b) " + num(b));
  o.require(c <= tol::audit_cauchy_schwarz, "(c) " + num(c));
  o.detail = std::to_string(checked) + " path samples: (a) " + num(a) + ", (b) " + num(b) + ", (c) excess " + num(c);
  return o;
}

// ---------------------------------------------------------------- 8

Outcome geodesic_quality() {
  Outcome o;
  double drift = 0.0;
  std::mt19937_64 rng(808);
  for (const auto& s : catalog::standard_catalog()) {
    for (int k = 0; k < 3; ++k) {
      const Vec x0 = s.chart().sample_region.sample(s.dim(), rng);
      const Vec y0 = normalize_direction(s, x0, uniform_direction(s.dim(), rng));
      GeodesicOptions go;
      go.tol = tol::geodesic_tol;
      go.check_drift = false;
      drift = std::max(drift, integrate_geodesic(s, x0, y0, 10.0, go).F_drift);
    }
  }
  o.require(drift <= tol::drift, "F drift " + num(drift));

  const double b = 0.3;
  const auto s = catalog::randers({b, 0.0});
  const Vec p{0.0, 0.0};
  const Vec q{1.0, 0.0};
  const double dpq = forward_distance(s, p, q, DistanceOptions{});
  const double dqp = forward_distance(s, q, p, DistanceOptions{});
  const double want_pq = 1.0 / (1.0 + b);
  const double want_qp = 1.0 / (1.0 - b);
  o.require(std::abs(dpq - want_pq) <= tol::asymmetry && std::abs(dqp - want_qp) <= tol::asymmetry,
            "Randers b=0.3: d(p,q) = " + fixed(dpq, 8) + " vs 1/(1+b) = " + fixed(want_pq, 8) + ", d(q,p) = " +
                fixed(dqp, 8) + " vs 1/(1-b) = " + fixed(want_qp, 8));
  o.notes.push_back("info: straight segments are geodesics of this Minkowski norm, so d(p,q) = F(q-p) = 1+b = " +
                    fixed(1.0 + b, 8) + " and d(q,p) = 1-b = " + fixed(1.0 - b, 8) + "; measured errors " +
                    num(std::abs(dpq - (1.0 + b))) + ", " + num(std::abs(dqp - (1.0 - b))));
  o.notes.push_back("info: 1/(1+b) and 1/(1-b) are the Euclidean radii of the forward unit ball along +e1 and -e1.");
  o.detail = "F drift " + num(drift) + " over length 10; d(p,q) = " + fixed(dpq, 8) + ", d(q,p) = " + fixed(dqp, 8);
  return o;
}

// ---------------------------------------------------------------- 9

Outcome flow_examples() {
  Outcome o;
  FlowOptions fo;
  double residual = 0.0;
  auto residuals = [&](const ParametricFamily& fam, const FlowTrajectory& traj, std::span<const SamplePoint> probes) {
    for (std::size_t k = 0; k < traj.points.size(); k += std::max<std::size_t>(1, traj.points.size() / 8)) {
      const auto& th = traj.points[k].theta;
      const auto rhs = scalar_flow_rhs(fam, th, probes);
      residual = std::max({residual, rhs.residual, tensor_flow_residual(fam, th, rhs.velocity, probes)});
    }
  };

  const auto sphere = ParametricFamily::scale(catalog::sphere_chart(2, 1.0));
  const Vec one{1.0};
  const auto sp = sample_grid(sphere.at(one), 4, 4, 909);
  const auto st = run_flow(sphere, one, 1.0, 0.01, sp, fo);
  double sphere_curve = 0.0;
  for (const auto& p : st.points) sphere_curve = std::max(sphere_curve, std::abs(p.theta[0] * p.theta[0] - (1.0 - 2.0 * p.t)));
  o.require(st.singular && std::abs(st.singular_time - 0.5) <= tol::flow_singular_time,
            "sphere singular time " + fixed(st.singular_time, 9));
  o.require(sphere_curve <= tol::flow_curve, "sphere c^2 error " + num(sphere_curve));
  residuals(sphere, st, sp);

  const auto funk = ParametricFamily::scale(catalog::funk(2));
  const auto fp = sample_grid(funk.at(one), 4, 4, 910);
  const auto ft = run_flow(funk, one, 4.0, 0.05, fp, fo);
  double funk_curve = 0.0;
  for (const auto& p : ft.points) funk_curve = std::max(funk_curve, std::abs(p.theta[0] * p.theta[0] - (1.0 + p.t / 2.0)));
  o.require(!ft.singular && std::abs(ft.points.back().t - 4.0) < 1e-12, "Funk flow stopped early");
  o.require(funk_curve <= tol::flow_curve, "Funk c^2 error " + num(funk_curve));
  residuals(funk, ft, fp);

  o.require(residual <= tol::flow_residual, "flow residual " + num(residual));
  o.detail = "sphere singular at t=" + fixed(st.singular_time, 9) + ", c^2 error " + num(sphere_curve) +
             "; Funk c^2(4)=" + fixed(ft.points.back().theta[0] * ft.points.back().theta[0], 9) + ", error " +
             num(funk_curve) + "; scalar/tensor residual " + num(residual);
  return o;
}

// ---------------------------------------------------------------- 10

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

Outcome determinism() {
  Outcome o;
  const auto dir = std::filesystem::temp_directory_path() / ("finsler_acceptance_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const std::string sphere = R"({"kind":"sphere_chart","dim":2})";
  const std::string funk = R"({"kind":"funk","dim":2})";
  const std::vector<std::vector<std::string>> configs{
      {"--metric", sphere, "--seed", "11", "validate", "--samples", "200"},
      {"--metric", funk, "--seed", "12", "--format", "csv", "curvature", "--grid-x", "6", "--grid-y", "4"},
      {"--metric", sphere, "--seed", "13", "soliton-check", "--lambda", "1", "--grid-x", "5", "--grid-y", "4"},
      {"--metric", funk, "--format", "csv", "geodesic", "--x0", "[0.1,0.2]", "--y0", "[1,0]", "--length", "2"},
      {"--metric", sphere, "--seed", "14", "flow", "--t-end", "0.3", "--dt", "0.05", "--probe-x", "3", "--probe-y", "3"}};
  int identical = 0;
  for (std::size_t c = 0; c < configs.size(); ++c) {
    std::string text[2];
    for (int run = 0; run < 2; ++run) {
      const auto path = (dir / ("run" + std::to_string(c) + "_" + std::to_string(run))).string();
      std::vector<std::string> args{"finsler", "--out", path};
      args.insert(args.end(), configs[c].begin(), configs[c].end());
      std::vector<const char*> argv;
      for (const auto& a : args) argv.push_back(a.c_str());
      std::ostringstream out, err;
      const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
      o.require(code == cli::pass, configs[c][configs[c].size() > 4 ? 4 : 0] + " exited " + std::to_string(code));
      text[run] = slurp(path);
    }
    const bool same = !text[0].empty() && text[0] == text[1];
    o.require(same, "config " + std::to_string(c) + " differs between runs");
    identical += same;
  }
  std::filesystem::remove_all(dir);
  o.detail = std::to_string(identical) + "/" + std::to_string(configs.size()) + " report files byte-identical";
  return o;
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finsler acceptance suite"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion (1-10)")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {1, "axiom suite", axiom_suite},
      {2, "Euler identities and homogeneity degrees", euler_homogeneity},
      {3, "curvature oracles", curvature_oracles},
      {4, "Lie-derivative route equivalence", route_equivalence},
      {5, "soliton certification", soliton_certification},
      {6, "diameter bound reproduction", bound_reproduction},
      {7, "proof-step audits", proof_audits},
      {8, "geodesic quality", geodesic_quality},
      {9, "Ricci flow examples", flow_examples},
      {10, "determinism", determinism},
  };
  bool all = true;
  for (const auto& c : criteria) {
    if (only && c.id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    all = all && out.pass;
    std::cout << (out.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << ": " << out.detail << " ("
              << fixed(secs, 1) << " s)\n";
    for (const auto& n : out.notes) std::cout << "       " << n << "\n";
    std::cout.flush();
  }
  return all ? 0 : 1;
}
