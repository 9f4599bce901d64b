// SPDX-License-Identifier: Apache-2.0
#include "cli.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "finsler/catalog.hpp"
#include "finsler/curvature.hpp"
#include "finsler/error.hpp"
#include "finsler/flow.hpp"
#include "finsler/geodesic.hpp"
#include "finsler/parallel.hpp"
#include "finsler/sampling.hpp"
#include "finsler/soliton.hpp"
#include "finsler/validation.hpp"
#include "finsler/version.hpp"

namespace finsler::cli {
namespace {

using json = nlohmann::json;
using Vec = std::vector<double>;

struct Globals {
  std::string metric;
  std::string out;
  std::string format = "json";
  std::uint64_t seed = 1;
  std::size_t workers = 0;
  std::optional<double> tol;
};

/// Tabular payload for --format csv.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

struct Outcome {
  json result;
  bool pass = true;
  std::optional<Table> table;
};

struct Context {
  Globals g;
  json spec;  // metric spec as given
  json params = json::object();
};

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

json parse_json_arg(const std::string& name, const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::usage, "option " + name + ": " + e.what());
  }
}

Vec parse_vector(const std::string& name, const std::string& text, int dim) {
  const json j = parse_json_arg(name, text);
  if (!j.is_array()) throw Error(ErrorKind::usage, "option " + name + " must be a JSON array of numbers");
  Vec v;
  for (const auto& c : j) {
    if (!c.is_number()) throw Error(ErrorKind::usage, "option " + name + " must contain only numbers");
    v.push_back(c.get<double>());
  }
  if (dim > 0 && static_cast<int>(v.size()) != dim) {
    throw Error(ErrorKind::usage, "option " + name + " has " + std::to_string(v.size()) + " entries, expected " +
                                      std::to_string(dim));
  }
  return v;
}

json load_spec(const std::string& metric) {
  if (metric.empty()) throw Error(ErrorKind::usage, "--metric is required");
  std::size_t first = metric.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && metric[first] == '{') {
    try {
      return json::parse(metric);
    } catch (const json::parse_error& e) {
      throw Error(ErrorKind::usage, std::string("inline metric spec: ") + e.what());
    }
  }
  std::ifstream in(metric);
  if (!in) throw Error(ErrorKind::usage, "cannot open metric spec \"" + metric + "\"");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::usage, "metric spec \"" + metric + "\": " + e.what());
  }
}

int exit_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::usage:
    case ErrorKind::invalid_params:
    case ErrorKind::slit_bundle:
    case ErrorKind::domain_violation:
    case ErrorKind::unsupported_order: return usage_error;
    case ErrorKind::shrinking_required: return certified_failure;
    case ErrorKind::regularity_failure:
    case ErrorKind::strong_convexity:
    case ErrorKind::integration_failure:
    case ErrorKind::unreachable_in_chart:
    case ErrorKind::degenerate_family: return numerical_failure;
  }
  return numerical_failure;
}

double tol_or(const Context& c, double fallback) { return c.g.tol.value_or(fallback); }

// ---------------------------------------------------------------- commands

struct ValidateArgs {
  int samples = 1000;
};

Outcome cmd_validate(Context& c, const ValidateArgs& a) {
  const FinslerStructure s = catalog::load_metric_spec(c.spec, false);
  ValidationOptions o;
  o.seed = c.g.seed;
  o.workers = c.g.workers;
  if (c.g.tol) o.homogeneity_tol = *c.g.tol;
  c.params = {{"samples", a.samples}, {"homogeneity_tol", o.homogeneity_tol}};
  const ValidationReport r = validate_structure(s, a.samples, o);
  Outcome out{r.to_json(), r.passed(), std::nullopt};
  Table t;
  t.header = {"positivity", "regularity", "homogeneity", "strong_convexity", "positivity_worst", "homogeneity_worst",
              "convexity_worst"};
  t.rows.push_back({double(r.positivity.passed), double(r.regularity.passed), double(r.homogeneity.passed),
                    double(r.convexity.passed), r.positivity.worst, r.homogeneity.worst, r.convexity.worst});
  out.table = std::move(t);
  return out;
}

struct GridArgs {
  int grid_x = 20;
  int grid_y = 16;
};

Outcome cmd_curvature(Context& c, const GridArgs& a) {
  const FinslerStructure s = catalog::load_metric_spec(c.spec);
  const int n = s.dim();
  c.params = {{"grid_x", a.grid_x}, {"grid_y", a.grid_y}};
  const auto pts = sample_grid(s, a.grid_x, a.grid_y, c.g.seed);
  std::vector<RicciData> res(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) { res[i] = ricci(s, pts[i].x, pts[i].y); }, c.g.workers);

  Table t;
  for (int i = 1; i <= n; ++i) t.header.push_back("x_" + std::to_string(i));
  for (int i = 1; i <= n; ++i) t.header.push_back("y_" + std::to_string(i));
  t.header.push_back("ric_scalar");
  for (int j = 1; j <= n; ++j)
    for (int k = 1; k <= n; ++k) t.header.push_back("ric_" + std::to_string(j) + std::to_string(k));
  json rows = json::array();
  double lo = INFINITY, hi = -INFINITY;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::vector<double> row = pts[i].x;
    row.insert(row.end(), pts[i].y.begin(), pts[i].y.end());
    row.push_back(res[i].scalar);
    const auto& comp = res[i].tensor.components();
    row.insert(row.end(), comp.begin(), comp.end());
    t.rows.push_back(row);
    rows.push_back({{"x", pts[i].x}, {"y", pts[i].y}, {"ric_scalar", res[i].scalar}, {"ric", comp}});
    lo = std::min(lo, res[i].scalar);
    hi = std::max(hi, res[i].scalar);
  }
  Outcome out;
  out.result = {{"metric", s.label()}, {"points", rows}, {"ric_scalar_min", lo}, {"ric_scalar_max", hi}};
  out.table = std::move(t);
  return out;
}

struct SolitonArgs {
  std::string V = "\"zero\"";
  double lambda = 0.0;
  GridArgs grid;
  double eigen_tol = 1e-8;
  bool no_norm = false;
};

Outcome cmd_soliton(Context& c, const SolitonArgs& a) {
  const FinslerStructure s = catalog::load_metric_spec(c.spec);
  const json vj = parse_json_arg("--V", a.V);
  const VectorField V = VectorField::from_json(vj, s.dim());
  SolitonOptions o;
  o.residual_tol = tol_or(c, 1e-8);
  o.eigen_tol = a.eigen_tol;
  o.compute_norm = !a.no_norm;
  o.workers = c.g.workers;
  c.params = {{"V", vj},           {"lambda", a.lambda},         {"grid_x", a.grid.grid_x},
              {"grid_y", a.grid.grid_y}, {"residual_tol", o.residual_tol}, {"eigen_tol", o.eigen_tol},
              {"norm", o.compute_norm}};
  const auto samples = soliton_samples(s, c.g.seed, a.grid.grid_x, a.grid.grid_y);
  const SolitonReport r = soliton_residual(s, V, a.lambda, samples, o);
  Outcome out{r.to_json(), r.soliton_certified(), std::nullopt};
  out.result["metric"] = s.label();
  Table t;
  t.header = {"lambda", "residual_sup", "hypothesis_min_eig", "norm_sup", "bound"};
  t.rows.push_back({r.lambda, r.residual_sup, r.hypothesis_min_eig, r.norm_sup, r.bound.value_or(NAN)});
  out.table = std::move(t);
  return out;
}

struct NormArgs {
  std::string x;
  std::string V = "\"zero\"";
  int seeds = 0;
};

Outcome cmd_norm(Context& c, const NormArgs& a) {
  const FinslerStructure s = catalog::load_metric_spec(c.spec);
  const Vec x = parse_vector("--x", a.x, s.dim());
  const json vj = parse_json_arg("--V", a.V);
  const VectorField V = VectorField::from_json(vj, s.dim());
  IndicatrixOptions o;
  o.seeds = a.seeds;
  c.params = {{"x", x}, {"V", vj}, {"seeds", a.seeds > 0 ? a.seeds : default_seed_count(s.dim())}};
  const double v = indicatrix_norm(s, V, x, o);
  Outcome out;
  out.result = {{"metric", s.label()}, {"x", x}, {"V_at_x", V.values(x)}, {"norm", v}};
  out.table = Table{{"norm"}, {{v}}};
  return out;
}

struct GeodesicArgs {
  std::string x0, y0;
  double length = 1.0;
  double sample_dt = 0.01;
  bool no_normalize = false;
};

Outcome cmd_geodesic(Context& c, const GeodesicArgs& a) {
  const FinslerStructure s = catalog::load_metric_spec(c.spec);
  const int n = s.dim();
  const Vec x0 = parse_vector("--x0", a.x0, n);
  Vec y0 = parse_vector("--y0", a.y0, n);
  if (!a.no_normalize) y0 = normalize_direction(s, x0, y0);
  GeodesicOptions o;
  o.tol = tol_or(c, 1e-10);
  o.sample_dt = a.sample_dt;
  c.params = {{"x0", x0}, {"y0", y0}, {"length", a.length}, {"sample_dt", a.sample_dt}, {"tol", o.tol},
              {"normalize", !a.no_normalize}};
  const GeodesicPath p = integrate_geodesic(s, x0, y0, a.length, o);
  Outcome out;
  out.result = p.to_json(true);
  out.result["metric"] = s.label();
  // a chart exit is a reported outcome (partial path plus flag), not a failure
  Table t;
  t.header.push_back("t");
  for (int i = 1; i <= n; ++i) t.header.push_back("x_" + std::to_string(i));
  for (int i = 1; i <= n; ++i) t.header.push_back("v_" + std::to_string(i));
  t.header.push_back("F");
  for (const auto& smp : p.samples) {
    std::vector<double> row{smp.t};
    row.insert(row.end(), smp.x.begin(), smp.x.end());
    row.insert(row.end(), smp.v.begin(), smp.v.end());
    row.push_back(evaluate_F_unchecked(s, smp.x, smp.v));
    t.rows.push_back(std::move(row));
  }
  out.table = std::move(t);
  return out;
}

struct DistanceArgs {
  std::string p, q;
  int seeds = 0;
  std::optional<double> max_length;
};

DistanceOptions distance_options(const Context& c, int seeds, std::optional<double> max_length) {
  DistanceOptions o;
  o.tol = tol_or(c, 1e-8);
  o.seeds = seeds;
  o.max_length = max_length;
  o.workers = c.g.workers;
  return o;
}

Outcome cmd_distance(Context& c, const DistanceArgs& a) {
  const FinslerStructure s = catalog::load_metric_spec(c.spec);
  const Vec p = parse_vector("--p", a.p, s.dim());
  const Vec q = parse_vector("--q", a.q, s.dim());
  const DistanceOptions o = distance_options(c, a.seeds, a.max_length);
  c.params = {{"p", p}, {"q", q}, {"seeds", a.seeds > 0 ? a.seeds : default_seed_count(s.dim())}, {"tol", o.tol}};
  if (a.max_length) c.params["max_length"] = *a.max_length;
  const auto r = forward_distances(s, p, {q}, o).front();
  Outcome out;
  out.result = {{"metric", s.label()}, {"p", p},   {"q", q}, {"distance", r.distance},
                {"miss", r.miss},      {"hits", r.hits}, {"initial_velocity", r.initial_velocity}};
  out.table = Table{{"distance", "miss"}, {{r.distance, r.miss}}};
  return out;
}

struct DiameterArgs {
  std::string grid;
  std::string preset;
  bool symmetric_orbit = false;
  int seeds = 0;
};

std::vector<Vec> preset_grid(const std::string& preset, int dim) {
  const auto colon = preset.find(':');
  const std::string kind = preset.substr(0, colon);
  int count = 0;
  if (colon != std::string::npos) {
    const std::string num = preset.substr(colon + 1);
    const auto res = std::from_chars(num.data(), num.data() + num.size(), count);
    if (res.ec != std::errc() || res.ptr != num.data() + num.size()) count = 0;
  }
  if (count < 1) throw Error(ErrorKind::usage, "--grid-preset expects name:count, e.g. equator:24");
  std::vector<Vec> grid;
  if (kind == "equator") {
    for (int k = 0; k < count; ++k) {
      Vec x(static_cast<std::size_t>(dim), 0.0);
      x[0] = std::cos(2.0 * std::numbers::pi * k / count);
      x[1] = std::sin(2.0 * std::numbers::pi * k / count);
      grid.push_back(std::move(x));
    }
  } else if (kind == "box") {
    if (dim != 2) throw Error(ErrorKind::usage, "box preset is two-dimensional");
    for (int i = 0; i < count; ++i)
      for (int j = 0; j < count; ++j)
        grid.push_back({count == 1 ? 0.0 : double(i) / (count - 1), count == 1 ? 0.0 : double(j) / (count - 1)});
  } else {
    throw Error(ErrorKind::usage, "unknown grid preset \"" + kind + "\"");
  }
  return grid;
}

Outcome cmd_diameter(Context& c, const DiameterArgs& a) {
  const FinslerStructure s = catalog::load_metric_spec(c.spec);
  std::vector<Vec> grid;
  if (!a.preset.empty()) {
    grid = preset_grid(a.preset, s.dim());
  } else {
    const json j = parse_json_arg("--grid", a.grid);
    if (!j.is_array() || j.empty()) throw Error(ErrorKind::usage, "--grid must be a non-empty list of points");
    for (const auto& p : j) grid.push_back(parse_vector("--grid", p.dump(), s.dim()));
  }
  DiameterOptions o;
  o.distance = distance_options(c, a.seeds, std::nullopt);
  o.symmetric_orbit = a.symmetric_orbit;
  c.params = {{"grid", grid}, {"symmetric_orbit", a.symmetric_orbit}, {"tol", o.distance.tol},
              {"seeds", a.seeds > 0 ? a.seeds : default_seed_count(s.dim())}};
  const DiameterResult r = diameter_estimate(s, grid, o);
  Outcome out;
  out.result = r.to_json();
  out.result["metric"] = s.label();
  out.table = Table{{"estimate", "resolution", "pairs"}, {{r.estimate, r.resolution, double(r.pairs)}}};
  return out;
}

struct BoundArgs {
  double lambda = 0.0;
  double D = 0.0;
  std::optional<int> dim;
  std::optional<double> estimate;
  double slack = 5e-3;
};

Outcome cmd_bound(Context& c, const BoundArgs& a) {
  int n = 0;
  if (a.dim) {
    n = *a.dim;
  } else {
    n = catalog::load_metric_spec(c.spec).dim();
  }
  c.params = {{"lambda", a.lambda}, {"D", a.D}, {"dim", n}, {"slack", a.slack}};
  if (a.estimate) c.params["estimate"] = *a.estimate;
  const double b = diameter_bound(a.lambda, a.D, n);
  Outcome out;
  out.result = {{"bound", b}, {"classification", to_string(classify(a.lambda))}};
  if (a.estimate) {
    out.result["estimate"] = *a.estimate;
    out.result["margin"] = b + a.slack - *a.estimate;
    out.pass = *a.estimate <= b + a.slack;
  }
  out.table = Table{{"bound"}, {{b}}};
  return out;
}

struct FlowArgs {
  std::string family = "scale";
  std::string theta0;
  double t_end = 1.0;
  double dt = 0.01;
  double rtol = 1e-8;
  int probe_x = 4;
  int probe_y = 4;
};

Outcome cmd_flow(Context& c, const FlowArgs& a) {
  const FinslerStructure s = catalog::load_metric_spec(c.spec);
  std::optional<ParametricFamily> fam;
  Vec theta0;
  if (a.family == "scale") {
    fam = ParametricFamily::scale(s);
    theta0 = a.theta0.empty() ? Vec{1.0} : parse_vector("--theta0", a.theta0, 1);
  } else if (a.family == "randers") {
    fam = ParametricFamily::randers(s.dim());
    theta0 = a.theta0.empty() ? Vec{1.0, 0.0} : parse_vector("--theta0", a.theta0, 2);
  } else {
    throw Error(ErrorKind::usage, "--family must be scale or randers");
  }
  c.params = {{"family", a.family}, {"theta0", theta0}, {"t_end", a.t_end}, {"dt", a.dt},
              {"rtol", a.rtol},     {"probe_x", a.probe_x}, {"probe_y", a.probe_y}};
  const FinslerStructure start = fam->at(theta0);
  const auto probes = sample_grid(start, a.probe_x, a.probe_y, c.g.seed);
  FlowOptions o;
  o.rtol = a.rtol;
  o.workers = c.g.workers;
  const FlowTrajectory traj = run_flow(*fam, theta0, a.t_end, a.dt, probes, o);
  const FlowRhs rhs0 = scalar_flow_rhs(*fam, theta0, probes, c.g.workers);
  const double tensor0 = tensor_flow_residual(*fam, theta0, rhs0.velocity, probes, c.g.workers);

  Outcome out;
  out.result = traj.to_json();
  out.result["family"] = fam->name();
  out.result["theta_names"] = fam->theta_names();
  out.result["initial_velocity"] = rhs0.velocity;
  out.result["initial_projection_residual"] = rhs0.residual;
  out.result["initial_tensor_residual"] = tensor0;
  // a singular time is a result of the flow, reported rather than failed
  Table t;
  t.header.push_back("t");
  for (const auto& name : fam->theta_names()) t.header.push_back(name);
  const bool scale = a.family == "scale";
  if (scale) t.header.push_back("c2");
  t.header.push_back("residual");
  for (const auto& p : traj.points) {
    std::vector<double> row{p.t};
    row.insert(row.end(), p.theta.begin(), p.theta.end());
    if (scale) row.push_back(p.theta[0] * p.theta[0]);
    row.push_back(p.residual);
    t.rows.push_back(std::move(row));
  }
  out.table = std::move(t);
  return out;
}

// ---------------------------------------------------------------- output

std::string render(const std::string& command, const Context& c, const Outcome& o) {
  json config = {{"metric", c.spec}, {"format", c.g.format}, {"seed", c.g.seed}, {"params", c.params}};
  json head = {{"tool", "finsler"}, {"version", kVersion}, {"command", command}, {"seed", c.g.seed},
               {"status", o.pass ? "pass" : "fail"}, {"config", config}};
  if (c.g.format == "json") {
    head["result"] = o.result;
    return head.dump(2) + "\n";
  }
  std::ostringstream os;
  os << "# " << head.dump() << "\n";
  if (o.table) {
    for (std::size_t i = 0; i < o.table->header.size(); ++i) os << (i ? "," : "") << o.table->header[i];
    os << "\n";
    for (const auto& row : o.table->rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_number(row[i]);
      os << "\n";
    }
  }
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorKind::usage, "cannot write \"" + path + "\"");
  f << text;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finsler curvature, soliton and Ricci-flow workbench", "finsler"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--metric", g.metric, "metric spec: file path or inline JSON");
  app.add_option("--out", g.out, "report path (default: stdout)");
  app.add_option("--format", g.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--seed", g.seed, "seed of all sampling");
  app.add_option("--workers", g.workers, "worker threads (0 = available parallelism)");
  app.add_option("--tol", g.tol, "command tolerance");

  std::string command;
  std::function<Outcome(Context&)> handler;

  ValidateArgs va;
  auto* v = app.add_subcommand("validate", "check the Finsler axioms on samples");
  v->add_option("--samples", va.samples)->check(CLI::PositiveNumber);
  v->callback([&] { handler = [&](Context& c) { return cmd_validate(c, va); }; });

  GridArgs ca;
  auto* cu = app.add_subcommand("curvature", "Ricci scalar and Ricci tensor on a sample grid");
  cu->add_option("--grid-x", ca.grid_x)->check(CLI::PositiveNumber);
  cu->add_option("--grid-y", ca.grid_y)->check(CLI::PositiveNumber);
  cu->callback([&] { handler = [&](Context& c) { return cmd_curvature(c, ca); }; });

  SolitonArgs sa;
  auto* so = app.add_subcommand("soliton-check", "residual of 2 Ric + L_V g = 2 lambda g");
  so->add_option("--V", sa.V, "vector field: JSON list of expressions or {\"type\": ...}");
  so->add_option("--lambda", sa.lambda)->required();
  so->add_option("--grid-x", sa.grid.grid_x)->check(CLI::PositiveNumber);
  so->add_option("--grid-y", sa.grid.grid_y)->check(CLI::PositiveNumber);
  so->add_option("--eigen-tol", sa.eigen_tol);
  so->add_flag("--no-norm", sa.no_norm, "skip the indicatrix norm and bound");
  so->callback([&] { handler = [&](Context& c) { return cmd_soliton(c, sa); }; });

  NormArgs na;
  auto* no = app.add_subcommand("norm", "indicatrix norm of a vector field at a point");
  no->add_option("--x", na.x)->required();
  no->add_option("--V", na.V);
  no->add_option("--seeds", na.seeds);
  no->callback([&] { handler = [&](Context& c) { return cmd_norm(c, na); }; });

  GeodesicArgs ga;
  auto* ge = app.add_subcommand("geodesic", "integrate a geodesic");
  ge->add_option("--x0", ga.x0)->required();
  ge->add_option("--y0", ga.y0)->required();
  ge->add_option("--length", ga.length)->check(CLI::PositiveNumber);
  ge->add_option("--sample-dt", ga.sample_dt)->check(CLI::PositiveNumber);
  ge->add_flag("--no-normalize", ga.no_normalize, "keep y0 as given instead of scaling it to F = 1");
  ge->callback([&] { handler = [&](Context& c) { return cmd_geodesic(c, ga); }; });

  DistanceArgs da;
  auto* di = app.add_subcommand("distance", "forward distance by geodesic shooting");
  di->add_option("--p", da.p)->required();
  di->add_option("--q", da.q)->required();
  di->add_option("--seeds", da.seeds);
  di->add_option("--max-length", da.max_length);
  di->callback([&] { handler = [&](Context& c) { return cmd_distance(c, da); }; });

  DiameterArgs dm;
  auto* dd = app.add_subcommand("diameter", "diameter lower bound over a point grid");
  auto* grid_opt = dd->add_option("--grid", dm.grid, "JSON list of points");
  dd->add_option("--grid-preset", dm.preset, "equator:<count> or box:<count>")->excludes(grid_opt);
  dd->add_flag("--symmetric-orbit", dm.symmetric_orbit, "grid is one orbit of an isometry group");
  dd->add_option("--seeds", dm.seeds);
  dd->callback([&] { handler = [&](Context& c) { return cmd_diameter(c, dm); }; });

  BoundArgs ba;
  auto* bo = app.add_subcommand("bound-check", "diameter bound of a shrinking soliton");
  bo->add_option("--lambda", ba.lambda)->required();
  bo->add_option("--D", ba.D);
  bo->add_option("--dim", ba.dim);
  bo->add_option("--estimate", ba.estimate, "diameter estimate to compare against the bound");
  bo->add_option("--slack", ba.slack);
  bo->callback([&] { handler = [&](Context& c) { return cmd_bound(c, ba); }; });

  FlowArgs fa;
  auto* fl = app.add_subcommand("flow", "Ricci flow on a parametric family");
  fl->add_option("--family", fa.family)->check(CLI::IsMember({"scale", "randers"}));
  fl->add_option("--theta0", fa.theta0, "JSON array of initial parameters");
  fl->add_option("--t-end", fa.t_end)->check(CLI::NonNegativeNumber);
  fl->add_option("--dt", fa.dt)->check(CLI::PositiveNumber);
  fl->add_option("--rtol", fa.rtol)->check(CLI::PositiveNumber);
  fl->add_option("--probe-x", fa.probe_x)->check(CLI::PositiveNumber);
  fl->add_option("--probe-y", fa.probe_y)->check(CLI::PositiveNumber);
  fl->callback([&] { handler = [&](Context& c) { return cmd_flow(c, fa); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? pass : usage_error;
  }
  for (const auto* sub : app.get_subcommands()) command = sub->get_name();

  const auto start = std::chrono::steady_clock::now();
  try {
    set_default_workers(g.workers);
    Context ctx;
    ctx.g = g;
    if (!(command == "bound-check" && g.metric.empty())) ctx.spec = load_spec(g.metric);
    const Outcome o = handler(ctx);
    const std::string text = render(command, ctx, o);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (g.out.empty()) {
      out << text;
    } else {
      write_file(g.out, text);
      // wall-clock time lives beside the report so identical runs stay byte-identical
      write_file(g.out + ".timing.json",
                 json({{"command", command}, {"version", kVersion}, {"wall_seconds", secs}}).dump() + "\n");
    }
    err << "finsler " << command << ": " << (o.pass ? "pass" : "fail") << " in " << format_number(secs) << " s\n";
    return o.pass ? pass : certified_failure;
  } catch (const Error& e) {
    err << "finsler " << command << ": " << e.what() << "\n";
    return exit_for(e.kind());
  } catch (const std::exception& e) {
    err << "finsler " << command << ": " << e.what() << "\n";
    return numerical_failure;
  }
}

}  // namespace finsler::cli
