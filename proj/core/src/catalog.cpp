// SPDX-License-Identifier: Apache-2.0
#include "finsler/catalog.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include <Eigen/Dense>

#include "finsler/error.hpp"

namespace finsler::catalog {
namespace {

Jet dot(std::span<const Jet> a, std::span<const Jet> b) {
  Jet acc = a[0] * b[0];
  for (std::size_t i = 1; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

Jet quadratic(std::span<const Jet> a, std::span<const Jet> y) {
  const std::size_t n = y.size();
  Jet acc;
  for (std::size_t i = 0; i < n; ++i) {
    Jet row = a[i * n] * y[0];
    for (std::size_t j = 1; j < n; ++j) row += a[i * n + j] * y[j];
    acc += row * y[i];
  }
  return acc;
}

Chart flat_chart(const std::string& name, int dim) {
  return {name, Domain::whole(), Domain::cube(dim, 1.0), "global chart of R^n"};
}

std::string dim_label(const std::string& base, int dim) { return base + "(n=" + std::to_string(dim) + ")"; }

void require_dim(int dim) {
  if (dim < 2) throw Error(ErrorKind::invalid_params, "dim must be >= 2");
  if (dim > 4) throw Error(ErrorKind::invalid_params, "dim > 4 is not supported");
}

// Expression-backed field over x only; used for a_ij and b_i from metric specs.
std::vector<Expression> parse_list(const nlohmann::json& j, const std::string& field) {
  if (!j.is_array()) throw Error(ErrorKind::usage, "field \"" + field + "\" must be an array");
  std::vector<Expression> out;
  for (const auto& e : j) out.push_back(Expression::parse(e));
  return out;
}

std::function<std::vector<Jet>(std::span<const Jet>)> expression_vector(std::vector<Expression> exprs) {
  return [exprs = std::move(exprs)](std::span<const Jet> x) {
    std::vector<Jet> out;
    out.reserve(exprs.size());
    for (const auto& e : exprs) out.push_back(e.evaluate(x, {}));
    return out;
  };
}

Chart chart_from_params(const nlohmann::json& params, Chart fallback, int dim) {
  if (params.contains("domain")) fallback.domain = Domain::from_json(params["domain"], dim);
  if (params.contains("sample_region")) {
    fallback.sample_region = Domain::from_json(params["sample_region"], dim);
  } else if (params.contains("domain") && fallback.domain.shape != Domain::Shape::whole) {
    fallback.sample_region = fallback.domain;
    if (fallback.sample_region.shape == Domain::Shape::ball) fallback.sample_region.radius *= 0.9;
  }
  if (fallback.sample_region.shape == Domain::Shape::whole) {
    throw Error(ErrorKind::usage, "field \"params.sample_region\" must be bounded");
  }
  return fallback;
}

double param(const nlohmann::json& params, const std::string& key, double fallback) {
  if (!params.contains(key)) return fallback;
  if (!params[key].is_number()) throw Error(ErrorKind::usage, "field \"params." + key + "\" must be a number");
  return params[key].get<double>();
}

}  // namespace

FinslerStructure euclidean(int dim) {
  require_dim(dim);
  return FinslerStructure(
      dim, MetricKind::euclidean, flat_chart(dim_label("euclidean", dim), dim),
      [](std::span<const Jet>, std::span<const Jet> y) { return ad::sqrt(dot(y, y)); }, nlohmann::json::object(), true,
      MetricField([dim](std::span<const Jet>) {
        std::vector<Jet> a(static_cast<std::size_t>(dim * dim), Jet(0.0));
        for (int i = 0; i < dim; ++i) a[static_cast<std::size_t>(i * dim + i)] = Jet(1.0);
        return a;
      }));
}

FinslerStructure minkowski_quartic(int dim, double epsilon) {
  require_dim(dim);
  if (!(epsilon >= 0.0) || epsilon > 2.0) throw Error(ErrorKind::invalid_params, "quartic epsilon must be in [0, 2]");
  return FinslerStructure(
      dim, MetricKind::minkowski, flat_chart(dim_label("minkowski_quartic", dim), dim),
      [epsilon](std::span<const Jet>, std::span<const Jet> y) {
        const Jet s = dot(y, y);
        Jet q = s * s;
        for (const Jet& yi : y) {
          const Jet y2 = yi * yi;
          q += epsilon * (y2 * y2);
        }
        return ad::pow(q, 0.25);
      },
      {{"norm", "quartic"}, {"epsilon", epsilon}}, true);
}

FinslerStructure minkowski(int dim, const Expression& norm) {
  require_dim(dim);
  if (norm.depends_on_x()) throw Error(ErrorKind::invalid_params, "minkowski norm must not depend on x");
  if (norm.max_y_index() > dim) throw Error(ErrorKind::invalid_params, "norm references y beyond dim");
  return FinslerStructure(
      dim, MetricKind::minkowski, flat_chart(dim_label("minkowski", dim), dim),
      [norm](std::span<const Jet> x, std::span<const Jet> y) { return norm.evaluate(x, y); },
      {{"expression", norm.to_string()}}, false);
}

FinslerStructure riemannian(int dim, MetricField a, Chart chart, nlohmann::json params) {
  require_dim(dim);
  MetricField field = a;
  return FinslerStructure(
      dim, MetricKind::riemannian, std::move(chart),
      [a = std::move(a)](std::span<const Jet> x, std::span<const Jet> y) { return ad::sqrt(quadratic(a(x), y)); },
      std::move(params), true, std::move(field));
}

FinslerStructure warped_plane() {
  MetricField a = [](std::span<const Jet> x) {
    return std::vector<Jet>{Jet(1.0), Jet(0.0), Jet(0.0), x[0] * x[0] + 1.0};
  };
  return riemannian(2, std::move(a), flat_chart("warped_plane(n=2)", 2), {{"a", {{"1", "0"}, {"0", "(+ (* x1 x1) 1)"}}}});
}

FinslerStructure randers(int dim, std::optional<MetricField> a,
                         std::function<std::vector<Jet>(std::span<const Jet>)> b, Chart chart,
                         nlohmann::json params, bool strict) {
  require_dim(dim);
  if (strict) {
    // ||b||_a < 1 at the origin-free sample set of the chart
    std::mt19937_64 rng(0x5eed);
    double worst = 0.0;
    std::vector<double> witness;
    for (int k = 0; k < 256; ++k) {
      std::vector<double> xs = k == 0 ? std::vector<double>(static_cast<std::size_t>(dim), 0.0)
                                      : chart.sample_region.sample(dim, rng);
      if (!chart.contains(xs)) continue;
      std::vector<Jet> xj(xs.begin(), xs.end());
      const auto bj = b(xj);
      Eigen::MatrixXd am = Eigen::MatrixXd::Identity(dim, dim);
      if (a) {
        const auto aj = (*a)(xj);
        for (int i = 0; i < dim; ++i)
          for (int j = 0; j < dim; ++j) am(i, j) = aj[static_cast<std::size_t>(i * dim + j)].value();
      }
      Eigen::VectorXd bv(dim);
      for (int i = 0; i < dim; ++i) bv(i) = bj[static_cast<std::size_t>(i)].value();
      const double norm = std::sqrt(bv.dot(am.ldlt().solve(bv)));
      if (!(norm <= worst)) {
        worst = norm;
        witness = xs;
      }
    }
    if (!(worst < 1.0)) {
      std::string at;
      for (std::size_t i = 0; i < witness.size(); ++i) at += (i ? "," : "") + std::to_string(witness[i]);
      throw Error(ErrorKind::invalid_params,
                  "Randers requires ||b||_a < 1; found " + std::to_string(worst) + " at x=(" + at + ")");
    }
  }
  std::optional<MetricField> a_copy = a;
  return FinslerStructure(
      dim, MetricKind::randers, std::move(chart),
      [a = std::move(a_copy), b = std::move(b)](std::span<const Jet> x, std::span<const Jet> y) {
        const auto bj = b(x);
        const Jet alpha = a ? ad::sqrt(quadratic((*a)(x), y)) : ad::sqrt(dot(y, y));
        return alpha + dot(bj, y);
      },
      std::move(params), false);
}

FinslerStructure randers(std::vector<double> b, bool strict) {
  const int dim = static_cast<int>(b.size());
  std::string name = "randers(b=";
  for (std::size_t i = 0; i < b.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%g", i ? "," : "", b[i]);
    name += buf;
  }
  name += ")";
  auto field = [b](std::span<const Jet>) { return std::vector<Jet>(b.begin(), b.end()); };
  return randers(dim, std::nullopt, field, flat_chart(name, dim), {{"b", b}}, strict);
}

FinslerStructure funk(int dim) {
  require_dim(dim);
  Chart chart{dim_label("funk", dim), Domain::ball(1.0), Domain::ball(0.8), "open unit ball"};
  return FinslerStructure(
      dim, MetricKind::funk, std::move(chart),
      [](std::span<const Jet> x, std::span<const Jet> y) {
        const Jet xy = dot(x, y);
        const Jet yy = dot(y, y);
        const Jet one_minus = 1.0 - dot(x, x);
        return (ad::sqrt(xy * xy + yy * one_minus) + xy) / one_minus;
      },
      nlohmann::json::object(), false);
}

FinslerStructure sphere_chart(int dim, double radius) {
  require_dim(dim);
  if (!(radius > 0.0)) throw Error(ErrorKind::invalid_params, "sphere radius must be > 0");
  Chart chart{dim_label("sphere_chart", dim), Domain::ball(10.0), Domain::ball(1.5),
              "stereographic chart from the north pole; |x| < 10 excludes a polar cap of angular radius ~0.2"};
  MetricField a = [dim, radius](std::span<const Jet> x) {
    const Jet conformal = 4.0 * radius * radius / ad::pow(1.0 + dot(x, x), 2);
    std::vector<Jet> out(static_cast<std::size_t>(dim * dim), Jet(0.0));
    for (int i = 0; i < dim; ++i) out[static_cast<std::size_t>(i * dim + i)] = conformal;
    return out;
  };
  return FinslerStructure(
      dim, MetricKind::sphere_chart, std::move(chart),
      [radius](std::span<const Jet> x, std::span<const Jet> y) {
        return (2.0 * radius) * ad::sqrt(dot(y, y)) / (1.0 + dot(x, x));
      },
      {{"radius", radius}}, true, std::move(a));
}

FinslerStructure from_expression(int dim, const Expression& F, Chart chart, nlohmann::json params) {
  require_dim(dim);
  if (F.max_x_index() > dim || F.max_y_index() > dim) {
    throw Error(ErrorKind::usage, "field \"expression\" references coordinates beyond dim");
  }
  params["expression"] = F.to_string();
  return FinslerStructure(
      dim, MetricKind::user_config, std::move(chart),
      [F](std::span<const Jet> x, std::span<const Jet> y) { return F.evaluate(x, y); }, std::move(params), false);
}

FinslerStructure builtin(MetricKind kind, int dim, const nlohmann::json& params_in, bool strict) {
  const nlohmann::json params = params_in.is_null() ? nlohmann::json::object() : params_in;
  if (!params.is_object()) throw Error(ErrorKind::usage, "field \"params\" must be an object");
  switch (kind) {
    case MetricKind::euclidean: return euclidean(dim);
    case MetricKind::minkowski: {
      if (params.contains("expression")) return minkowski(dim, Expression::parse(params["expression"]));
      const std::string norm = params.value("norm", std::string("quartic"));
      if (norm != "quartic") throw Error(ErrorKind::usage, "field \"params.norm\": only \"quartic\" is built in");
      return minkowski_quartic(dim, param(params, "epsilon", 0.5));
    }
    case MetricKind::riemannian: {
      if (!params.contains("a")) throw Error(ErrorKind::usage, "field \"params.a\" required for riemannian");
      std::vector<Expression> entries;
      for (const auto& row : params["a"]) {
        const auto r = parse_list(row, "params.a");
        if (static_cast<int>(r.size()) != dim) throw Error(ErrorKind::usage, "field \"params.a\" must be dim x dim");
        entries.insert(entries.end(), r.begin(), r.end());
      }
      if (static_cast<int>(entries.size()) != dim * dim) {
        throw Error(ErrorKind::usage, "field \"params.a\" must be dim x dim");
      }
      Chart chart = chart_from_params(params, flat_chart(dim_label("riemannian", dim), dim), dim);
      return riemannian(dim, expression_vector(std::move(entries)), std::move(chart), params);
    }
    case MetricKind::randers: {
      if (!params.contains("b")) throw Error(ErrorKind::usage, "field \"params.b\" required for randers");
      auto b = parse_list(params["b"], "params.b");
      if (static_cast<int>(b.size()) != dim) throw Error(ErrorKind::usage, "field \"params.b\" must have dim entries");
      std::optional<MetricField> a;
      if (params.contains("a")) {
        std::vector<Expression> entries;
        for (const auto& row : params["a"]) {
          const auto r = parse_list(row, "params.a");
          entries.insert(entries.end(), r.begin(), r.end());
        }
        if (static_cast<int>(entries.size()) != dim * dim) {
          throw Error(ErrorKind::usage, "field \"params.a\" must be dim x dim");
        }
        a = expression_vector(std::move(entries));
      }
      Chart chart = chart_from_params(params, flat_chart(dim_label("randers", dim), dim), dim);
      return randers(dim, std::move(a), expression_vector(std::move(b)), std::move(chart), params, strict);
    }
    case MetricKind::funk: return funk(dim);
    case MetricKind::sphere_chart: return sphere_chart(dim, param(params, "radius", 1.0));
    case MetricKind::user_config:
      throw Error(ErrorKind::usage, "field \"expression\" required for user_config");
  }
  throw Error(ErrorKind::usage, "unknown kind");
}

FinslerStructure load_metric_spec(const nlohmann::json& spec, bool strict) {
  if (!spec.is_object()) throw Error(ErrorKind::usage, "metric spec must be a JSON object");
  if (!spec.contains("kind") || !spec["kind"].is_string()) {
    throw Error(ErrorKind::usage, "field \"kind\" missing or not a string");
  }
  if (!spec.contains("dim") || !spec["dim"].is_number_integer()) {
    throw Error(ErrorKind::usage, "field \"dim\" missing or not an integer");
  }
  const MetricKind kind = metric_kind_from_string(spec["kind"].get<std::string>());
  const int dim = spec["dim"].get<int>();
  if (dim < 2 || dim > 4) throw Error(ErrorKind::usage, "field \"dim\" must be in [2, 4]");
  const nlohmann::json params = spec.value("params", nlohmann::json::object());
  if (kind == MetricKind::user_config) {
    if (!spec.contains("expression")) throw Error(ErrorKind::usage, "field \"expression\" required for user_config");
    Chart chart = chart_from_params(params, flat_chart(dim_label("user_config", dim), dim), dim);
    return from_expression(dim, Expression::parse(spec["expression"]), std::move(chart), params);
  }
  if (spec.contains("expression")) {
    if (kind != MetricKind::minkowski) {
      throw Error(ErrorKind::usage, "field \"expression\" is only meaningful for minkowski and user_config");
    }
    nlohmann::json p = params;
    p["expression"] = spec["expression"];
    return builtin(kind, dim, p, strict);
  }
  return builtin(kind, dim, params, strict);
}

std::vector<FinslerStructure> minkowski_catalog() {
  return {euclidean(2), euclidean(3), minkowski_quartic(2, 0.5), minkowski_quartic(3, 0.5), randers({0.3, 0.0})};
}

std::vector<FinslerStructure> standard_catalog() {
  auto out = minkowski_catalog();
  out.push_back(warped_plane());
  // x-dependent Randers: |b(x)| <= 0.2 + 0.1 |x|, so the ball of radius 4 keeps |b| <= 0.6
  out.push_back(randers(
      2, std::nullopt,
      [](std::span<const Jet> x) { return std::vector<Jet>{0.2 + 0.1 * x[1], 0.1 * x[0]}; },
      Chart{"randers_drift(n=2)", Domain::ball(4.0), Domain::cube(2, 1.0), "ball of radius 4 in R^2"},
      {{"b", {"(+ 0.2 (* 0.1 x2))", "(* 0.1 x1)"}}}));
  out.push_back(funk(2));
  out.push_back(funk(3));
  out.push_back(sphere_chart(2, 1.0));
  out.push_back(sphere_chart(3, 1.0));
  return out;
}

}  // namespace finsler::catalog
