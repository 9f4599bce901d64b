// SPDX-License-Identifier: Apache-2.0
#include "finsler/structure.hpp"

#include <algorithm>
#include <cmath>

#include "finsler/error.hpp"

namespace finsler {

std::string to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::euclidean: return "euclidean";
    case MetricKind::minkowski: return "minkowski";
    case MetricKind::riemannian: return "riemannian";
    case MetricKind::randers: return "randers";
    case MetricKind::funk: return "funk";
    case MetricKind::sphere_chart: return "sphere_chart";
    case MetricKind::user_config: return "user_config";
  }
  return "unknown";
}

MetricKind metric_kind_from_string(const std::string& name) {
  for (auto k : {MetricKind::euclidean, MetricKind::minkowski, MetricKind::riemannian, MetricKind::randers,
                 MetricKind::funk, MetricKind::sphere_chart, MetricKind::user_config}) {
    if (to_string(k) == name) return k;
  }
  throw Error(ErrorKind::usage, "field \"kind\": unknown metric kind '" + name + "'");
}

Domain Domain::whole() { return {}; }

Domain Domain::box(std::vector<double> lo, std::vector<double> hi) {
  Domain d;
  d.shape = Shape::box;
  d.lo = std::move(lo);
  d.hi = std::move(hi);
  return d;
}

Domain Domain::cube(int dim, double half_width) {
  return box(std::vector<double>(static_cast<std::size_t>(dim), -half_width),
             std::vector<double>(static_cast<std::size_t>(dim), half_width));
}

Domain Domain::ball(double radius) {
  Domain d;
  d.shape = Shape::ball;
  d.radius = radius;
  return d;
}

bool Domain::contains(std::span<const double> x) const {
  if (!std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); })) return false;
  switch (shape) {
    case Shape::whole: return true;
    case Shape::box:
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > lo[i] && x[i] < hi[i])) return false;
      }
      return true;
    case Shape::ball: {
      double r2 = 0.0;
      for (double v : x) r2 += v * v;
      return r2 < radius * radius;
    }
  }
  return false;
}

std::vector<double> Domain::sample(int dim, std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> x(static_cast<std::size_t>(dim));
  switch (shape) {
    case Shape::whole: throw Error(ErrorKind::usage, "cannot sample an unbounded domain");
    case Shape::box:
      for (std::size_t i = 0; i < x.size(); ++i) x[i] = lo[i] + (hi[i] - lo[i]) * unit(rng);
      return x;
    case Shape::ball: {
      // rejection from the bounding cube keeps it uniform and portable
      while (true) {
        double r2 = 0.0;
        for (double& v : x) {
          v = radius * (2.0 * unit(rng) - 1.0);
          r2 += v * v;
        }
        if (r2 < radius * radius) return x;
      }
    }
  }
  return x;
}

nlohmann::json Domain::to_json() const {
  switch (shape) {
    case Shape::whole: return {{"type", "whole"}};
    case Shape::box: return {{"type", "box"}, {"lo", lo}, {"hi", hi}};
    case Shape::ball: return {{"type", "ball"}, {"radius", radius}};
  }
  return {};
}

Domain Domain::from_json(const nlohmann::json& j, int dim) {
  const std::string type = j.value("type", std::string("whole"));
  if (type == "whole") return whole();
  if (type == "ball") {
    if (!j.contains("radius") || !j["radius"].is_number()) throw Error(ErrorKind::usage, "domain.radius required");
    return ball(j["radius"].get<double>());
  }
  if (type == "box") {
    auto lo = j.at("lo").get<std::vector<double>>();
    auto hi = j.at("hi").get<std::vector<double>>();
    if (static_cast<int>(lo.size()) != dim || static_cast<int>(hi.size()) != dim) {
      throw Error(ErrorKind::usage, "domain.lo/hi must have dim entries");
    }
    return box(std::move(lo), std::move(hi));
  }
  throw Error(ErrorKind::usage, "domain.type must be whole, box or ball");
}

FinslerStructure::FinslerStructure(int dim, MetricKind kind, Chart chart, ScalarField evaluator,
                                   nlohmann::json params, bool reversible, std::optional<MetricField> riemannian)
    : dim_(dim),
      kind_(kind),
      chart_(std::move(chart)),
      evaluator_(std::move(evaluator)),
      params_(std::move(params)),
      reversible_(reversible),
      riemannian_(std::move(riemannian)) {
  if (dim < 2) throw Error(ErrorKind::invalid_params, "dim must be >= 2");
}

std::string FinslerStructure::label() const { return chart_.name; }

ScalarField FinslerStructure::half_square() const {
  return [f = evaluator_](std::span<const Jet> x, std::span<const Jet> y) {
    const Jet F = f(x, y);
    return 0.5 * (F * F);
  };
}

void require_in_domain(const FinslerStructure& s, std::span<const double> x) {
  if (static_cast<int>(x.size()) != s.dim()) throw Error(ErrorKind::usage, "point has wrong dimension");
  if (!s.chart().contains(x)) throw Error(ErrorKind::domain_violation, "x outside chart '" + s.chart().name + "'");
}

double evaluate_F_unchecked(const FinslerStructure& s, std::span<const double> x, std::span<const double> y) {
  return evaluate(s.field(), x, y);
}

double evaluate_F(const FinslerStructure& s, std::span<const double> x, std::span<const double> y) {
  require_in_domain(s, x);
  if (std::all_of(y.begin(), y.end(), [](double v) { return v == 0.0; })) {
    throw Error(ErrorKind::slit_bundle, "y = 0");
  }
  const double F = evaluate_F_unchecked(s, x, y);
  if (!std::isfinite(F)) throw Error(ErrorKind::regularity_failure, "F is not finite");
  return F;
}

std::vector<double> normalize_direction(const FinslerStructure& s, std::span<const double> x,
                                        std::span<const double> y) {
  const double F = evaluate_F(s, x, y);
  if (!(F > 0.0)) throw Error(ErrorKind::regularity_failure, "F(x,y) <= 0 cannot be normalized");
  std::vector<double> out(y.begin(), y.end());
  for (double& v : out) v /= F;
  return out;
}

}  // namespace finsler
