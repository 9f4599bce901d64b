// SPDX-License-Identifier: Apache-2.0
#include "finsler/validation.hpp"

#include <cmath>
#include <random>

#include "finsler/error.hpp"
#include "finsler/geometry.hpp"
#include "finsler/parallel.hpp"
#include "finsler/sampling.hpp"

namespace finsler {
namespace {

constexpr double kScales[] = {0.5, 2.0, 7.3};

struct SampleOutcome {
  double F = 0.0;
  bool positive = true;
  bool regular = true;
  std::string regular_detail;
  double homogeneity = 0.0;
  double convexity_ratio = 0.0;  // lambda_min / lambda_max
  bool convex = true;
  std::string convex_detail;
};

SampleOutcome check_sample(const FinslerStructure& s, const SamplePoint& p) {
  SampleOutcome o;
  o.F = evaluate_F_unchecked(s, p.x, p.y);
  o.positive = std::isfinite(o.F) && o.F > 0.0;

  try {
    const SeededFinsler sf = seed_finsler(s, p.x, p.y, ad::kMaxOrder, kMaxXOrder);
    o.regular = ad::isfinite(sf.F);
    if (!o.regular) o.regular_detail = "non-finite derivative of F";
  } catch (const Error& e) {
    o.regular = false;
    o.regular_detail = e.what();
  }

  for (double c : kScales) {
    std::vector<double> cy(p.y);
    for (double& v : cy) v *= c;
    const double Fc = evaluate_F_unchecked(s, p.x, cy);
    const double rel = std::abs(Fc - c * o.F) / (c * std::abs(o.F));
    o.homogeneity = std::max(o.homogeneity, std::isfinite(rel) ? rel : INFINITY);
  }

  try {
    const SeededFinsler sf = seed_finsler(s, p.x, p.y, 2, 0);
    const std::vector<Jet> gj = metric_jets(sf);
    std::vector<double> g(gj.size());
    for (std::size_t k = 0; k < g.size(); ++k) g[k] = gj[k].value();
    const auto [lo, hi] = eigen_range(g, s.dim());
    o.convexity_ratio = hi > 0.0 ? lo / hi : -INFINITY;
    if (!std::isfinite(o.convexity_ratio)) o.convexity_ratio = -INFINITY;
  } catch (const Error& e) {
    o.convexity_ratio = -INFINITY;
    o.convex_detail = e.what();
  }
  return o;
}

void record(AxiomResult& r, bool failed, double stat, bool worse, const SamplePoint& p) {
  if (failed) ++r.failures;
  if (worse) {
    r.worst = stat;
    r.witness_x = p.x;
    r.witness_y = p.y;
  }
}

nlohmann::json axiom_json(const AxiomResult& r) {
  nlohmann::json j = {{"passed", r.passed}, {"worst", r.worst}, {"failures", r.failures}, {"detail", r.detail}};
  if (!r.witness_x.empty()) j["witness"] = {{"x", r.witness_x}, {"y", r.witness_y}};
  return j;
}

}  // namespace

nlohmann::json ValidationReport::to_json() const {
  return {{"metric", metric},
          {"samples", samples},
          {"seed", seed},
          {"passed", passed()},
          {"axioms",
           {{"positivity", axiom_json(positivity)},
            {"regularity", axiom_json(regularity)},
            {"homogeneity", axiom_json(homogeneity)},
            {"strong_convexity", axiom_json(convexity)}}}};
}

ValidationReport validate_structure(const FinslerStructure& s, int sample_count, const ValidationOptions& opt) {
  if (sample_count < 1) throw Error(ErrorKind::invalid_params, "sample_count must be >= 1");
  const int n = s.dim();
  std::mt19937_64 rng(opt.seed);
  std::vector<SamplePoint> pts;
  pts.reserve(static_cast<std::size_t>(sample_count));
  for (int k = 0; k < sample_count; ++k) {
    SamplePoint p;
    p.x = s.chart().sample_region.sample(n, rng);
    if (k < opt.axis_samples) {
      p.y.assign(static_cast<std::size_t>(n), 0.0);
      p.y[static_cast<std::size_t>((k / 2) % n)] = k % 2 == 0 ? 1.0 : -1.0;
    } else {
      p.y = uniform_direction(n, rng);
    }
    pts.push_back(std::move(p));
  }

  std::vector<SampleOutcome> out(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) { out[i] = check_sample(s, pts[i]); }, opt.workers);

  ValidationReport r;
  r.metric = s.label();
  r.samples = sample_count;
  r.seed = opt.seed;
  r.positivity = {"positivity", true, INFINITY, {}, {}, "minimum of F over samples", 0};
  r.regularity = {"regularity", true, 0.0, {}, {}, "supported jet orders finite", 0};
  r.homogeneity = {"homogeneity", true, 0.0, {}, {}, "max relative |F(x,cy) - cF(x,y)|, c in {0.5, 2, 7.3}", 0};
  r.convexity = {"strong_convexity", true, INFINITY, {}, {}, "minimum of lambda_min(g) / lambda_max(g)", 0};

  for (std::size_t i = 0; i < pts.size(); ++i) {
    const SampleOutcome& o = out[i];
    const SamplePoint& p = pts[i];
    const double Fstat = std::isfinite(o.F) ? o.F : -INFINITY;
    record(r.positivity, !o.positive, Fstat, Fstat < r.positivity.worst || r.positivity.witness_x.empty(), p);
    if (!o.regular) {
      const bool first = r.regularity.failures == 0;
      record(r.regularity, true, 1.0, first, p);
      if (first) r.regularity.detail = o.regular_detail;
    }
    record(r.homogeneity, !(o.homogeneity <= opt.homogeneity_tol), o.homogeneity,
           !(o.homogeneity <= r.homogeneity.worst) || r.homogeneity.witness_x.empty(), p);
    const bool convex = o.convexity_ratio > opt.convexity_floor;
    record(r.convexity, !convex, o.convexity_ratio,
           o.convexity_ratio < r.convexity.worst || r.convexity.witness_x.empty(), p);
    if (!convex && r.convexity.failures == 1 && !o.convex_detail.empty()) r.convexity.detail = o.convex_detail;
  }
  r.positivity.passed = r.positivity.failures == 0;
  r.regularity.passed = r.regularity.failures == 0;
  r.homogeneity.passed = r.homogeneity.failures == 0;
  r.convexity.passed = r.convexity.failures == 0;
  return r;
}

}  // namespace finsler
