// SPDX-License-Identifier: Apache-2.0
#include <vector>

#include <benchmark/benchmark.h>

#include "finsler/catalog.hpp"
#include "finsler/curvature.hpp"
#include "finsler/geodesic.hpp"
#include "finsler/geometry.hpp"
#include "finsler/jet.hpp"
#include "finsler/soliton.hpp"

namespace {

using namespace finsler;

// Product of two general jets in the curvature layout (2n variables, order 6, x capped at 2).
void BM_JetMultiply(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto& sp = ad::JetSpace::get(2 * n, 6, n, 2);
  ad::Jet a(sp, 1.0), b(sp, 2.0);
  for (int v = 0; v < 2 * n; ++v) {
    a += (0.1 * (v + 1)) * ad::Jet::variable(sp, v, 0.0);
    b += ad::exp(ad::Jet::variable(sp, v, 0.05 * v));
  }
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
  state.counters["monomials"] = static_cast<double>(sp.size());
}
BENCHMARK(BM_JetMultiply)->Arg(2)->Arg(3);

void BM_Ricci(benchmark::State& state) {
  const auto s = state.range(0) == 0 ? catalog::funk(2) : catalog::funk(3);
  const std::vector<double> x(static_cast<std::size_t>(s.dim()), 0.2);
  std::vector<double> y(static_cast<std::size_t>(s.dim()), 0.0);
  y[0] = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(ricci(s, x, y));
}
BENCHMARK(BM_Ricci)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_SprayValues(benchmark::State& state) {
  const auto s = catalog::sphere_chart(2, 1.0);
  const double x[] = {0.3, -0.4};
  const double y[] = {1.0, 0.5};
  for (auto _ : state) benchmark::DoNotOptimize(spray_values(s, x, y));
}
BENCHMARK(BM_SprayValues);

void BM_Geodesic(benchmark::State& state) {
  const auto s = catalog::sphere_chart(2, 1.0);
  const std::vector<double> x0{1.0, 0.0};
  const auto y0 = normalize_direction(s, x0, std::vector<double>{0.0, 1.0});
  for (auto _ : state) benchmark::DoNotOptimize(integrate_geodesic(s, x0, y0, 10.0, 1e-10));
}
BENCHMARK(BM_Geodesic)->Unit(benchmark::kMillisecond);

void BM_IndicatrixNorm(benchmark::State& state) {
  const auto s = catalog::randers({0.3, 0.0});
  const double x[] = {0.0, 0.0};
  const double v[] = {1.0, 0.5};
  for (auto _ : state) benchmark::DoNotOptimize(indicatrix_norm(s, x, v));
}
BENCHMARK(BM_IndicatrixNorm)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
