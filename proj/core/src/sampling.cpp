// SPDX-License-Identifier: Apache-2.0
#include "finsler/sampling.hpp"

#include <cmath>
#include <numbers>

namespace finsler {

std::vector<double> uniform_direction(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::vector<double> v(static_cast<std::size_t>(dim));
  double norm = 0.0;
  do {
    norm = 0.0;
    for (double& c : v) {
      c = normal(rng);
      norm += c * c;
    }
  } while (norm < 1e-24);
  norm = std::sqrt(norm);
  for (double& c : v) c /= norm;
  return v;
}

std::vector<std::vector<double>> circle_directions(int count, double phase) {
  std::vector<std::vector<double>> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    const double a = phase + 2.0 * std::numbers::pi * k / count;
    out.push_back({std::cos(a), std::sin(a)});
  }
  return out;
}

std::vector<std::vector<double>> fibonacci_sphere(int count) {
  std::vector<std::vector<double>> out;
  out.reserve(static_cast<std::size_t>(count));
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int k = 0; k < count; ++k) {
    const double z = 1.0 - (2.0 * k + 1.0) / count;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double a = golden * k;
    out.push_back({r * std::cos(a), r * std::sin(a), z});
  }
  return out;
}

std::vector<std::vector<double>> seed_directions(int dim, int count, std::uint64_t seed) {
  if (dim == 2) return circle_directions(count);
  if (dim == 3) return fibonacci_sphere(count);
  std::mt19937_64 rng(seed);
  std::vector<std::vector<double>> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) out.push_back(uniform_direction(dim, rng));
  return out;
}

int default_seed_count(int dim) noexcept { return dim == 2 ? 512 : 2048; }

std::vector<SamplePoint> sample_grid(const FinslerStructure& s, int nx, int ny, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int n = s.dim();
  const auto dirs = seed_directions(n, ny, seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<SamplePoint> out;
  out.reserve(static_cast<std::size_t>(nx * ny));
  for (int i = 0; i < nx; ++i) {
    const std::vector<double> x = s.chart().sample_region.sample(n, rng);
    for (const auto& d : dirs) out.push_back({x, normalize_direction(s, x, d)});
  }
  return out;
}

}  // namespace finsler
