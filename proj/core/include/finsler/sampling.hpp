// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "finsler/structure.hpp"

namespace finsler {

/// (x, y) evaluation point.
struct SamplePoint {
  std::vector<double> x;
  std::vector<double> y;
};

/// Uniform direction on the Euclidean unit sphere S^{n-1}.
std::vector<double> uniform_direction(int dim, std::mt19937_64& rng);

/// `count` equally spaced unit vectors in the plane, starting at angle `phase`.
std::vector<std::vector<double>> circle_directions(int count, double phase = 0.0);

/// Fibonacci lattice on S^2.
std::vector<std::vector<double>> fibonacci_sphere(int count);

/// Deterministic dense direction set: circle for n = 2, Fibonacci for n = 3, seeded uniform otherwise.
std::vector<std::vector<double>> seed_directions(int dim, int count, std::uint64_t seed = 0x1d1ca7);

/// Default seed count of the direction searches: 512 for n = 2, 2048 otherwise.
int default_seed_count(int dim) noexcept;

/// x drawn from the chart's sample region and y on the indicatrix (F = 1), nx * ny points,
/// ordered x-major.
std::vector<SamplePoint> sample_grid(const FinslerStructure& s, int nx, int ny, std::uint64_t seed);

}  // namespace finsler
