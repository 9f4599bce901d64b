// SPDX-License-Identifier: Apache-2.0
/**
    \file
    \brief jet-level building blocks shared by the tensor, curvature and soliton modules

    Index conventions for flat arrays (n = dim):
      g, ginv, N           row-major n*n; N[i*n + j] = dG^i / dy^j
      C, dgdx, gamma, ...  n*n*n; C[(i*n + j)*n + k] = C_ijk, dgdx[(m*n + j)*n + k] = dg_jk / dx^m,
                           gamma[(i*n + j)*n + k] = gamma^i_jk
*/
#pragma once

#include <span>
#include <vector>

#include "finsler/structure.hpp"

namespace finsler {

inline std::size_t idx2(int n, int i, int j) { return static_cast<std::size_t>(i * n + j); }
inline std::size_t idx3(int n, int i, int j, int k) { return static_cast<std::size_t>((i * n + j) * n + k); }

struct SeededFinsler : SeededPoint {
  Jet F;
  Jet h;  // F^2 / 2
};

SeededFinsler seed_finsler(const FinslerStructure& s, std::span<const double> x, std::span<const double> y,
                           int order, int x_order);

/// g_ij = d^2 h / dy^i dy^j as jets, row-major.
std::vector<Jet> metric_jets(const SeededFinsler& p);

/// Solves A z = b (A symmetric positive definite, row-major n*n jets).
std::vector<Jet> solve_spd(std::vector<Jet> a, std::vector<Jet> b, int n);

/// Spray coefficients from the Euler-reduced form G^i = 1/2 g^il (h_{x^k y^l} y^k - h_{x^l}).
/// Needs x seeded; accurate to order - 2 (x-order one lower than the seed's cap).
std::vector<Jet> spray_jets(const SeededFinsler& p);

enum class FrameLevel {
  metric,      // F, g, ginv
  spray,       // + G
  connection,  // + C, dg/dx, N, gamma, Cartan horizontal coefficients
};

struct LocalFrame {
  int n = 0;
  double F = 0.0;
  std::vector<double> g, ginv;
  std::vector<double> G;
  std::vector<double> C, dgdx, N, gamma, cartan;
};

/// Numeric connection data at (x, y). Throws strong-convexity if g is not positive definite.
LocalFrame local_frame(const FinslerStructure& s, std::span<const double> x, std::span<const double> y,
                       FrameLevel level);

/// Only the spray coefficients; the geodesic integrator's right-hand side.
std::vector<double> spray_values(const FinslerStructure& s, std::span<const double> x, std::span<const double> y);

/// Smallest and largest eigenvalues of a symmetric row-major n*n matrix.
std::pair<double, double> eigen_range(std::span<const double> m, int n);

}  // namespace finsler
