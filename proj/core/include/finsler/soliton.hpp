// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "finsler/sampling.hpp"
#include "finsler/structure.hpp"
#include "finsler/tensor.hpp"
#include "finsler/vector_field.hpp"

namespace finsler {

enum class SolitonClass { shrinking, steady, expanding };

std::string to_string(SolitonClass c);
SolitonClass classify(double lambda) noexcept;

/// (L_V g)_jk along the complete lift, in coordinates:
///   V^m dg_jk/dx^m + y^p dV^m/dx^p dg_jk/dy^m + dV^m/dx^j g_mk + dV^m/dx^k g_jm.
TensorAtPoint lie_derivative_complete_lift(const FinslerStructure& s, const VectorField& V,
                                           std::span<const double> x, std::span<const double> y);

/// nabla_j V_k + nabla_k V_j + 2 (nabla_0 V^l) C_ljk with the Cartan connection, V_k = g_kl(x, y) V^l.
TensorAtPoint lie_derivative_cartan(const FinslerStructure& s, const VectorField& V, std::span<const double> x,
                                    std::span<const double> y);

struct IndicatrixOptions {
  /// 0 selects default_seed_count(dim).
  int seeds = 0;
  /// Directions added to the seed set, e.g. a known near-maximizer.
  std::vector<std::vector<double>> extra_seeds;
  /// Number of best seeds refined by projected ascent.
  int refine = 4;
  /// Stop when the ascent step falls below this (in the Euclidean sphere metric).
  double step_tol = 1e-6;
  int max_iterations = 200;
};

/// ||V||_x = max over F(x, y) = 1 of sqrt(g_ij(x, y) V^i V^j).
double indicatrix_norm(const FinslerStructure& s, std::span<const double> x, std::span<const double> v,
                       const IndicatrixOptions& opt = {});
double indicatrix_norm(const FinslerStructure& s, const VectorField& V, std::span<const double> x,
                       const IndicatrixOptions& opt = {});

/// (pi / lambda) (D + sqrt(D^2 + lambda (n - 1))). Throws shrinking-required for lambda <= 0.
double diameter_bound(double lambda, double D, int n);

struct SolitonOptions {
  /// Residual and eigenvalue pass thresholds.
  double residual_tol = 1e-8;
  double eigen_tol = 1e-8;
  bool compute_norm = true;
  IndicatrixOptions norm;
  std::size_t workers = 0;
};

struct SolitonReport {
  double lambda = 0.0;
  int samples = 0;
  /// max over samples of max_jk |2 Ric_jk + (L_V g)_jk - 2 lambda g_jk|
  double residual_sup = 0.0;
  /// min over samples of the smallest eigenvalue of 2 Ric + L_V g - 2 lambda g
  double hypothesis_min_eig = 0.0;
  SolitonClass classification = SolitonClass::steady;
  double norm_sup = 0.0;
  std::optional<double> bound;
  SamplePoint residual_witness;
  SamplePoint eigen_witness;
  double residual_tol = 0.0;
  double eigen_tol = 0.0;

  [[nodiscard]] bool soliton_certified() const noexcept { return residual_sup <= residual_tol; }
  [[nodiscard]] bool hypothesis_certified() const noexcept { return hypothesis_min_eig >= -eigen_tol; }
  [[nodiscard]] nlohmann::json to_json() const;
};

/// Evaluates 2 Ric + L_V g = 2 lambda g on the given samples.
SolitonReport soliton_residual(const FinslerStructure& s, const VectorField& V, double lambda,
                               std::span<const SamplePoint> samples, const SolitonOptions& opt = {});

/// The default certification sample set, 20 base points by 16 indicatrix directions.
std::vector<SamplePoint> soliton_samples(const FinslerStructure& s, std::uint64_t seed, int nx = 20, int ny = 16);

}  // namespace finsler
