// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>

#include "finsler/structure.hpp"
#include "finsler/tensor.hpp"

namespace finsler {

struct CurvatureOptions {
  /// Evaluate at y / F(x, y). All outputs are 0-homogeneous, so this only changes rounding.
  bool normalize = true;
};

/// R^i_k = (2 dG^i/dx^k - d^2G^i/dx^j dy^k y^j + 2 G^j d^2G^i/dy^j dy^k - dG^i/dy^j dG^j/dy^k) / F^2.
TensorAtPoint reduced_curvature(const FinslerStructure& s, std::span<const double> x, std::span<const double> y,
                                CurvatureOptions opt = {});

/// Ricci scalar R^i_i.
double ricci_scalar(const FinslerStructure& s, std::span<const double> x, std::span<const double> y,
                    CurvatureOptions opt = {});

/// Ric_jk = [F^2/2 * Ric]_{y^j y^k}.
TensorAtPoint ricci_tensor(const FinslerStructure& s, std::span<const double> x, std::span<const double> y,
                           CurvatureOptions opt = {});

struct RicciData {
  double scalar = 0.0;
  TensorAtPoint tensor;
};

/// Scalar and tensor from one jet evaluation.
RicciData ricci(const FinslerStructure& s, std::span<const double> x, std::span<const double> y,
                CurvatureOptions opt = {});

/// Classical Ricci tensor of a Riemannian metric a_ij(x) through Levi-Civita symbols.
/// Independent of the spray pipeline; used as a cross-check.
TensorAtPoint riemannian_ricci_oracle(const MetricField& a, int dim, std::span<const double> x);

}  // namespace finsler
