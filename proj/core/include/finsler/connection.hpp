// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "finsler/structure.hpp"
#include "finsler/tensor.hpp"

namespace finsler {

/// g_ij = [F^2/2]_{y^i y^j}; throws strong-convexity if not positive definite.
TensorAtPoint metric_tensor(const FinslerStructure& s, std::span<const double> x, std::span<const double> y);

/// g^ij.
TensorAtPoint inverse_metric(const FinslerStructure& s, std::span<const double> x, std::span<const double> y);

/// C_ijk = (1/2) dg_ij / dy^k.
TensorAtPoint cartan_tensor(const FinslerStructure& s, std::span<const double> x, std::span<const double> y);

/// Formal Christoffel symbols of the second kind, gamma^i_jk.
TensorAtPoint christoffel(const FinslerStructure& s, std::span<const double> x, std::span<const double> y);

/// G^i = (1/2) gamma^i_jk y^j y^k.
std::vector<double> spray(const FinslerStructure& s, std::span<const double> x, std::span<const double> y);

/// N^i_j = dG^i / dy^j.
TensorAtPoint nonlinear_connection(const FinslerStructure& s, std::span<const double> x, std::span<const double> y);

/// Cartan horizontal coefficients
///   Gamma*^i_jk = (1/2) g^is (delta_j g_sk + delta_k g_js - delta_s g_jk),  delta_j = d/dx^j - N^m_j d/dy^m.
TensorAtPoint cartan_horizontal_coeffs(const FinslerStructure& s, std::span<const double> x,
                                       std::span<const double> y);

}  // namespace finsler
