// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "finsler/structure.hpp"

namespace finsler {

struct AxiomResult {
  std::string name;
  bool passed = true;
  /// Worst value of the axiom's test statistic (axiom-specific; see `detail`).
  double worst = 0.0;
  std::vector<double> witness_x;
  std::vector<double> witness_y;
  std::string detail;
  int failures = 0;
};

struct ValidationReport {
  std::string metric;
  int samples = 0;
  std::uint64_t seed = 0;
  AxiomResult positivity;
  AxiomResult regularity;
  AxiomResult homogeneity;
  AxiomResult convexity;

  [[nodiscard]] bool passed() const noexcept {
    return positivity.passed && regularity.passed && homogeneity.passed && convexity.passed;
  }
  [[nodiscard]] nlohmann::json to_json() const;
};

struct ValidationOptions {
  std::uint64_t seed = 20240611;
  /// Relative tolerance of |F(x, cy) - c F(x, y)|.
  double homogeneity_tol = 1e-10;
  /// Strong convexity requires lambda_min(g) > convexity_floor * lambda_max(g).
  double convexity_floor = 1e-12;
  /// The first samples use coordinate axis directions +-e_i, where degeneracies of
  /// norms built from coordinate powers sit.
  int axis_samples = 8;
  std::size_t workers = 0;
};

/// Sampling test of positivity, regularity (all jet coefficients up to the curvature order
/// finite), positive homogeneity and strong convexity. Never throws on axiom failures.
ValidationReport validate_structure(const FinslerStructure& s, int sample_count, const ValidationOptions& opt = {});

}  // namespace finsler
