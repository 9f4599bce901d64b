// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "finsler/expression.hpp"
#include "finsler/structure.hpp"

namespace finsler::catalog {

/// F(x,y) = |y|.
FinslerStructure euclidean(int dim);

/// F = (|y|^4 + epsilon * sum_i y_i^4)^(1/4); strongly convex for moderate epsilon >= 0.
FinslerStructure minkowski_quartic(int dim, double epsilon);

/// x-independent norm given as an expression in y.
FinslerStructure minkowski(int dim, const Expression& norm);

/// F = sqrt(a_ij(x) y^i y^j).
FinslerStructure riemannian(int dim, MetricField a, Chart chart, nlohmann::json params = {});

/// diag(1, (x1)^2 + 1) on R^2; Gaussian curvature -1 / (1 + x1^2)^2.
FinslerStructure warped_plane();

/// F = sqrt(a_ij y^i y^j) + b_i(x) y^i. With `strict`, requires ||b||_a < 1, checked exactly for
/// constant data and on chart samples otherwise.
FinslerStructure randers(int dim, std::optional<MetricField> a, std::function<std::vector<Jet>(std::span<const Jet>)> b,
                         Chart chart, nlohmann::json params, bool strict = true);

/// Constant-coefficient Randers norm |y| + b . y on R^n, a Minkowski space.
FinslerStructure randers(std::vector<double> b, bool strict = true);

/// Funk metric of the unit ball: |y + F x| = F, constant flag curvature -1/4.
FinslerStructure funk(int dim);

/// Round sphere of radius r in the stereographic chart omitting one pole.
FinslerStructure sphere_chart(int dim, double radius);

/// Arbitrary F given as an expression over x and y.
FinslerStructure from_expression(int dim, const Expression& F, Chart chart, nlohmann::json params = {});

/// Dispatches on kind with JSON params (schema as for metric-spec files).
FinslerStructure builtin(MetricKind kind, int dim, const nlohmann::json& params, bool strict = true);

/// Metric-spec document: { "kind", "dim", "params", "expression" }.
FinslerStructure load_metric_spec(const nlohmann::json& spec, bool strict = true);

/// The built-in model metrics exercised by validation and acceptance runs.
std::vector<FinslerStructure> standard_catalog();

/// Subset of standard_catalog() whose F does not depend on x.
std::vector<FinslerStructure> minkowski_catalog();

}  // namespace finsler::catalog
