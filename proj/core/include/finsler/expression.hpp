// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "finsler/jet.hpp"

namespace finsler {

/// Prefix-notation expression tree over x_i, y_i, constants and
/// {+, -, *, /, pow, sqrt, exp, log, sin, cos, abs}.
///
/// Accepted encodings: a JSON array `["op", arg, ...]` with numeric or string leaves ("x1", "y_2"),
/// or an S-expression string such as "(sqrt (+ (* y1 y1) (* y2 y2)))". Coordinates are 1-based.
class Expression {
 public:
  enum class Op { constant, x, y, add, sub, mul, div, pow, sqrt, exp, log, sin, cos, abs, neg };

  static Expression parse(const nlohmann::json& source);
  static Expression parse(const std::string& source);
  static Expression constant(double value);
  static Expression coordinate(bool is_y, int index0);

  [[nodiscard]] ad::Jet evaluate(std::span<const ad::Jet> x, std::span<const ad::Jet> y) const;

  /// 1 + largest coordinate index referenced, separately for x and y.
  [[nodiscard]] int max_x_index() const;
  [[nodiscard]] int max_y_index() const;
  [[nodiscard]] bool depends_on_x() const { return max_x_index() > 0; }

  /// Canonical S-expression form.
  [[nodiscard]] std::string to_string() const;

 private:
  struct Node {
    Op op = Op::constant;
    double value = 0.0;
    int index = 0;
    std::vector<std::shared_ptr<const Node>> args;
  };

  explicit Expression(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

  static std::shared_ptr<const Node> parse_json(const nlohmann::json& j);
  static ad::Jet eval(const Node& n, std::span<const ad::Jet> x, std::span<const ad::Jet> y);
  static void write(const Node& n, std::string& out);
  static void scan(const Node& n, int& max_x, int& max_y);

  std::shared_ptr<const Node> root_;
};

}  // namespace finsler
