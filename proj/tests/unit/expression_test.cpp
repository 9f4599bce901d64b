// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "finsler/derive.hpp"
#include "finsler/error.hpp"
#include "finsler/expression.hpp"

namespace {

using finsler::Expression;

double eval(const Expression& e, std::vector<double> x, std::vector<double> y) {
  std::vector<finsler::Jet> xj(x.begin(), x.end()), yj(y.begin(), y.end());
  return e.evaluate(xj, yj).value();
}

TEST(Expression, SExpressionAndJsonAgree) {
  const auto a = Expression::parse(std::string("(+ (* x1 y2) (pow y1 3) (sqrt 4))"));
  const auto b = Expression::parse(nlohmann::json::parse(R"(["+", ["*", "x1", "y2"], ["pow", "y1", 3], ["sqrt", 4]])"));
  EXPECT_DOUBLE_EQ(eval(a, {2.0}, {1.5, 3.0}), 2.0 * 3.0 + 1.5 * 1.5 * 1.5 + 2.0);
  EXPECT_DOUBLE_EQ(eval(a, {2.0}, {1.5, 3.0}), eval(b, {2.0}, {1.5, 3.0}));
}

TEST(Expression, ReportsIndexRange) {
  const auto e = Expression::parse(std::string("(* x3 y_2)"));
  EXPECT_EQ(e.max_x_index(), 3);
  EXPECT_EQ(e.max_y_index(), 2);
  EXPECT_TRUE(e.depends_on_x());
  EXPECT_FALSE(Expression::parse(std::string("(abs y1)")).depends_on_x());
}

TEST(Expression, RoundTripsThroughCanonicalForm) {
  const auto e = Expression::parse(std::string("(/ (exp (- x1)) (cos y1))"));
  const auto again = Expression::parse(e.to_string());
  EXPECT_EQ(again.to_string(), e.to_string());
  EXPECT_DOUBLE_EQ(eval(again, {0.3}, {0.2}), std::exp(-0.3) / std::cos(0.2));
}

TEST(Expression, MalformedInputIsAUsageError) {
  for (const std::string bad : {"(+ y1", "(frob y1)", "(+ q1 y1)", ")"}) {
    try {
      (void)Expression::parse(bad);
      FAIL() << bad;
    } catch (const finsler::Error& e) {
      EXPECT_EQ(e.kind(), finsler::ErrorKind::usage) << bad;
    }
  }
}

}  // namespace
