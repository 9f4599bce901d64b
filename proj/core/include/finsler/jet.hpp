// SPDX-License-Identifier: Apache-2.0
/**
    \file
    \brief truncated multivariate Taylor jets

    A Jet stores the Taylor coefficients of a scalar function around a base point,
    f(z0 + dz) = sum_m c_m dz^m, for every monomial m of total degree <= order.
    Arithmetic propagates the truncated series exactly (up to rounding), so mixed
    partial derivatives of arbitrary black-box expressions come out to machine
    precision. Formal differentiation (`derivative`) lowers the valid order by one,
    which lets later stages differentiate quantities that were themselves built
    from derivatives, the same effect as nesting dual numbers.

    The first `capped_vars` variables of a space may carry a tighter joint degree
    cap. Curvature needs y-derivatives through order six but x-derivatives only
    through order two; the cap keeps the monomial count small.
*/
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace finsler::ad {

/// Highest total derivative order the engine is asked for by any consumer.
inline constexpr int kMaxOrder = 6;

class JetSpace {
 public:
  struct ProductEntry {
    std::uint32_t a;  // factor monomial
    std::uint32_t c;  // product monomial
    std::uint8_t degree;
    std::uint8_t capped_degree;
  };

  /// Returns the shared, immutable space for the given layout. Thread-safe.
  static const JetSpace& get(int num_vars, int order, int capped_vars = 0, int cap = 0);

  /// The zero-variable space; jets there are plain constants.
  static const JetSpace& scalar();

  [[nodiscard]] int num_vars() const noexcept { return num_vars_; }
  [[nodiscard]] int order() const noexcept { return order_; }
  [[nodiscard]] int capped_vars() const noexcept { return capped_vars_; }
  [[nodiscard]] int cap() const noexcept { return cap_; }
  [[nodiscard]] std::size_t size() const noexcept { return degree_.size(); }

  [[nodiscard]] int degree(std::size_t m) const noexcept { return degree_[m]; }
  [[nodiscard]] int capped_degree(std::size_t m) const noexcept { return capped_degree_[m]; }
  [[nodiscard]] std::span<const std::uint8_t> exponents(std::size_t m) const noexcept {
    return {exponents_.data() + m * static_cast<std::size_t>(num_vars_),
            static_cast<std::size_t>(num_vars_)};
  }

  /// One past the last monomial of degree <= d (monomials are graded).
  [[nodiscard]] std::size_t end_of_degree(int d) const noexcept;

  [[nodiscard]] std::optional<std::size_t> find(std::span<const int> exponents) const;
  [[nodiscard]] std::size_t variable_monomial(int v) const noexcept { return variable_monomial_[v]; }

  /// Index of m - e_v, or -1 when exponent v of m is zero.
  [[nodiscard]] std::int32_t lowered(std::size_t m, int v) const noexcept {
    return lowered_[m * static_cast<std::size_t>(num_vars_) + static_cast<std::size_t>(v)];
  }

  /// Entries (a, a+b) for a fixed b, sorted by degree of a+b.
  [[nodiscard]] std::span<const ProductEntry> products_with(std::size_t b) const noexcept {
    return {products_.data() + product_offset_[b], product_offset_[b + 1] - product_offset_[b]};
  }

  /// m! = prod_v (m_v)!, the factor between a Taylor coefficient and a partial derivative.
  [[nodiscard]] double factorial(std::size_t m) const noexcept { return factorial_[m]; }

 private:
  JetSpace(int num_vars, int order, int capped_vars, int cap);

  int num_vars_;
  int order_;
  int capped_vars_;
  int cap_;
  std::vector<std::uint8_t> exponents_;
  std::vector<std::uint8_t> degree_;
  std::vector<std::uint8_t> capped_degree_;
  std::vector<std::size_t> degree_end_;
  std::vector<std::int32_t> lowered_;
  std::vector<std::size_t> variable_monomial_;
  std::vector<double> factorial_;
  std::vector<ProductEntry> products_;
  std::vector<std::size_t> product_offset_;
};

class Jet {
 public:
  /// Exact constant zero in the scalar space; mixes with jets of any space.
  Jet() noexcept;
  Jet(double value) noexcept;  // NOLINT(google-explicit-constructor)
  Jet(const JetSpace& space, double value);

  static Jet variable(const JetSpace& space, int v, double value);

  [[nodiscard]] const JetSpace& space() const noexcept { return *space_; }
  [[nodiscard]] double value() const noexcept { return c_[0]; }
  [[nodiscard]] int order() const noexcept { return order_; }
  [[nodiscard]] int cap_order() const noexcept { return cap_order_; }
  [[nodiscard]] bool is_scalar() const noexcept { return c_.size() == 1; }
  [[nodiscard]] std::span<const double> coefficients() const noexcept { return c_; }
  [[nodiscard]] double coefficient(std::size_t m) const noexcept { return c_[m]; }

  /// Partial derivative d^|e| f / dz^e at the base point.
  [[nodiscard]] double partial(std::span<const int> exponents) const;

  /// Formal derivative in variable v; valid order drops by one.
  [[nodiscard]] Jet derivative(int v) const;

  Jet& operator+=(const Jet& rhs);
  Jet& operator-=(const Jet& rhs);
  Jet& operator+=(double rhs) noexcept {
    c_[0] += rhs;
    return *this;
  }
  Jet& operator-=(double rhs) noexcept {
    c_[0] -= rhs;
    return *this;
  }
  Jet& operator*=(double rhs) noexcept;
  Jet& operator/=(double rhs) noexcept { return *this *= (1.0 / rhs); }
  Jet& operator*=(const Jet& rhs);
  Jet& operator/=(const Jet& rhs);

  friend Jet operator+(Jet lhs, const Jet& rhs) { return lhs += rhs; }
  friend Jet operator-(Jet lhs, const Jet& rhs) { return lhs -= rhs; }
  friend Jet operator*(const Jet& lhs, const Jet& rhs);
  friend Jet operator/(const Jet& lhs, const Jet& rhs);
  friend Jet operator-(Jet x) noexcept { return x *= -1.0; }

  friend Jet operator+(Jet lhs, double rhs) noexcept { return lhs += rhs; }
  friend Jet operator+(double lhs, Jet rhs) noexcept { return rhs += lhs; }
  friend Jet operator-(Jet lhs, double rhs) noexcept { return lhs -= rhs; }
  friend Jet operator-(double lhs, Jet rhs) noexcept { return (rhs *= -1.0) += lhs; }
  friend Jet operator*(Jet lhs, double rhs) noexcept { return lhs *= rhs; }
  friend Jet operator*(double lhs, Jet rhs) noexcept { return rhs *= lhs; }
  friend Jet operator/(Jet lhs, double rhs) noexcept { return lhs /= rhs; }
  friend Jet operator/(double lhs, const Jet& rhs);

  /// sum_k taylor[k] (x - x0)^k; taylor[k] = f^(k)(x0) / k! for k <= x.order().
  friend Jet compose(const Jet& x, std::span<const double> taylor);

 private:
  Jet(const JetSpace* space, int order, int cap_order, std::vector<double> c) noexcept
      : space_(space), order_(order), cap_order_(cap_order), c_(std::move(c)) {}

  const JetSpace* space_;
  int order_;
  int cap_order_;
  std::vector<double> c_;
};

Jet reciprocal(const Jet& x);
Jet sqrt(const Jet& x);
Jet pow(const Jet& x, double p);
Jet pow(const Jet& x, int p);
Jet pow(const Jet& x, const Jet& p);
Jet exp(const Jet& x);
Jet log(const Jet& x);
Jet sin(const Jet& x);
Jet cos(const Jet& x);
Jet abs(const Jet& x);

/// True when every valid coefficient is finite.
bool isfinite(const Jet& x) noexcept;

}  // namespace finsler::ad
