// SPDX-License-Identifier: Apache-2.0
#include "finsler/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "finsler/error.hpp"

namespace finsler::ad {
namespace {

// Graded enumeration: degree first, then reverse-lexicographic in the exponent vector.
void enumerate(int num_vars, int order, int capped_vars, int cap,
               std::vector<std::vector<std::uint8_t>>& out) {
  std::vector<std::uint8_t> e(static_cast<std::size_t>(num_vars), 0);
  for (int d = 0; d <= order; ++d) {
    // all exponent vectors with total degree d
    auto recurse = [&](auto&& self, int var, int remaining, int capped_used) -> void {
      if (var == num_vars) {
        if (remaining == 0) out.push_back(e);
        return;
      }
      for (int k = remaining; k >= 0; --k) {
        const int used = capped_used + (var < capped_vars ? k : 0);
        if (var < capped_vars && used > cap) continue;
        e[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(k);
        self(self, var + 1, remaining - k, used);
      }
      e[static_cast<std::size_t>(var)] = 0;
    };
    recurse(recurse, 0, d, 0);
  }
}

const std::vector<double>& inverse_factorials() {
  static const std::vector<double> table = [] {
    std::vector<double> t(2 * kMaxOrder + 8);
    double f = 1.0;
    for (std::size_t k = 0; k < t.size(); ++k) {
      if (k > 0) f *= static_cast<double>(k);
      t[k] = 1.0 / f;
    }
    return t;
  }();
  return table;
}

}  // namespace

JetSpace::JetSpace(int num_vars, int order, int capped_vars, int cap)
    : num_vars_(num_vars), order_(order), capped_vars_(capped_vars), cap_(cap) {
  std::vector<std::vector<std::uint8_t>> monomials;
  enumerate(num_vars, order, capped_vars, cap, monomials);
  const std::size_t count = monomials.size();
  const auto nv = static_cast<std::size_t>(num_vars);

  std::map<std::vector<std::uint8_t>, std::size_t> index;
  exponents_.reserve(count * nv);
  degree_.resize(count);
  capped_degree_.resize(count);
  factorial_.resize(count);
  for (std::size_t m = 0; m < count; ++m) {
    index.emplace(monomials[m], m);
    int d = 0;
    int cd = 0;
    double fact = 1.0;
    for (std::size_t v = 0; v < nv; ++v) {
      const int k = monomials[m][v];
      exponents_.push_back(static_cast<std::uint8_t>(k));
      d += k;
      if (static_cast<int>(v) < capped_vars) cd += k;
      for (int j = 2; j <= k; ++j) fact *= j;
    }
    degree_[m] = static_cast<std::uint8_t>(d);
    capped_degree_[m] = static_cast<std::uint8_t>(cd);
    factorial_[m] = fact;
  }

  degree_end_.assign(static_cast<std::size_t>(order) + 1, 0);
  for (std::size_t m = 0; m < count; ++m) {
    for (int d = degree_[m]; d <= order; ++d) degree_end_[static_cast<std::size_t>(d)] = m + 1;
  }

  lowered_.assign(count * nv, -1);
  variable_monomial_.assign(nv, 0);
  for (std::size_t m = 0; m < count; ++m) {
    for (std::size_t v = 0; v < nv; ++v) {
      if (monomials[m][v] == 0) continue;
      auto lower = monomials[m];
      --lower[v];
      lowered_[m * nv + v] = static_cast<std::int32_t>(index.at(lower));
    }
  }
  for (std::size_t v = 0; v < nv && order >= 1; ++v) {
    std::vector<std::uint8_t> e(nv, 0);
    e[v] = 1;
    if (auto it = index.find(e); it != index.end()) variable_monomial_[v] = it->second;
  }

  product_offset_.assign(count + 1, 0);
  std::vector<std::uint8_t> sum(nv);
  for (std::size_t b = 0; b < count; ++b) {
    product_offset_[b] = products_.size();
    const std::size_t first = products_.size();
    for (std::size_t a = 0; a < count; ++a) {
      if (degree_[a] + degree_[b] > order) break;  // graded order
      if (capped_degree_[a] + capped_degree_[b] > cap && capped_vars > 0) continue;
      for (std::size_t v = 0; v < nv; ++v) sum[v] = static_cast<std::uint8_t>(monomials[a][v] + monomials[b][v]);
      const std::size_t c = index.at(sum);
      products_.push_back({static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(c), degree_[c],
                           capped_degree_[c]});
    }
    std::stable_sort(products_.begin() + static_cast<std::ptrdiff_t>(first), products_.end(),
                     [](const ProductEntry& l, const ProductEntry& r) { return l.degree < r.degree; });
  }
  product_offset_[count] = products_.size();
}

const JetSpace& JetSpace::get(int num_vars, int order, int capped_vars, int cap) {
  if (num_vars < 0 || order < 0 || order > 2 * kMaxOrder + 2) {
    throw Error(ErrorKind::unsupported_order, "jet order " + std::to_string(order));
  }
  capped_vars = std::clamp(capped_vars, 0, num_vars);
  if (capped_vars == 0) cap = order;
  cap = std::clamp(cap, 0, order);

  static std::mutex mutex;
  static std::map<std::tuple<int, int, int, int>, std::unique_ptr<JetSpace>> registry;
  const std::lock_guard lock(mutex);
  auto& slot = registry[{num_vars, order, capped_vars, cap}];
  if (!slot) slot.reset(new JetSpace(num_vars, order, capped_vars, cap));
  return *slot;
}

const JetSpace& JetSpace::scalar() {
  static const JetSpace& space = get(0, 0);
  return space;
}

std::size_t JetSpace::end_of_degree(int d) const noexcept {
  if (d < 0) return 0;
  if (d >= order_) return size();
  return degree_end_[static_cast<std::size_t>(d)];
}

std::optional<std::size_t> JetSpace::find(std::span<const int> exponents) const {
  if (static_cast<int>(exponents.size()) != num_vars_) return std::nullopt;
  for (std::size_t m = 0; m < size(); ++m) {
    const auto e = this->exponents(m);
    if (std::equal(e.begin(), e.end(), exponents.begin(), exponents.end(),
                   [](std::uint8_t l, int r) { return l == r; })) {
      return m;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------------------------

Jet::Jet() noexcept : Jet(0.0) {}

Jet::Jet(double value) noexcept
    : space_(&JetSpace::scalar()), order_(2 * kMaxOrder + 2), cap_order_(2 * kMaxOrder + 2), c_{value} {}

Jet::Jet(const JetSpace& space, double value)
    : space_(&space), order_(space.order()), cap_order_(space.cap()), c_(space.size(), 0.0) {
  c_[0] = value;
}

Jet Jet::variable(const JetSpace& space, int v, double value) {
  Jet j(space, value);
  if (space.order() >= 1) j.c_[space.variable_monomial(v)] = 1.0;
  return j;
}

double Jet::partial(std::span<const int> exponents) const {
  if (is_scalar()) {
    return std::all_of(exponents.begin(), exponents.end(), [](int e) { return e == 0; }) ? c_[0] : 0.0;
  }
  const auto m = space_->find(exponents);
  if (!m) throw Error(ErrorKind::unsupported_order, "multi-index outside jet space");
  if (space_->degree(*m) > order_ || space_->capped_degree(*m) > cap_order_) {
    throw Error(ErrorKind::unsupported_order, "multi-index beyond the jet's valid order");
  }
  return c_[*m] * space_->factorial(*m);
}

Jet Jet::derivative(int v) const {
  if (is_scalar()) return Jet(0.0);
  const bool capped = v < space_->capped_vars();
  if (order_ < 1 || (capped && cap_order_ < 1)) {
    throw Error(ErrorKind::unsupported_order, "derivative beyond the jet's valid order");
  }
  std::vector<double> out(c_.size(), 0.0);
  const std::size_t end = space_->end_of_degree(order_);
  for (std::size_t m = 1; m < end; ++m) {
    if (space_->capped_degree(m) > cap_order_) continue;
    const std::int32_t lower = space_->lowered(m, v);
    if (lower < 0) continue;
    out[static_cast<std::size_t>(lower)] = c_[m] * space_->exponents(m)[static_cast<std::size_t>(v)];
  }
  return Jet(space_, order_ - 1, capped ? cap_order_ - 1 : cap_order_, std::move(out));
}

Jet& Jet::operator+=(const Jet& rhs) {
  if (rhs.is_scalar()) return *this += rhs.c_[0];
  if (is_scalar()) {
    const double v = c_[0];
    *this = rhs;
    return *this += v;
  }
  if (space_ != rhs.space_) throw std::logic_error("jet space mismatch");
  for (std::size_t m = 0; m < c_.size(); ++m) c_[m] += rhs.c_[m];
  order_ = std::min(order_, rhs.order_);
  cap_order_ = std::min(cap_order_, rhs.cap_order_);
  return *this;
}

Jet& Jet::operator-=(const Jet& rhs) {
  if (rhs.is_scalar()) return *this -= rhs.c_[0];
  if (is_scalar()) {
    const double v = c_[0];
    *this = -rhs;
    return *this += v;
  }
  if (space_ != rhs.space_) throw std::logic_error("jet space mismatch");
  for (std::size_t m = 0; m < c_.size(); ++m) c_[m] -= rhs.c_[m];
  order_ = std::min(order_, rhs.order_);
  cap_order_ = std::min(cap_order_, rhs.cap_order_);
  return *this;
}

Jet& Jet::operator*=(double rhs) noexcept {
  for (double& c : c_) c *= rhs;
  return *this;
}

Jet& Jet::operator*=(const Jet& rhs) { return *this = *this * rhs; }
Jet& Jet::operator/=(const Jet& rhs) { return *this = *this / rhs; }

Jet operator*(const Jet& lhs, const Jet& rhs) {
  if (rhs.is_scalar()) return lhs * rhs.c_[0];
  if (lhs.is_scalar()) return rhs * lhs.c_[0];
  if (lhs.space_ != rhs.space_) throw std::logic_error("jet space mismatch");
  const JetSpace& s = *lhs.space_;
  const int r = std::min(lhs.order_, rhs.order_);
  const int rc = std::min(lhs.cap_order_, rhs.cap_order_);
  const std::size_t end = s.end_of_degree(r);

  std::size_t nnz_l = 0;
  std::size_t nnz_r = 0;
  for (std::size_t m = 0; m < end; ++m) {
    nnz_l += lhs.c_[m] != 0.0;
    nnz_r += rhs.c_[m] != 0.0;
  }
  // iterate the sparser factor in the outer loop
  const Jet& dense = nnz_l >= nnz_r ? lhs : rhs;
  const Jet& sparse = nnz_l >= nnz_r ? rhs : lhs;

  std::vector<double> out(s.size(), 0.0);
  for (std::size_t b = 0; b < end; ++b) {
    const double vb = sparse.c_[b];
    if (vb == 0.0 || s.capped_degree(b) > rc) continue;
    for (const auto& e : s.products_with(b)) {
      if (e.degree > r) break;
      if (e.capped_degree > rc) continue;
      out[e.c] += dense.c_[e.a] * vb;
    }
  }
  return Jet(lhs.space_, r, rc, std::move(out));
}

Jet operator/(const Jet& lhs, const Jet& rhs) {
  if (rhs.is_scalar()) return lhs / rhs.c_[0];
  return lhs * reciprocal(rhs);
}

Jet operator/(double lhs, const Jet& rhs) { return reciprocal(rhs) * lhs; }

Jet compose(const Jet& x, std::span<const double> taylor) {
  if (x.is_scalar()) return Jet(taylor[0]);
  const int r = std::min<int>(x.order_, static_cast<int>(taylor.size()) - 1);
  Jet delta = x;
  delta.c_[0] = 0.0;
  Jet result(*x.space_, taylor[static_cast<std::size_t>(r)]);
  result.order_ = x.order_;
  result.cap_order_ = x.cap_order_;
  for (int k = r - 1; k >= 0; --k) {
    result = result * delta;
    result.c_[0] += taylor[static_cast<std::size_t>(k)];
  }
  return result;
}

// ---------------------------------------------------------------------------------------------

namespace {

int series_length(const Jet& x) { return x.is_scalar() ? 1 : std::min(x.order(), 2 * kMaxOrder + 2) + 1; }

[[noreturn]] void irregular(const char* what, double at) {
  throw Error(ErrorKind::regularity_failure, std::string(what) + " at " + std::to_string(at));
}

// Taylor coefficients of t^p around t0 > 0: binom(p, k) t0^(p-k).
std::vector<double> power_series(double t0, double p, double head, int length) {
  std::vector<double> d(static_cast<std::size_t>(length));
  d[0] = head;
  for (int k = 1; k < length; ++k) {
    d[static_cast<std::size_t>(k)] = d[static_cast<std::size_t>(k - 1)] * (p - k + 1) / (k * t0);
  }
  return d;
}

}  // namespace

Jet reciprocal(const Jet& x) {
  const double x0 = x.value();
  if (x0 == 0.0) irregular("division by zero", x0);
  const int len = series_length(x);
  std::vector<double> d(static_cast<std::size_t>(len));
  double term = 1.0 / x0;
  for (int k = 0; k < len; ++k) {
    d[static_cast<std::size_t>(k)] = term;
    term *= -1.0 / x0;
  }
  return compose(x, d);
}

Jet sqrt(const Jet& x) {
  const double x0 = x.value();
  if (x0 < 0.0 || (x0 == 0.0 && series_length(x) > 1)) irregular("sqrt of non-positive value", x0);
  if (x0 == 0.0) return x * 0.0;
  return compose(x, power_series(x0, 0.5, std::sqrt(x0), series_length(x)));
}

Jet pow(const Jet& x, double p) {
  if (p == std::floor(p) && std::abs(p) <= 32.0) return pow(x, static_cast<int>(p));
  const double x0 = x.value();
  if (x0 <= 0.0) irregular("non-integer power of non-positive value", x0);
  return compose(x, power_series(x0, p, std::pow(x0, p), series_length(x)));
}

Jet pow(const Jet& x, int p) {
  if (p < 0) return reciprocal(pow(x, -p));
  Jet result = x.is_scalar() ? Jet(1.0) : Jet(x.space(), 1.0);
  Jet base = x;
  while (p > 0) {
    if (p & 1) result = result * base;
    p >>= 1;
    if (p > 0) base = base * base;
  }
  return result;
}

Jet pow(const Jet& x, const Jet& p) {
  if (p.is_scalar()) return pow(x, p.value());
  return exp(p * log(x));
}

Jet exp(const Jet& x) {
  const int len = series_length(x);
  std::vector<double> d(static_cast<std::size_t>(len));
  const double e0 = std::exp(x.value());
  for (int k = 0; k < len; ++k) d[static_cast<std::size_t>(k)] = e0 * inverse_factorials()[static_cast<std::size_t>(k)];
  return compose(x, d);
}

Jet log(const Jet& x) {
  const double x0 = x.value();
  if (x0 <= 0.0) irregular("log of non-positive value", x0);
  const int len = series_length(x);
  std::vector<double> d(static_cast<std::size_t>(len));
  d[0] = std::log(x0);
  double inv = 1.0;
  for (int k = 1; k < len; ++k) {
    inv /= x0;
    d[static_cast<std::size_t>(k)] = ((k % 2 == 1) ? 1.0 : -1.0) * inv / k;
  }
  return compose(x, d);
}

namespace {

Jet trig(const Jet& x, int shift) {
  const int len = series_length(x);
  std::vector<double> d(static_cast<std::size_t>(len));
  const double s = std::sin(x.value());
  const double c = std::cos(x.value());
  const double cycle[4] = {s, c, -s, -c};  // derivatives of sin
  for (int k = 0; k < len; ++k) {
    d[static_cast<std::size_t>(k)] = cycle[(k + shift) % 4] * inverse_factorials()[static_cast<std::size_t>(k)];
  }
  return compose(x, d);
}

}  // namespace

Jet sin(const Jet& x) { return trig(x, 0); }
Jet cos(const Jet& x) { return trig(x, 1); }

Jet abs(const Jet& x) {
  const double x0 = x.value();
  if (x0 == 0.0 && series_length(x) > 1) irregular("abs at zero", x0);
  return x0 < 0.0 ? -x : x;
}

bool isfinite(const Jet& x) noexcept {
  const auto end = x.is_scalar() ? std::size_t{1} : x.space().end_of_degree(x.order());
  const auto c = x.coefficients();
  for (std::size_t m = 0; m < end; ++m) {
    if (!std::isfinite(c[m])) return false;
  }
  return true;
}

}  // namespace finsler::ad
