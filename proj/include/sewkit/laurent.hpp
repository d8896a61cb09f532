#pragma once

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sewkit/rational.hpp"

namespace sewkit {

/// Sentinel order for series known exactly (Laurent polynomials).
inline constexpr long kExact = std::numeric_limits<long>::max() / 4;

inline long add_order(long a, long b) {
  if (a >= kExact || b >= kExact) return kExact;
  return a + b;
}

/// Single-variable Laurent series sum_{e >= lo} c_e z^e known through z^order.
/// An exact series (order == kExact) is a Laurent polynomial. T must have a
/// zero default value and is_zero(const T&).
template <class T>
class Laurent {
 public:
  Laurent() = default;
  // Exact constant; lets Laurent<Scalar> act as a coefficient ring.
  Laurent(int c) : Laurent(T(c)) {}  // NOLINT(google-explicit-constructor)
  Laurent(const T& c) {              // NOLINT(google-explicit-constructor)
    if (!is_zero(c)) c_.push_back(c);
  }

  static Laurent monomial(const T& c, long e, long order = kExact) {
    Laurent r;
    r.lo_ = e;
    r.c_.push_back(c);
    r.order_ = order;
    r.normalize();
    return r;
  }
  static Laurent from_coeffs(long lo, std::vector<T> coeffs, long order = kExact) {
    Laurent r;
    r.lo_ = lo;
    r.c_ = std::move(coeffs);
    r.order_ = order;
    r.normalize();
    return r;
  }
  /// The zero series with error term O(z^{order+1}).
  static Laurent big_o(long order) {
    Laurent r;
    r.order_ = order;
    r.lo_ = order + 1;
    return r;
  }

  long lo() const { return lo_; }
  long order() const { return order_; }
  bool exact() const { return order_ >= kExact; }
  /// Highest stored exponent (lo - 1 when nothing is stored).
  long hi() const { return lo_ + static_cast<long>(c_.size()) - 1; }
  bool empty() const { return c_.empty(); }

  /// Lowest exponent with a nonzero coefficient; order + 1 if none is known.
  long valuation() const { return c_.empty() ? (exact() ? kExact : order_ + 1) : lo_; }

  const T& coeff(long e) const {
    static const T zero{};
    if (e > order_) throw std::out_of_range("coefficient z^" + std::to_string(e) + " beyond known order " + std::to_string(order_));
    if (e < lo_ || e > hi()) return zero;
    return c_[static_cast<std::size_t>(e - lo_)];
  }
  const T& operator[](long e) const { return coeff(e); }

  Laurent truncated(long order) const {
    if (order >= order_) return *this;
    Laurent r = *this;
    r.order_ = order;
    r.normalize();
    return r;
  }

  Laurent& operator+=(const Laurent& o) { return *this = combine(*this, o, 1); }
  Laurent& operator-=(const Laurent& o) { return *this = combine(*this, o, -1); }
  friend Laurent operator+(const Laurent& a, const Laurent& b) { return combine(a, b, 1); }
  friend Laurent operator-(const Laurent& a, const Laurent& b) { return combine(a, b, -1); }
  friend Laurent operator-(Laurent a) {
    for (auto& x : a.c_) x = -x;
    return a;
  }
  Laurent& operator*=(const Scalar& s) {
    for (auto& x : c_) x = x * s;
    normalize();
    return *this;
  }
  Laurent& operator/=(const Scalar& s) { return *this *= Scalar(1 / s); }
  friend Laurent operator*(Laurent a, const Scalar& s) { return a *= s; }
  friend Laurent operator*(const Scalar& s, Laurent a) { return a *= s; }
  friend Laurent operator/(Laurent a, const Scalar& s) { return a /= s; }

  /// Multiplication by z^k.
  Laurent shifted(long k) const {
    Laurent r = *this;
    r.lo_ += k;
    r.order_ = add_order(r.order_, k);
    return r;
  }

  Laurent derivative() const {
    Laurent r;
    r.lo_ = lo_ - 1;
    r.order_ = exact() ? kExact : order_ - 1;
    r.c_.reserve(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_.push_back(c_[i] * Scalar(lo_ + static_cast<long>(i)));
    r.normalize();
    return r;
  }

  /// Coefficient of z^{-1}.
  const T& residue() const { return coeff(-1); }

  /// Equality of all coefficients known in both series.
  friend bool agree(const Laurent& a, const Laurent& b) {
    long top = std::min(a.order_, b.order_);
    long lo = std::min(a.lo_, b.lo_);
    long hi = std::min(top, std::max(a.hi(), b.hi()));
    for (long e = lo; e <= hi; ++e)
      if (!(a.coeff(e) == b.coeff(e))) return false;
    return true;
  }
  friend bool operator==(const Laurent& a, const Laurent& b) {
    return a.order_ == b.order_ && a.lo_ == b.lo_ && a.c_ == b.c_;
  }

  template <class A, class B, class Op>
  friend auto mul_with(const Laurent<A>& a, const Laurent<B>& b, Op op) -> Laurent<decltype(op(std::declval<A>(), std::declval<B>()))>;

 private:
  static Laurent combine(const Laurent& a, const Laurent& b, int sign) {
    Laurent r;
    r.order_ = std::min(a.order_, b.order_);
    if (a.c_.empty() && b.c_.empty()) {
      r.lo_ = std::min(a.lo_, b.lo_);
      r.normalize();
      return r;
    }
    long lo = std::min(a.c_.empty() ? b.lo_ : a.lo_, b.c_.empty() ? a.lo_ : b.lo_);
    long hi = std::min(r.order_, std::max(a.hi(), b.hi()));
    r.lo_ = lo;
    for (long e = lo; e <= hi; ++e) {
      T x = a.get(e);
      if (sign > 0)
        x = x + b.get(e);
      else
        x = x - b.get(e);
      r.c_.push_back(std::move(x));
    }
    r.normalize();
    return r;
  }

  T get(long e) const {
    if (e < lo_ || e > hi()) return T{};
    return c_[static_cast<std::size_t>(e - lo_)];
  }

  void normalize() {
    if (!exact() && hi() > order_) c_.resize(static_cast<std::size_t>(std::max(0L, order_ - lo_ + 1)));
    std::size_t first = 0;
    while (first < c_.size() && is_zero(c_[first])) ++first;
    if (first == c_.size()) {
      c_.clear();
      lo_ = exact() ? 0 : order_ + 1;
      return;
    }
    if (first > 0) {
      c_.erase(c_.begin(), c_.begin() + static_cast<long>(first));
      lo_ += static_cast<long>(first);
    }
    while (!c_.empty() && is_zero(c_.back())) c_.pop_back();
  }

  long lo_ = 0;
  std::vector<T> c_;
  long order_ = kExact;
};

/// Product with an arbitrary bilinear coefficient operation. Precision follows
/// the usual rule: O(z^{p}) * z^{v} (1 + ...) is O(z^{p+v}).
template <class A, class B, class Op>
auto mul_with(const Laurent<A>& a, const Laurent<B>& b, Op op)
    -> Laurent<decltype(op(std::declval<A>(), std::declval<B>()))> {
  using C = decltype(op(std::declval<A>(), std::declval<B>()));
  long va = a.valuation(), vb = b.valuation();
  long order = std::min(add_order(a.order_, vb >= kExact ? kExact : vb), add_order(b.order_, va >= kExact ? kExact : va));
  if (a.c_.empty() || b.c_.empty()) {
    if (order >= kExact) return Laurent<C>();
    return Laurent<C>::big_o(order);
  }
  long lo = a.lo_ + b.lo_;
  long hi = a.hi() + b.hi();
  if (order < kExact) hi = std::min(hi, order);
  if (hi < lo) return Laurent<C>::big_o(order);
  std::vector<C> out(static_cast<std::size_t>(hi - lo + 1), C{});
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (is_zero(a.c_[i])) continue;
    long ei = a.lo_ + static_cast<long>(i);
    for (std::size_t j = 0; j < b.c_.size(); ++j) {
      long e = ei + b.lo_ + static_cast<long>(j);
      if (e > hi) break;
      out[static_cast<std::size_t>(e - lo)] = out[static_cast<std::size_t>(e - lo)] + op(a.c_[i], b.c_[j]);
    }
  }
  return Laurent<C>::from_coeffs(lo, std::move(out), order);
}

template <class T>
Laurent<T> operator*(const Laurent<T>& a, const Laurent<T>& b) {
  return mul_with(a, b, [](const T& x, const T& y) { return T(x * y); });
}

template <class T>
Laurent<T>& operator*=(Laurent<T>& a, const Laurent<T>& b) {
  return a = a * b;
}

template <class T>
bool is_zero(const Laurent<T>& f) {
  return f.empty();
}

/// Multiplicative inverse. Exact monomials invert exactly; otherwise the
/// relative precision is preserved. Exact non-monomials must be truncated first.
inline Laurent<Scalar> inverse(const Laurent<Scalar>& f) {
  if (f.empty()) throw std::domain_error("inverse of a series with no known nonzero coefficient");
  long v = f.lo();
  if (f.exact()) {
    if (f.hi() == v) return Laurent<Scalar>::monomial(Scalar(1 / f.coeff(v)), -v);
    throw std::domain_error("inverse of an exact non-monomial needs a truncation order");
  }
  long rel = f.order() - v;  // known relative terms u_0..u_rel
  std::vector<Scalar> u(static_cast<std::size_t>(rel + 1));
  for (long i = 0; i <= rel; ++i) u[static_cast<std::size_t>(i)] = f.coeff(v + i);
  std::vector<Scalar> w(u.size());
  Scalar inv0 = 1 / u[0];
  w[0] = inv0;
  for (std::size_t n = 1; n < u.size(); ++n) {
    Scalar s = 0;
    for (std::size_t k = 1; k <= n; ++k) s += u[k] * w[n - k];
    w[n] = -s * inv0;
  }
  return Laurent<Scalar>::from_coeffs(-v, std::move(w), -v + rel);
}

template <class T>
Laurent<T> pow(const Laurent<T>& f, long e);

template <>
inline Laurent<Scalar> pow(const Laurent<Scalar>& f, long e) {
  if (e < 0) return pow(inverse(f), -e);
  Laurent<Scalar> r(1), b = f;
  while (e > 0) {
    if (e & 1) r = r * b;
    e >>= 1;
    if (e > 0) b = b * b;
  }
  return r;
}

/// Laurent<Scalar> from the monomial variable itself: z.
inline Laurent<Scalar> variable(long order = kExact) { return Laurent<Scalar>::monomial(Scalar(1), 1, order); }

}  // namespace sewkit
