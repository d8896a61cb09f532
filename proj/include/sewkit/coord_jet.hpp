#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "sewkit/laurent.hpp"
#include "sewkit/rational.hpp"

namespace sewkit {

inline Scalar inverse(const Scalar& x) {
  if (is_zero(x)) throw std::domain_error("inverse of zero");
  return 1 / x;
}

class NotInGroup : public std::domain_error {
 public:
  NotInGroup() : std::domain_error("jet is not invertible: linear coefficient a1 = 0") {}
};

/// Jet a_1 z + ... + a_K z^K + O(z^{K+1}) of a coordinate change fixing 0.
/// R is the coefficient ring: Scalar, or Laurent<Scalar> for families.
template <class R>
class CoordJet {
 public:
  CoordJet() = default;
  /// coeffs[0] is a_1.
  explicit CoordJet(std::vector<R> coeffs) : a_(std::move(coeffs)) {}

  static CoordJet identity(long order) {
    std::vector<R> a(static_cast<std::size_t>(order), R(0));
    if (order > 0) a[0] = R(1);
    return CoordJet(std::move(a));
  }

  long order() const { return static_cast<long>(a_.size()); }
  /// a_n for 1 <= n <= order.
  const R& a(long n) const {
    if (n < 1 || n > order()) throw std::out_of_range("jet coefficient a_" + std::to_string(n) + " outside 1.." + std::to_string(order()));
    return a_[static_cast<std::size_t>(n - 1)];
  }
  const std::vector<R>& coeffs() const { return a_; }

  void require_group() const {
    if (a_.empty() || is_zero(a_[0])) throw NotInGroup();
  }

  CoordJet truncated(long order) const {
    if (order >= this->order()) return *this;
    return CoordJet(std::vector<R>(a_.begin(), a_.begin() + order));
  }

  friend bool operator==(const CoordJet& x, const CoordJet& y) { return x.a_ == y.a_; }

 private:
  std::vector<R> a_;
};

namespace detail {

// Truncated polynomials over R stored as coefficient vectors p[0..K].
template <class R>
std::vector<R> poly_mul(const std::vector<R>& p, const std::vector<R>& q, long K) {
  std::vector<R> r(static_cast<std::size_t>(K + 1), R(0));
  for (std::size_t i = 0; i < p.size() && static_cast<long>(i) <= K; ++i) {
    if (is_zero(p[i])) continue;
    for (std::size_t j = 0; j < q.size() && static_cast<long>(i + j) <= K; ++j) r[i + j] = r[i + j] + p[i] * q[j];
  }
  return r;
}

template <class R>
std::vector<R> as_poly(const CoordJet<R>& j) {
  std::vector<R> p(static_cast<std::size_t>(j.order() + 1), R(0));
  for (long n = 1; n <= j.order(); ++n) p[static_cast<std::size_t>(n)] = j.a(n);
  return p;
}

template <class R>
CoordJet<R> from_poly(const std::vector<R>& p, long K) {
  std::vector<R> a;
  for (long n = 1; n <= K; ++n) a.push_back(n < static_cast<long>(p.size()) ? p[static_cast<std::size_t>(n)] : R(0));
  return CoordJet<R>(std::move(a));
}

}  // namespace detail

/// outer(inner(z)) to order min(K_outer, K_inner).
template <class R>
CoordJet<R> compose(const CoordJet<R>& outer, const CoordJet<R>& inner) {
  long K = std::min(outer.order(), inner.order());
  auto g = detail::as_poly(inner);
  std::vector<R> result(static_cast<std::size_t>(K + 1), R(0));
  std::vector<R> power(static_cast<std::size_t>(K + 1), R(0));
  power[0] = R(1);
  for (long n = 1; n <= K; ++n) {
    power = detail::poly_mul(power, g, K);
    const R& c = outer.a(n);
    if (is_zero(c)) continue;
    for (long e = 0; e <= K; ++e) result[static_cast<std::size_t>(e)] = result[static_cast<std::size_t>(e)] + c * power[static_cast<std::size_t>(e)];
  }
  return detail::from_poly(result, K);
}

/// Compositional inverse, solved one coefficient at a time.
template <class R>
CoordJet<R> reverse(const CoordJet<R>& rho) {
  rho.require_group();
  long K = rho.order();
  R inv1 = inverse(rho.a(1));
  std::vector<R> s(static_cast<std::size_t>(K), R(0));
  s[0] = inv1;
  for (long n = 2; n <= K; ++n) {
    CoordJet<R> partial(std::vector<R>(s.begin(), s.begin() + n));
    CoordJet<R> comp = compose(rho.truncated(n), partial);
    s[static_cast<std::size_t>(n - 1)] = R(0) - comp.a(n) * inv1;
  }
  return CoordJet<R>(std::move(s));
}

/// Transition jet varrho(eta|mu) = eta o mu^{-1} at a single point.
template <class R>
CoordJet<R> varrho(const CoordJet<R>& eta, const CoordJet<R>& mu) {
  eta.require_group();
  return compose(eta, reverse(mu));
}

/// Jet of 1/(xi+z) - 1/xi.
template <class R>
CoordJet<R> gamma_xi(const R& xi, long order) {
  if (is_zero(xi)) throw std::domain_error("gamma_xi requires xi != 0");
  R inv = inverse(xi);
  std::vector<R> a;
  R p = inv * inv;  // xi^{-2}
  for (long n = 1; n <= order; ++n) {
    a.push_back(n % 2 ? R(R(0) - p) : p);
    p = p * inv;
  }
  return CoordJet<R>(std::move(a));
}

/// Exponential coefficients: rho(z) = c0 * exp(sum_{n>0} c_n z^{n+1} d/dz) z.
template <class R>
struct ExpCoeffs {
  R c0;
  std::vector<R> c;  // c[n] for n = 1..; c[0] is unused and zero
  long order = 0;    // the jet order these were extracted from

  const R& cn(long n) const {
    if (n < 1 || n >= static_cast<long>(c.size()))
      throw std::out_of_range("exponential coefficient c_" + std::to_string(n) + " not available (jet order " + std::to_string(order) + ")");
    return c[static_cast<std::size_t>(n)];
  }
  long max_n() const { return static_cast<long>(c.size()) - 1; }
};

/// exp(D) z truncated at z^K where D = sum c_n z^{n+1} d/dz; returns poly p[0..K].
template <class R>
std::vector<R> exp_vector_field_on_z(const std::vector<R>& c, long K) {
  auto apply_D = [&](const std::vector<R>& f) {
    std::vector<R> out(static_cast<std::size_t>(K + 1), R(0));
    for (long e = 1; e <= K; ++e) {
      const R& fe = f[static_cast<std::size_t>(e)];
      if (is_zero(fe)) continue;
      // z^{n+1} d/dz z^e = e z^{e+n}
      for (long n = 1; n < static_cast<long>(c.size()) && e + n <= K; ++n) {
        if (is_zero(c[static_cast<std::size_t>(n)])) continue;
        out[static_cast<std::size_t>(e + n)] = out[static_cast<std::size_t>(e + n)] + c[static_cast<std::size_t>(n)] * fe * Scalar(e);
      }
    }
    return out;
  };
  std::vector<R> term(static_cast<std::size_t>(K + 1), R(0));
  if (K >= 1) term[1] = R(1);
  std::vector<R> sum = term;
  for (long k = 1; k < K; ++k) {
    term = apply_D(term);
    for (auto& x : term) x = x * Scalar(Scalar(1) / Scalar(k));
    for (long e = 0; e <= K; ++e) sum[static_cast<std::size_t>(e)] = sum[static_cast<std::size_t>(e)] + term[static_cast<std::size_t>(e)];
  }
  return sum;
}

/// c0 * exp(sum c_n z^{n+1} d/dz) z as a jet of the given order.
template <class R>
CoordJet<R> expand_exp_coeffs(const ExpCoeffs<R>& e, long K) {
  auto p = exp_vector_field_on_z(e.c, K);
  for (auto& x : p) x = e.c0 * x;
  return detail::from_poly(p, K);
}

/// Triangular solve for c_0..c_{K-1}; each degree fixes one new c_n.
template <class R>
ExpCoeffs<R> extract_c(const CoordJet<R>& rho) {
  rho.require_group();
  long K = rho.order();
  ExpCoeffs<R> out;
  out.order = K;
  out.c0 = rho.a(1);
  R inv0 = inverse(out.c0);
  out.c.assign(static_cast<std::size_t>(K), R(0));
  for (long n = 1; n < K; ++n) {
    // coefficient of z^{n+1} is c_n + (terms in c_1..c_{n-1})
    auto p = exp_vector_field_on_z(out.c, n + 1);
    out.c[static_cast<std::size_t>(n)] = rho.a(n + 1) * inv0 - p[static_cast<std::size_t>(n + 1)];
  }
  return out;
}

/// c_2 from derivatives at 0: (1/6) rho'''/rho' - (1/4) (rho''/rho')^2.
inline Scalar c2_formula(const CoordJet<Scalar>& rho) {
  rho.require_group();
  if (rho.order() < 3) throw std::invalid_argument("c2_formula needs jet order >= 3");
  Scalar d1 = rho.a(1), d2 = 2 * rho.a(2), d3 = 6 * rho.a(3);
  Scalar r2 = d2 / d1;
  return d3 / d1 / 6 - r2 * r2 / 4;
}

/// Jet from an exact Laurent<Scalar> power series with zero constant term.
inline CoordJet<Scalar> jet_from_series(const Laurent<Scalar>& f, long order) {
  if (f.lo() < 0 && !f.empty()) throw std::invalid_argument("series has a pole; not a coordinate jet");
  if (!is_zero(f.coeff(0))) throw std::invalid_argument("coordinate jet must vanish at 0");
  std::vector<Scalar> a;
  for (long n = 1; n <= order; ++n) a.push_back(f.coeff(n));
  return CoordJet<Scalar>(std::move(a));
}

inline Laurent<Scalar> series_from_jet(const CoordJet<Scalar>& j) {
  std::vector<Scalar> c(j.coeffs());
  return Laurent<Scalar>::from_coeffs(1, std::move(c), j.order());
}

/// Substitution outer(inner(z)); negative powers of inner go through the series
/// inverse, so all emitted coefficients are exact up to the tracked order.
template <class T>
Laurent<T> compose(const Laurent<T>& outer, const CoordJet<Scalar>& inner) {
  inner.require_group();
  Laurent<Scalar> g = series_from_jet(inner);
  Laurent<T> result = outer.exact() ? Laurent<T>() : Laurent<T>::big_o(outer.order());
  if (outer.empty()) return result;
  long lo = outer.lo(), hi = outer.hi();
  Laurent<Scalar> p = pow(g, lo);
  for (long e = lo; e <= hi; ++e) {
    const T& c = outer.coeff(e);
    if (!is_zero(c)) result = result + mul_with(p, Laurent<T>(c), [](const Scalar& s, const T& t) { return T(t * s); });
    if (e < hi) p = p * g;
  }
  return result;
}

/// The jet of s -> rho(x+s) - rho(x) with coefficients in the x-series ring.
/// a_n(x) = sum_k binom(k, n) a_k x^{k-n}, known through x^{K-n}.
inline CoordJet<Laurent<Scalar>> transition_family(const CoordJet<Scalar>& rho, long s_order) {
  long K = rho.order();
  if (s_order > K) throw std::invalid_argument("transition_family: s-order exceeds jet order");
  std::vector<Laurent<Scalar>> a;
  for (long n = 1; n <= s_order; ++n) {
    std::vector<Scalar> c;
    for (long k = n; k <= K; ++k) c.push_back(binomial(k, n) * rho.a(k));
    a.push_back(Laurent<Scalar>::from_coeffs(0, std::move(c), K - n));
  }
  return CoordJet<Laurent<Scalar>>(std::move(a));
}

}  // namespace sewkit
