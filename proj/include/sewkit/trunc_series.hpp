#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sewkit/laurent.hpp"
#include "sewkit/linalg.hpp"
#include "sewkit/rational.hpp"

namespace sewkit {

class SeriesError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exponent key (n_., l_.) of the monomial q_.^{offset_.+n_.} (log q_.)^{l_.}.
struct MonoKey {
  std::vector<long> n;
  std::vector<long> l;
  friend auto operator<=>(const MonoKey&, const MonoKey&) = default;
  friend bool operator==(const MonoKey&, const MonoKey&) = default;
};

/// Shape data of a multivariable truncated series.
struct SeriesShape {
  std::vector<std::string> vars;
  std::vector<Scalar> offset;
  std::vector<long> trunc;
  std::vector<long> logmax;

  std::size_t size() const { return vars.size(); }

  static SeriesShape simple(std::vector<std::string> vars, std::vector<long> trunc) {
    SeriesShape s;
    s.offset.assign(vars.size(), Scalar(0));
    s.logmax.assign(vars.size(), 0);
    s.vars = std::move(vars);
    s.trunc = std::move(trunc);
    return s;
  }

  void validate() const {
    if (offset.size() != vars.size() || trunc.size() != vars.size() || logmax.size() != vars.size())
      throw SeriesError("series shape: per-variable data does not match the variable list");
    for (std::size_t j = 0; j < vars.size(); ++j) {
      if (trunc[j] < 0) throw SeriesError("series shape: negative truncation for " + vars[j]);
      if (logmax[j] < 0) throw SeriesError("series shape: negative log bound for " + vars[j]);
    }
  }

  friend bool operator==(const SeriesShape&, const SeriesShape&) = default;
};

/// Multivariable truncated formal series with log terms and a rational offset
/// per variable. T is the coefficient type (Scalar, Vec<Scalar>, Matrix<Scalar>).
template <class T>
class TruncSeries {
 public:
  using Terms = std::map<MonoKey, T>;

  TruncSeries() = default;
  explicit TruncSeries(SeriesShape shape) : shape_(std::move(shape)) { shape_.validate(); }

  const SeriesShape& shape() const { return shape_; }
  const std::vector<std::string>& vars() const { return shape_.vars; }
  std::size_t nvars() const { return shape_.size(); }
  const Terms& terms() const { return terms_; }
  bool is_zero_series() const { return terms_.empty(); }

  /// Adds c to the coefficient at (n, l); out-of-range keys are an error.
  void add(const MonoKey& k, const T& c) {
    check_key(k);
    if (is_zero(c)) return;
    auto it = terms_.find(k);
    if (it == terms_.end()) {
      terms_.emplace(k, c);
      return;
    }
    it->second = it->second + c;
    if (is_zero(it->second)) terms_.erase(it);
  }
  /// Adds c at (n, l) if n lies inside the truncation, otherwise drops it.
  void add_truncating(const MonoKey& k, const T& c) {
    for (std::size_t j = 0; j < nvars(); ++j)
      if (k.n[j] > shape_.trunc[j]) return;
    add(k, c);
  }
  void add(const std::vector<long>& n, const T& c) { add(MonoKey{n, std::vector<long>(nvars(), 0)}, c); }

  T coeff(const MonoKey& k) const {
    auto it = terms_.find(k);
    return it == terms_.end() ? T{} : it->second;
  }
  T coeff(const std::vector<long>& n) const { return coeff(MonoKey{n, std::vector<long>(nvars(), 0)}); }

  /// Returns a copy with every coefficient transformed by f (shape unchanged).
  template <class F>
  auto map(F f) const -> TruncSeries<decltype(f(std::declval<T>()))> {
    TruncSeries<decltype(f(std::declval<T>()))> r(shape_);
    for (const auto& [k, c] : terms_) r.add(k, f(c));
    return r;
  }

  /// Lowers the truncation order of variable j.
  TruncSeries truncated(std::size_t j, long trunc) const {
    TruncSeries r = *this;
    if (trunc >= shape_.trunc[j]) return r;
    r.shape_.trunc[j] = trunc;
    for (auto it = r.terms_.begin(); it != r.terms_.end();)
      it = it->first.n[j] > trunc ? r.terms_.erase(it) : std::next(it);
    return r;
  }

  /// Raises the declared log bound (never lowers it).
  TruncSeries with_logmax(std::vector<long> logmax) const {
    TruncSeries r = *this;
    for (std::size_t j = 0; j < nvars(); ++j) r.shape_.logmax[j] = std::max(r.shape_.logmax[j], logmax[j]);
    return r;
  }

  TruncSeries& operator*=(const Scalar& s) {
    if (is_zero(s)) {
      terms_.clear();
      return *this;
    }
    for (auto& [k, c] : terms_) c = c * s;
    return *this;
  }
  friend TruncSeries operator*(TruncSeries a, const Scalar& s) { return a *= s; }
  friend TruncSeries operator*(const Scalar& s, TruncSeries a) { return a *= s; }
  friend TruncSeries operator-(TruncSeries a) {
    for (auto& [k, c] : a.terms_) c = -c;
    return a;
  }

  friend TruncSeries operator+(const TruncSeries& a, const TruncSeries& b) { return combine(a, b, 1); }
  friend TruncSeries operator-(const TruncSeries& a, const TruncSeries& b) { return combine(a, b, -1); }
  TruncSeries& operator+=(const TruncSeries& b) { return *this = combine(*this, b, 1); }
  TruncSeries& operator-=(const TruncSeries& b) { return *this = combine(*this, b, -1); }

  /// q_j d/dq_j, log-aware: q^{lambda+n}(log q)^l -> (lambda+n) q^.. (log q)^l + l q^.. (log q)^{l-1}.
  TruncSeries q_d(std::size_t j) const {
    if (j >= nvars()) throw SeriesError("q_d: variable index out of range");
    TruncSeries r(shape_);
    for (const auto& [k, c] : terms_) {
      Scalar e = shape_.offset[j] + Scalar(k.n[j]);
      if (!sewkit::is_zero(e)) r.add(k, T(c * e));
      if (k.l[j] > 0) {
        MonoKey k2 = k;
        k2.l[j] -= 1;
        r.add(k2, T(c * Scalar(k.l[j])));
      }
    }
    return r;
  }

  friend bool operator==(const TruncSeries& a, const TruncSeries& b) { return a.shape_ == b.shape_ && a.terms_ == b.terms_; }

  void check_key(const MonoKey& k) const {
    if (k.n.size() != nvars() || k.l.size() != nvars()) throw SeriesError("series key has the wrong number of variables");
    for (std::size_t j = 0; j < nvars(); ++j) {
      if (k.n[j] < 0 || k.n[j] > shape_.trunc[j])
        throw SeriesError("exponent " + std::to_string(k.n[j]) + " of " + shape_.vars[j] + " outside 0.." + std::to_string(shape_.trunc[j]));
      if (k.l[j] < 0 || k.l[j] > shape_.logmax[j])
        throw SeriesError("log degree " + std::to_string(k.l[j]) + " of " + shape_.vars[j] + " exceeds declared bound " + std::to_string(shape_.logmax[j]));
    }
  }

 private:
  static TruncSeries combine(const TruncSeries& a, const TruncSeries& b, int sign) {
    if (a.vars() != b.vars()) throw SeriesError("series sum: variable lists differ");
    std::size_t m = a.nvars();
    SeriesShape s;
    s.vars = a.vars();
    std::vector<long> shift_a(m, 0), shift_b(m, 0);
    for (std::size_t j = 0; j < m; ++j) {
      Scalar d = a.shape_.offset[j] - b.shape_.offset[j];
      if (!is_integer(d)) throw SeriesError("series sum: offsets of " + s.vars[j] + " differ by a non-integer");
      long di = d.get_num().get_si();
      Scalar lo = di <= 0 ? a.shape_.offset[j] : b.shape_.offset[j];
      s.offset.push_back(lo);
      shift_a[j] = di > 0 ? di : 0;
      shift_b[j] = di < 0 ? -di : 0;
      s.trunc.push_back(std::min(a.shape_.trunc[j] + shift_a[j], b.shape_.trunc[j] + shift_b[j]));
      s.logmax.push_back(std::max(a.shape_.logmax[j], b.shape_.logmax[j]));
    }
    TruncSeries r(s);
    auto put = [&](const TruncSeries& x, const std::vector<long>& shift, int sg) {
      for (const auto& [k, c] : x.terms_) {
        MonoKey k2 = k;
        for (std::size_t j = 0; j < m; ++j) k2.n[j] += shift[j];
        r.add_truncating(k2, sg > 0 ? c : T(-c));
      }
    };
    put(a, shift_a, 1);
    put(b, shift_b, sign);
    return r;
  }

  template <class U>
  friend class TruncSeries;

  SeriesShape shape_;
  Terms terms_;
};

/// Product with coefficient operation op. Offsets add, truncation is the
/// minimum, and the log bound is the larger of the two; a product term whose
/// log degree exceeds it is an error (raise the bound with with_logmax first).
template <class A, class B, class Op>
auto mul_with(const TruncSeries<A>& a, const TruncSeries<B>& b, Op op) -> TruncSeries<decltype(op(std::declval<A>(), std::declval<B>()))> {
  using C = decltype(op(std::declval<A>(), std::declval<B>()));
  if (a.vars() != b.vars()) throw SeriesError("series product: variable lists differ");
  std::size_t m = a.nvars();
  SeriesShape s;
  s.vars = a.vars();
  for (std::size_t j = 0; j < m; ++j) {
    s.offset.push_back(a.shape().offset[j] + b.shape().offset[j]);
    s.trunc.push_back(std::min(a.shape().trunc[j], b.shape().trunc[j]));
    s.logmax.push_back(std::max(a.shape().logmax[j], b.shape().logmax[j]));
  }
  TruncSeries<C> r(s);
  for (const auto& [ka, ca] : a.terms()) {
    for (const auto& [kb, cb] : b.terms()) {
      MonoKey k{ka.n, ka.l};
      bool inside = true;
      for (std::size_t j = 0; j < m; ++j) {
        k.n[j] += kb.n[j];
        k.l[j] += kb.l[j];
        if (k.n[j] > s.trunc[j]) inside = false;
      }
      if (!inside) continue;
      for (std::size_t j = 0; j < m; ++j)
        if (k.l[j] > s.logmax[j])
          throw SeriesError("series product: log degree " + std::to_string(k.l[j]) + " of " + s.vars[j] + " exceeds declared bound " +
                            std::to_string(s.logmax[j]));
      r.add(k, op(ca, cb));
    }
  }
  return r;
}

inline TruncSeries<Scalar> operator*(const TruncSeries<Scalar>& a, const TruncSeries<Scalar>& b) {
  return mul_with(a, b, [](const Scalar& x, const Scalar& y) { return Scalar(x * y); });
}

/// Single-variable series with given coefficients c_0..c_K (no offset, no logs).
inline TruncSeries<Scalar> series_1d(const std::string& var, const std::vector<Scalar>& c, long trunc) {
  TruncSeries<Scalar> s(SeriesShape::simple({var}, {trunc}));
  for (std::size_t n = 0; n < c.size() && static_cast<long>(n) <= trunc; ++n) s.add(std::vector<long>{static_cast<long>(n)}, c[n]);
  return s;
}

/// sum_n D_{n,n} q^n for a bivariate series D(xi, varpi) without offsets or logs.
template <class T>
TruncSeries<T> diagonal_contract(const TruncSeries<T>& D, const std::string& qvar = "q") {
  if (D.nvars() != 2) throw SeriesError("diagonal_contract: expected a bivariate series");
  for (std::size_t j = 0; j < 2; ++j) {
    if (!is_zero(D.shape().offset[j])) throw SeriesError("diagonal_contract: offsets are not supported");
    if (D.shape().logmax[j] != 0) throw SeriesError("diagonal_contract: log terms are not supported");
  }
  long K = std::min(D.shape().trunc[0], D.shape().trunc[1]);
  TruncSeries<T> r(SeriesShape::simple({qvar}, {K}));
  for (const auto& [k, c] : D.terms())
    if (k.n[0] == k.n[1] && k.n[0] <= K) r.add(std::vector<long>{k.n[0]}, c);
  return r;
}

/// The same contraction computed as Res_{xi=0} D(xi, q/xi) dxi/xi, via an
/// explicit Laurent expansion in xi for every power of q.
inline TruncSeries<Scalar> diagonal_by_residue(const TruncSeries<Scalar>& D, const std::string& qvar = "q") {
  if (D.nvars() != 2) throw SeriesError("diagonal_by_residue: expected a bivariate series");
  long K = std::min(D.shape().trunc[0], D.shape().trunc[1]);
  std::map<long, Laurent<Scalar>> by_q;  // q^n -> Laurent polynomial in xi
  for (const auto& [k, c] : D.terms()) {
    long m = k.n[0], n = k.n[1];
    if (n > K) continue;
    // xi^m (q/xi)^n = q^n xi^{m-n}
    by_q[n] = by_q[n] + Laurent<Scalar>::monomial(c, m - n);
  }
  TruncSeries<Scalar> r(SeriesShape::simple({qvar}, {K}));
  for (const auto& [n, f] : by_q) {
    Laurent<Scalar> g = f.shifted(-1);  // dxi/xi
    r.add(std::vector<long>{n}, g.residue());
  }
  return r;
}

}  // namespace sewkit
