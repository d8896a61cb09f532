#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "sewkit/coord_jet.hpp"
#include "sewkit/fock.hpp"
#include "sewkit/laurent.hpp"
#include "sewkit/linalg.hpp"

namespace sewkit {

class InsufficientOrder : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

template <class R>
R ring_pow(const R& x, long e) {
  R r(1);
  for (long i = 0; i < e; ++i) r = r * x;
  return r;
}

/// U(rho) v = c0^{L~0} exp(sum_n c_n L_n) v on a sparse vector with
/// coefficients in R. The exponential is a finite sum since L_n lowers weight.
template <class R>
SparseVec<R> u_apply(const FockModule& M, const ExpCoeffs<R>& cs, const SparseVec<R>& v) {
  int W = v.max_weight();
  if (W < 0) return v;
  if (cs.max_n() < W)
    throw InsufficientOrder("U(rho) on weight " + std::to_string(W) + " needs c_1..c_" + std::to_string(W) + "; jet order " +
                            std::to_string(cs.order) + " gives only up to c_" + std::to_string(cs.max_n()));
  SparseVec<R> sum = v, term = v;
  for (int k = 1; k <= W; ++k) {
    SparseVec<R> next;
    for (long n = 1; n <= W; ++n) {
      const R& c = cs.cn(n);
      if (is_zero(c)) continue;
      next += M.L(n, term).scaled(c);
    }
    term = next.scaled(Scalar(Scalar(1) / Scalar(k)));
    if (term.empty()) break;
    sum += term;
  }
  SparseVec<R> out;
  std::map<int, R> powers;
  for (const auto& [p, c] : sum.entries()) {
    int w = weight(p);
    auto it = powers.find(w);
    if (it == powers.end()) it = powers.emplace(w, ring_pow(cs.c0, w)).first;
    out.add(p, R(c * it->second));
  }
  return out;
}

inline FockVector u_apply(const FockModule& M, const CoordJet<Scalar>& rho, const FockVector& v) {
  return u_apply(M, extract_c(rho), v);
}

/// Matrix of U(rho) on W^{<=N}. Needs c_1..c_N, i.e. jet order >= N+1.
inline Matrix<Scalar> u_operator(const CoordJet<Scalar>& rho, int N, const Scalar& lambda = 0) {
  if (rho.order() < N + 1)
    throw InsufficientOrder("u_operator on W^{<=" + std::to_string(N) + "} needs jet order >= " + std::to_string(N + 1) + " (got " +
                            std::to_string(rho.order()) + ")");
  FockModule M(lambda);
  ExpCoeffs<Scalar> cs = extract_c(rho);
  return BasisIndex(N).matrix([&](const FockVector& v) { return u_apply(M, cs, v); });
}

/// lambda^{L~0} as a diagonal matrix on W^{<=N}.
inline Matrix<Scalar> scaling_operator(const Scalar& lambda, int N) {
  BasisIndex B(N);
  Matrix<Scalar> m(B.dim(), B.dim());
  for (std::size_t i = 0; i < B.dim(); ++i) m(i, i) = pow(lambda, weight(B[i]));
  return m;
}

template <class R>
SparseVec<R> lift(const FockVector& v) {
  SparseVec<R> r;
  for (const auto& [p, c] : v.entries()) r.add(p, R(c));
  return r;
}

/// One exponent of a failed identity check.
struct Discrepancy {
  long exponent = 0;
  FockVector lhs, rhs;
};

struct HuangReport {
  bool ok = true;
  long lo = 0, hi = 0;
  std::vector<Discrepancy> mismatches;
};

class WindowError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {
inline int homogeneous_max_weight(const FockVector& v) { return std::max(0, v.max_weight()); }
}  // namespace detail

/// Both sides of U(a) Y(v,z) U(a)^{-1} w = Y(U(varrho(a|id)_z) v, a(z)) w as
/// Laurent coefficients z^lo..z^hi with module-vector values, compared exactly.
inline HuangReport huang_conjugation_check(const CoordJet<Scalar>& alpha, const FockVector& v, const FockVector& w, long lo, long hi,
                                           const Scalar& lambda = 0) {
  alpha.require_group();
  int wv = detail::homogeneous_max_weight(v), ww = detail::homogeneous_max_weight(w);
  if (hi < lo) throw WindowError("empty window");
  if (hi < -(wv + ww)) throw WindowError("window z^" + std::to_string(lo) + "..z^" + std::to_string(hi) + " lies below the lowest power z^" +
                                         std::to_string(-(wv + ww)) + " of Y(v,z)w");
  long need = hi + wv + ww + 2;
  if (alpha.order() < need)
    throw InsufficientOrder("jet order " + std::to_string(alpha.order()) + " too small for window up to z^" + std::to_string(hi) + "; need " +
                            std::to_string(need));
  FockModule M(lambda), V(0);
  ExpCoeffs<Scalar> ca = extract_c(alpha);
  ExpCoeffs<Scalar> cinv = extract_c(reverse(alpha));

  HuangReport rep;
  rep.lo = lo;
  rep.hi = hi;
  std::map<long, FockVector> lhs, rhs;

  FockVector x = u_apply(M, cinv, w);
  for (long e = lo; e <= hi; ++e) {
    long m = -e - 1;
    lhs[e] = u_apply(M, ca, M.vertex_mode(v, m, x));
  }

  // U(varrho(alpha|id)_z) v with coefficients in power series of z.
  CoordJet<Laurent<Scalar>> fam = transition_family(alpha, wv + 1);
  ExpCoeffs<Laurent<Scalar>> cf = extract_c(fam);
  SparseVec<Laurent<Scalar>> uv = u_apply(V, cf, lift<Laurent<Scalar>>(v));
  Laurent<Scalar> a = series_from_jet(alpha);
  std::map<long, Laurent<Scalar>> apow;
  for (const auto& [eb, r] : uv.entries()) {
    long mmax = weight(eb) + ww - 1;
    for (long m = -hi - 1; m <= mmax; ++m) {
      FockVector y = M.vertex_mode(FockVector::basis(eb), m, w);
      if (y.empty()) continue;
      auto it = apow.find(m);
      if (it == apow.end()) it = apow.emplace(m, pow(a, -m - 1)).first;
      Laurent<Scalar> t = r * it->second;
      if (t.order() < hi) throw InsufficientOrder("internal precision loss in Huang check");
      for (long e = lo; e <= hi; ++e) {
        const Scalar& c = t.coeff(e);
        if (!is_zero(c)) rhs[e] += y.scaled(c);
      }
    }
  }
  for (long e = lo; e <= hi; ++e) {
    if (!(lhs[e] == rhs[e])) {
      rep.ok = false;
      rep.mismatches.push_back({e, lhs[e], rhs[e]});
    }
  }
  return rep;
}

/// lambda^{L~0} Y(v,z) lambda^{-L~0} w = Y(lambda^{L0} v, lambda z) w, coefficientwise.
inline HuangReport scaling_check(const Scalar& lam, const FockVector& v, const FockVector& w, long lo, long hi, const Scalar& lambda = 0) {
  FockModule M(lambda);
  auto scale = [](const FockVector& x, const Scalar& s) {
    FockVector r;
    for (const auto& [p, c] : x.entries()) r.add(p, c * pow(s, weight(p)));
    return r;
  };
  HuangReport rep;
  rep.lo = lo;
  rep.hi = hi;
  FockVector x = scale(w, Scalar(1 / lam));
  FockVector lv = scale(v, lam);
  for (long e = lo; e <= hi; ++e) {
    long m = -e - 1;
    FockVector l = scale(M.vertex_mode(v, m, x), lam);
    // (lambda z)^{-m-1} = lambda^{e} z^{e}
    FockVector r = M.vertex_mode(lv, m, w).scaled(pow(lam, e));
    if (!(l == r)) {
      rep.ok = false;
      rep.mismatches.push_back({e, l, r});
    }
  }
  return rep;
}

}  // namespace sewkit
