#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sewkit/coord_jet.hpp"
#include "sewkit/fock.hpp"
#include "sewkit/laurent.hpp"
#include "sewkit/trunc_series.hpp"
#include "sewkit/u_operator.hpp"

namespace sewkit {

/// S f = f'''/f' - (3/2)(f''/f')^2, known through z^order. f may have poles and
/// may be exact; it is cut to z^{order+3} before dividing.
inline Laurent<Scalar> schwarzian(const Laurent<Scalar>& f, long order) {
  Laurent<Scalar> g = f.truncated(order + 3);
  Laurent<Scalar> d1 = g.derivative();
  if (d1.empty()) throw std::domain_error("schwarzian: f' has no invertible leading term in the window");
  Laurent<Scalar> d2 = d1.derivative(), d3 = d2.derivative();
  Laurent<Scalar> r = inverse(d1);
  Laurent<Scalar> t = d2 * r;
  Laurent<Scalar> s = d3 * r - t * t * Scalar(3, 2);
  if (s.order() < order)
    throw InsufficientOrder("schwarzian: input known through z^" + std::to_string(f.order()) + " gives S f only through z^" +
                            std::to_string(s.order()) + ", requested z^" + std::to_string(order));
  return s.truncated(order);
}

/// Schwarzian of a coordinate jet; a jet of order K determines S f through z^{K-3}.
inline Laurent<Scalar> schwarzian(const CoordJet<Scalar>& f, long order) {
  f.require_group();
  if (f.order() < order + 3)
    throw InsufficientOrder("schwarzian: jet order " + std::to_string(f.order()) + " determines S f only through z^" +
                            std::to_string(f.order() - 3));
  return schwarzian(series_from_jet(f), order);
}

inline Laurent<Scalar> schwarzian(const CoordJet<Scalar>& f) { return schwarzian(f, f.order() - 3); }

/// Both sides of S(f o g) = (g')^2 (S f) o g + S g.
struct ChainRuleReport {
  bool ok = false;
  Laurent<Scalar> lhs, rhs;
};

inline ChainRuleReport chain_rule_check(const CoordJet<Scalar>& f, const CoordJet<Scalar>& g) {
  if (f.order() != g.order()) throw std::invalid_argument("chain rule: jets must have equal order");
  long K = f.order() - 3;
  ChainRuleReport rep;
  rep.lhs = schwarzian(compose(f, g), K);
  Laurent<Scalar> dg = series_from_jet(g).derivative();
  rep.rhs = (dg * dg * compose(schwarzian(f, K), g) + schwarzian(g, K)).truncated(K);
  rep.ok = rep.lhs == rep.rhs;
  return rep;
}

/// S_mu(eta) (d mu)^2 pulled back to the base variable z of both jets, i.e.
/// S(eta o mu^{-1})(mu(z)) mu'(z)^2.
inline Laurent<Scalar> pulled_schwarzian(const CoordJet<Scalar>& eta, const CoordJet<Scalar>& mu) {
  if (eta.order() != mu.order()) throw std::invalid_argument("pulled_schwarzian: incompatible jet windows");
  long K = eta.order() - 3;
  Laurent<Scalar> s = schwarzian(varrho(eta, mu), K);
  Laurent<Scalar> dmu = series_from_jet(mu).derivative();
  return (compose(s, mu) * dmu * dmu).truncated(K);
}

struct CocycleReport {
  bool antisymmetric = false;  // S_mu eta dmu^2 = -S_eta mu deta^2
  bool three_term = false;     // S_mu f dmu^2 + S_f eta df^2 + S_eta mu deta^2 = 0
  Laurent<Scalar> mu_eta, eta_mu, mu_f, f_eta;
  bool ok() const { return antisymmetric && three_term; }
};

inline CocycleReport cocycle_check(const CoordJet<Scalar>& eta, const CoordJet<Scalar>& mu, const CoordJet<Scalar>& f) {
  if (eta.order() != mu.order() || mu.order() != f.order()) throw std::invalid_argument("cocycle check: incompatible jet windows");
  CocycleReport r;
  r.mu_eta = pulled_schwarzian(eta, mu);
  r.eta_mu = pulled_schwarzian(mu, eta);
  r.mu_f = pulled_schwarzian(f, mu);
  r.f_eta = pulled_schwarzian(eta, f);
  r.antisymmetric = is_zero(r.mu_eta + r.eta_mu);
  r.three_term = is_zero(r.mu_f + r.f_eta + r.eta_mu);
  return r;
}

/// U(varrho_x) omega = scale(x) omega + shift(x) 1 for the family s -> rho(x+s) - rho(x).
struct VirTransition {
  Laurent<Scalar> scale, shift;
};

/// scale = rho'(x)^2, shift = (c/12) S rho(x), both as series in x.
inline VirTransition vir_transition(const CoordJet<Scalar>& rho, const Scalar& c) {
  rho.require_group();
  Laurent<Scalar> d = series_from_jet(rho).derivative();
  return {(d * d).truncated(rho.order() - 1), schwarzian(rho) * Scalar(c / 12)};
}

/// The same pair read off from U(varrho_x) acting on omega in the Heisenberg
/// VOA (c = 1), with U computed over the ring of x-series.
inline VirTransition vir_transition_via_u(const CoordJet<Scalar>& rho) {
  if (rho.order() < 3) throw InsufficientOrder("vir_transition_via_u needs jet order >= 3");
  auto fam = transition_family(rho, 3);
  auto uv = u_apply(FockModule(0), extract_c(fam), lift<Laurent<Scalar>>(conformal_vector()));
  for (const auto& [p, c] : uv.entries())
    if (!(p == Partition{1, 1}) && !p.empty()) throw std::logic_error("U(varrho) omega left the span of omega and the vacuum at " + label(p));
  return {uv.coeff({1, 1}) * Scalar(2), uv.coeff({})};
}

/// A chart f with S f = Q through z^K, from h'' + Q h / 2 = 0 with h1(0) = 1,
/// h1'(0) = 0, h2(0) = 0, h2'(0) = 1 and f = h2 / h1. Q = q_0 + ... + q_K z^K.
inline CoordJet<Scalar> chart_from_quadratic(const std::vector<Scalar>& Q) {
  long K = static_cast<long>(Q.size()) - 1;
  long top = K + 3;
  auto solve = [&](Scalar h0, Scalar h1) {
    std::vector<Scalar> h(static_cast<std::size_t>(top + 1), Scalar(0));
    h[0] = h0;
    h[1] = h1;
    for (long n = 0; n + 2 <= top; ++n) {
      Scalar s = 0;
      for (long i = 0; i <= std::min(n, K); ++i) s += Q[static_cast<std::size_t>(i)] * h[static_cast<std::size_t>(n - i)];
      h[static_cast<std::size_t>(n + 2)] = -s / 2 / ((n + 2) * (n + 1));
    }
    return Laurent<Scalar>::from_coeffs(0, std::move(h), top);
  };
  Laurent<Scalar> f = solve(1, 0), g = solve(0, 1);
  return jet_from_series(g * inverse(f), top);
}

/// Data attached to one sewn pair: Schwarzian data in xi and varpi and the
/// vector-field coefficients a, b in the variables (xi, varpi, other q's).
struct ProjectivePair {
  Laurent<Scalar> s_xi, s_pi;
  TruncSeries<Scalar> a, b;
};

/// A marked point: Schwarzian datum in eta and h in (eta, q_1..q_M); h may have
/// a pole in eta, carried as a negative integer offset.
struct ProjectivePoint {
  Laurent<Scalar> s_eta;
  TruncSeries<Scalar> h;
};

struct ProjectiveTerm {
  std::vector<TruncSeries<Scalar>> A, B, C;
  TruncSeries<Scalar> total;  // (c/12)(sum A + sum B + sum C)
};

namespace detail {

inline const Scalar& datum_coeff(const Laurent<Scalar>& s, long j, const std::string& what) {
  if (!s.empty() && s.lo() < 0) throw std::invalid_argument(what + ": Schwarzian datum must be holomorphic");
  if (j > s.order()) throw InsufficientOrder(what + ": Schwarzian datum known through degree " + std::to_string(s.order()) + ", need " + std::to_string(j));
  return s.coeff(j);
}

inline void require_plain(const TruncSeries<Scalar>& x, const std::string& what) {
  for (std::size_t j = 0; j < x.nvars(); ++j) {
    if (!is_zero(x.shape().offset[j])) throw SeriesError(what + ": offsets are not allowed");
    if (x.shape().logmax[j] != 0) throw SeriesError(what + ": log terms are not allowed");
  }
}

inline void require_trunc(const TruncSeries<Scalar>& x, std::size_t j, long need, const std::string& what) {
  if (x.shape().trunc[j] < need)
    throw InsufficientOrder(what + ": truncation of " + x.vars()[j] + " is " + std::to_string(x.shape().trunc[j]) + ", need " + std::to_string(need));
}

}  // namespace detail

/// Projective term through q^order in every sewing variable. Per pair j the
/// coefficient law is A_n = sum_m a_{m,n} s^xi_{n-m-2} and B_n = sum_m b_{n,m} s^pi_{n-m-2};
/// C_i = Res_eta S_eta h_i d eta.
inline ProjectiveTerm projective_term(const std::vector<ProjectivePair>& pairs, const std::vector<ProjectivePoint>& points, const Scalar& c,
                                      long order, std::vector<std::string> qvars = {}) {
  std::size_t M = pairs.size();
  if (qvars.empty()) {
    if (M == 1)
      qvars = {"q"};
    else
      for (std::size_t j = 0; j < M; ++j) qvars.push_back("q" + std::to_string(j + 1));
  }
  if (qvars.size() != M) throw std::invalid_argument("projective term: one sewing variable per pair is required");
  SeriesShape out = SeriesShape::simple(qvars, std::vector<long>(M, order));
  ProjectiveTerm res;
  res.total = TruncSeries<Scalar>(out);

  for (std::size_t j = 0; j < M; ++j) {
    const auto& P = pairs[j];
    std::string tag = "pair " + std::to_string(j + 1);
    for (const auto* x : {&P.a, &P.b}) {
      if (x->nvars() != M + 1) throw SeriesError(tag + ": a and b must have variables (xi, varpi, other sewing variables)");
      detail::require_plain(*x, tag);
    }
    if (P.a.vars() != P.b.vars()) throw SeriesError(tag + ": a and b have different variable lists");
    TruncSeries<Scalar> sum = P.a + P.b, one(sum.shape());
    one.add(std::vector<long>(M + 1, 0), Scalar(1));
    if (!(sum == one)) throw std::invalid_argument(tag + ": a + b != 1");
    detail::require_trunc(P.a, 1, order, tag + " a");
    detail::require_trunc(P.a, 0, order - 2, tag + " a");
    detail::require_trunc(P.b, 0, order, tag + " b");
    detail::require_trunc(P.b, 1, order - 2, tag + " b");
    if (order >= 2) {
      detail::datum_coeff(P.s_xi, order - 2, tag + " S_xi");
      detail::datum_coeff(P.s_pi, order - 2, tag + " S_varpi");
    }
    for (std::size_t k = 2; k <= M; ++k) {
      detail::require_trunc(P.a, k, order, tag + " a");
      detail::require_trunc(P.b, k, order, tag + " b");
    }

    // variable k >= 2 of a_j is the k-th sewing variable other than q_j
    auto place = [&](long n, const std::vector<long>& e) {
      std::vector<long> idx(M, 0);
      idx[j] = n;
      std::size_t at = 2;
      for (std::size_t t = 0; t < M; ++t)
        if (t != j) idx[t] = e[at++];
      return idx;
    };
    TruncSeries<Scalar> A(out), B(out);
    for (const auto& [k, v] : P.a.terms()) {
      long m = k.n[0], n = k.n[1];
      if (n > order || n - m - 2 < 0) continue;
      auto idx = place(n, k.n);
      if (std::any_of(idx.begin(), idx.end(), [&](long x) { return x > order; })) continue;
      A.add(idx, Scalar(v * detail::datum_coeff(P.s_xi, n - m - 2, tag + " S_xi")));
    }
    for (const auto& [k, v] : P.b.terms()) {
      long m = k.n[0], n = k.n[1];
      if (m > order || m - n - 2 < 0) continue;
      auto idx = place(m, k.n);
      if (std::any_of(idx.begin(), idx.end(), [&](long x) { return x > order; })) continue;
      B.add(idx, Scalar(v * detail::datum_coeff(P.s_pi, m - n - 2, tag + " S_varpi")));
    }
    res.total += A + B;
    res.A.push_back(std::move(A));
    res.B.push_back(std::move(B));
  }

  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& pt = points[i];
    std::string tag = "marked point " + std::to_string(i + 1);
    const auto& sh = pt.h.shape();
    if (pt.h.nvars() != M + 1) throw SeriesError(tag + ": h must have variables (eta, sewing variables)");
    if (!is_integer(sh.offset[0])) throw SeriesError(tag + ": eta offset must be an integer");
    for (std::size_t k = 0; k <= M; ++k) {
      if (sh.logmax[k] != 0) throw SeriesError(tag + ": log terms are not allowed");
      if (k > 0 && !is_zero(sh.offset[k])) throw SeriesError(tag + ": sewing-variable offsets are not allowed");
      if (k > 0) detail::require_trunc(pt.h, k, order, tag + " h");
    }
    long o = sh.offset[0].get_num().get_si();
    if (o + sh.trunc[0] < -1) throw InsufficientOrder(tag + ": h is truncated inside its principal part");
    if (o < 0) detail::datum_coeff(pt.s_eta, -1 - o, tag + " S_eta");
    TruncSeries<Scalar> C(out);
    for (const auto& [k, v] : pt.h.terms()) {
      long e = o + k.n[0];
      if (e > -1) continue;
      std::vector<long> idx(k.n.begin() + 1, k.n.end());
      if (std::any_of(idx.begin(), idx.end(), [&](long x) { return x > order; })) continue;
      C.add(idx, Scalar(v * detail::datum_coeff(pt.s_eta, -1 - e, tag + " S_eta")));
    }
    res.total += C;
    res.C.push_back(std::move(C));
  }
  res.total *= Scalar(c / 12);
  return res;
}

/// Single-pair form with output variable q.
inline ProjectiveTerm projective_term(const Laurent<Scalar>& s_xi, const Laurent<Scalar>& s_pi, const std::vector<Laurent<Scalar>>& s_eta,
                                      const TruncSeries<Scalar>& a, const TruncSeries<Scalar>& b, const std::vector<TruncSeries<Scalar>>& h,
                                      const Scalar& c, long order) {
  if (s_eta.size() != h.size()) throw std::invalid_argument("projective term: one h per marked point");
  std::vector<ProjectivePoint> pts;
  for (std::size_t i = 0; i < h.size(); ++i) pts.push_back({s_eta[i], h[i]});
  return projective_term({ProjectivePair{s_xi, s_pi, a, b}}, pts, c, order, {"q"});
}

}  // namespace sewkit
