#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "sewkit/fock.hpp"
#include "sewkit/linalg.hpp"
#include "sewkit/module.hpp"
#include "sewkit/partitions.hpp"
#include "sewkit/trunc_series.hpp"
#include "sewkit/u_operator.hpp"

namespace sewkit {

class TruncationShortfall : public std::invalid_argument {
 public:
  TruncationShortfall(long required, const std::string& what)
      : std::invalid_argument(what + ": module truncation must cover weight " + std::to_string(required)), required_(required) {}
  long required() const { return required_; }

 private:
  long required_;
};

/// Smallest l with L0n^l = 0 on the truncation, minus one: the largest power
/// of log q that q^{L0} can produce.
inline long log_degree(const TruncModule& M) {
  Matrix<Scalar> n = M.l0_nilpotent(), p = Matrix<Scalar>::identity(M.dim());
  for (long l = 0;; ++l) {
    p = p * n;
    if (p.is_zero_matrix()) return l;
    if (static_cast<std::size_t>(l) > M.dim()) throw std::logic_error("L0 nilpotent part is not nilpotent");
  }
}

/// q^{L0} applied to the canonical element sum_a m(n,a) (x) m'(n,a), through
/// q^{lambda+order}. Entry (a, b) of a coefficient is the coefficient of
/// e_a (x) e'_b, so each coefficient is P(n) L0n^l / l!. With `normalized`
/// L~0 replaces L0: no offset and no logs.
inline TruncSeries<Matrix<Scalar>> q_L0_resolvent(const TruncModule& M, long order, std::optional<long> logmax = std::nullopt,
                                                  const std::string& var = "q", bool normalized = false) {
  if (order > M.N()) throw TruncationShortfall(order, "resolvent through q^" + std::to_string(order));
  long need = normalized ? 0 : log_degree(M);
  long L = logmax.value_or(need);
  if (need > L)
    throw SeriesError("resolvent: L0 nilpotent part needs log degree " + std::to_string(need) + ", declared bound is " + std::to_string(L));
  SeriesShape s = SeriesShape::simple({var}, {order});
  if (!normalized) {
    s.offset[0] = M.l0_offset();
    s.logmax[0] = L;
  }
  TruncSeries<Matrix<Scalar>> r(s);
  Matrix<Scalar> nil = M.l0_nilpotent();
  for (long n = 0; n <= order; ++n) {
    Matrix<Scalar> t = M.projection(n);
    for (long l = 0; l <= (normalized ? 0 : L); ++l) {
      r.add(MonoKey{{n}, {l}}, t);
      t = nil * t * Scalar(Scalar(1) / Scalar(l + 1));
    }
  }
  return r;
}

/// One sewn pair: the module M sits in one slot and M' in the next.
struct SewPair {
  std::shared_ptr<const TruncModule> module;
  std::string var = "q";
};

/// A multilinear functional given by its coefficient table on basis vectors.
/// A key lists the retained-slot indices, then (a_j, b_j) for every pair j,
/// a_j indexing the basis of M_j and b_j the dual basis of M_j'.
class SewingBlock {
 public:
  SewingBlock(std::vector<std::size_t> retained_dims, std::vector<SewPair> pairs)
      : retained_(std::move(retained_dims)), pairs_(std::move(pairs)) {
    for (const auto& p : pairs_)
      if (!p.module) throw std::invalid_argument("sewing block: missing module");
  }

  const std::vector<std::size_t>& retained_dims() const { return retained_; }
  const std::vector<SewPair>& pairs() const { return pairs_; }
  const std::map<std::vector<std::size_t>, Scalar>& table() const { return table_; }
  std::size_t arity() const { return retained_.size() + 2 * pairs_.size(); }

  void set(const std::vector<std::size_t>& key, const Scalar& value) {
    if (key.size() != arity()) throw std::invalid_argument("sewing block: key has " + std::to_string(key.size()) + " indices, arity is " + std::to_string(arity()));
    for (std::size_t i = 0; i < key.size(); ++i)
      if (key[i] >= slot_dim(i)) throw std::out_of_range("sewing block: index " + std::to_string(key[i]) + " out of range in slot " + std::to_string(i));
    if (is_zero(value))
      table_.erase(key);
    else
      table_[key] = value;
  }

  std::size_t slot_dim(std::size_t i) const {
    if (i < retained_.size()) return retained_[i];
    return pairs_[(i - retained_.size()) / 2].module->dim();
  }

  SewingBlock scaled(const Scalar& s) const {
    SewingBlock r = *this;
    for (auto& [k, v] : r.table_) v *= s;
    if (is_zero(s)) r.table_.clear();
    return r;
  }
  friend SewingBlock operator+(const SewingBlock& a, const SewingBlock& b) {
    if (a.retained_ != b.retained_ || a.pairs_.size() != b.pairs_.size()) throw std::invalid_argument("sewing block sum: shapes differ");
    SewingBlock r = a;
    for (const auto& [k, v] : b.table_) r.set(k, r.table_.count(k) ? Scalar(r.table_.at(k) + v) : v);
    return r;
  }

 private:
  std::vector<std::size_t> retained_;
  std::vector<SewPair> pairs_;
  std::map<std::vector<std::size_t>, Scalar> table_;
};

/// psi(m (x) m') = <m', m> on M (x) M'.
inline SewingBlock dual_pairing_block(std::shared_ptr<const TruncModule> M, const std::string& var = "q") {
  std::size_t d = M->dim();
  SewingBlock b({}, {SewPair{std::move(M), var}});
  for (std::size_t a = 0; a < d; ++a) b.set({a, a}, Scalar(1));
  return b;
}

/// S psi(w) = psi(w (x) q^{L0} canonical element), one variable per pair.
inline TruncSeries<Scalar> sew(const SewingBlock& psi, const std::vector<Vec<Scalar>>& w, long order, bool normalized = false) {
  const auto& pairs = psi.pairs();
  if (w.size() != psi.retained_dims().size()) throw std::invalid_argument("sew: expected " + std::to_string(psi.retained_dims().size()) + " retained inputs");
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i].size() != psi.retained_dims()[i]) throw std::invalid_argument("sew: input " + std::to_string(i) + " has the wrong dimension");
  std::size_t P = pairs.size(), r = w.size();
  SeriesShape s;
  // per pair: (a, b) -> list of (n, l, value)
  std::vector<std::map<std::pair<std::size_t, std::size_t>, std::vector<std::tuple<long, long, Scalar>>>> look(P);
  for (std::size_t j = 0; j < P; ++j) {
    auto R = q_L0_resolvent(*pairs[j].module, order, std::nullopt, pairs[j].var, normalized);
    s.vars.push_back(pairs[j].var);
    s.offset.push_back(R.shape().offset[0]);
    s.trunc.push_back(order);
    s.logmax.push_back(R.shape().logmax[0]);
    for (const auto& [k, m] : R.terms())
      for (std::size_t a = 0; a < m.rows(); ++a)
        for (std::size_t b = 0; b < m.cols(); ++b)
          if (!is_zero(m(a, b))) look[j][{a, b}].emplace_back(k.n[0], k.l[0], m(a, b));
  }
  TruncSeries<Scalar> out(s);
  MonoKey key{std::vector<long>(P, 0), std::vector<long>(P, 0)};
  for (const auto& [idx, val] : psi.table()) {
    Scalar c = val;
    for (std::size_t i = 0; i < r && !is_zero(c); ++i) c *= w[i][idx[i]];
    if (is_zero(c)) continue;
    auto rec = [&](auto&& self, std::size_t j, const Scalar& acc) -> void {
      if (j == P) {
        out.add(key, acc);
        return;
      }
      auto it = look[j].find({idx[r + 2 * j], idx[r + 2 * j + 1]});
      if (it == look[j].end()) return;
      for (const auto& [n, l, v] : it->second) {
        key.n[j] = n;
        key.l[j] = l;
        self(self, j + 1, Scalar(acc * v));
      }
    };
    rec(rec, 0, c);
  }
  return out;
}

/// Graded character of M through q^order via the dual-pairing block.
inline TruncSeries<Scalar> character(std::shared_ptr<const TruncModule> M, long order, bool normalized = false) {
  return sew(dual_pairing_block(std::move(M)), {}, order, normalized);
}

// ---------------------------------------------------------------------------
// Residue identity

namespace detail {

inline void require_bivariate_plain(const TruncSeries<Scalar>& f, long order) {
  if (f.nvars() != 2) throw SeriesError("residue identity: f must be a series in (xi, varpi)");
  for (std::size_t j = 0; j < 2; ++j) {
    if (!is_zero(f.shape().offset[j]) || f.shape().logmax[j] != 0) throw SeriesError("residue identity: f must have no offsets or logs");
    if (f.shape().trunc[j] < order)
      throw SeriesError("residue identity: f is truncated at " + f.vars()[j] + "^" + std::to_string(f.shape().trunc[j]) + ", need " + std::to_string(order));
  }
}

// Homogeneous parts of a VOA vector keyed by weight.
inline std::map<int, FockVector> weight_parts(const FockVector& u) {
  std::map<int, FockVector> out;
  for (const auto& [p, c] : u.entries()) out[weight(p)].add(p, c);
  return out;
}

}  // namespace detail

/// Both sides of the two-sided residue identity as matrix-valued q-series:
///   lhs = Res_xi Y_M(xi^{L0} u, xi) q^{L0}(canonical) f(xi, q/xi) dxi/xi
///   rhs = Res_varpi q^{L0}(canonical) Y_M'(varpi^{L0} U(gamma_1) u, varpi) f(q/varpi, varpi) dvarpi/varpi
/// For f = xi^i varpi^j and u of weight d the q^N coefficients are
///   lhs = Y(u)_{d+i-j-1} R_{N-j},   rhs = R_{N-i} B^T,
///   B = sum_k (-1)^d / k! Y'(L1^k u)_{d-k+j-i-1},
/// with R_n the resolvent coefficients.
struct ResidueSides {
  TruncSeries<Matrix<Scalar>> lhs, rhs;
};

inline ResidueSides residue_identity_sides(const FockVector& u, const TruncSeries<Scalar>& f, std::shared_ptr<const TruncModule> M, long order) {
  detail::require_bivariate_plain(f, order);
  auto R = q_L0_resolvent(*M, order);
  ContragredientTrunc D(M);
  FockModule V(0);
  ResidueSides out{TruncSeries<Matrix<Scalar>>(R.shape()), TruncSeries<Matrix<Scalar>>(R.shape())};
  std::map<std::pair<int, long>, Matrix<Scalar>> ymodes;
  std::map<std::tuple<int, long, long>, Matrix<Scalar>> dmodes;
  auto parts = detail::weight_parts(u);
  for (const auto& [d, ud] : parts) {
    std::vector<FockVector> l1pow{ud};
    while (!l1pow.back().empty()) l1pow.push_back(V.L(1, l1pow.back()));
    auto ymode = [&](long m) -> const Matrix<Scalar>& {
      auto it = ymodes.find({d, m});
      if (it == ymodes.end()) it = ymodes.emplace(std::make_pair(d, m), M->mode(ud, m)).first;
      return it->second;
    };
    auto bmat = [&](long e) -> const Matrix<Scalar>& {
      auto key = std::make_tuple(d, e, 0L);
      auto it = dmodes.find(key);
      if (it != dmodes.end()) return it->second;
      Matrix<Scalar> b(M->dim(), M->dim());
      for (std::size_t k = 0; k + 1 < l1pow.size(); ++k) {
        Scalar s = (d % 2 ? Scalar(-1) : Scalar(1)) / factorial(static_cast<long>(k));
        b += D.mode(l1pow[k], d - static_cast<long>(k) + e) * s;
      }
      return dmodes.emplace(key, b.transpose()).first->second;
    };
    for (const auto& [fk, fc] : f.terms()) {
      long i = fk.n[0], j = fk.n[1];
      for (const auto& [rk, rm] : R.terms()) {
        long n = rk.n[0];
        if (n + j <= order) out.lhs.add(MonoKey{{n + j}, rk.l}, ymode(d + i - j - 1) * rm * fc);
        if (n + i <= order) out.rhs.add(MonoKey{{n + i}, rk.l}, rm * bmat(j - i - 1) * fc);
      }
    }
  }
  return out;
}

/// The double series D(xi, varpi) = Y(xi^{L~0} u, xi) (xi varpi)^{L~0}(canonical) f(xi, varpi)
/// and its counterpart E built from the M' side. Both are power series in
/// (xi, varpi); the residue identity says their diagonals agree.
struct ResidueDoubleSeries {
  TruncSeries<Matrix<Scalar>> D, E;
};

inline ResidueDoubleSeries residue_double_series(const FockVector& u, const TruncSeries<Scalar>& f, std::shared_ptr<const TruncModule> M,
                                                 long order) {
  detail::require_bivariate_plain(f, order);
  if (order > M->N()) throw TruncationShortfall(order, "residue double series through q^" + std::to_string(order));
  ContragredientTrunc Dual(M);
  FockModule V(0);
  SeriesShape s = SeriesShape::simple(f.vars(), {order, order});
  ResidueDoubleSeries out{TruncSeries<Matrix<Scalar>>(s), TruncSeries<Matrix<Scalar>>(s)};
  long N = order;
  for (const auto& [d, ud] : detail::weight_parts(u)) {
    std::vector<FockVector> l1pow{ud};
    while (!l1pow.back().empty()) l1pow.push_back(V.L(1, l1pow.back()));
    for (long n = 0; n <= N; ++n) {
      Matrix<Scalar> Pn = M->projection(n);
      for (long p = 0; p <= N; ++p) {
        // M side: Y(u)_m P(n) lands in weight p = n + d - m - 1
        Matrix<Scalar> y = M->mode(ud, n + d - 1 - p) * Pn;
        // M' side: P(n) (Y'(L1^k u)_{m'})^T with m' landing in weight p
        Matrix<Scalar> e(M->dim(), M->dim());
        for (std::size_t k = 0; k + 1 < l1pow.size(); ++k) {
          Scalar sc = (d % 2 ? Scalar(-1) : Scalar(1)) / factorial(static_cast<long>(k));
          e += Pn * Dual.mode(l1pow[k], n + d - static_cast<long>(k) - 1 - p).transpose() * sc;
        }
        for (const auto& [fk, fc] : f.terms()) {
          long i = fk.n[0], j = fk.n[1];
          out.D.add_truncating(MonoKey{{p + i, n + j}, {0, 0}}, y * fc);
          out.E.add_truncating(MonoKey{{n + i, p + j}, {0, 0}}, e * fc);
        }
      }
    }
  }
  return out;
}

struct ResidueReport {
  bool ok = false;
  bool direct_ok = false;    // the two residues agree coefficientwise
  bool diagonal_ok = false;  // diagonal contractions of D and E agree with each other and with the residues
  bool double_ok = false;    // D = E as double series
  long verified_order = -1;  // highest q-order through which the residues agree
  long first_failure = -1;
};

inline ResidueReport residue_identity_check(const FockVector& u, const TruncSeries<Scalar>& f, std::shared_ptr<const TruncModule> M, long order) {
  ResidueReport rep;
  auto sides = residue_identity_sides(u, f, M, order);
  rep.verified_order = order;
  for (long N = 0; N <= order; ++N) {
    bool same = true;
    for (long l = 0; l <= sides.lhs.shape().logmax[0]; ++l) {
      MonoKey k{{N}, {l}};
      Matrix<Scalar> a = sides.lhs.coeff(k), b = sides.rhs.coeff(k);
      bool za = a.rows() == 0 || a.is_zero_matrix(), zb = b.rows() == 0 || b.is_zero_matrix();
      if (za && zb) continue;
      if (za != zb || !(a == b)) same = false;
    }
    if (!same) {
      rep.first_failure = N;
      rep.verified_order = N - 1;
      break;
    }
  }
  rep.direct_ok = rep.first_failure < 0;

  bool semisimple = M->l0_nilpotent().is_zero_matrix();
  if (semisimple) {
    auto ds = residue_double_series(u, f, M, order);
    auto dd = diagonal_contract(ds.D, sides.lhs.vars()[0]);
    auto de = diagonal_contract(ds.E, sides.lhs.vars()[0]);
    auto strip = [&](const TruncSeries<Matrix<Scalar>>& x) {
      TruncSeries<Matrix<Scalar>> r(dd.shape());
      for (const auto& [k, c] : x.terms()) r.add(MonoKey{k.n, {0}}, c);
      return r;
    };
    rep.diagonal_ok = dd == de && dd == strip(sides.lhs) && de == strip(sides.rhs);
    rep.double_ok = ds.D == ds.E;
  } else {
    rep.diagonal_ok = rep.double_ok = rep.direct_ok;
  }
  rep.ok = rep.direct_ok && rep.diagonal_ok;
  return rep;
}

// ---------------------------------------------------------------------------
// Genus-0 invariance on the 2-point sphere {0, infinity} with coordinates z and 1/z

struct InvarianceReport {
  bool ok = false;
  long weight_bound = 0;
  Matrix<Scalar> residual;  // psi(v.m (x) m') + psi(m (x) v.m') as a matrix in (m, m')
};

/// Action of the section v z^k dz at infinity on M', in the coordinate w = 1/z:
/// sum_j (-1)^{d+1} / j! Y'(L1^j v)_{2d-j-k-2}.
inline Matrix<Scalar> action_at_infinity(const ContragredientTrunc& Dual, const FockVector& v, long k) {
  FockModule V(0);
  Matrix<Scalar> x(Dual.dim(), Dual.dim());
  for (const auto& [d, vd] : detail::weight_parts(v)) {
    FockVector t = vd;
    for (long j = 0; !t.empty(); ++j) {
      Scalar s = ((d + 1) % 2 ? Scalar(-1) : Scalar(1)) / factorial(j);
      x += Dual.mode(t, 2 * d - j - k - 2) * s;
      t = V.L(1, t);
    }
  }
  return x;
}

/// Checks psi(Y(v)_k m (x) m') + psi(m (x) X m') = 0 for the 2-slot block with
/// pairing matrix T (psi(x (x) y) = x^T T y); T must pair equal weights only.
inline InvarianceReport genus0_invariance_check(std::shared_ptr<const TruncModule> M, const FockVector& v, long k,
                                                std::optional<Matrix<Scalar>> pairing = std::nullopt) {
  std::size_t n = M->dim();
  Matrix<Scalar> T = pairing.value_or(Matrix<Scalar>::identity(n));
  if (T.rows() != n || T.cols() != n) throw std::invalid_argument("invariance: pairing matrix has the wrong shape");
  auto w = M->weights();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (!is_zero(T(a, b)) && w[a] != w[b]) throw std::invalid_argument("invariance: pairing must be homogeneous in weight");
  Matrix<Scalar> Y(n, n);
  for (const auto& [d, vd] : detail::weight_parts(v)) Y += M->mode(vd, k);
  ContragredientTrunc Dual(M);
  Matrix<Scalar> X = action_at_infinity(Dual, v, k);
  InvarianceReport rep;
  rep.weight_bound = M->N();
  rep.residual = Y.transpose() * T + T * X;
  rep.ok = rep.residual.is_zero_matrix();
  return rep;
}

}  // namespace sewkit
