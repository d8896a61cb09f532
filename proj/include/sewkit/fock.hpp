#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sewkit/linalg.hpp"
#include "sewkit/partitions.hpp"
#include "sewkit/rational.hpp"

namespace sewkit {

/// Sparse vector on the partition basis with coefficients in R. Zero entries
/// are never stored.
template <class R>
class SparseVec {
 public:
  using Map = std::map<Partition, R>;

  SparseVec() = default;
  static SparseVec basis(const Partition& p, const R& c = R(1)) {
    SparseVec v;
    v.add(p, c);
    return v;
  }

  const Map& entries() const { return m_; }
  bool empty() const { return m_.empty(); }
  std::size_t size() const { return m_.size(); }

  void add(const Partition& p, const R& c) {
    if (is_zero(c)) return;
    auto it = m_.find(p);
    if (it == m_.end()) {
      m_.emplace(p, c);
      return;
    }
    it->second = it->second + c;
    if (is_zero(it->second)) m_.erase(it);
  }
  R coeff(const Partition& p) const {
    auto it = m_.find(p);
    return it == m_.end() ? R(0) : it->second;
  }

  /// Largest weight among stored components (-1 for the zero vector).
  int max_weight() const {
    int w = -1;
    for (const auto& [p, c] : m_) w = std::max(w, weight(p));
    return w;
  }
  /// The component of L~0-weight n.
  SparseVec weight_part(int n) const {
    SparseVec r;
    for (const auto& [p, c] : m_)
      if (weight(p) == n) r.m_.emplace(p, c);
    return r;
  }

  SparseVec& operator+=(const SparseVec& o) {
    for (const auto& [p, c] : o.m_) add(p, c);
    return *this;
  }
  SparseVec& operator-=(const SparseVec& o) {
    for (const auto& [p, c] : o.m_) add(p, R(R(0) - c));
    return *this;
  }
  friend SparseVec operator+(SparseVec a, const SparseVec& b) { return a += b; }
  friend SparseVec operator-(SparseVec a, const SparseVec& b) { return a -= b; }
  friend SparseVec operator-(const SparseVec& a) { return SparseVec() - a; }

  template <class S>
  SparseVec scaled(const S& s) const {
    SparseVec r;
    for (const auto& [p, c] : m_) r.add(p, R(c * s));
    return r;
  }
  friend SparseVec operator*(const SparseVec& v, const Scalar& s) { return v.scaled(s); }
  friend SparseVec operator*(const Scalar& s, const SparseVec& v) { return v.scaled(s); }

  friend bool operator==(const SparseVec& a, const SparseVec& b) { return a.m_ == b.m_; }

 private:
  Map m_;
};

template <class R>
bool is_zero(const SparseVec<R>& v) {
  return v.empty();
}

using FockVector = SparseVec<Scalar>;

inline FockVector vacuum() { return FockVector::basis({}); }

inline std::string to_string(const FockVector& v) {
  if (v.empty()) return "0";
  std::string s;
  for (const auto& [p, c] : v.entries()) s += (s.empty() ? "" : " + ") + ("(" + to_string(c) + ")" + label(p));
  return s;
}

class UnsupportedWeight : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Rank-one Heisenberg Fock module of momentum lambda (lambda = 0 is the VOA
/// itself). Operators act exactly on sparse vectors; nothing is truncated.
class FockModule {
 public:
  /// Vertex operators are reconstructed for states up to this weight.
  static constexpr int kMaxVertexWeight = 4;

  explicit FockModule(Scalar momentum = 0) : lambda_(std::move(momentum)) {}

  const Scalar& momentum() const { return lambda_; }
  /// L0 - L~0 on this module.
  Scalar l0_offset() const { return lambda_ * lambda_ / 2; }

  /// a_k on a single basis vector; returns (partition, factor) or factor 0.
  std::pair<Partition, Scalar> a_on_basis(long k, const Partition& mu) const {
    if (k == 0) return {mu, lambda_};
    if (k < 0) {
      Partition r = mu;
      r.insert(std::upper_bound(r.begin(), r.end(), static_cast<int>(-k), std::greater<int>()), static_cast<int>(-k));
      return {r, Scalar(1)};
    }
    auto it = std::find(mu.begin(), mu.end(), static_cast<int>(k));
    if (it == mu.end()) return {mu, Scalar(0)};
    long mult = std::count(mu.begin(), mu.end(), static_cast<int>(k));
    Partition r = mu;
    r.erase(std::find(r.begin(), r.end(), static_cast<int>(k)));
    return {r, Scalar(k * mult)};
  }

  template <class R>
  SparseVec<R> a(long k, const SparseVec<R>& v) const {
    SparseVec<R> out;
    for (const auto& [p, c] : v.entries()) {
      auto [q, f] = a_on_basis(k, p);
      if (!is_zero(f)) out.add(q, R(c * f));
    }
    return out;
  }

  /// Sugawara L_n = 1/2 sum_j :a_j a_{n-j}:, central charge 1.
  template <class R>
  SparseVec<R> L(long n, const SparseVec<R>& v) const {
    SparseVec<R> out;
    for (const auto& [p, c] : v.entries()) {
      long w = weight(p);
      // :a_j a_k: with j <= k, j + k = n; a_k acts first and kills p unless k <= w.
      long kmin = n >= 0 ? (n + 1) / 2 : -((-n) / 2);
      for (long k = kmin; k <= std::max(w, 0L); ++k) {
        long j = n - k;
        if (j > k) continue;
        auto [q1, f1] = a_on_basis(k, p);
        if (is_zero(f1)) continue;
        auto [q2, f2] = a_on_basis(j, q1);
        if (is_zero(f2)) continue;
        Scalar f = f1 * f2;
        if (j == k) f /= 2;
        out.add(q2, R(c * f));
      }
    }
    return out;
  }

  /// Y(u)_m for a state u of the VOA (a vacuum-module vector), via the
  /// normal-ordered product of derivative fields.
  template <class R>
  SparseVec<R> vertex_mode(const FockVector& u, long m, const SparseVec<R>& x) const {
    SparseVec<R> out;
    for (const auto& [nu, s] : u.entries()) {
      int wt = weight(nu);
      if (wt > kMaxVertexWeight)
        throw UnsupportedWeight("vertex operators are reconstructed only for states of weight <= " + std::to_string(kMaxVertexWeight) +
                                " (got " + label(nu) + ")");
      if (nu.empty()) {
        if (m == -1) out += x.scaled(s);
        continue;
      }
      long S = m + 1 - wt;  // sum of the mode indices
      for (const auto& [mu, c] : x.entries()) {
        long W = weight(mu);
        long lo = std::min(0L, S - W), hi = W;
        std::vector<long> idx(nu.size());
        auto rec = [&](auto&& self, std::size_t i, long rest) -> void {
          if (i + 1 == nu.size()) {
            if (rest < lo || rest > hi) return;
            idx[i] = rest;
            apply_normal_ordered(nu, idx, mu, R(c * s), out);
            return;
          }
          for (long t = lo; t <= hi; ++t) {
            idx[i] = t;
            self(self, i + 1, rest - t);
          }
        };
        rec(rec, 0, S);
      }
    }
    return out;
  }

 private:
  // Adds coef * prod binom(-m_i-1, n_i-1) :a_{m_1}...a_{m_k}: e_mu to out.
  template <class R>
  void apply_normal_ordered(const Partition& nu, const std::vector<long>& ms, const Partition& mu, const R& coef, SparseVec<R>& out) const {
    Scalar f = 1;
    for (std::size_t i = 0; i < nu.size(); ++i) {
      f *= binomial(-ms[i] - 1, nu[i] - 1);
      if (is_zero(f)) return;
    }
    Partition cur = mu;
    // annihilators, then zero modes, then creators
    for (int pass = 0; pass < 3; ++pass) {
      for (long m : ms) {
        bool take = (pass == 0 && m > 0) || (pass == 1 && m == 0) || (pass == 2 && m < 0);
        if (!take) continue;
        auto [q, g] = a_on_basis(m, cur);
        if (is_zero(g)) return;
        f *= g;
        cur = std::move(q);
      }
    }
    out.add(cur, R(coef * f));
  }

  Scalar lambda_;
};

/// Conformal vector omega = 1/2 a_{-1}^2 |0>.
inline FockVector conformal_vector() { return FockVector::basis({1, 1}, Scalar(1, 2)); }

/// Index of each basis partition of W^{<=N}.
class BasisIndex {
 public:
  explicit BasisIndex(int N) : N_(N), basis_(basis_upto(N)) {
    for (std::size_t i = 0; i < basis_.size(); ++i) index_[basis_[i]] = i;
  }
  int N() const { return N_; }
  std::size_t dim() const { return basis_.size(); }
  const std::vector<Partition>& basis() const { return basis_; }
  const Partition& operator[](std::size_t i) const { return basis_[i]; }
  /// Position of p, or dim() when p lies above the truncation.
  std::size_t find(const Partition& p) const {
    auto it = index_.find(p);
    return it == index_.end() ? basis_.size() : it->second;
  }

  Vec<Scalar> dense(const FockVector& v) const {
    Vec<Scalar> out(dim(), Scalar(0));
    for (const auto& [p, c] : v.entries()) {
      std::size_t i = find(p);
      if (i < dim()) out[i] = c;
    }
    return out;
  }
  FockVector sparse(const Vec<Scalar>& v) const {
    FockVector out;
    for (std::size_t i = 0; i < v.size(); ++i) out.add(basis_[i], v[i]);
    return out;
  }

  /// Matrix of a linear operator restricted to W^{<=N}; components above N are dropped.
  template <class Op>
  Matrix<Scalar> matrix(Op op) const {
    Matrix<Scalar> m(dim(), dim());
    for (std::size_t j = 0; j < dim(); ++j) {
      FockVector img = op(FockVector::basis(basis_[j]));
      for (const auto& [p, c] : img.entries()) {
        std::size_t i = find(p);
        if (i < dim()) m(i, j) = c;
      }
    }
    return m;
  }

  std::vector<long> weights() const {
    std::vector<long> w;
    for (const auto& p : basis_) w.push_back(weight(p));
    return w;
  }

 private:
  int N_;
  std::vector<Partition> basis_;
  std::map<Partition, std::size_t> index_;
};

inline Matrix<Scalar> heisenberg_mode(long k, int N, const Scalar& lambda) {
  FockModule M(lambda);
  return BasisIndex(N).matrix([&](const FockVector& v) { return M.a(k, v); });
}

inline Matrix<Scalar> sugawara_L(long n, int N, const Scalar& lambda) {
  FockModule M(lambda);
  return BasisIndex(N).matrix([&](const FockVector& v) { return M.L(n, v); });
}

inline Matrix<Scalar> vertex_mode(const FockVector& u, long m, int N, const Scalar& lambda = 0) {
  FockModule M(lambda);
  return BasisIndex(N).matrix([&](const FockVector& v) { return M.vertex_mode(u, m, v); });
}

/// Gram matrix of the Fock form (a_n adjoint to a_{-n}) on W^{<=N}.
inline Matrix<Scalar> fock_gram(int N) {
  BasisIndex B(N);
  Matrix<Scalar> g(B.dim(), B.dim());
  for (std::size_t i = 0; i < B.dim(); ++i) g(i, i) = z_factor(B[i]);
  return g;
}

/// L~0 as a diagonal matrix on W^{<=N}.
inline Matrix<Scalar> grading_matrix(int N) {
  BasisIndex B(N);
  Matrix<Scalar> g(B.dim(), B.dim());
  for (std::size_t i = 0; i < B.dim(); ++i) g(i, i) = weight(B[i]);
  return g;
}

}  // namespace sewkit
