#pragma once

#include <algorithm>
#include <map>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sewkit/linalg.hpp"
#include "sewkit/rational.hpp"
#include "sewkit/trunc_series.hpp"

namespace sewkit {

/// Failure of the formal recursion or of a certificate, located at an index.
class FuchsError : public std::runtime_error {
 public:
  FuchsError(const std::string& what, std::vector<long> n, std::vector<long> l = {})
      : std::runtime_error(what + " at n=" + fmt(n) + (l.empty() ? "" : ", l=" + fmt(l))), n_(std::move(n)), l_(std::move(l)) {}
  const std::vector<long>& n() const { return n_; }
  const std::vector<long>& l() const { return l_; }

 private:
  static std::string fmt(const std::vector<long>& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + ")";
  }
  std::vector<long> n_, l_;
};

/// ||A_n|| <= C a^n for every n beyond the stored truncation.
struct TailBound {
  Scalar C, a;
};

/// q_j d/dq_j psi = A^j psi + omega^j for j = 1..M, coefficients stored as
/// truncated series in all M variables.
struct FuchsSystem {
  std::vector<std::string> vars;
  std::size_t dim = 0;
  std::vector<TruncSeries<Matrix<Scalar>>> A;
  std::vector<TruncSeries<Vec<Scalar>>> omega;
  std::optional<TailBound> tail;
  std::vector<long> logmax;  // declared log bound per variable

  std::size_t nvars() const { return vars.size(); }

  void validate() const {
    std::size_t M = vars.size();
    if (M == 0) throw std::invalid_argument("fuchs system: no variables");
    if (A.size() != M || omega.size() != M) throw std::invalid_argument("fuchs system: need one A and one omega per variable");
    if (logmax.size() != M) throw std::invalid_argument("fuchs system: need one log bound per variable");
    for (std::size_t j = 0; j < M; ++j) {
      for (const auto& sh : {A[j].shape(), omega[j].shape()}) {
        if (sh.vars != vars) throw std::invalid_argument("fuchs system: coefficient series must use the system variables");
        for (std::size_t k = 0; k < M; ++k)
          if (!is_zero(sh.offset[k]) || sh.logmax[k] != 0) throw std::invalid_argument("fuchs system: coefficients must be plain power series");
      }
      for (const auto& [k, m] : A[j].terms())
        if (m.rows() != dim || m.cols() != dim) throw std::invalid_argument("fuchs system: A coefficient of the wrong size");
      for (const auto& [k, v] : omega[j].terms())
        if (v.size() != dim) throw std::invalid_argument("fuchs system: omega coefficient of the wrong size");
    }
  }

  /// Largest order through which every coefficient stream is known.
  long known_order() const {
    long K = std::numeric_limits<long>::max();
    for (std::size_t j = 0; j < nvars(); ++j)
      for (std::size_t k = 0; k < nvars(); ++k) K = std::min({K, A[j].shape().trunc[k], omega[j].shape().trunc[k]});
    return K;
  }

  Matrix<Scalar> A_at(std::size_t j, const std::vector<long>& n) const {
    auto m = A[j].coeff(n);
    return m.rows() ? m : Matrix<Scalar>(dim, dim);
  }
  Vec<Scalar> omega_at(std::size_t j, const std::vector<long>& n) const {
    auto v = omega[j].coeff(n);
    return v.empty() ? Vec<Scalar>(dim, Scalar(0)) : v;
  }
};

/// Single-variable system from dense coefficient lists.
inline FuchsSystem make_system(std::vector<Matrix<Scalar>> A, std::vector<Vec<Scalar>> omega, long logmax = 0, const std::string& var = "q") {
  if (A.empty()) throw std::invalid_argument("fuchs system: A is empty");
  FuchsSystem s;
  s.vars = {var};
  s.dim = A[0].rows();
  long K = static_cast<long>(std::max(A.size(), omega.size())) - 1;
  TruncSeries<Matrix<Scalar>> a(SeriesShape::simple({var}, {K}));
  TruncSeries<Vec<Scalar>> w(SeriesShape::simple({var}, {K}));
  for (std::size_t n = 0; n < A.size(); ++n) a.add(std::vector<long>{static_cast<long>(n)}, A[n]);
  for (std::size_t n = 0; n < omega.size(); ++n) w.add(std::vector<long>{static_cast<long>(n)}, omega[n]);
  s.A = {a};
  s.omega = {w};
  s.logmax = {logmax};
  s.validate();
  return s;
}

/// Seeds for the free components of resonant steps, keyed by (n, l).
using Seeds = std::map<MonoKey, Vec<Scalar>>;

namespace detail {

// Multi-indices with 0 <= x_j <= bound_j, by total degree then lexicographically.
inline std::vector<std::vector<long>> graded_indices(const std::vector<long>& bound) {
  std::vector<std::vector<long>> out;
  std::vector<long> cur(bound.size(), 0);
  auto rec = [&](auto&& self, std::size_t j) -> void {
    if (j == bound.size()) {
      out.push_back(cur);
      return;
    }
    for (long x = 0; x <= bound[j]; ++x) {
      cur[j] = x;
      self(self, j + 1);
    }
  };
  rec(rec, 0);
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    long sa = 0, sb = 0;
    for (long x : a) sa += x;
    for (long x : b) sb += x;
    return sa != sb ? sa < sb : a < b;
  });
  return out;
}

}  // namespace detail

/// Formal solution through total order K in each variable. At each multi-index
/// n the equations of all variables and all log levels are solved together as
/// one rational linear system; unknowns are ordered from the highest log level
/// down, so the free components of a resonant step sit at the lowest levels
/// and are taken from `seeds`.
inline TruncSeries<Vec<Scalar>> solve_formal(const FuchsSystem& sys, const Seeds& seeds, long K) {
  sys.validate();
  if (K > sys.known_order()) throw std::invalid_argument("solve_formal: order " + std::to_string(K) + " exceeds the known coefficients (" + std::to_string(sys.known_order()) + ")");
  std::size_t M = sys.nvars(), d = sys.dim;
  SeriesShape sh = SeriesShape::simple(sys.vars, std::vector<long>(M, K));
  sh.logmax = sys.logmax;
  TruncSeries<Vec<Scalar>> psi(sh);

  auto levels = detail::graded_indices(sys.logmax);
  std::reverse(levels.begin(), levels.end());
  std::map<std::vector<long>, std::size_t> level_pos;
  for (std::size_t i = 0; i < levels.size(); ++i) level_pos[levels[i]] = i;
  std::size_t cols = levels.size() * d;

  for (const auto& n : detail::graded_indices(std::vector<long>(M, K))) {
    Matrix<Scalar> lhs(M * levels.size() * d, cols);
    Vec<Scalar> rhs(lhs.rows(), Scalar(0));
    std::size_t row = 0;
    for (std::size_t j = 0; j < M; ++j) {
      Matrix<Scalar> A0 = sys.A_at(j, std::vector<long>(M, 0));
      for (const auto& l : levels) {
        std::size_t c0 = level_pos[l] * d;
        // (n_j - A0) psi_{n,l} + (l_j + 1) psi_{n,l+e_j}
        for (std::size_t a = 0; a < d; ++a) {
          for (std::size_t b = 0; b < d; ++b) lhs(row + a, c0 + b) = (a == b ? Scalar(n[j]) : Scalar(0)) - A0(a, b);
        }
        std::vector<long> up = l;
        up[j] += 1;
        if (up[j] <= sys.logmax[j]) {
          std::size_t c1 = level_pos[up] * d;
          for (std::size_t a = 0; a < d; ++a) lhs(row + a, c1 + a) += Scalar(up[j]);
        }
        // sum_{m < n} A_{n-m} psi_{m,l} + [l = 0] omega_n
        Vec<Scalar> r(d, Scalar(0));
        for (const auto& [k, v] : psi.terms()) {
          if (k.l != l) continue;
          std::vector<long> diff(M);
          bool below = true;
          for (std::size_t t = 0; t < M; ++t) {
            diff[t] = n[t] - k.n[t];
            if (diff[t] < 0) below = false;
          }
          if (!below) continue;
          r += sys.A_at(j, diff) * v;
        }
        if (std::all_of(l.begin(), l.end(), [](long x) { return x == 0; })) r += sys.omega_at(j, n);
        for (std::size_t a = 0; a < d; ++a) rhs[row + a] = r[a];
        row += d;
      }
    }
    auto fcols = free_columns(lhs);
    Vec<Scalar> fvals;
    for (auto c : fcols) {
      const auto& l = levels[c / d];
      auto it = seeds.find(MonoKey{n, l});
      if (it == seeds.end() || it->second.size() != d)
        throw FuchsError("missing seed for free component " + std::to_string(c % d), n, l);
      fvals.push_back(it->second[c % d]);
    }
    auto x = solve_with_free(lhs, rhs, fvals);
    if (!x) throw FuchsError("inconsistent resonance (no solution; raise the log bound or change seeds)", n);
    for (std::size_t li = 0; li < levels.size(); ++li) {
      Vec<Scalar> v(x->begin() + static_cast<long>(li * d), x->begin() + static_cast<long>((li + 1) * d));
      auto it = seeds.find(MonoKey{n, levels[li]});
      if (it != seeds.end() && it->second != v) throw FuchsError("seed conflicts with the forced value", n, levels[li]);
      psi.add(MonoKey{n, levels[li]}, v);
    }
  }
  return psi;
}

/// q_j d_j psi - A^j psi - omega^j for every variable j.
inline std::vector<TruncSeries<Vec<Scalar>>> residual(const FuchsSystem& sys, const TruncSeries<Vec<Scalar>>& psi) {
  sys.validate();
  if (psi.vars() != sys.vars) throw std::invalid_argument("residual: variable lists differ");
  auto matvec = [](const Matrix<Scalar>& m, const Vec<Scalar>& v) { return Vec<Scalar>(m * v); };
  std::vector<TruncSeries<Vec<Scalar>>> out;
  for (std::size_t j = 0; j < sys.nvars(); ++j) {
    for (const auto& [k, v] : psi.terms())
      if (v.size() != sys.dim) throw std::invalid_argument("residual: solution vector of the wrong size");
    auto r = psi.q_d(j) - mul_with(sys.A[j], psi, matvec);
    r -= sys.omega[j].with_logmax(psi.shape().logmax);
    out.push_back(r);
  }
  return out;
}

/// q d/dq psi - Omega psi in variable j: zero when a sewn series satisfies the
/// supplied system to the available order.
inline TruncSeries<Vec<Scalar>> ode_from_sewing(const TruncSeries<Matrix<Scalar>>& Omega, const TruncSeries<Vec<Scalar>>& psi, std::size_t j = 0) {
  if (Omega.vars() != psi.vars()) throw std::invalid_argument("ode_from_sewing: variable lists differ");
  std::optional<std::size_t> n;
  for (const auto& [k, m] : Omega.terms()) {
    if (n && m.cols() != *n) throw std::invalid_argument("ode_from_sewing: shape mismatch");
    n = m.cols();
    if (m.rows() != m.cols()) throw std::invalid_argument("ode_from_sewing: Omega must be square");
  }
  for (const auto& [k, v] : psi.terms())
    if (n && v.size() != *n) throw std::invalid_argument("ode_from_sewing: shape mismatch between Omega and psi");
  auto matvec = [](const Matrix<Scalar>& m, const Vec<Scalar>& v) { return Vec<Scalar>(m * v); };
  return psi.q_d(j) - mul_with(Omega, psi, matvec);
}

/// For M > 1: q_i d_i (A^j psi + omega^j) = q_j d_j (A^i psi + omega^i) for all i < j.
inline bool compatibility_check(const FuchsSystem& sys, const TruncSeries<Vec<Scalar>>& psi) {
  auto matvec = [](const Matrix<Scalar>& m, const Vec<Scalar>& v) { return Vec<Scalar>(m * v); };
  std::vector<TruncSeries<Vec<Scalar>>> rhs;
  for (std::size_t j = 0; j < sys.nvars(); ++j) rhs.push_back(mul_with(sys.A[j], psi, matvec) + sys.omega[j].with_logmax(psi.shape().logmax));
  for (std::size_t i = 0; i < sys.nvars(); ++i)
    for (std::size_t j = i + 1; j < sys.nvars(); ++j)
      if (!(rhs[j].q_d(i) - rhs[i].q_d(j)).is_zero_series()) return false;
  return true;
}

/// Majorant constants realising ||psi_n|| <= c gamma^n r1^{-n}.
struct Certificate {
  Scalar r1, alpha, B, beta, gamma, c, r0;
  long n_star = 0;         // the induction runs for n >= n_star
  long base_cases = 0;     // indices below n_star that fixed c
  long verified_upto = -1;
  bool homogeneous = false;  // omega = 0, so the induction needs no extra margin
  std::vector<Scalar> scaled_norms;  // r1^n ||psi_n|| for n = 0..verified_upto
};

/// Certificate for a single-variable, log-free system and a formal solution of it.
/// Norms are the sup norm on vectors and the row-sum norm on matrices.
inline Certificate certify(const FuchsSystem& sys, const TruncSeries<Vec<Scalar>>& psi, const Scalar& r1) {
  sys.validate();
  if (sys.nvars() != 1) throw std::invalid_argument("certify: only single-variable systems are supported");
  if (psi.nvars() != 1 || psi.vars() != sys.vars) throw std::invalid_argument("certify: solution variable does not match the system");
  if (!sys.tail) throw std::invalid_argument("certify: a geometric tail bound (C, a) is required");
  if (r1 <= 0) throw std::invalid_argument("certify: r1 must be positive");
  if (sys.tail->C < 0 || sys.tail->a < 0) throw std::invalid_argument("certify: tail constants must be nonnegative");
  if (sys.tail->a * r1 >= 1) throw std::invalid_argument("certify: r1 must lie strictly inside the declared radius 1/a");
  for (const auto& [k, v] : psi.terms())
    if (k.l[0] != 0) throw std::invalid_argument("certify: solutions with log terms are not supported");

  long T = std::min(sys.A[0].shape().trunc[0], sys.omega[0].shape().trunc[0]);
  long K = psi.shape().trunc[0];
  auto psi_at = [&](long n) {
    auto v = psi.coeff(std::vector<long>{n});
    return v.empty() ? Vec<Scalar>(sys.dim, Scalar(0)) : v;
  };

  // The solution must satisfy n psi_n = omega_n + sum_{j<=n} A_{n-j} psi_j.
  for (long n = 0; n <= std::min(K, T); ++n) {
    Vec<Scalar> r = psi_at(n) * Scalar(n) - sys.omega_at(0, {n});
    for (long j = 0; j <= n; ++j) r -= sys.A_at(0, {n - j}) * psi_at(j);
    if (!is_zero(r)) throw FuchsError("solution violates the recursion", {n});
  }

  Certificate cert;
  cert.r1 = r1;
  Scalar tail = sys.tail->C * pow(sys.tail->a * r1, T + 1) / (1 - sys.tail->a * r1);
  auto majorant = [&](auto norm_at) -> Scalar {
    Scalar s = 0;
    for (long n = 0; n <= T; ++n) s += norm_at(n) * pow(r1, n);
    return s + tail;
  };
  Scalar aA = majorant([&](long n) { return row_sum_norm(sys.A_at(0, {n})); });
  Scalar aW = majorant([&](long n) { return sup_norm(sys.omega_at(0, {n})); });
  cert.homogeneous = sys.omega[0].is_zero_series() && is_zero(sys.tail->C);
  cert.alpha = cert.homogeneous ? aA : std::max(aA, aW);
  cert.B = row_sum_norm(sys.A_at(0, {0}));
  long n0 = floor_to_long(cert.B) + 1;
  cert.beta = Scalar(n0) / (Scalar(n0) - cert.B);
  Scalar ab = cert.alpha * cert.beta;
  if (cert.homogeneous) {
    cert.gamma = std::max(Scalar(1), ab);
    cert.n_star = n0;
  } else {
    cert.gamma = ab > 1 ? ab : Scalar(2);
    cert.n_star = std::max(n0, 2L);
  }
  cert.c = 0;
  for (long n = 0; n < cert.n_star; ++n) {
    cert.c = std::max(cert.c, Scalar(pow(r1, n) * sup_norm(psi_at(n)) / pow(cert.gamma, n)));
    ++cert.base_cases;
  }
  if (!cert.homogeneous) cert.c = std::max(cert.c, Scalar(1 / (pow(cert.gamma, cert.n_star - 1) - 1)));
  cert.r0 = r1 / (2 * cert.gamma);

  for (long n = 0; n <= K; ++n) {
    Scalar s = pow(r1, n) * sup_norm(psi_at(n));
    if (s > cert.c * pow(cert.gamma, n)) throw FuchsError("coefficient bound violated", {n});
    cert.scaled_norms.push_back(s);
    cert.verified_upto = n;
  }
  return cert;
}

/// Re-checks a stored certificate record against a solution.
inline bool recheck(const Certificate& c, const TruncSeries<Vec<Scalar>>& psi) {
  for (long n = 0; n <= c.verified_upto; ++n) {
    auto v = psi.coeff(std::vector<long>{n});
    Scalar s = pow(c.r1, n) * (v.empty() ? Scalar(0) : sup_norm(v));
    if (s > c.c * pow(c.gamma, n)) return false;
  }
  return c.r0 * c.gamma < c.r1;
}

}  // namespace sewkit
