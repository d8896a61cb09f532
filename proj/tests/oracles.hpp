#pragma once

// Independent reference computations used by the unit tests and the
// acceptance binary. None of these call the routine they check.

#include <vector>

#include "sewkit/sewkit.hpp"

namespace oracle {

using sewkit::Laurent;
using sewkit::Matrix;
using sewkit::Scalar;
using sewkit::TruncSeries;

/// p(0..n) by Euler's pentagonal number recurrence.
inline std::vector<long> partition_numbers(long n) {
  std::vector<long> p(static_cast<std::size_t>(n + 1), 0);
  p[0] = 1;
  for (long m = 1; m <= n; ++m) {
    long s = 0;
    for (long k = 1;; ++k) {
      long g1 = k * (3 * k - 1) / 2, g2 = k * (3 * k + 1) / 2;
      if (g1 > m) break;
      long sign = k % 2 ? 1 : -1;
      s += sign * p[static_cast<std::size_t>(m - g1)];
      if (g2 <= m) s += sign * p[static_cast<std::size_t>(m - g2)];
    }
    p[static_cast<std::size_t>(m)] = s;
  }
  return p;
}

/// exp of a nilpotent matrix by its finite power series.
inline Matrix<Scalar> expm_nilpotent(const Matrix<Scalar>& x) {
  Matrix<Scalar> out = Matrix<Scalar>::identity(x.rows()), term = out;
  for (long k = 1; !term.is_zero_matrix(); ++k) {
    term = term * x * (Scalar(1) / k);
    out += term;
  }
  return out;
}

/// c0^{L~0} exp(sum c_n L_n) from Sugawara matrices.
inline Matrix<Scalar> u_operator(const sewkit::CoordJet<Scalar>& rho, int N) {
  auto e = sewkit::extract_c(rho);
  std::size_t d = sewkit::BasisIndex(N).dim();
  Matrix<Scalar> x(d, d), diag(d, d);
  for (long n = 1; n <= std::min<long>(N, e.max_n()); ++n) x += sewkit::sugawara_L(n, N, 0) * e.cn(n);
  auto w = sewkit::BasisIndex(N).weights();
  for (std::size_t i = 0; i < d; ++i) diag(i, i) = sewkit::pow(e.c0, w[i]);
  return diag * expm_nilpotent(x);
}

/// Dense coefficients c[0..K] of a power series.
using Dense = std::vector<Scalar>;

inline Dense dense_mul(const Dense& a, const Dense& b, std::size_t K) {
  Dense r(K + 1, Scalar(0));
  for (std::size_t i = 0; i < a.size() && i <= K; ++i)
    for (std::size_t j = 0; j < b.size() && i + j <= K; ++j) r[i + j] += a[i] * b[j];
  return r;
}

inline Dense dense_div(const Dense& a, const Dense& b, std::size_t K) {
  Dense r(K + 1, Scalar(0));
  for (std::size_t n = 0; n <= K; ++n) {
    Scalar s = n < a.size() ? a[n] : Scalar(0);
    for (std::size_t i = 1; i <= n && i < b.size(); ++i) s -= b[i] * r[n - i];
    r[n] = s / b[0];
  }
  return r;
}

inline Dense dense_deriv(const Dense& a) {
  Dense r;
  for (std::size_t n = 1; n < a.size(); ++n) r.push_back(a[n] * Scalar(static_cast<long>(n)));
  return r;
}

/// S f = (f''/f')' - (f''/f')^2 / 2 for f = sum_{n>=1} a_n z^n, through z^K.
inline Dense schwarzian(const sewkit::CoordJet<Scalar>& f, std::size_t K) {
  Dense c(1, Scalar(0));
  for (const auto& x : f.coeffs()) c.push_back(x);
  Dense d1 = dense_deriv(c), d2 = dense_deriv(d1);
  Dense l = dense_div(d2, d1, K + 1);
  Dense dl = dense_deriv(l), l2 = dense_mul(l, l, K);
  Dense out(K + 1);
  for (std::size_t n = 0; n <= K; ++n) out[n] = dl[n] - l2[n] / 2;
  return out;
}

/// The projective correction by literal residues: for each power of q,
/// expand a(xi, q/xi), b(q/varpi, varpi) and h(eta, q) as Laurent series in
/// the local variable, multiply by the Schwarzian datum and take Res.
/// Single pair, output variable q.
inline TruncSeries<Scalar> projective(const Laurent<Scalar>& s_xi, const Laurent<Scalar>& s_pi, const std::vector<Laurent<Scalar>>& s_eta,
                                      const TruncSeries<Scalar>& a, const TruncSeries<Scalar>& b, const std::vector<TruncSeries<Scalar>>& h,
                                      const Scalar& c, long order) {
  TruncSeries<Scalar> out(sewkit::SeriesShape::simple({"q"}, {order}));
  for (long n = 0; n <= order; ++n) {
    Laurent<Scalar> ax, bp;
    for (const auto& [k, v] : a.terms())
      if (k.n[1] == n) ax = ax + Laurent<Scalar>::monomial(v, k.n[0] - n);
    for (const auto& [k, v] : b.terms())
      if (k.n[0] == n) bp = bp + Laurent<Scalar>::monomial(v, k.n[1] - n);
    Scalar total = (s_xi * ax * sewkit::variable()).residue() + (s_pi * bp * sewkit::variable()).residue();
    for (std::size_t i = 0; i < h.size(); ++i) {
      Laurent<Scalar> he;
      long off = h[i].shape().offset[0].get_num().get_si();
      for (const auto& [k, v] : h[i].terms())
        if (k.n[1] == n) he = he + Laurent<Scalar>::monomial(v, off + k.n[0]);
      total += (s_eta[i] * he).residue();
    }
    out.add(std::vector<long>{n}, Scalar(total * c / 12));
  }
  return out;
}

}  // namespace oracle
