#pragma once

#include <gmpxx.h>

#include <cctype>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sewkit {

/// Exact rational scalar. GMP keeps it canonical (gcd 1, positive denominator)
/// after every arithmetic operation; parse() canonicalizes explicitly.
using Scalar = mpq_class;

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Scalar parse_scalar(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw ParseError("empty rational literal");
  for (char ch : s) {
    if (!(std::isdigit(static_cast<unsigned char>(ch)) || ch == '-' || ch == '+' || ch == '/'))
      throw ParseError("not an exact rational literal: '" + s + "'");
  }
  if (s[0] == '+') s.erase(0, 1);
  Scalar q;
  if (q.set_str(s, 10) != 0) throw ParseError("not an exact rational literal: '" + std::string(text) + "'");
  if (q.get_den() == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  q.canonicalize();
  return q;
}

inline std::string to_string(const Scalar& q) { return q.get_str(10); }

inline Scalar abs(const Scalar& q) { return q < 0 ? Scalar(-q) : q; }

inline bool is_zero(const Scalar& q) { return sgn(q) == 0; }

inline bool is_integer(const Scalar& q) { return q.get_den() == 1; }

/// q^e for integer e (q must be nonzero when e < 0).
inline Scalar pow(const Scalar& q, long e) {
  if (e < 0) {
    if (is_zero(q)) throw std::domain_error("negative power of zero");
    Scalar inv = 1 / q;
    return pow(inv, -e);
  }
  Scalar result = 1, base = q;
  while (e > 0) {
    if (e & 1) result *= base;
    base *= base;
    e >>= 1;
  }
  return result;
}

/// Largest integer <= q.
inline long floor_to_long(const Scalar& q) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return f.get_si();
}

inline Scalar factorial(long n) {
  Scalar f = 1;
  for (long i = 2; i <= n; ++i) f *= i;
  return f;
}

inline Scalar binomial(long n, long k) {
  // generalized: n may be negative, k >= 0
  if (k < 0) return 0;
  Scalar r = 1;
  for (long i = 0; i < k; ++i) {
    r *= Scalar(n - i);
    r /= Scalar(i + 1);
  }
  return r;
}

}  // namespace sewkit
