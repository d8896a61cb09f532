#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "sewkit/coord_jet.hpp"
#include "sewkit/fock.hpp"
#include "sewkit/laurent.hpp"
#include "sewkit/partitions.hpp"
#include "sewkit/rational.hpp"
#include "sewkit/trunc_series.hpp"

namespace sewkit {

/// Seeded generator of small exact values. Draws go through raw engine output
/// so a seed gives the same values with any standard library.
class Gen {
 public:
  static constexpr std::uint64_t kDefaultSeed = 20240611;

  explicit Gen(std::uint64_t seed = kDefaultSeed) : eng_(seed) {}

  /// Uniform integer in [lo, hi].
  long integer(long lo, long hi) {
    std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<long>(eng_() % span);
  }

  /// p/q with |p| <= num and 1 <= q <= den.
  Scalar rational(long num = 5, long den = 4) {
    Scalar s(integer(-num, num), integer(1, den));
    s.canonicalize();
    return s;
  }

  Scalar nonzero_rational(long num = 5, long den = 4) {
    for (;;) {
      Scalar s = rational(num, den);
      if (!is_zero(s)) return s;
    }
  }

  /// Jet with a_1 != 0.
  CoordJet<Scalar> jet(long order, long num = 5, long den = 4) {
    std::vector<Scalar> a;
    for (long n = 1; n <= order; ++n) a.push_back(n == 1 ? nonzero_rational(num, den) : rational(num, den));
    return CoordJet<Scalar>(std::move(a));
  }

  /// Random combination of basis states of weight <= N.
  FockVector fock_vector(int N, int terms = 3) {
    auto basis = basis_upto(N);
    FockVector v;
    for (int t = 0; t < terms; ++t) v.add(basis[static_cast<std::size_t>(integer(0, static_cast<long>(basis.size()) - 1))], rational());
    return v;
  }

  /// One-variable series c_0 + ... + c_K x^K known through x^K.
  Laurent<Scalar> series(long K, long num = 5, long den = 4) {
    std::vector<Scalar> c;
    for (long n = 0; n <= K; ++n) c.push_back(rational(num, den));
    return Laurent<Scalar>::from_coeffs(0, std::move(c), K);
  }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace sewkit
