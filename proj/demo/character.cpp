// Graded characters of Fock modules obtained by sewing the dual pairing.

#include <iostream>

#include "sewkit/sewkit.hpp"

using namespace sewkit;

int main() {
  for (Scalar lam : {Scalar(0), Scalar(1, 2)}) {
    auto M = std::make_shared<FockTrunc>(10, lam);
    auto ch = sew(dual_pairing_block(M), {}, 10);
    std::cout << "momentum " << to_string(lam) << ": q^" << to_string(ch.shape().offset[0]) << " (";
    for (long n = 0; n <= 10; ++n) std::cout << (n ? ", " : "") << to_string(ch.coeff(std::vector<long>{n}));
    std::cout << ")\n";
  }
}
