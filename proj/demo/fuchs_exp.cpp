// Formal solution of q psi' = q psi and a coefficient-bound certificate for it.

#include <iostream>

#include "sewkit/sewkit.hpp"

using namespace sewkit;

int main() {
  std::vector<Matrix<Scalar>> A(21, Matrix<Scalar>(1, 1));
  A[1](0, 0) = 1;
  auto sys = make_system(A, {Vec<Scalar>{0}});
  sys.tail = TailBound{0, 0};
  auto psi = solve_formal(sys, {{MonoKey{{0}, {0}}, Vec<Scalar>{1}}}, 20);
  for (long n : {0L, 1L, 5L, 20L}) std::cout << "psi_" << n << " = " << to_string(psi.coeff(std::vector<long>{n})[0]) << "\n";
  auto cert = certify(sys, psi, Scalar(1, 2));
  std::cout << to_json(cert).dump(2) << "\n";
  return recheck(cert, psi) ? 0 : 1;
}
