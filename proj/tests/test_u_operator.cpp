#include <catch_amalgamated.hpp>

#include "oracles.hpp"
#include "sewkit/sewkit.hpp"

using namespace sewkit;

namespace {

Matrix<Scalar> power_L0(const Scalar& xi, int N) {
  auto w = BasisIndex(N).weights();
  Matrix<Scalar> d(w.size(), w.size());
  for (std::size_t i = 0; i < w.size(); ++i) d(i, i) = pow(xi, w[i]);
  return d;
}

}  // namespace

TEST_CASE("u_operator agrees with the matrix exponential") {
  Gen g(41);
  for (int rep = 0; rep < 10; ++rep) {
    auto r = g.jet(6);
    CHECK(u_operator(r, 5) == oracle::u_operator(r, 5));
  }
}

TEST_CASE("pure scaling") {
  std::vector<Scalar> a(5, Scalar(0));
  a[0] = 2;
  CHECK(u_operator(CoordJet<Scalar>(a), 4) == scaling_operator(Scalar(2), 4));
  CHECK(u_operator(CoordJet<Scalar>(a), 4) == power_L0(Scalar(2), 4));
}

TEST_CASE("leading term is rho'(0)^n") {
  Gen g(42);
  auto r = g.jet(7);
  int N = 6;
  auto U = u_operator(r, N);
  auto w = BasisIndex(N).weights();
  for (std::size_t j = 0; j < w.size(); ++j)
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i] > w[j]) CHECK(is_zero(U(i, j)));
      if (w[i] == w[j]) CHECK(U(i, j) == (i == j ? pow(r.a(1), w[j]) : Scalar(0)));
    }
}

TEST_CASE("group law on random jets") {
  Gen g(43);
  int N = 4;
  for (int rep = 0; rep < 10; ++rep) {
    auto a = g.jet(6), b = g.jet(6);
    CHECK(u_operator(compose(a, b), N) == u_operator(a, N) * u_operator(b, N));
  }
}

TEST_CASE("conjugation by gamma") {
  int N = 6;
  for (Scalar xi : {Scalar(1), Scalar(2), Scalar(-3), Scalar(5, 7)}) {
    auto lhs = u_operator(gamma_xi(xi, N + 1), N) * power_L0(xi, N);
    auto rhs = power_L0(Scalar(1) / xi, N) * u_operator(gamma_xi(Scalar(1), N + 1), N);
    CHECK(lhs == rhs);
  }
}

TEST_CASE("jet order below the weight bound is refused") {
  CHECK_THROWS_AS(u_operator(Gen(44).jet(3), 5), InsufficientOrder);
}

TEST_CASE("Huang conjugation: documented cases") {
  std::vector<Scalar> a(14, Scalar(0));
  a[0] = 1;
  a[1] = 1;
  CoordJet<Scalar> zz(a);
  auto rep = huang_conjugation_check(zz, conformal_vector(), FockVector::basis({1, 1}) + FockVector::basis({2}).scaled(Scalar(3)), -4, 4);
  CHECK(rep.ok);
  CHECK(rep.mismatches.empty());

  auto w = FockVector::basis({2, 1});
  auto vac = huang_conjugation_check(zz, vacuum(), w, -4, 4);
  CHECK(vac.ok);

  std::vector<Scalar> s(14, Scalar(0));
  s[0] = Scalar(3, 2);
  for (const auto& v : {FockVector::basis({1}), conformal_vector(), FockVector::basis({3})}) {
    CHECK(huang_conjugation_check(CoordJet<Scalar>(s), v, w, -4, 6).ok);
    CHECK(scaling_check(Scalar(3, 2), v, w, -4, 6).ok);
  }
}

TEST_CASE("Huang conjugation on random jets and states") {
  Gen g(45);
  for (int rep = 0; rep < 6; ++rep) {
    auto alpha = g.jet(12, 3, 2);
    auto v = g.fock_vector(2), w = g.fock_vector(3);
    CHECK(huang_conjugation_check(alpha, v, w, -3, 4, g.rational()).ok);
  }
}

TEST_CASE("window checks") {
  auto id = CoordJet<Scalar>::identity(12);
  CHECK_THROWS_AS(huang_conjugation_check(id, FockVector::basis({1}), vacuum(), 2, 1), WindowError);
  CHECK_THROWS_AS(huang_conjugation_check(id, FockVector::basis({1}), vacuum(), -9, -5), WindowError);
  CHECK_THROWS_AS(huang_conjugation_check(CoordJet<Scalar>::identity(4), FockVector::basis({1}), vacuum(), -2, 6), InsufficientOrder);
}
