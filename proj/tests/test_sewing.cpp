#include <catch_amalgamated.hpp>

#include "oracles.hpp"
#include "sewkit/sewkit.hpp"

using namespace sewkit;

namespace {

Matrix<Scalar> mat(std::initializer_list<std::initializer_list<long>> rows) {
  Matrix<Scalar> m(rows.size(), rows.begin()->size());
  std::size_t i = 0;
  for (const auto& r : rows) {
    std::size_t j = 0;
    for (long x : r) m(i, j++) = x;
    ++i;
  }
  return m;
}

TruncSeries<Scalar> monomial(long i, long j, long order) {
  TruncSeries<Scalar> f(SeriesShape::simple({"xi", "varpi"}, {order, order}));
  f.add(std::vector<long>{i, j}, Scalar(1));
  return f;
}

// q d/dq applied to a matrix-valued series.
TruncSeries<Matrix<Scalar>> q_d(const TruncSeries<Matrix<Scalar>>& x) { return x.q_d(0); }

}  // namespace

TEST_CASE("resolvent of a semisimple module") {
  auto M = std::make_shared<FockTrunc>(5, Scalar(0));
  auto R = q_L0_resolvent(*M, 5);
  CHECK(R.shape().logmax[0] == 0);
  for (long n = 0; n <= 5; ++n) CHECK(R.coeff(std::vector<long>{n}) == M->projection(n));
}

TEST_CASE("resolvent satisfies q d/dq R = L0 R") {
  for (Scalar lam : {Scalar(0), Scalar(1, 3)}) {
    auto M = std::make_shared<FockTrunc>(5, lam);
    auto R = q_L0_resolvent(*M, 5);
    CHECK(q_d(R) == R.map([&](const Matrix<Scalar>& m) { return Matrix<Scalar>(M->l0() * m); }));
  }
  ToyModule T(Scalar(1, 2), {mat({{0, 1}, {0, 0}}), mat({{0}})});
  auto R = q_L0_resolvent(T, 1);
  CHECK(q_d(R) == R.map([&](const Matrix<Scalar>& m) { return Matrix<Scalar>(T.l0() * m); }));
}

TEST_CASE("nilpotent toy module produces log terms") {
  ToyModule T(Scalar(0), {mat({{0, 1}, {0, 0}})});
  auto R = q_L0_resolvent(T, 0);
  CHECK(R.shape().logmax[0] == 1);
  // q^{L0} = 1 + N log q on the 2-dim block.
  CHECK(R.coeff(MonoKey{{0}, {0}}) == Matrix<Scalar>::identity(2));
  CHECK(R.coeff(MonoKey{{0}, {1}}) == mat({{0, 1}, {0, 0}}));
  CHECK_THROWS_AS(q_L0_resolvent(T, 0, 0L), SeriesError);
  auto ch = character(std::make_shared<ToyModule>(T), 0);
  CHECK(ch.coeff(MonoKey{{0}, {0}}) == 2);
  CHECK(ch.coeff(MonoKey{{0}, {1}}) == 0);
}

TEST_CASE("character of the vacuum Fock module is the partition function") {
  auto p = oracle::partition_numbers(10);
  auto ch = character(std::make_shared<FockTrunc>(10, Scalar(0)), 10);
  for (long n = 0; n <= 10; ++n) CHECK(ch.coeff(std::vector<long>{n}) == p[static_cast<std::size_t>(n)]);
}

TEST_CASE("momentum shifts the character by q^{lambda^2/2}") {
  Gen g(71);
  for (int rep = 0; rep < 5; ++rep) {
    Scalar lam = g.rational();
    auto ch = character(std::make_shared<FockTrunc>(6, lam), 6);
    auto base = character(std::make_shared<FockTrunc>(6, Scalar(0)), 6);
    CHECK(ch.shape().offset[0] == lam * lam / 2);
    CHECK(ch.terms() == base.terms());
    CHECK(character(std::make_shared<FockTrunc>(6, lam), 6, true) == base);
  }
}

TEST_CASE("sewing with retained slots") {
  Gen g(72);
  auto M = std::make_shared<FockTrunc>(3, Scalar(0));
  std::size_t d = M->dim();
  SewingBlock b({2}, {SewPair{M, "q"}});
  std::vector<std::vector<Scalar>> T(2, std::vector<Scalar>(d, Scalar(0)));
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t a = 0; a < d; ++a) {
      T[r][a] = g.rational();
      b.set({r, a, a}, T[r][a]);
    }
  Vec<Scalar> w{g.rational(), g.rational()};
  auto s = sew(b, {w}, 3);
  auto wt = M->weights();
  for (long n = 0; n <= 3; ++n) {
    Scalar expect = 0;
    for (std::size_t r = 0; r < 2; ++r)
      for (std::size_t a = 0; a < d; ++a)
        if (wt[a] == n) expect += w[r] * T[r][a];
    CHECK(s.coeff(std::vector<long>{n}) == expect);
  }
  // order 0 is the unsewn pairing against P(0)
  auto s0 = sew(b, {w}, 0);
  CHECK(s0.coeff(std::vector<long>{0}) == w[0] * T[0][0] + w[1] * T[1][0]);
}

TEST_CASE("sewing is linear in the block") {
  Gen g(73);
  auto M = std::make_shared<FockTrunc>(4, Scalar(1, 2));
  auto p = dual_pairing_block(M);
  SewingBlock q({}, {SewPair{M, "q"}});
  for (std::size_t a = 0; a < M->dim(); ++a) q.set({a, a}, g.rational());
  Scalar k = g.rational();
  CHECK(sew(p + q.scaled(k), {}, 4) == sew(p, {}, 4) + sew(q, {}, 4) * k);
}

TEST_CASE("two sewn pairs give a product of characters") {
  auto M1 = std::make_shared<FockTrunc>(4, Scalar(0));
  auto M2 = std::make_shared<FockTrunc>(4, Scalar(1));
  SewingBlock b({}, {SewPair{M1, "q1"}, SewPair{M2, "q2"}});
  for (std::size_t a = 0; a < M1->dim(); ++a)
    for (std::size_t c = 0; c < M2->dim(); ++c) b.set({a, a, c, c}, Scalar(1));
  auto s = sew(b, {}, 4);
  auto p = oracle::partition_numbers(4);
  for (long i = 0; i <= 4; ++i)
    for (long j = 0; j <= 4; ++j) CHECK(s.coeff(std::vector<long>{i, j}) == p[i] * p[j]);
  CHECK(s.shape().offset == std::vector<Scalar>{0, Scalar(1, 2)});
}

TEST_CASE("sewing beyond the truncation is a shortfall") {
  auto M = std::make_shared<FockTrunc>(3, Scalar(0));
  CHECK_THROWS_AS(character(M, 4), TruncationShortfall);
}

TEST_CASE("residue identity for the vacuum") {
  auto M = std::make_shared<FockTrunc>(6, Scalar(0));
  auto f = monomial(1, 2, 6);
  f.add(std::vector<long>{2, 2}, Scalar(3));
  auto sides = residue_identity_sides(vacuum(), f, M, 6);
  CHECK(sides.lhs == sides.rhs);
  auto R = q_L0_resolvent(*M, 6);
  // Y(1)_m vanishes unless m = -1, so only the diagonal part 3 xi^2 varpi^2 survives.
  for (long n = 0; n <= 6; ++n) {
    auto c = sides.lhs.coeff(std::vector<long>{n});
    if (n < 2)
      CHECK(c.rows() == 0);
    else
      CHECK(c == R.coeff(std::vector<long>{n - 2}) * Scalar(3));
  }
}

TEST_CASE("residue identity for omega and f = 1 gives L0 times the resolvent") {
  for (Scalar lam : {Scalar(0), Scalar(1, 3)}) {
    auto M = std::make_shared<FockTrunc>(6, lam);
    auto sides = residue_identity_sides(conformal_vector(), monomial(0, 0, 6), M, 6);
    auto R = q_L0_resolvent(*M, 6);
    auto L0R = R.map([&](const Matrix<Scalar>& m) { return Matrix<Scalar>(M->l0() * m); });
    CHECK(sides.lhs == L0R);
    CHECK(sides.rhs == L0R);
  }
}

TEST_CASE("residue identity on spanning states, three routes") {
  auto M = std::make_shared<FockTrunc>(6, Scalar(0));
  for (const auto& u : {FockVector::basis({1}), conformal_vector(), FockVector::basis({2, 1}), FockVector::basis({3})}) {
    auto rep = residue_identity_check(u, monomial(1, 1, 6), M, 6);
    CHECK(rep.ok);
    CHECK(rep.direct_ok);
    CHECK(rep.diagonal_ok);
    CHECK(rep.double_ok);
    CHECK(rep.verified_order == 6);
  }
}

TEST_CASE("residue identity with random f and momentum") {
  Gen g(74);
  auto M = std::make_shared<FockTrunc>(5, Scalar(2, 3));
  for (int rep = 0; rep < 4; ++rep) {
    TruncSeries<Scalar> f(SeriesShape::simple({"xi", "varpi"}, {5, 5}));
    for (int t = 0; t < 5; ++t) f.add(std::vector<long>{g.integer(0, 3), g.integer(0, 3)}, g.rational());
    CHECK(residue_identity_check(g.fock_vector(3), f, M, 5).ok);
  }
}

TEST_CASE("residue identity rejects short f") {
  auto M = std::make_shared<FockTrunc>(6, Scalar(0));
  CHECK_THROWS_AS(residue_identity_check(vacuum(), monomial(0, 0, 3), M, 6), SeriesError);
}

TEST_CASE("genus-0 invariance of the dual pairing") {
  auto M = std::make_shared<FockTrunc>(6, Scalar(0));
  for (const auto& v : {vacuum(), FockVector::basis({1}), conformal_vector()})
    for (long k = -2; k <= 2; ++k) CHECK(genus0_invariance_check(M, v, k).ok);
}

TEST_CASE("genus-0 invariance fails for a non-invariant pairing") {
  auto M = std::make_shared<FockTrunc>(4, Scalar(0));
  auto T = Matrix<Scalar>::identity(M->dim());
  auto w = M->weights();
  // rescale one weight-2 vector only
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] == 2) {
      T(i, i) = 3;
      break;
    }
  auto rep = genus0_invariance_check(M, FockVector::basis({1}), 1, T);
  CHECK_FALSE(rep.ok);
  CHECK_FALSE(rep.residual.is_zero_matrix());
}

TEST_CASE("genus-0 invariance for omega reduces to L_n transposes") {
  auto M = std::make_shared<FockTrunc>(6, Scalar(0));
  ContragredientTrunc D(M);
  for (long k = -2; k <= 2; ++k) {
    // X for omega equals -L'_{-n} with n = k - 1, and L'_m = L_{-m}^T.
    auto X = action_at_infinity(D, conformal_vector(), k);
    CHECK(X == M->L(k - 1).transpose() * Scalar(-1));
  }
}
