// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>

#include "oracles.hpp"
#include "sewkit/sewkit.hpp"

using namespace sewkit;

namespace {

struct Outcome {
  bool ok = true;
  std::string note;
  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      note = what;
    }
  }
};

Matrix<Scalar> power_L0(const Scalar& xi, int N) {
  auto w = BasisIndex(N).weights();
  Matrix<Scalar> d(w.size(), w.size());
  for (std::size_t i = 0; i < w.size(); ++i) d(i, i) = pow(xi, w[i]);
  return d;
}

bool equal_on_low(const Matrix<Scalar>& a, const Matrix<Scalar>& b, const std::vector<long>& w, long wmax) {
  for (std::size_t j = 0; j < a.cols(); ++j) {
    if (w[j] > wmax) continue;
    for (std::size_t i = 0; i < a.rows(); ++i)
      if (a(i, j) != b(i, j)) return false;
  }
  return true;
}

CoordJet<Scalar> jet_of(std::vector<Scalar> lead, long K, bool geometric) {
  std::vector<Scalar> a(static_cast<std::size_t>(K), Scalar(0));
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = geometric ? Scalar(1) : (i < lead.size() ? lead[i] : Scalar(0));
  return CoordJet<Scalar>(std::move(a));
}

CoordJet<Scalar> mobius(const Scalar& a, const Scalar& c, long K) {
  std::vector<Scalar> v;
  Scalar t = a;
  for (long n = 1; n <= K; ++n) {
    v.push_back(t);
    t *= -c;
  }
  return CoordJet<Scalar>(v);
}

std::vector<Scalar> coeffs(const Laurent<Scalar>& f, long K) {
  std::vector<Scalar> v;
  for (long e = 0; e <= K; ++e) v.push_back(f.coeff(e));
  return v;
}

TruncSeries<Scalar> monomial(long i, long j, long order) {
  TruncSeries<Scalar> f(SeriesShape::simple({"xi", "varpi"}, {order, order}));
  f.add(std::vector<long>{i, j}, Scalar(1));
  return f;
}

TruncSeries<Scalar> random_pair_series(Gen& g, long K) {
  TruncSeries<Scalar> a(SeriesShape::simple({"xi", "varpi"}, {K, K}));
  for (int t = 0; t < 12; ++t) a.add(std::vector<long>{g.integer(0, K), g.integer(0, K)}, g.rational());
  return a;
}

TruncSeries<Scalar> one_minus(const TruncSeries<Scalar>& a) {
  TruncSeries<Scalar> one(a.shape());
  one.add(std::vector<long>(a.nvars(), 0), Scalar(1));
  return one - a;
}

TruncSeries<Scalar> random_h(Gen& g, long K) {
  SeriesShape s = SeriesShape::simple({"eta", "q"}, {6, K});
  s.offset[0] = -3;
  TruncSeries<Scalar> h(s);
  for (int t = 0; t < 10; ++t) h.add(std::vector<long>{g.integer(0, 6), g.integer(0, K)}, g.rational());
  return h;
}

bool zero_residual(const FuchsSystem& sys, const TruncSeries<Vec<Scalar>>& psi) {
  for (const auto& r : residual(sys, psi))
    if (!r.is_zero_series()) return false;
  return true;
}

Seeds one_seed(long n, Vec<Scalar> v) { return {{MonoKey{{n}, {0}}, std::move(v)}}; }

std::string run_cli(const std::string& args, int& code) {
  std::string cmd = std::string(SEWKIT_CLI_PATH) + " " + args + " 2>/dev/null";
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) {
    code = -1;
    return out;
  }
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  int st = pclose(p);
  code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return out;
}

// criteria -------------------------------------------------------------------

Outcome group_law() {
  Outcome o;
  int N = 6;
  o.require(BasisIndex(N).dim() == 30, "W^{<=6} does not have dimension 30");
  Gen g(1001);
  for (int rep = 0; rep < 50; ++rep) {
    auto a = g.jet(8), b = g.jet(8);
    o.require(u_operator(compose(a, b), N) == u_operator(a, N) * u_operator(b, N), "U(a o b) != U(a) U(b) at draw " + std::to_string(rep));
  }
  return o;
}

Outcome triangular_solve() {
  Outcome o;
  Gen g(1002);
  for (int rep = 0; rep < 100; ++rep) {
    auto r = g.jet(8);
    auto e = extract_c(r);
    std::string at = " at draw " + std::to_string(rep);
    o.require(e.c0 == r.a(1), "c0 != a1" + at);
    o.require(e.cn(1) * e.c0 == r.a(2), "c1 c0 != a2" + at);
    o.require(e.cn(2) * e.c0 + e.cn(1) * e.cn(1) * e.c0 == r.a(3), "c2 c0 + c1^2 c0 != a3" + at);
    // rho'''/(6 rho') - (rho''/rho')^2 / 4 in terms of derivatives at 0
    Scalar d1 = r.a(1), d2 = 2 * r.a(2), d3 = 6 * r.a(3);
    Scalar closed = d3 / (6 * d1) - (d2 / d1) * (d2 / d1) / 4;
    o.require(e.cn(2) == closed, "c2 differs from the closed form" + at);
    o.require(c2_formula(r) == closed, "c2_formula differs from the closed form" + at);
  }
  return o;
}

Outcome gamma_conjugation() {
  Outcome o;
  int N = 6;
  for (Scalar xi : {Scalar(1), Scalar(2), Scalar(-3), Scalar(5, 7)}) {
    auto lhs = u_operator(gamma_xi(xi, N + 1), N) * power_L0(xi, N);
    auto rhs = power_L0(Scalar(1) / xi, N) * u_operator(gamma_xi(Scalar(1), N + 1), N);
    o.require(lhs == rhs, "fails for xi = " + to_string(xi));
  }
  return o;
}

Outcome huang() {
  Outcome o;
  long lo = -4, hi = 6, K = hi + 8;
  struct Case {
    std::string name;
    CoordJet<Scalar> alpha;
  };
  std::vector<Case> cases{{"2z", jet_of({Scalar(2)}, K, false)}, {"z+z^2", jet_of({Scalar(1), Scalar(1)}, K, false)}, {"z/(1-z)", jet_of({}, K, true)}};
  std::vector<FockVector> states;
  for (const auto& p : basis_upto(3)) states.push_back(FockVector::basis(p));
  states.push_back(conformal_vector());
  for (const auto& c : cases)
    for (const auto& v : states)
      for (const auto& w : states)
        o.require(huang_conjugation_check(c.alpha, v, w, lo, hi).ok, "alpha = " + c.name + ", v = " + to_string(v) + ", w = " + to_string(w));
  for (Scalar lam : {Scalar(2), Scalar(-1, 3)})
    for (const auto& v : states)
      for (const auto& w : states) {
        o.require(scaling_check(lam, v, w, lo, hi).ok, "scaling form fails for lambda = " + to_string(lam));
        o.require(huang_conjugation_check(jet_of({lam}, K, false), v, w, lo, hi).ok, "alpha = lambda z fails for lambda = " + to_string(lam));
      }
  return o;
}

Outcome relations() {
  Outcome o;
  int N = 8;
  auto w = BasisIndex(N).weights();
  auto id = Matrix<Scalar>::identity(w.size());
  for (long a = -4; a <= 4; ++a)
    for (long b = -4; b <= 4; ++b) {
      auto am = heisenberg_mode(a, N, 0), bm = heisenberg_mode(b, N, 0);
      Matrix<Scalar> expect = a + b == 0 ? id * Scalar(a) : Matrix<Scalar>(id.rows(), id.cols());
      o.require(equal_on_low(am * bm - bm * am, expect, w, N - std::max(std::abs(a), std::abs(b))),
                "[a_" + std::to_string(a) + ", a_" + std::to_string(b) + "]");
    }
  for (long a = -3; a <= 3; ++a)
    for (long b = -3; b <= 3; ++b) {
      auto la = sugawara_L(a, N, 0), lb = sugawara_L(b, N, 0);
      Matrix<Scalar> expect = sugawara_L(a + b, N, 0) * Scalar(a - b);
      if (a + b == 0) expect += id * Scalar(Scalar(a * a * a - a) / 12);
      o.require(equal_on_low(la * lb - lb * la, expect, w, N - std::max(std::abs(a), std::abs(b))),
                "[L_" + std::to_string(a) + ", L_" + std::to_string(b) + "]");
    }
  o.require(FockModule(0).L(2, conformal_vector()) == vacuum().scaled(Scalar(1, 2)), "L_2 omega != 1/2 vacuum");
  int M = 6;
  auto G = fock_gram(M);
  for (long n = -3; n <= 3; ++n) {
    o.require(sugawara_L(n, M, 0).transpose() * G == G * sugawara_L(-n, M, 0), "L_n not adjoint to L_{-n}, n = " + std::to_string(n));
    o.require(contragredient_mode(conformal_vector(), n + 1, M) == sugawara_L(-n, M, 0).transpose(), "contragredient L_n != L_{-n}^T");
  }
  return o;
}

Outcome schwarzian_suite() {
  Outcome o;
  Gen g(1006);
  for (int rep = 0; rep < 20; ++rep) o.require(is_zero(schwarzian(mobius(g.nonzero_rational(), g.rational(), 9))), "Mobius Schwarzian nonzero");
  for (int rep = 0; rep < 20; ++rep) {
    o.require(chain_rule_check(g.jet(6), g.jet(6)).ok, "chain rule");
    o.require(cocycle_check(g.jet(6), g.jet(6), g.jet(6)).ok(), "cocycle");
  }
  for (int rep = 0; rep < 20; ++rep) {
    auto r = g.jet(8);
    auto a = vir_transition(r, Scalar(1)), b = vir_transition_via_u(r);
    long K = std::min(a.shift.order(), b.shift.order());
    o.require(K >= 3, "vir_transition compared on too few orders");
    o.require(coeffs(a.shift, K) == coeffs(b.shift, K), "shift differs from U acting on omega");
    o.require(coeffs(a.scale, K) == coeffs(b.scale, K), "scale differs from U acting on omega");
  }
  return o;
}

Outcome sewing_character() {
  Outcome o;
  auto M = std::make_shared<FockTrunc>(10, Scalar(0));
  auto ch = sew(dual_pairing_block(M), {}, 10);
  auto p = oracle::partition_numbers(10);
  std::vector<long> expect{1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42};
  o.require(p == expect, "partition oracle disagrees with the listed values");
  for (long n = 0; n <= 10; ++n) o.require(ch.coeff(std::vector<long>{n}) == expect[static_cast<std::size_t>(n)], "q^" + std::to_string(n));
  o.require(ch.shape().offset[0] == 0, "vacuum character has an offset");
  Gen g(1007);
  for (int rep = 0; rep < 5; ++rep) {
    Scalar lam = g.rational();
    auto Ml = std::make_shared<FockTrunc>(10, lam);
    auto cl = sew(dual_pairing_block(Ml), {}, 10);
    o.require(cl.shape().offset[0] == lam * lam / 2, "offset is not lambda^2/2 for lambda = " + to_string(lam));
    o.require(cl.terms() == ch.terms(), "shifted character differs for lambda = " + to_string(lam));
  }
  return o;
}

Outcome residue_identity() {
  Outcome o;
  long order = 6;
  auto M = std::make_shared<FockTrunc>(static_cast<int>(order), Scalar(0));
  std::vector<FockVector> us;
  for (const auto& p : basis_upto(3)) us.push_back(FockVector::basis(p));
  us.push_back(conformal_vector());
  for (const auto& u : us)
    for (long i = 0; i <= 3; ++i)
      for (long j = 0; j <= 3; ++j) {
        auto rep = residue_identity_check(u, monomial(i, j, order), M, order);
        o.require(rep.ok && rep.verified_order == order, "u = " + to_string(u) + ", f = xi^" + std::to_string(i) + " varpi^" + std::to_string(j));
      }
  auto sides = residue_identity_sides(conformal_vector(), monomial(0, 0, order), M, order);
  auto R = q_L0_resolvent(*M, order);
  auto L0R = R.map([&](const Matrix<Scalar>& m) { return Matrix<Scalar>(M->l0() * m); });
  o.require(sides.lhs == L0R && sides.rhs == L0R, "u = omega, f = 1 is not L0 q^L0");
  return o;
}

Outcome invariance() {
  Outcome o;
  auto M = std::make_shared<FockTrunc>(6, Scalar(0));
  for (const auto& v : {vacuum(), FockVector::basis({1}), conformal_vector()})
    for (long k = -2; k <= 2; ++k) {
      auto rep = genus0_invariance_check(M, v, k);
      o.require(rep.ok && rep.residual.is_zero_matrix(), "v = " + to_string(v) + ", k = " + std::to_string(k));
    }
  return o;
}

Outcome fuchs() {
  Outcome o;
  Matrix<Scalar> z1(1, 1), z2(2, 2), two(1, 1), nil(2, 2), one(1, 1);
  two(0, 0) = 2;
  nil(0, 1) = 1;
  one(0, 0) = 1;

  auto s1 = make_system({z1, z1}, {Vec<Scalar>{0}, Vec<Scalar>{1}});
  auto p1 = solve_formal(s1, one_seed(0, {0}), 1);
  o.require(p1.terms().size() == 1 && p1.coeff(std::vector<long>{1}) == Vec<Scalar>{1}, "A = 0, omega = q does not give q");
  o.require(zero_residual(s1, p1), "residual of q");

  auto s2 = make_system({two, z1, z1, z1}, {Vec<Scalar>{0}});
  auto p2 = solve_formal(s2, one_seed(2, {1}), 3);
  o.require(p2.terms().size() == 1 && p2.coeff(std::vector<long>{2}) == Vec<Scalar>{1}, "A = 2 does not give q^2");
  o.require(zero_residual(s2, p2), "residual of q^2");

  auto s3 = make_system({nil, z2, z2, z2}, {Vec<Scalar>{0, 0}}, 1);
  auto p3 = solve_formal(s3, one_seed(0, {1, 1}), 3);
  o.require(p3.terms().size() == 2 && p3.coeff(MonoKey{{0}, {0}}) == Vec<Scalar>{1, 1} && p3.coeff(MonoKey{{0}, {1}}) == Vec<Scalar>{1, 0},
            "nilpotent case does not give (1 + log q, 1)");
  o.require(zero_residual(s3, p3), "residual of the log solution");

  std::vector<Matrix<Scalar>> A(31, z1);
  A[1] = one;
  auto se = make_system(A, {Vec<Scalar>{0}});
  se.tail = TailBound{0, 0};
  auto pe = solve_formal(se, one_seed(0, {1}), 30);
  Scalar r1(1, 2);
  auto cert = certify(se, pe, r1);
  o.require(cert.verified_upto == 30, "certificate does not reach n = 30");
  o.require(cert.r0 > 0 && cert.r0 * cert.gamma < r1, "r0 not inside r1 / gamma");
  Scalar f = 1;
  for (long n = 0; n <= 30; ++n) {
    if (n) f /= n;
    o.require(pe.coeff(std::vector<long>{n}) == Vec<Scalar>{f}, "psi_n != 1/n! at n = " + std::to_string(n));
    o.require(f <= cert.c * pow(cert.gamma, n) / pow(r1, n), "bound fails at n = " + std::to_string(n));
  }
  o.require(recheck(cert, pe), "stored certificate does not recheck");

  auto bad = pe;
  bad.add(std::vector<long>{7}, Vec<Scalar>{Scalar(1, 100)});
  long located = -1;
  try {
    certify(se, bad, r1);
  } catch (const FuchsError& e) {
    located = e.n().empty() ? -1 : e.n()[0];
  }
  o.require(located == 7, "perturbed psi_7 not rejected at n = 7 (got " + std::to_string(located) + ")");
  return o;
}

Outcome projective() {
  Outcome o;
  Gen g(1011);
  for (int rep = 0; rep < 20; ++rep) {
    auto a = random_pair_series(g, 6);
    std::vector<Laurent<Scalar>> se{g.series(8), g.series(8)};
    std::vector<TruncSeries<Scalar>> hs{random_h(g, 6), random_h(g, 6)};
    auto sx = g.series(6), sp = g.series(6);
    Scalar c = g.rational();
    auto t = projective_term(sx, sp, se, a, one_minus(a), hs, c, 6);
    o.require(t.total == oracle::projective(sx, sp, se, a, one_minus(a), hs, c, 6), "oracle mismatch at draw " + std::to_string(rep));
  }
  for (int rep = 0; rep < 10; ++rep) {
    auto a = random_pair_series(g, 6);
    auto h = random_h(g, 6);
    auto x1 = g.series(6), x2 = g.series(6), p1 = g.series(6), p2 = g.series(6), e1 = g.series(8), e2 = g.series(8);
    Scalar k = g.rational();
    auto t1 = projective_term(x1, p1, {e1}, a, one_minus(a), {h}, Scalar(1), 6);
    auto t2 = projective_term(x2, p2, {e2}, a, one_minus(a), {h}, Scalar(1), 6);
    auto t = projective_term(x1 + x2 * k, p1 + p2 * k, {e1 + e2 * k}, a, one_minus(a), {h}, Scalar(1), 6);
    o.require(t.total == t1.total + t2.total * k, "not linear at draw " + std::to_string(rep));
    auto zero = Laurent<Scalar>::big_o(6);
    auto v = projective_term(zero, zero, {Laurent<Scalar>::big_o(8)}, a, one_minus(a), {h}, g.rational(), 6);
    o.require(v.total.is_zero_series(), "does not vanish in one projective chart");
  }
  return o;
}

Outcome determinism() {
  Outcome o;
  auto dir = std::filesystem::temp_directory_path() / ("sewkit_acceptance_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  auto input = dir / "exp.json";
  std::ofstream(input) << R"({"A": [[["0"]], [["1"]]], "seeds": [{"n": 0, "v": ["1"]}], "order": 12})";
  std::vector<std::string> runs{"coord extract-c --seed 5",
                                "coord u-op --seed 5 --order 4",
                                "schwarz sd --seed 5",
                                "schwarz cocycle --seed 5",
                                "sew character --order 10 --format csv",
                                "voa dump-mode --state omega --mode 1 --order 4",
                                "fuchs solve --input " + input.string(),
                                "fuchs certify --input " + input.string() + " --format csv"};
  for (const auto& args : runs) {
    int c1 = 0, c2 = 0;
    auto a = run_cli(args, c1), b = run_cli(args, c2);
    o.require(c1 == 0 && c2 == 0, "'" + args + "' exited with " + std::to_string(c1));
    o.require(!a.empty() && a == b, "'" + args + "' output differs between runs");
  }
  std::filesystem::remove_all(dir);
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  std::vector<Criterion> all{{1, "group-law", group_law},
                             {2, "triangular-solve", triangular_solve},
                             {3, "gamma-conjugation", gamma_conjugation},
                             {4, "huang-conjugation", huang},
                             {5, "algebra-relations", relations},
                             {6, "schwarzian-suite", schwarzian_suite},
                             {7, "sewing-character", sewing_character},
                             {8, "residue-identity", residue_identity},
                             {9, "genus0-invariance", invariance},
                             {10, "fuchs-solver", fuchs},
                             {11, "projective-term", projective},
                             {12, "cli-determinism", determinism}};
  int failed = 0;
  for (const auto& c : all) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.note = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %2d %-18s %6.2fs%s%s\n", o.ok ? "PASS" : "FAIL", c.id, c.name, secs, o.ok ? "" : "  ", o.note.c_str());
    std::fflush(stdout);
    if (!o.ok) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
  return failed ? 1 : 0;
}
