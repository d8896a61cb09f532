// sewkit command line: JSON in, JSON or CSV out.
//
// Exit status: 0 success, 1 identity check failed (report on the normal
// output), 2 usage or schema error, 3 truncation shortfall, 4 other
// mathematical error (for example a Fuchs recursion violation).

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <sstream>

#include "CLI11.hpp"
#include "sewkit/sewkit.hpp"

using namespace sewkit;

namespace {

struct Opts {
  long order = -1;
  std::uint64_t seed = Gen::kDefaultSeed;
  std::string format = "json";
  std::string input;
  std::string output;
};

struct Result {
  json doc;
  std::string csv;
  bool ok = true;
};

std::optional<json> read_input(const Opts& o, bool required) {
  if (o.input.empty()) {
    if (required) throw SchemaError("$", "this subcommand needs --input");
    return std::nullopt;
  }
  std::string text;
  if (o.input == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  } else {
    std::ifstream f(o.input);
    if (!f) throw SchemaError("$", "cannot read " + o.input);
    text.assign(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("$", std::string("not valid JSON: ") + e.what());
  }
}

long order_or(const Opts& o, long dflt) { return o.order < 0 ? dflt : o.order; }

Scalar scalar_opt(const std::string& s, const std::string& name) { return scalar_from_json(json(s), "--" + name); }

json labels_json(int N) {
  json a = json::array();
  for (const auto& p : basis_upto(N)) a.push_back(label(p));
  return a;
}

Result matrix_result(const Matrix<Scalar>& m, int N) {
  Result r;
  r.doc["weight_bound"] = N;
  r.doc["basis"] = labels_json(N);
  r.doc["matrix"] = to_json(m);
  r.csv = to_csv(m);
  return r;
}

/// Named pass/fail rows; the CSV form is one "check,ok" line each.
struct CheckList {
  json rows = json::array();
  json discrepancies = json::array();
  bool ok = true;

  void add(const std::string& name, bool pass, json detail = nullptr) {
    rows.push_back(json{{"check", name}, {"ok", pass}});
    if (!pass) {
      ok = false;
      json d{{"check", name}};
      if (!detail.is_null()) d["detail"] = std::move(detail);
      discrepancies.push_back(std::move(d));
    }
  }

  Result result(json head = json::object()) const {
    Result r;
    r.doc = std::move(head);
    r.doc["ok"] = ok;
    r.doc["checks"] = rows;
    r.doc["discrepancies"] = discrepancies;
    std::ostringstream s;
    s << "check,ok\n";
    for (const auto& row : rows) s << row["check"].get<std::string>() << "," << (row["ok"].get<bool>() ? 1 : 0) << "\n";
    r.csv = s.str();
    r.ok = ok;
    return r;
  }
};

// Columns of weight <= wmax agree.
bool equal_on_low(const Matrix<Scalar>& a, const Matrix<Scalar>& b, const std::vector<long>& w, long wmax) {
  for (std::size_t j = 0; j < a.cols(); ++j) {
    if (w[j] > wmax) continue;
    for (std::size_t i = 0; i < a.rows(); ++i)
      if (a(i, j) != b(i, j)) return false;
  }
  return true;
}

std::vector<FockVector> spanning_states(int wmax) {
  std::vector<FockVector> out;
  for (const auto& p : basis_upto(wmax)) out.push_back(FockVector::basis(p));
  return out;
}

// coord --------------------------------------------------------------------

Result coord_extract_c(const Opts& o) {
  auto in = read_input(o, false);
  CoordJet<Scalar> rho = in ? jet_from_json(*in, "$") : Gen(o.seed).jet(order_or(o, 6));
  if (in && o.order >= 0) rho = rho.truncated(o.order);
  auto e = extract_c(rho);
  Result r;
  r.doc["jet"] = to_json(rho);
  r.doc["c0"] = to_json(e.c0);
  json c = json::array();
  for (long n = 1; n <= e.max_n(); ++n) c.push_back(to_json(e.cn(n)));
  r.doc["c"] = c;
  if (rho.order() >= 3) r.doc["c2_formula"] = to_json(c2_formula(rho));
  std::ostringstream s;
  s << "n,c\n0," << to_string(e.c0) << "\n";
  for (long n = 1; n <= e.max_n(); ++n) s << n << "," << to_string(e.cn(n)) << "\n";
  r.csv = s.str();
  return r;
}

Result coord_u_op(const Opts& o) {
  auto in = read_input(o, false);
  int N = static_cast<int>(order_or(o, 4));
  Scalar lambda = 0;
  CoordJet<Scalar> rho;
  if (in) {
    rho = jet_from_json(*in, "$");
    if (in->is_object() && in->contains("momentum")) lambda = scalar_from_json((*in)["momentum"], "$.momentum");
  } else {
    rho = Gen(o.seed).jet(N + 1);
  }
  auto r = matrix_result(u_operator(rho, N, lambda), N);
  r.doc["jet"] = to_json(rho);
  return r;
}

json huang_mismatch(const std::string& alpha, const FockVector& v, const FockVector& w, const Discrepancy& d) {
  return json{{"alpha", alpha}, {"v", to_json(v)}, {"w", to_json(w)}, {"exponent", d.exponent}, {"lhs", to_json(d.lhs)}, {"rhs", to_json(d.rhs)}};
}

Result coord_check_huang(const Opts& o) {
  auto in = read_input(o, false);
  long lo = -4, hi = 6;
  Scalar lambda = 0;
  std::vector<FockVector> vs = spanning_states(3), ws = vs;
  struct Case {
    std::string name;
    CoordJet<Scalar> alpha;
    std::optional<Scalar> scale;
  };
  std::vector<Case> cases;
  auto make = [](std::vector<Scalar> lead, long K, bool geometric) {
    std::vector<Scalar> a(static_cast<std::size_t>(K), Scalar(0));
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = geometric ? Scalar(1) : (i < lead.size() ? lead[i] : Scalar(0));
    return CoordJet<Scalar>(std::move(a));
  };
  if (in) {
    const json& j = *in;
    if (j.contains("window")) {
      const json& wd = j["window"];
      if (!wd.is_array() || wd.size() != 2) throw SchemaError("$.window", "expected [lo, hi]");
      lo = long_from_json(wd[0], "$.window[0]");
      hi = long_from_json(wd[1], "$.window[1]");
    }
    if (j.contains("momentum")) lambda = scalar_from_json(j["momentum"], "$.momentum");
    if (j.contains("v")) vs = {fock_vector_from_json(j["v"], "$.v")};
    if (j.contains("w")) ws = {fock_vector_from_json(j["w"], "$.w")};
    const json& a = field(j, "alpha", "$");
    if (a.is_object() && a.contains("scale")) {
      Scalar s = scalar_from_json(a["scale"], "$.alpha.scale");
      cases.push_back({"scale " + to_string(s), make({s}, order_or(o, hi + 8), false), s});
    } else {
      cases.push_back({"input", jet_from_json(a, "$.alpha"), std::nullopt});
    }
  } else {
    long K = order_or(o, hi + 8);
    cases.push_back({"2z", make({Scalar(2)}, K, false), Scalar(2)});
    cases.push_back({"z+z^2", make({Scalar(1), Scalar(1)}, K, false), std::nullopt});
    cases.push_back({"z/(1-z)", make({}, K, true), std::nullopt});
  }
  CheckList checks;
  for (const auto& c : cases) {
    bool ok = true, sok = true;
    json bad = json::array();
    for (const auto& v : vs)
      for (const auto& w : ws) {
        auto rep = huang_conjugation_check(c.alpha, v, w, lo, hi, lambda);
        if (!rep.ok) {
          ok = false;
          for (const auto& d : rep.mismatches) bad.push_back(huang_mismatch(c.name, v, w, d));
        }
        if (c.scale) {
          auto srep = scaling_check(*c.scale, v, w, lo, hi, lambda);
          if (!srep.ok) {
            sok = false;
            for (const auto& d : srep.mismatches) bad.push_back(huang_mismatch(c.name + " scaling form", v, w, d));
          }
        }
      }
    checks.add("conjugation " + c.name, ok, ok ? json(nullptr) : bad);
    if (c.scale) checks.add("scaling form " + c.name, sok, sok ? json(nullptr) : bad);
  }
  return checks.result(json{{"window", {lo, hi}}, {"pairs", vs.size() * ws.size()}});
}

// voa ----------------------------------------------------------------------

Result voa_dump_mode(const Opts& o, const std::string& state, long mode, const std::string& momentum, bool dual) {
  auto in = read_input(o, false);
  int N = static_cast<int>(order_or(o, 4));
  FockVector v = fock_vector_from_json(json(state), "--state");
  Scalar lambda = scalar_opt(momentum, "momentum");
  if (in) {
    const json& j = *in;
    if (j.contains("state")) v = fock_vector_from_json(j["state"], "$.state");
    if (j.contains("mode")) mode = long_from_json(j["mode"], "$.mode");
    if (j.contains("momentum")) lambda = scalar_from_json(j["momentum"], "$.momentum");
    if (j.contains("dual")) dual = j["dual"].get<bool>();
  }
  auto r = matrix_result(dual ? contragredient_mode(v, mode, N, lambda) : vertex_mode(v, mode, N, lambda), N);
  r.doc["state"] = to_json(v);
  r.doc["mode"] = mode;
  r.doc["dual"] = dual;
  return r;
}

Result voa_check_relations(const Opts& o, const std::string& momentum) {
  int N = static_cast<int>(order_or(o, 8));
  Scalar lambda = scalar_opt(momentum, "momentum");
  BasisIndex B(N);
  auto w = B.weights();
  std::size_t n = B.dim();
  CheckList checks;
  auto id = Matrix<Scalar>::identity(n);
  bool heis = true;
  for (long a = -4; a <= 4; ++a)
    for (long b = -4; b <= 4; ++b) {
      auto am = heisenberg_mode(a, N, lambda), bm = heisenberg_mode(b, N, lambda);
      Matrix<Scalar> expect = a + b == 0 ? id * Scalar(a) : Matrix<Scalar>(n, n);
      if (!equal_on_low(am * bm - bm * am, expect, w, N - std::max(std::abs(a), std::abs(b)))) heis = false;
    }
  checks.add("heisenberg [a_m,a_n] = m delta", heis);
  bool vir = true;
  for (long a = -3; a <= 3; ++a)
    for (long b = -3; b <= 3; ++b) {
      auto la = sugawara_L(a, N, lambda), lb = sugawara_L(b, N, lambda);
      Matrix<Scalar> expect = sugawara_L(a + b, N, lambda) * Scalar(a - b);
      if (a + b == 0) expect += id * Scalar(Scalar(a * a * a - a) / 12);
      if (!equal_on_low(la * lb - lb * la, expect, w, N - std::max(std::abs(a), std::abs(b)))) vir = false;
    }
  checks.add("virasoro c=1", vir);
  bool agree = true;
  for (long m = -3; m <= 3; ++m)
    if (!(vertex_mode(conformal_vector(), m + 1, N, lambda) == sugawara_L(m, N, lambda))) agree = false;
  checks.add("Y(omega)_{n+1} = L_n", agree);
  FockModule V(0);
  checks.add("L_2 omega = 1/2 vacuum", V.L(2, conformal_vector()) == vacuum().scaled(Scalar(1, 2)));
  bool tr = true, gram = true;
  auto G = fock_gram(N);
  for (long m = -3; m <= 3; ++m) {
    if (!(contragredient_mode(conformal_vector(), m + 1, N, lambda) == sugawara_L(-m, N, lambda).transpose())) tr = false;
    if (!(sugawara_L(m, N, 0).transpose() * G == G * sugawara_L(-m, N, 0))) gram = false;
  }
  checks.add("contragredient L_n = L_{-n}^T", tr);
  checks.add("Fock form: L_n adjoint to L_{-n}", gram);
  return checks.result(json{{"weight_bound", N}, {"momentum", to_json(lambda)}});
}

// schwarz ------------------------------------------------------------------

Result schwarz_sd(const Opts& o) {
  auto in = read_input(o, false);
  Laurent<Scalar> s;
  if (in && in->is_object() && in->contains("vars")) {
    auto f = laurent_from_json(*in, "$");
    s = schwarzian(f, order_or(o, f.order() - 3));
  } else {
    CoordJet<Scalar> f = in ? jet_from_json(*in, "$") : Gen(o.seed).jet(order_or(o, 6) + 3);
    s = schwarzian(f, order_or(o, f.order() - 3));
  }
  auto series = laurent_to_series(s, "z");
  return Result{to_json(series), to_csv(series)};
}

Result schwarz_cocycle(const Opts& o) {
  auto in = read_input(o, false);
  CoordJet<Scalar> eta, mu, f;
  if (in) {
    eta = jet_from_json(field(*in, "eta", "$"), "$.eta");
    mu = jet_from_json(field(*in, "mu", "$"), "$.mu");
    f = jet_from_json(field(*in, "f", "$"), "$.f");
  } else {
    Gen g(o.seed);
    long K = order_or(o, 6);
    eta = g.jet(K);
    mu = g.jet(K);
    f = g.jet(K);
  }
  auto rep = cocycle_check(eta, mu, f);
  auto chain = chain_rule_check(eta, mu);
  CheckList checks;
  checks.add("antisymmetry", rep.antisymmetric);
  checks.add("three-term cocycle", rep.three_term);
  checks.add("chain rule", chain.ok, chain.ok ? json(nullptr) : json{{"lhs", to_json(chain.lhs, "z")}, {"rhs", to_json(chain.rhs, "z")}});
  return checks.result(json{{"eta", to_json(eta)},
                            {"mu", to_json(mu)},
                            {"f", to_json(f)},
                            {"S_mu_eta", to_json(rep.mu_eta, "z")},
                            {"S_eta_mu", to_json(rep.eta_mu, "z")},
                            {"S_mu_f", to_json(rep.mu_f, "z")},
                            {"S_f_eta", to_json(rep.f_eta, "z")}});
}

Result schwarz_term(const Opts& o) {
  auto b = projective_from_json(*read_input(o, true));
  long order = order_or(o, b.order);
  auto t = projective_term(b.pairs, b.points, b.c, order, b.qvars);
  Result r;
  r.doc["total"] = to_json(t.total);
  for (const auto& [name, v] : {std::pair{"A", &t.A}, std::pair{"B", &t.B}, std::pair{"C", &t.C}}) {
    json a = json::array();
    for (const auto& s : *v) a.push_back(to_json(s));
    r.doc[name] = a;
  }
  r.csv = to_csv(t.total);
  return r;
}

// sew ----------------------------------------------------------------------

Result sew_run(const Opts& o, bool normalized) {
  json j = *read_input(o, true);
  long order = order_or(o, j.contains("order") ? long_from_json(j["order"], "$.order") : 0);
  if (j.contains("normalized")) normalized = j["normalized"].get<bool>();
  std::optional<long> weight = j.contains("weight") ? std::optional<long>(long_from_json(j["weight"], "$.weight")) : std::optional<long>(order);
  SewingBlock b = block_from_json(field(j, "block", "$"), "$.block", weight);
  std::vector<Vec<Scalar>> w;
  if (j.contains("inputs")) {
    const json& ins = j["inputs"];
    if (!ins.is_array()) throw SchemaError("$.inputs", "expected an array of vectors");
    for (std::size_t i = 0; i < ins.size(); ++i) w.push_back(vec_from_json(ins[i], "$.inputs[" + std::to_string(i) + "]"));
  }
  auto s = sew(b, w, order, normalized);
  return Result{to_json(s), to_csv(s)};
}

Result sew_character(const Opts& o, const std::string& module, const std::string& momentum, bool normalized) {
  auto in = read_input(o, false);
  long order = order_or(o, 10);
  std::shared_ptr<const TruncModule> M;
  if (in) {
    M = module_from_json(*in, "$", order);
  } else {
    if (module != "fock") throw SchemaError("--module", "only 'fock' is built in; pass other modules with --input");
    M = std::make_shared<FockTrunc>(static_cast<int>(order), scalar_opt(momentum, "momentum"));
  }
  auto s = character(M, order, normalized);
  return Result{to_json(s), to_csv(s)};
}

TruncSeries<Scalar> monomial_f(long i, long j, long order) {
  TruncSeries<Scalar> f(SeriesShape::simple({"xi", "varpi"}, {std::max(order, i), std::max(order, j)}));
  f.add(std::vector<long>{i, j}, Scalar(1));
  return f;
}

Result sew_residue_check(const Opts& o) {
  auto in = read_input(o, false);
  long order = order_or(o, 6);
  std::vector<FockVector> us = spanning_states(3);
  std::vector<std::pair<std::string, TruncSeries<Scalar>>> fs;
  std::shared_ptr<const TruncModule> M;
  bool single = false;
  if (in) {
    const json& j = *in;
    if (j.contains("order") && o.order < 0) order = long_from_json(j["order"], "$.order");
    if (j.contains("u")) us = {fock_vector_from_json(j["u"], "$.u")};
    if (j.contains("f")) {
      const json& f = j["f"];
      if (f.is_object() && f.contains("vars")) {
        fs.push_back({"input", series_from_json<Scalar>(f, "$.f")});
      } else {
        long i = long_from_json(field(f, "i", "$.f"), "$.f.i"), k = long_from_json(field(f, "j", "$.f"), "$.f.j");
        fs.push_back({"xi^" + std::to_string(i) + " varpi^" + std::to_string(k), monomial_f(i, k, order)});
      }
    }
    if (j.contains("module")) M = module_from_json(j["module"], "$.module", order);
    single = us.size() == 1 && fs.size() == 1;
  }
  if (!M) M = std::make_shared<FockTrunc>(static_cast<int>(order), Scalar(0));
  if (fs.empty())
    for (long i = 0; i <= 3; ++i)
      for (long k = 0; k <= 3; ++k) fs.push_back({"xi^" + std::to_string(i) + " varpi^" + std::to_string(k), monomial_f(i, k, order)});
  CheckList checks;
  for (const auto& u : us)
    for (const auto& [name, f] : fs) {
      auto rep = residue_identity_check(u, f, M, order);
      json detail{{"direct", rep.direct_ok}, {"diagonal", rep.diagonal_ok}, {"double_series", rep.double_ok}, {"first_failure", rep.first_failure}};
      checks.add("u=" + to_string(u) + " f=" + name, rep.ok, detail);
    }
  Result r = checks.result(json{{"order", order}, {"module", M->describe()}});
  if (single) {
    auto sides = residue_identity_sides(us[0], fs[0].second, M, order);
    r.doc["lhs"] = to_json(sides.lhs);
    r.doc["rhs"] = to_json(sides.rhs);
  }
  return r;
}

Result sew_invariance(const Opts& o) {
  auto in = read_input(o, false);
  long N = order_or(o, 6);
  std::vector<FockVector> vs{vacuum(), FockVector::basis({1}), conformal_vector()};
  std::vector<long> ks{-2, -1, 0, 1, 2};
  std::shared_ptr<const TruncModule> M;
  if (in) {
    const json& j = *in;
    if (j.contains("v")) vs = {fock_vector_from_json(j["v"], "$.v")};
    if (j.contains("k")) ks = {long_from_json(j["k"], "$.k")};
    if (j.contains("module")) M = module_from_json(j["module"], "$.module", N);
  }
  if (!M) M = std::make_shared<FockTrunc>(static_cast<int>(N), Scalar(0));
  CheckList checks;
  for (const auto& v : vs)
    for (long k : ks) {
      auto rep = genus0_invariance_check(M, v, k);
      checks.add("v=" + to_string(v) + " k=" + std::to_string(k), rep.ok, rep.ok ? json(nullptr) : to_json(rep.residual));
    }
  return checks.result(json{{"weight_bound", M->N()}, {"module", M->describe()}});
}

// fuchs --------------------------------------------------------------------

json residual_json(const std::vector<TruncSeries<Vec<Scalar>>>& res) {
  json a = json::array();
  for (const auto& r : res) a.push_back(to_json(r));
  return a;
}

bool all_zero(const std::vector<TruncSeries<Vec<Scalar>>>& res) {
  return std::all_of(res.begin(), res.end(), [](const auto& r) { return r.is_zero_series(); });
}

Result fuchs_solve(const Opts& o) {
  auto in = fuchs_from_json(*read_input(o, true));
  long K = order_or(o, in.order);
  auto psi = solve_formal(in.system, in.seeds, K);
  Result r{to_json(psi), to_csv(psi, "psi")};
  r.ok = all_zero(residual(in.system, psi));
  return r;
}

Result fuchs_certify(const Opts& o, const std::string& r1s) {
  auto in = fuchs_from_json(*read_input(o, true));
  long K = order_or(o, in.order);
  auto psi = in.psi ? *in.psi : solve_formal(in.system, in.seeds, K);
  auto cert = certify(in.system, psi, scalar_opt(r1s, "r1"));
  Result r;
  r.doc = to_json(cert);
  std::ostringstream s;
  s << "n,scaled_norm,bound\n";
  for (std::size_t n = 0; n < cert.scaled_norms.size(); ++n)
    s << n << "," << to_string(cert.scaled_norms[n]) << "," << to_string(Scalar(cert.c * pow(cert.gamma, static_cast<long>(n)))) << "\n";
  r.csv = s.str();
  return r;
}

Result fuchs_residual(const Opts& o) {
  auto in = fuchs_from_json(*read_input(o, true));
  if (!in.psi) throw SchemaError("$.psi", "missing");
  auto res = residual(in.system, *in.psi);
  Result r;
  r.ok = all_zero(res);
  r.doc["ok"] = r.ok;
  r.doc["residual"] = residual_json(res);
  if (!res.empty()) r.csv = to_csv(res[0], "residual");
  return r;
}

// plumbing -------------------------------------------------------------------

void emit(const Opts& o, const std::string& name, const Result& r) {
  bool csv = o.format == "csv" && !r.csv.empty();
  std::string text = csv ? r.csv : r.doc.dump(2) + "\n";
  std::string path = o.output;
  if (path.empty())
    if (const char* dir = std::getenv("SEWKIT_OUT_DIR"); dir && *dir) path = (std::filesystem::path(dir) / (name + (csv ? ".csv" : ".json"))).string();
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

int fail(int code, const std::string& kind, const std::string& msg, const std::string& path = "") {
  json e{{"ok", false}, {"error", kind}, {"message", msg}};
  if (!path.empty()) e["path"] = path;
  std::cerr << e.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sewkit: exact computations for coordinate changes, Fock modules, sewing and Fuchsian recursions"};
  app.require_subcommand(1);
  Opts opts;
  std::function<Result()> run;
  std::string run_name;

  auto leaf = [&](CLI::App* group, const std::string& name, const std::string& help, auto body) {
    CLI::App* sub = group->add_subcommand(name, help);
    sub->add_option("--order", opts.order, "truncation order (meaning depends on the subcommand)");
    sub->add_option("--seed", opts.seed, "seed for generated inputs")->default_val(Gen::kDefaultSeed);
    sub->add_option("--format", opts.format, "output format")->check(CLI::IsMember({"json", "csv"}))->default_val("json");
    sub->add_option("--input", opts.input, "input JSON file, - for stdin");
    sub->add_option("--output", opts.output, "output file (default: stdout, or $SEWKIT_OUT_DIR)");
    std::string full = group->get_name() + "-" + name;
    sub->callback([&, body, full] {
      run_name = full;
      run = [&, body] { return body(opts); };
    });
    return sub;
  };

  auto* coord = app.add_subcommand("coord", "coordinate group")->require_subcommand(1);
  leaf(coord, "extract-c", "exponential coefficients of a jet", coord_extract_c);
  leaf(coord, "u-op", "matrix of U(rho) on the truncated vacuum module", coord_u_op);
  leaf(coord, "check-huang", "conjugation identity on a window of exponents", coord_check_huang);

  auto* voa = app.add_subcommand("voa", "Heisenberg vertex algebra")->require_subcommand(1);
  std::string state = "omega", momentum = "0";
  long mode = 0;
  bool dual = false;
  auto* dm = leaf(voa, "dump-mode", "matrix of a vertex operator mode", [&](const Opts& o) { return voa_dump_mode(o, state, mode, momentum, dual); });
  dm->add_option("--state", state, "vacuum, a or omega")->default_val("omega");
  dm->add_option("--mode", mode, "mode index m of Y(v)_m")->default_val(0);
  dm->add_option("--momentum", momentum, "Fock momentum")->default_val("0");
  dm->add_flag("--dual", dual, "mode on the contragredient module");
  auto* cr = leaf(voa, "check-relations", "Heisenberg and Virasoro relations", [&](const Opts& o) { return voa_check_relations(o, momentum); });
  cr->add_option("--momentum", momentum, "Fock momentum")->default_val("0");

  auto* sch = app.add_subcommand("schwarz", "Schwarzian derivatives")->require_subcommand(1);
  leaf(sch, "sd", "Schwarzian derivative of a jet or series", schwarz_sd);
  leaf(sch, "cocycle", "chain rule and cocycle identities", schwarz_cocycle);
  leaf(sch, "term", "projective correction series", schwarz_term);

  auto* sw = app.add_subcommand("sew", "sewing")->require_subcommand(1);
  bool normalized = false;
  std::string module = "fock";
  auto* sr = leaf(sw, "run", "sew a block along its pairs", [&](const Opts& o) { return sew_run(o, normalized); });
  sr->add_flag("--normalized", normalized, "use the normalized resolvent");
  auto* sc = leaf(sw, "character", "graded character of a module", [&](const Opts& o) { return sew_character(o, module, momentum, normalized); });
  sc->add_option("--module", module, "built-in module")->default_val("fock");
  sc->add_option("--momentum", momentum, "Fock momentum")->default_val("0");
  sc->add_flag("--normalized", normalized, "use the normalized resolvent");
  leaf(sw, "residue-check", "two-sided residue identity", sew_residue_check);
  leaf(sw, "invariance", "genus-0 invariance of the pairing", sew_invariance);

  auto* fu = app.add_subcommand("fuchs", "Fuchsian recursions")->require_subcommand(1);
  std::string r1 = "1/2";
  leaf(fu, "solve", "formal solution from seeds", fuchs_solve);
  auto* fc = leaf(fu, "certify", "coefficient bound certificate", [&](const Opts& o) { return fuchs_certify(o, r1); });
  fc->add_option("--r1", r1, "radius r1")->default_val("1/2");
  leaf(fu, "residual", "residual of a supplied solution", fuchs_residual);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    Result r = run();
    emit(opts, run_name, r);
    return r.ok ? 0 : 1;
  } catch (const SchemaError& e) {
    return fail(2, "schema", e.what(), e.path());
  } catch (const TruncationShortfall& e) {
    return fail(3, "truncation", e.what());
  } catch (const InsufficientOrder& e) {
    return fail(3, "truncation", e.what());
  } catch (const WindowError& e) {
    return fail(2, "window", e.what());
  } catch (const FuchsError& e) {
    json f{{"ok", false}, {"error", "fuchs"}, {"message", e.what()}, {"n", e.n()}};
    if (!e.l().empty()) f["l"] = e.l();
    std::cerr << f.dump() << "\n";
    return 4;
  } catch (const std::exception& e) {
    return fail(4, "math", e.what());
  }
}
