#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "sewkit/fuchs.hpp"
#include "sewkit/module.hpp"
#include "sewkit/schwarzian.hpp"
#include "sewkit/series_json.hpp"
#include "sewkit/sewing.hpp"

namespace sewkit {

/// {"type": "fock", "momentum": "p/q", "weight": N}
/// {"type": "toy", "offset": "p/q", "blocks": [matrix, ...]}
/// {"type": "dual", "of": module}
inline std::shared_ptr<const TruncModule> module_from_json(const json& j, const std::string& path, std::optional<long> weight = std::nullopt) {
  std::string type = string_from_json(field(j, "type", path), path + ".type");
  if (type == "fock") {
    Scalar lam = j.contains("momentum") ? scalar_from_json(j["momentum"], path + ".momentum") : Scalar(0);
    long N = j.contains("weight") ? long_from_json(j["weight"], path + ".weight") : weight.value_or(-1);
    if (N < 0) throw SchemaError(path + ".weight", "missing truncation weight");
    return std::make_shared<FockTrunc>(static_cast<int>(N), lam);
  }
  if (type == "toy") {
    Scalar off = j.contains("offset") ? scalar_from_json(j["offset"], path + ".offset") : Scalar(0);
    const json& b = field(j, "blocks", path);
    if (!b.is_array()) throw SchemaError(path + ".blocks", "expected an array of square matrices");
    std::vector<Matrix<Scalar>> blocks;
    for (std::size_t i = 0; i < b.size(); ++i) blocks.push_back(matrix_from_json(b[i], path + ".blocks[" + std::to_string(i) + "]"));
    try {
      return std::make_shared<ToyModule>(off, std::move(blocks));
    } catch (const std::invalid_argument& e) {
      throw SchemaError(path + ".blocks", e.what());
    }
  }
  if (type == "dual") return std::make_shared<ContragredientTrunc>(module_from_json(field(j, "of", path), path + ".of", weight));
  throw SchemaError(path + ".type", "unknown module type '" + type + "'");
}

/// {"retained": [dims], "pairs": [{"module": ..., "var": "q"}],
///  "table": "dual_pairing" | [{"k": [indices], "c": "p/q"}]}
inline SewingBlock block_from_json(const json& j, const std::string& path, std::optional<long> weight = std::nullopt) {
  std::vector<std::size_t> dims;
  if (j.contains("retained")) {
    const json& r = j["retained"];
    if (!r.is_array()) throw SchemaError(path + ".retained", "expected an array of dimensions");
    for (std::size_t i = 0; i < r.size(); ++i) {
      long d = long_from_json(r[i], path + ".retained[" + std::to_string(i) + "]");
      if (d < 0) throw SchemaError(path + ".retained[" + std::to_string(i) + "]", "negative dimension");
      dims.push_back(static_cast<std::size_t>(d));
    }
  }
  const json& ps = field(j, "pairs", path);
  if (!ps.is_array() || ps.empty()) throw SchemaError(path + ".pairs", "expected a nonempty array");
  std::vector<SewPair> pairs;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    std::string p = path + ".pairs[" + std::to_string(i) + "]";
    SewPair sp;
    sp.module = module_from_json(field(ps[i], "module", p), p + ".module", weight);
    sp.var = ps[i].contains("var") ? string_from_json(ps[i]["var"], p + ".var") : (ps.size() == 1 ? "q" : "q" + std::to_string(i + 1));
    pairs.push_back(sp);
  }
  SewingBlock b(dims, pairs);
  const json& t = field(j, "table", path);
  if (t.is_string()) {
    if (t.get<std::string>() != "dual_pairing" || !dims.empty() || pairs.size() != 1)
      throw SchemaError(path + ".table", "the only named table is \"dual_pairing\" on a single pair with no retained slots");
    return dual_pairing_block(pairs[0].module, pairs[0].var);
  }
  if (!t.is_array()) throw SchemaError(path + ".table", "expected \"dual_pairing\" or an array of entries");
  for (std::size_t i = 0; i < t.size(); ++i) {
    std::string p = path + ".table[" + std::to_string(i) + "]";
    const json& k = field(t[i], "k", p);
    if (!k.is_array()) throw SchemaError(p + ".k", "expected an index array");
    std::vector<std::size_t> key;
    for (std::size_t m = 0; m < k.size(); ++m) {
      long x = long_from_json(k[m], p + ".k[" + std::to_string(m) + "]");
      if (x < 0) throw SchemaError(p + ".k", "negative index");
      key.push_back(static_cast<std::size_t>(x));
    }
    try {
      b.set(key, scalar_from_json(field(t[i], "c", p), p + ".c"));
    } catch (const std::logic_error& e) {
      throw SchemaError(p, e.what());
    }
  }
  return b;
}

// Fuchs systems -------------------------------------------------------------

/// A matrix or vector entry is a rational, or a polynomial in the parameters
/// [{"c": "p/q", "pow": {"t": 2}}, ...] evaluated at the point "tau".
inline Scalar entry_from_json(const json& j, const std::string& path, const std::map<std::string, Scalar>& tau) {
  if (!j.is_array()) return scalar_from_json(j, path);
  Scalar s = 0;
  for (std::size_t i = 0; i < j.size(); ++i) {
    std::string p = path + "[" + std::to_string(i) + "]";
    Scalar t = scalar_from_json(field(j[i], "c", p), p + ".c");
    if (j[i].contains("pow")) {
      const json& pw = j[i]["pow"];
      if (!pw.is_object()) throw SchemaError(p + ".pow", "expected an object of exponents");
      for (auto it = pw.begin(); it != pw.end(); ++it) {
        auto v = tau.find(it.key());
        if (v == tau.end()) throw SchemaError(p + ".pow." + it.key(), "parameter has no value in \"tau\"");
        long e = long_from_json(it.value(), p + ".pow." + it.key());
        if (e < 0) throw SchemaError(p + ".pow." + it.key(), "negative exponent");
        t *= pow(v->second, e);
      }
    }
    s += t;
  }
  return s;
}

inline Matrix<Scalar> param_matrix(const json& j, const std::string& path, const std::map<std::string, Scalar>& tau) {
  if (!j.is_array()) throw SchemaError(path, "expected an array of rows");
  std::size_t rows = j.size(), cols = rows && j[0].is_array() ? j[0].size() : 0;
  Matrix<Scalar> m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    std::string p = path + "[" + std::to_string(i) + "]";
    if (!j[i].is_array() || j[i].size() != cols) throw SchemaError(p, "rows must be arrays of equal length");
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = entry_from_json(j[i][k], p + "[" + std::to_string(k) + "]", tau);
  }
  return m;
}

inline Vec<Scalar> param_vector(const json& j, const std::string& path, const std::map<std::string, Scalar>& tau) {
  if (!j.is_array()) throw SchemaError(path, "expected an array");
  Vec<Scalar> v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(entry_from_json(j[i], path + "[" + std::to_string(i) + "]", tau));
  return v;
}

struct FuchsInput {
  FuchsSystem system;
  Seeds seeds;
  long order = 0;
  std::optional<TruncSeries<Vec<Scalar>>> psi;
};

/// Single variable: {"A": [A_0, A_1, ...], "omega": [w_0, ...]} with dense
/// matrices and vectors. Several variables: {"vars": [...], "A": [series, ...],
/// "omega": [series, ...]} with one series per variable. Common keys: "dim",
/// "logmax", "tail": {"C", "a"}, "seeds": [{"n", "l", "v"}], "order", "tau",
/// and optionally "psi" (a solution series).
inline FuchsInput fuchs_from_json(const json& j, const std::string& path = "$") {
  if (!j.is_object() || j.empty()) throw SchemaError(path, "expected a Fuchs system object");
  std::map<std::string, Scalar> tau;
  if (j.contains("tau")) {
    if (!j["tau"].is_object()) throw SchemaError(path + ".tau", "expected an object of parameter values");
    for (auto it = j["tau"].begin(); it != j["tau"].end(); ++it) tau[it.key()] = scalar_from_json(it.value(), path + ".tau." + it.key());
  }
  FuchsInput in;
  FuchsSystem& s = in.system;
  const json& A = field(j, "A", path);
  if (!A.is_array() || A.empty()) throw SchemaError(path + ".A", "expected a nonempty array");
  bool multi = A[0].is_object();
  if (!multi) {
    s.vars = {j.contains("vars") ? string_from_json(j["vars"][0], path + ".vars[0]") : std::string("q")};
    std::vector<Matrix<Scalar>> As;
    for (std::size_t n = 0; n < A.size(); ++n) As.push_back(param_matrix(A[n], path + ".A[" + std::to_string(n) + "]", tau));
    s.dim = As[0].rows();
    std::vector<Vec<Scalar>> ws;
    if (j.contains("omega")) {
      const json& w = j["omega"];
      if (!w.is_array()) throw SchemaError(path + ".omega", "expected an array of vectors");
      for (std::size_t n = 0; n < w.size(); ++n) ws.push_back(param_vector(w[n], path + ".omega[" + std::to_string(n) + "]", tau));
    }
    for (std::size_t n = 0; n < As.size(); ++n)
      if (As[n].rows() != s.dim || As[n].cols() != s.dim) throw SchemaError(path + ".A[" + std::to_string(n) + "]", "expected a square matrix of size " + std::to_string(s.dim));
    for (std::size_t n = 0; n < ws.size(); ++n)
      if (ws[n].size() != s.dim) throw SchemaError(path + ".omega[" + std::to_string(n) + "]", "expected a vector of size " + std::to_string(s.dim));
    // Dense lists are polynomials: known through the requested order unless
    // "known" says otherwise.
    long K = std::max<long>(static_cast<long>(std::max(A.size(), ws.size())) - 1,
                            j.contains("order") ? long_from_json(j["order"], path + ".order") : 0);
    if (j.contains("known")) K = long_from_json(j["known"], path + ".known");
    TruncSeries<Matrix<Scalar>> a(SeriesShape::simple(s.vars, {K}));
    TruncSeries<Vec<Scalar>> w(SeriesShape::simple(s.vars, {K}));
    for (std::size_t n = 0; n < As.size() && static_cast<long>(n) <= K; ++n)
      a.add(std::vector<long>{static_cast<long>(n)}, As[n]);
    for (std::size_t n = 0; n < ws.size() && static_cast<long>(n) <= K; ++n)
      w.add(std::vector<long>{static_cast<long>(n)}, ws[n]);
    s.A = {a};
    s.omega = {w};
    if (!j.contains("known")) s.tail = TailBound{Scalar(0), Scalar(0)};
  } else {
    const json& vars = field(j, "vars", path);
    if (!vars.is_array() || vars.size() != A.size()) throw SchemaError(path + ".vars", "expected one variable per A series");
    for (std::size_t k = 0; k < vars.size(); ++k) s.vars.push_back(string_from_json(vars[k], path + ".vars[" + std::to_string(k) + "]"));
    const json& W = field(j, "omega", path);
    if (!W.is_array() || W.size() != A.size()) throw SchemaError(path + ".omega", "expected one omega series per variable");
    for (std::size_t k = 0; k < A.size(); ++k) {
      s.A.push_back(series_from_json<Matrix<Scalar>>(A[k], path + ".A[" + std::to_string(k) + "]"));
      s.omega.push_back(series_from_json<Vec<Scalar>>(W[k], path + ".omega[" + std::to_string(k) + "]"));
    }
    s.dim = static_cast<std::size_t>(long_from_json(field(j, "dim", path), path + ".dim"));
  }
  if (j.contains("dim") && static_cast<std::size_t>(long_from_json(j["dim"], path + ".dim")) != s.dim) throw SchemaError(path + ".dim", "does not match the matrices");
  s.logmax.assign(s.vars.size(), 0);
  if (j.contains("logmax")) {
    const json& lm = j["logmax"];
    if (lm.is_number_integer()) {
      s.logmax.assign(s.vars.size(), lm.get<long>());
    } else {
      if (!lm.is_array() || lm.size() != s.vars.size()) throw SchemaError(path + ".logmax", "expected one bound per variable");
      for (std::size_t k = 0; k < lm.size(); ++k) s.logmax[k] = long_from_json(lm[k], path + ".logmax[" + std::to_string(k) + "]");
    }
  }
  if (j.contains("tail")) s.tail = TailBound{scalar_from_json(field(j["tail"], "C", path + ".tail"), path + ".tail.C"),
                                             scalar_from_json(field(j["tail"], "a", path + ".tail"), path + ".tail.a")};
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw SchemaError(path, e.what());
  }
  if (j.contains("seeds")) {
    const json& sd = j["seeds"];
    if (!sd.is_array()) throw SchemaError(path + ".seeds", "expected an array of {n, l, v}");
    for (std::size_t i = 0; i < sd.size(); ++i) {
      std::string p = path + ".seeds[" + std::to_string(i) + "]";
      MonoKey k;
      const json& n = field(sd[i], "n", p);
      if (n.is_number_integer()) {
        k.n = {n.get<long>()};
      } else {
        if (!n.is_array()) throw SchemaError(p + ".n", "expected an index");
        for (std::size_t t = 0; t < n.size(); ++t) k.n.push_back(long_from_json(n[t], p + ".n"));
      }
      if (sd[i].contains("l")) {
        const json& l = sd[i]["l"];
        if (l.is_number_integer()) {
          k.l = {l.get<long>()};
        } else {
          if (!l.is_array()) throw SchemaError(p + ".l", "expected a log index");
          for (std::size_t t = 0; t < l.size(); ++t) k.l.push_back(long_from_json(l[t], p + ".l"));
        }
      } else {
        k.l.assign(s.vars.size(), 0);
      }
      if (k.n.size() != s.vars.size() || k.l.size() != s.vars.size()) throw SchemaError(p, "index has the wrong number of variables");
      Vec<Scalar> v = param_vector(field(sd[i], "v", p), p + ".v", tau);
      if (v.size() != s.dim) throw SchemaError(p + ".v", "expected a vector of size " + std::to_string(s.dim));
      in.seeds[k] = v;
    }
  }
  in.order = j.contains("order") ? long_from_json(j["order"], path + ".order") : s.known_order();
  if (j.contains("psi")) in.psi = series_from_json<Vec<Scalar>>(j["psi"], path + ".psi");
  return in;
}

inline json to_json(const Certificate& c) {
  json j;
  j["r1"] = to_json(c.r1);
  j["alpha"] = to_json(c.alpha);
  j["B"] = to_json(c.B);
  j["beta"] = to_json(c.beta);
  j["gamma"] = to_json(c.gamma);
  j["c"] = to_json(c.c);
  j["r0"] = to_json(c.r0);
  j["n_star"] = c.n_star;
  j["base_cases"] = c.base_cases;
  j["homogeneous"] = c.homogeneous;
  j["verified_upto"] = c.verified_upto;
  json s = json::array();
  for (const auto& x : c.scaled_norms) s.push_back(to_json(x));
  j["scaled_norms"] = s;
  return j;
}

// Projective term bundles ---------------------------------------------------

struct ProjectiveBundle {
  std::vector<ProjectivePair> pairs;
  std::vector<ProjectivePoint> points;
  std::vector<std::string> qvars;
  Scalar c;
  long order = 0;
};

/// Single pair: {"S_xi", "S_pi", "S_eta": [...], "a", "b", "h": [...], "c", "order"}.
/// Several pairs: {"pairs": [{"S_xi", "S_pi", "a", "b"}], "points": [{"S_eta", "h"}],
/// "qvars": [...], "c", "order"}. Schwarzian data are one-variable series.
inline ProjectiveBundle projective_from_json(const json& j, const std::string& path = "$") {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  ProjectiveBundle b;
  b.c = scalar_from_json(field(j, "c", path), path + ".c");
  b.order = long_from_json(field(j, "order", path), path + ".order");
  auto pair_from = [&](const json& o, const std::string& p) {
    return ProjectivePair{laurent_from_json(field(o, "S_xi", p), p + ".S_xi"), laurent_from_json(field(o, "S_pi", p), p + ".S_pi"),
                          series_from_json<Scalar>(field(o, "a", p), p + ".a"), series_from_json<Scalar>(field(o, "b", p), p + ".b")};
  };
  if (j.contains("pairs")) {
    const json& ps = j["pairs"];
    if (!ps.is_array()) throw SchemaError(path + ".pairs", "expected an array");
    for (std::size_t i = 0; i < ps.size(); ++i) b.pairs.push_back(pair_from(ps[i], path + ".pairs[" + std::to_string(i) + "]"));
    if (j.contains("points")) {
      const json& pts = j["points"];
      if (!pts.is_array()) throw SchemaError(path + ".points", "expected an array");
      for (std::size_t i = 0; i < pts.size(); ++i) {
        std::string p = path + ".points[" + std::to_string(i) + "]";
        b.points.push_back({laurent_from_json(field(pts[i], "S_eta", p), p + ".S_eta"), series_from_json<Scalar>(field(pts[i], "h", p), p + ".h")});
      }
    }
    if (j.contains("qvars"))
      for (std::size_t i = 0; i < j["qvars"].size(); ++i) b.qvars.push_back(string_from_json(j["qvars"][i], path + ".qvars"));
  } else {
    b.pairs.push_back(pair_from(j, path));
    b.qvars = {"q"};
    const json empty = json::array();
    const json& se = j.contains("S_eta") ? j["S_eta"] : empty;
    const json& h = j.contains("h") ? j["h"] : empty;
    if (!se.is_array() || !h.is_array() || se.size() != h.size()) throw SchemaError(path + ".h", "S_eta and h must be arrays of equal length");
    for (std::size_t i = 0; i < h.size(); ++i)
      b.points.push_back({laurent_from_json(se[i], path + ".S_eta[" + std::to_string(i) + "]"), series_from_json<Scalar>(h[i], path + ".h[" + std::to_string(i) + "]")});
  }
  return b;
}

}  // namespace sewkit
