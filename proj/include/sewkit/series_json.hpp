#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "sewkit/coord_jet.hpp"
#include "sewkit/fock.hpp"
#include "sewkit/laurent.hpp"
#include "sewkit/linalg.hpp"
#include "sewkit/rational.hpp"
#include "sewkit/trunc_series.hpp"

namespace sewkit {

using json = nlohmann::ordered_json;

/// Input that does not match the expected layout; `path` locates the value.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(const std::string& path, const std::string& msg) : std::runtime_error(path + ": " + msg), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

inline const json& field(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(path + "." + key, "missing");
  return *it;
}

inline long long_from_json(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw SchemaError(path, "expected an integer");
  return j.get<long>();
}

inline std::string string_from_json(const json& j, const std::string& path) {
  if (!j.is_string()) throw SchemaError(path, "expected a string");
  return j.get<std::string>();
}

inline json to_json(const Scalar& q) { return to_string(q); }

/// Rationals are "p/q" strings; plain JSON integers are accepted, floats are not.
inline Scalar scalar_from_json(const json& j, const std::string& path) {
  if (j.is_number_integer()) return Scalar(j.get<long>());
  if (!j.is_string()) throw SchemaError(path, "expected a rational string such as \"-3/4\"");
  try {
    return parse_scalar(j.get<std::string>());
  } catch (const ParseError& e) {
    throw SchemaError(path, e.what());
  }
}

inline json to_json(const Vec<Scalar>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(to_json(x));
  return a;
}

inline Vec<Scalar> vec_from_json(const json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path, "expected an array");
  Vec<Scalar> v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(scalar_from_json(j[i], path + "[" + std::to_string(i) + "]"));
  return v;
}

inline json to_json(const Matrix<Scalar>& m) {
  json a = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) r.push_back(to_json(m(i, k)));
    a.push_back(r);
  }
  return a;
}

inline Matrix<Scalar> matrix_from_json(const json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path, "expected an array of rows");
  std::size_t rows = j.size(), cols = rows ? (j[0].is_array() ? j[0].size() : 0) : 0;
  Matrix<Scalar> m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    std::string p = path + "[" + std::to_string(i) + "]";
    if (!j[i].is_array() || j[i].size() != cols) throw SchemaError(p, "rows must be arrays of equal length");
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = scalar_from_json(j[i][k], p + "[" + std::to_string(k) + "]");
  }
  return m;
}

template <class T>
struct CoeffCodec;
template <>
struct CoeffCodec<Scalar> {
  static json encode(const Scalar& x) { return to_json(x); }
  static Scalar decode(const json& j, const std::string& p) { return scalar_from_json(j, p); }
};
template <>
struct CoeffCodec<Vec<Scalar>> {
  static json encode(const Vec<Scalar>& x) { return to_json(x); }
  static Vec<Scalar> decode(const json& j, const std::string& p) { return vec_from_json(j, p); }
};
template <>
struct CoeffCodec<Matrix<Scalar>> {
  static json encode(const Matrix<Scalar>& x) { return to_json(x); }
  static Matrix<Scalar> decode(const json& j, const std::string& p) { return matrix_from_json(j, p); }
};

/// {"vars", "offset", "trunc", "logmax", "terms": [{"n", "l", "c"}]}.
template <class T>
json to_json(const TruncSeries<T>& s) {
  json j;
  j["vars"] = s.vars();
  json off = json::object(), tr = json::object(), lm = json::object();
  for (std::size_t k = 0; k < s.nvars(); ++k) {
    off[s.vars()[k]] = to_json(s.shape().offset[k]);
    tr[s.vars()[k]] = s.shape().trunc[k];
    lm[s.vars()[k]] = s.shape().logmax[k];
  }
  j["offset"] = off;
  j["trunc"] = tr;
  j["logmax"] = lm;
  json terms = json::array();
  for (const auto& [key, c] : s.terms()) terms.push_back(json{{"n", key.n}, {"l", key.l}, {"c", CoeffCodec<T>::encode(c)}});
  j["terms"] = terms;
  return j;
}

/// Parses a series. "offset" and "logmax" may be omitted (zero) and a term may
/// omit "l" (no logs).
template <class T>
TruncSeries<T> series_from_json(const json& j, const std::string& path = "$") {
  const json& vars = field(j, "vars", path);
  if (!vars.is_array() || vars.empty()) throw SchemaError(path + ".vars", "expected a nonempty array of names");
  SeriesShape s;
  for (std::size_t k = 0; k < vars.size(); ++k) s.vars.push_back(string_from_json(vars[k], path + ".vars[" + std::to_string(k) + "]"));
  auto per_var = [&](const std::string& key, bool required, auto parse, auto dflt) {
    using V = decltype(dflt);
    std::vector<V> out;
    auto it = j.find(key);
    if (it == j.end()) {
      if (required) throw SchemaError(path + "." + key, "missing");
      out.assign(s.vars.size(), dflt);
      return out;
    }
    if (!it->is_object()) throw SchemaError(path + "." + key, "expected an object keyed by variable name");
    for (const auto& v : s.vars) {
      auto f = it->find(v);
      out.push_back(f == it->end() ? (required ? throw SchemaError(path + "." + key + "." + v, "missing") : dflt)
                                   : parse(*f, path + "." + key + "." + v));
    }
    return out;
  };
  s.offset = per_var("offset", false, scalar_from_json, Scalar(0));
  s.trunc = per_var("trunc", true, long_from_json, 0L);
  s.logmax = per_var("logmax", false, long_from_json, 0L);
  TruncSeries<T> r;
  try {
    r = TruncSeries<T>(s);
  } catch (const SeriesError& e) {
    throw SchemaError(path, e.what());
  }
  const json& terms = field(j, "terms", path);
  if (!terms.is_array()) throw SchemaError(path + ".terms", "expected an array");
  for (std::size_t i = 0; i < terms.size(); ++i) {
    std::string p = path + ".terms[" + std::to_string(i) + "]";
    MonoKey key;
    const json& n = field(terms[i], "n", p);
    if (!n.is_array() || n.size() != s.vars.size()) throw SchemaError(p + ".n", "expected one exponent per variable");
    for (std::size_t k = 0; k < n.size(); ++k) key.n.push_back(long_from_json(n[k], p + ".n[" + std::to_string(k) + "]"));
    auto l = terms[i].find("l");
    if (l == terms[i].end()) {
      key.l.assign(s.vars.size(), 0);
    } else {
      if (!l->is_array() || l->size() != s.vars.size()) throw SchemaError(p + ".l", "expected one log degree per variable");
      for (std::size_t k = 0; k < l->size(); ++k) key.l.push_back(long_from_json((*l)[k], p + ".l[" + std::to_string(k) + "]"));
    }
    T c = CoeffCodec<T>::decode(field(terms[i], "c", p), p + ".c");
    try {
      r.add(key, c);
    } catch (const SeriesError& e) {
      throw SchemaError(p, e.what());
    }
  }
  return r;
}

/// A Laurent series as a one-variable series whose offset is its lowest
/// exponent (or 0) and whose truncation is its known order.
inline TruncSeries<Scalar> laurent_to_series(const Laurent<Scalar>& f, const std::string& var) {
  long off = std::min(0L, f.empty() ? 0L : f.lo());
  long top = f.exact() ? std::max(f.hi(), off) : f.order();
  SeriesShape s = SeriesShape::simple({var}, {top - off});
  s.offset[0] = Scalar(off);
  TruncSeries<Scalar> r(s);
  for (long e = f.lo(); e <= f.hi(); ++e) r.add(std::vector<long>{e - off}, f.coeff(e));
  return r;
}

inline Laurent<Scalar> series_to_laurent(const TruncSeries<Scalar>& s) {
  if (s.nvars() != 1) throw SeriesError("expected a one-variable series");
  if (!is_integer(s.shape().offset[0]) || s.shape().logmax[0] != 0) throw SeriesError("expected an integer offset and no logs");
  long off = s.shape().offset[0].get_num().get_si();
  std::vector<Scalar> c(static_cast<std::size_t>(s.shape().trunc[0] + 1), Scalar(0));
  for (const auto& [k, v] : s.terms()) c[static_cast<std::size_t>(k.n[0])] = v;
  return Laurent<Scalar>::from_coeffs(off, std::move(c), off + s.shape().trunc[0]);
}

inline json to_json(const Laurent<Scalar>& f, const std::string& var) { return to_json(laurent_to_series(f, var)); }

inline Laurent<Scalar> laurent_from_json(const json& j, const std::string& path) {
  auto s = series_from_json<Scalar>(j, path);
  try {
    return series_to_laurent(s);
  } catch (const SeriesError& e) {
    throw SchemaError(path, e.what());
  }
}

/// A jet is ["a1", "a2", ...] or {"jet": [...]}.
inline CoordJet<Scalar> jet_from_json(const json& j, const std::string& path) {
  const json& a = j.is_object() ? field(j, "jet", path) : j;
  std::string p = j.is_object() ? path + ".jet" : path;
  auto v = vec_from_json(a, p);
  if (v.empty()) throw SchemaError(p, "a jet needs at least the linear coefficient");
  return CoordJet<Scalar>(std::move(v));
}

inline json to_json(const CoordJet<Scalar>& j) { return to_json(Vec<Scalar>(j.coeffs())); }

/// A Fock vector is [{"p": [parts], "c": "p/q"}, ...] or one of the names
/// "vacuum", "omega", "a" (= a_{-1} vacuum).
inline FockVector fock_vector_from_json(const json& j, const std::string& path) {
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "vacuum") return vacuum();
    if (s == "omega") return conformal_vector();
    if (s == "a") return FockVector::basis({1});
    throw SchemaError(path, "unknown state name '" + s + "'");
  }
  if (!j.is_array()) throw SchemaError(path, "expected a state name or an array of {p, c}");
  FockVector v;
  for (std::size_t i = 0; i < j.size(); ++i) {
    std::string p = path + "[" + std::to_string(i) + "]";
    const json& parts = field(j[i], "p", p);
    if (!parts.is_array()) throw SchemaError(p + ".p", "expected an array of parts");
    Partition mu;
    for (std::size_t k = 0; k < parts.size(); ++k) {
      long x = long_from_json(parts[k], p + ".p[" + std::to_string(k) + "]");
      if (x < 1) throw SchemaError(p + ".p", "parts must be positive");
      mu.push_back(static_cast<int>(x));
    }
    std::sort(mu.begin(), mu.end(), std::greater<int>());
    v.add(mu, scalar_from_json(field(j[i], "c", p), p + ".c"));
  }
  return v;
}

inline json to_json(const FockVector& v) {
  json a = json::array();
  for (const auto& [p, c] : v.entries()) a.push_back(json{{"p", p}, {"c", to_json(c)}});
  return a;
}

// CSV ----------------------------------------------------------------------

/// One row per term: the exponent offset+n of every variable, the log degree
/// of variables that may carry logs, then the coefficient (vector and matrix
/// coefficients add index columns).
template <class T>
std::string to_csv(const TruncSeries<T>& s, const std::string& coeff_name = "coeff") {
  std::ostringstream out;
  const auto& sh = s.shape();
  std::vector<std::string> head;
  for (std::size_t k = 0; k < s.nvars(); ++k) head.push_back(sh.vars[k]);
  for (std::size_t k = 0; k < s.nvars(); ++k)
    if (sh.logmax[k] > 0) head.push_back("log_" + sh.vars[k]);
  if constexpr (std::is_same_v<T, Vec<Scalar>>) head.push_back("i");
  if constexpr (std::is_same_v<T, Matrix<Scalar>>) {
    head.push_back("i");
    head.push_back("j");
  }
  head.push_back(coeff_name);
  for (std::size_t i = 0; i < head.size(); ++i) out << (i ? "," : "") << head[i];
  out << "\n";
  for (const auto& [key, c] : s.terms()) {
    std::string prefix;
    for (std::size_t k = 0; k < s.nvars(); ++k) prefix += to_string(Scalar(sh.offset[k] + key.n[k])) + ",";
    for (std::size_t k = 0; k < s.nvars(); ++k)
      if (sh.logmax[k] > 0) prefix += std::to_string(key.l[k]) + ",";
    if constexpr (std::is_same_v<T, Scalar>) {
      out << prefix << to_string(c) << "\n";
    } else if constexpr (std::is_same_v<T, Vec<Scalar>>) {
      for (std::size_t i = 0; i < c.size(); ++i)
        if (!is_zero(c[i])) out << prefix << i << "," << to_string(c[i]) << "\n";
    } else {
      for (std::size_t i = 0; i < c.rows(); ++i)
        for (std::size_t k = 0; k < c.cols(); ++k)
          if (!is_zero(c(i, k))) out << prefix << i << "," << k << "," << to_string(c(i, k)) << "\n";
    }
  }
  return out.str();
}

inline std::string to_csv(const Matrix<Scalar>& m) {
  std::ostringstream out;
  out << "i,j,value\n";
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t k = 0; k < m.cols(); ++k)
      if (!is_zero(m(i, k))) out << i << "," << k << "," << to_string(m(i, k)) << "\n";
  return out.str();
}

}  // namespace sewkit
