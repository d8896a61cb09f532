#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "sewkit/rational.hpp"

namespace sewkit {

/// Parts in weakly decreasing order; the empty partition labels the vacuum.
using Partition = std::vector<int>;

inline int weight(const Partition& p) { return std::accumulate(p.begin(), p.end(), 0); }

/// Partitions of n in lexicographic order of their part lists, e.g. 111, 21, 3.
inline std::vector<Partition> partitions_of(int n) {
  std::vector<Partition> out;
  Partition cur;
  auto rec = [&](auto&& self, int rest, int maxpart) -> void {
    if (rest == 0) {
      out.push_back(cur);
      return;
    }
    for (int p = std::min(rest, maxpart); p >= 1; --p) {
      cur.push_back(p);
      self(self, rest - p, p);
      cur.pop_back();
    }
  };
  rec(rec, n, n);
  std::sort(out.begin(), out.end());
  return out;
}

/// Ordered basis of the truncation W^{<=N}: weight ascending, then as above.
inline std::vector<Partition> basis_upto(int N) {
  std::vector<Partition> out;
  for (int n = 0; n <= N; ++n) {
    auto ps = partitions_of(n);
    out.insert(out.end(), ps.begin(), ps.end());
  }
  return out;
}

inline long partition_count(int n) { return static_cast<long>(partitions_of(n).size()); }

inline std::string label(const Partition& p) {
  std::string s = "[";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p[i]);
  return s + "]";
}

/// z_mu = prod_i i^{k_i} k_i!, the norm of a_{-mu}|lambda> under the Fock form.
inline Scalar z_factor(const Partition& p) {
  std::map<int, int> mult;
  for (int x : p) ++mult[x];
  Scalar z = 1;
  for (auto [part, k] : mult) z *= pow(Scalar(part), k) * factorial(k);
  return z;
}

}  // namespace sewkit
