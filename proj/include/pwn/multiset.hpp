// Copyright 2026 The pwn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Multiset keys over cell indices and the combinatorial weights that go with
// them. A multiset of size n is stored as a sorted vector of cell indices.

#ifndef PWN_MULTISET_HPP_
#define PWN_MULTISET_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace pwn {

using CellIndex = std::uint32_t;
using Multiset = std::vector<CellIndex>;

inline double factorial(int n) {
  if (n < 0) throw std::domain_error("factorial of negative integer");
  double r = 1.0;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

/// Run-length view of a sorted multiset: (cell, multiplicity) pairs in
/// increasing cell order.
inline std::vector<std::pair<CellIndex, int>> multiplicities(const Multiset& m) {
  std::vector<std::pair<CellIndex, int>> out;
  for (CellIndex c : m) {
    if (!out.empty() && out.back().first == c) {
      ++out.back().second;
    } else {
      out.emplace_back(c, 1);
    }
  }
  return out;
}

inline int multiplicity(const Multiset& m, CellIndex c) {
  auto [lo, hi] = std::equal_range(m.begin(), m.end(), c);
  return static_cast<int>(hi - lo);
}

/// Number of ordered tuples that sort to m: n! / prod_c mult(c)!.
inline double ordered_count(const Multiset& m) {
  double r = factorial(static_cast<int>(m.size()));
  for (const auto& [c, k] : multiplicities(m)) r /= factorial(k);
  return r;
}

inline Multiset with_cell(Multiset m, CellIndex c) {
  m.insert(std::upper_bound(m.begin(), m.end(), c), c);
  return m;
}

/// Removes one copy of c. Precondition: c occurs in m.
inline Multiset without_cell(Multiset m, CellIndex c) {
  auto it = std::lower_bound(m.begin(), m.end(), c);
  if (it == m.end() || *it != c) {
    throw std::logic_error("without_cell: cell not in multiset");
  }
  m.erase(it);
  return m;
}

inline Multiset merge(const Multiset& a, const Multiset& b) {
  Multiset out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

/// Calls fn(m) for every multiset of size n drawn from `cells` (sorted,
/// distinct), in lexicographic order.
template <typename Fn>
void for_each_multiset(const std::vector<CellIndex>& cells, int n, Fn&& fn) {
  Multiset cur;
  cur.reserve(static_cast<std::size_t>(n));
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (static_cast<int>(cur.size()) == n) {
      fn(static_cast<const Multiset&>(cur));
      return;
    }
    for (std::size_t i = start; i < cells.size(); ++i) {
      cur.push_back(cells[i]);
      self(self, i);
      cur.pop_back();
    }
  };
  rec(rec, 0);
}

}  // namespace pwn

#endif  // PWN_MULTISET_HPP_
