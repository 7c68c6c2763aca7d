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

// Shared fixtures, random generators and brute-force oracles for the tests.
// The oracles deliberately avoid the multiset bookkeeping of the library:
// they enumerate ordered tuples and permutations directly.

#ifndef PWN_TESTS_TEST_SUPPORT_HPP_
#define PWN_TESTS_TEST_SUPPORT_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "pwn/pwn.hpp"

namespace pwn::testing {

/// Two cells: c1 (nu 0.5, w 2) and c2 (nu 0.3, w 4).
inline CellModel model_a() { return CellModel({{"c1", 0.5, 2.0}, {"c2", 0.3, 4.0}}); }

inline CellModel model_3() {
  return CellModel({{"a", 0.4, 2.5}, {"b", 1.1, 3.0}, {"c", 0.7, 5.0}});
}

inline CellModel model_1() { return CellModel({{"only", 0.8, 3.0}}); }

inline double rel_err(double a, double b) { return std::abs(a - b) / (1.0 + std::abs(b)); }

inline std::vector<CellIndex> all_cells(std::size_t dim) {
  std::vector<CellIndex> v(dim);
  for (std::size_t i = 0; i < dim; ++i) v[i] = static_cast<CellIndex>(i);
  return v;
}

/// Dense random kernel: every multiset gets a value with probability `fill`.
inline SymKernel random_kernel(std::size_t dim, int degree, std::mt19937_64& rng,
                               double fill = 1.0, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::bernoulli_distribution keep(fill);
  SymKernel k(dim, degree);
  for_each_multiset(all_cells(dim), degree, [&](const Multiset& m) {
    if (keep(rng)) k.add_sorted(m, u(rng));
  });
  return k;
}

inline ChaosVector random_chaos(std::size_t dim, int trunc, std::mt19937_64& rng,
                                double scale = 1.0) {
  ChaosVector v(dim, trunc);
  for (int n = 0; n <= trunc; ++n) v.kernel(n) = random_kernel(dim, n, rng, 0.8, scale);
  return v;
}

inline std::vector<double> random_vector(std::size_t dim, std::mt19937_64& rng, double lo,
                                         double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(dim);
  for (double& x : v) x = u(rng);
  return v;
}

inline Configuration random_configuration(const CellModel& model, std::mt19937_64& rng) {
  return sample_configuration(model, rng);
}

// ---------------------------------------------------------------------------
// Oracles

/// Calls fn(t) for every ordered tuple t in {0..dim-1}^n.
inline void for_each_tuple(std::size_t dim, int n,
                           const std::function<void(const std::vector<CellIndex>&)>& fn) {
  std::vector<CellIndex> t(static_cast<std::size_t>(n), 0);
  while (true) {
    fn(t);
    int i = n - 1;
    while (i >= 0 && t[i] + 1 == dim) t[i--] = 0;
    if (i < 0) return;
    ++t[i];
  }
}

inline double value_at(const SymKernel& f, std::vector<CellIndex> t) {
  std::sort(t.begin(), t.end());
  return f.at(t);
}

/// sum over ordered tuples of prod_i (nu w^{2k})_{t_i} F(t) f(t).
inline double brute_inner(const CellModel& model, const SymKernel& F, const SymKernel& f, int k) {
  double s = 0.0;
  for_each_tuple(model.size(), f.degree(), [&](const std::vector<CellIndex>& t) {
    double w = 1.0;
    for (CellIndex c : t) w *= model.slot_weight(c, k);
    s += w * value_at(F, t) * value_at(f, t);
  });
  return s;
}

/// Average of f(first m) g(last n) over all orderings of the multiset u.
inline double brute_sym_product_at(const SymKernel& f, const SymKernel& g, Multiset u) {
  const int m = f.degree();
  std::sort(u.begin(), u.end());
  double total = 0.0;
  double count = 0.0;
  // permute positions, not values, so duplicates are counted with multiplicity
  std::vector<int> pos(u.size());
  for (std::size_t i = 0; i < pos.size(); ++i) pos[i] = static_cast<int>(i);
  do {
    std::vector<CellIndex> a, b;
    for (std::size_t i = 0; i < pos.size(); ++i) {
      (static_cast<int>(i) < m ? a : b).push_back(u[pos[i]]);
    }
    total += value_at(f, a) * value_at(g, b);
    count += 1.0;
  } while (std::next_permutation(pos.begin(), pos.end()));
  return total / count;
}

/// Literal n-summand diagonalization followed by symmetrization, at u.
inline double brute_diagonal_Dn_at(const SymKernel& f, Multiset u) {
  const int n = f.degree() - 1;
  std::vector<int> pos(u.size());
  for (std::size_t i = 0; i < pos.size(); ++i) pos[i] = static_cast<int>(i);
  double total = 0.0;
  double count = 0.0;
  do {
    std::vector<CellIndex> t;
    for (int p : pos) t.push_back(u[p]);
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      // D acting on slots i, i+1 of f: duplicate t[i]
      std::vector<CellIndex> full(t.begin(), t.begin() + i + 1);
      full.push_back(t[i]);
      full.insert(full.end(), t.begin() + i + 1, t.end());
      s += value_at(f, full);
    }
    total += s;
    count += 1.0;
  } while (std::next_permutation(pos.begin(), pos.end()));
  return total / count;
}

/// C_n(u, tau) from the generating function (1+w)^u e^{-w tau}: Cauchy product
/// of the generalized binomial series with the exponential series.
inline double charlier_from_gf(int n, double u, double tau) {
  double s = 0.0;
  double binom = 1.0;  // binom(u, k)
  for (int k = 0; k <= n; ++k) {
    const int j = n - k;
    double e = 1.0;
    for (int i = 1; i <= j; ++i) e *= -tau / i;
    s += binom * e;
    binom *= (u - k) / (k + 1);
  }
  return s * factorial(n);
}

/// C_m C_n = sum_{c,j} m! n! tau^j / ((m-c-j)! (n-c-j)! c! j!) C_{m+n-c-2j},
/// read off from the product of two generating functions.
inline std::vector<double> charlier_linearize_closed(int m, int n, double tau) {
  std::vector<double> a(static_cast<std::size_t>(m + n) + 1, 0.0);
  for (int c = 0; c <= std::min(m, n); ++c) {
    for (int j = 0; c + j <= std::min(m, n); ++j) {
      const double coef = factorial(m) * factorial(n) * std::pow(tau, j) /
                          (factorial(m - c - j) * factorial(n - c - j) * factorial(c) * factorial(j));
      a[m + n - c - 2 * j] += coef;
    }
  }
  return a;
}

}  // namespace pwn::testing

#endif  // PWN_TESTS_TEST_SUPPORT_HPP_
