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

// Monic Charlier polynomials C_n(u, tau) with generating function
//
//   sum_n w^n/n! C_n(u, tau) = exp[u log(1+w) - w tau],
//
// their monomial expansions, and exact triangular changes of basis between
// monomials and Charlier polynomials.

#ifndef PWN_CHARLIER_HPP_
#define PWN_CHARLIER_HPP_

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace pwn {

template <std::floating_point T>
T charlier(int n, T u, T tau) {
  if (!(tau > T(0))) throw std::domain_error("charlier: tau must be > 0");
  if (n < 0) throw std::invalid_argument("charlier: negative degree");
  if (n == 0) return T(1);
  T prev = T(1);
  T cur = u - tau;
  for (int k = 1; k < n; ++k) {
    const T next = (u - T(k) - tau) * cur - T(k) * tau * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// C_0..C_n at one point.
template <std::floating_point T>
std::vector<T> charlier_all(int n, T u, T tau) {
  if (!(tau > T(0))) throw std::domain_error("charlier: tau must be > 0");
  std::vector<T> c(static_cast<std::size_t>(n) + 1);
  c[0] = T(1);
  if (n >= 1) c[1] = u - tau;
  for (int k = 1; k < n; ++k) c[k + 1] = (u - T(k) - tau) * c[k] - T(k) * tau * c[k - 1];
  return c;
}

/// Row k holds the monomial coefficients of C_k (index = power of u), k <= n.
inline std::vector<std::vector<double>> charlier_monomial_table(int n, double tau) {
  if (!(tau > 0.0)) throw std::domain_error("charlier: tau must be > 0");
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(n) + 1);
  rows[0] = {1.0};
  if (n >= 1) rows[1] = {-tau, 1.0};
  for (int k = 1; k < n; ++k) {
    std::vector<double> next(static_cast<std::size_t>(k) + 2, 0.0);
    const auto& ck = rows[k];
    const auto& cm = rows[k - 1];
    for (std::size_t j = 0; j < ck.size(); ++j) {
      next[j + 1] += ck[j];
      next[j] += -(k + tau) * ck[j];
    }
    for (std::size_t j = 0; j < cm.size(); ++j) next[j] += -k * tau * cm[j];
    rows[k + 1] = std::move(next);
  }
  return rows;
}

/// Multiplies sum_k a[k] C_k(u, tau) by u, using
/// u C_k = C_{k+1} + (k + tau) C_k + k tau C_{k-1}. All three weights are
/// nonnegative, so nothing cancels here.
inline std::vector<double> charlier_times_u(const std::vector<double>& a, double tau) {
  std::vector<double> out(a.size() + 1, 0.0);
  for (std::size_t k = 0; k < a.size(); ++k) {
    out[k + 1] += a[k];
    out[k] += (static_cast<double>(k) + tau) * a[k];
    if (k > 0) out[k - 1] += static_cast<double>(k) * tau * a[k];
  }
  return out;
}

/// Rewrites sum_j poly[j] u^j as sum_k out[k] C_k(u, tau). Horner in the
/// Charlier basis.
inline std::vector<double> monomial_to_charlier(const std::vector<double>& poly, double tau) {
  if (!(tau > 0.0)) throw std::domain_error("charlier: tau must be > 0");
  if (poly.empty()) return {};
  std::vector<double> out{poly.back()};
  for (std::size_t j = poly.size() - 1; j-- > 0;) {
    out = charlier_times_u(out, tau);
    out[0] += poly[j];
  }
  return out;
}

/// Inverse of monomial_to_charlier.
inline std::vector<double> charlier_to_monomial(const std::vector<double>& coef, double tau) {
  if (coef.empty()) return {};
  const int deg = static_cast<int>(coef.size()) - 1;
  const auto table = charlier_monomial_table(deg, tau);
  std::vector<double> out(coef.size(), 0.0);
  for (int k = 0; k <= deg; ++k) {
    for (int j = 0; j <= k; ++j) out[j] += coef[k] * table[k][j];
  }
  return out;
}

/// Coefficients a_0..a_{m+n} with C_m C_n = sum_k a_k C_k. Runs the
/// three-term recurrence in m, C_{k+1} = (u - k - tau) C_k - k tau C_{k-1},
/// on coefficient vectors; going through monomials loses most digits by
/// degree ~12.
inline std::vector<double> charlier_linearize(int m, int n, double tau) {
  if (!(tau > 0.0)) throw std::domain_error("charlier_linearize: tau must be > 0");
  if (m < 0 || n < 0) throw std::invalid_argument("charlier_linearize: negative degree");
  if (m > n) std::swap(m, n);
  const auto size = static_cast<std::size_t>(m + n) + 1;
  std::vector<double> prev, cur(static_cast<std::size_t>(n) + 1, 0.0);
  cur[n] = 1.0;  // C_0 C_n
  for (int k = 0; k < m; ++k) {
    std::vector<double> next = charlier_times_u(cur, tau);
    for (std::size_t i = 0; i < cur.size(); ++i) next[i] -= (k + tau) * cur[i];
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= k * tau * prev[i];
    prev = std::move(cur);
    cur = std::move(next);
  }
  cur.resize(size, 0.0);
  return cur;
}

/// Table L[m][n] = charlier_linearize(m, n, tau) for m, n <= max_degree.
class CharlierProductTable {
 public:
  CharlierProductTable(int max_degree, double tau) : max_(max_degree) {
    rows_.resize(static_cast<std::size_t>(max_ + 1) * (max_ + 1));
    for (int m = 0; m <= max_; ++m) {
      for (int n = 0; n <= max_; ++n) rows_[m * (max_ + 1) + n] = charlier_linearize(m, n, tau);
    }
  }
  const std::vector<double>& operator()(int m, int n) const {
    if (m < 0 || n < 0 || m > max_ || n > max_) {
      throw std::out_of_range("CharlierProductTable: degree out of range");
    }
    return rows_.at(static_cast<std::size_t>(m) * (max_ + 1) + n);
  }

 private:
  int max_;
  std::vector<std::vector<double>> rows_;
};

}  // namespace pwn

#endif  // PWN_CHARLIER_HPP_
