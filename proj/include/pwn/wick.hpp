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

/**
 * @file wick.hpp
 * @brief Poisson Wick powers, their Charlier factorization, the Wick
 * exponential, the white-noise delta function and the growth bounds.
 *
 * Wick powers obey
 *
 *     :x^0: = 1,   :x^1: = x - 1,
 *     <:x^{n+1}:, f> = <:x^n: (x)^ :x^1:, f> - <:x^n:, D^{(n+1)} f>
 *                      - n <:x^{n-1}: (x)^ tau, f>,
 *
 * where D^{(n+1)} is the n-term diagonalization of diagonal_Dn(). The
 * diagonal term carries coefficient 1: on a single cell this reproduces the
 * Charlier recurrence C_{n+1} = (u - n - tau) C_n - n tau C_{n-1}, and any
 * other coefficient breaks the factorization
 * <:x^n:, chi_{a_1}^{n_1} (x)^ ...> = prod_j C_{n_j}(<x, chi_{a_j}>, nu(a_j)).
 *
 * All identities here are polynomial in x, so they hold for arbitrary real
 * densities, not only for integer point counts.
 */

#ifndef PWN_WICK_HPP_
#define PWN_WICK_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "pwn/charlier.hpp"
#include "pwn/chaos.hpp"
#include "pwn/model.hpp"
#include "pwn/symtensor.hpp"

namespace pwn {

/// <:x^n:, f> by the Wick recursion, working on the test-kernel side:
/// each step contracts the last slot of f with x - 1, diagonalizes it, or
/// traces the last pair.
inline double wick_eval(const CellModel& model, const DualVector& x, const SymKernel& f) {
  require_model(model, f, "wick_eval");
  require_dim(model, x.size(), "wick_eval");
  std::vector<double> centered(x.density);
  for (double& v : centered) v -= 1.0;

  auto eval = [&](auto&& self, const SymKernel& g) -> double {
    const int n = g.degree();
    if (g.empty()) return 0.0;
    if (n == 0) return g.at({});
    if (n == 1) {
      double s = 0.0;
      for (const auto& [m, v] : g.terms()) s += model.nu(m[0]) * centered[m[0]] * v;
      return s;
    }
    // g has degree (n-1)+1; apply the recursion with n-1 in place of n
    SymKernel head = contract_last(model, g, centered);
    head -= diagonal_Dn(g);
    const double a = self(self, head);
    const double b = self(self, trace_last_pair(model, g));
    return a - (n - 1) * b;
  };
  return eval(eval, f);
}

/// Independent route: expand f over per-cell indicator products and evaluate
/// each as prod_c C_{mult_c}(nu_c x_c, nu_c).
inline double wick_eval_factorized(const CellModel& model, const DualVector& x,
                                   const SymKernel& f) {
  require_model(model, f, "wick_eval_factorized");
  require_dim(model, x.size(), "wick_eval_factorized");
  const int n = f.degree();
  std::vector<std::vector<double>> cpoly(model.size());
  for (std::size_t c = 0; c < model.size(); ++c) {
    cpoly[c] = charlier_all(n, model.nu(c) * x.density[c], model.nu(c));
  }
  double s = 0.0;
  for (const auto& [m, v] : f.terms()) {
    double prod = ordered_count(m) * v;
    for (const auto& [c, k] : multiplicities(m)) prod *= cpoly[c][k];
    s += prod;
  }
  return s;
}

/// Value of the chaos vector sum_n <:x^n:, f^(n)> at x.
inline double eval_chaos(const CellModel& model, const ChaosVector& phi, const DualVector& x) {
  require_model(model, phi, "eval_chaos");
  double s = 0.0;
  for (int n = 0; n <= phi.trunc(); ++n) s += wick_eval(model, x, phi.kernel(n));
  return s;
}

inline double eval_chaos_factorized(const CellModel& model, const ChaosVector& phi,
                                    const DualVector& x) {
  require_model(model, phi, "eval_chaos_factorized");
  double s = 0.0;
  for (int n = 0; n <= phi.trunc(); ++n) s += wick_eval_factorized(model, x, phi.kernel(n));
  return s;
}

/// The kernels :y^0:, ..., :y^N: in density coordinates, built by
///   :y^{n+1}: = :y^n: (x)^ (y - 1) - D^{(n+1)*} :y^n: - n :y^{n-1}: (x)^ tau.
inline std::vector<SymKernel> wick_power_kernels(const CellModel& model, const DualVector& y,
                                                 int N) {
  require_dim(model, y.size(), "wick_power_kernels");
  if (N < 0) throw std::invalid_argument("wick_power_kernels: negative degree");
  std::vector<SymKernel> out;
  out.reserve(static_cast<std::size_t>(N) + 1);
  out.push_back(SymKernel::scalar(model.size(), 1.0));
  if (N == 0) return out;
  std::vector<double> centered(y.density);
  for (double& v : centered) v -= 1.0;
  const SymKernel first = SymKernel::vector(centered);
  const SymKernel tau = trace_tau(model);
  out.push_back(first);
  for (int n = 1; n < N; ++n) {
    SymKernel next = sym_product(out[n], first);
    next -= diagonal_Dn_adjoint(model, out[n]);
    next -= double(n) * sym_product(out[n - 1], tau);
    out.push_back(std::move(next));
  }
  return out;
}

inline SymKernel wick_power_kernel(const CellModel& model, const DualVector& y, int n) {
  return wick_power_kernels(model, y, n).back();
}

// ---------------------------------------------------------------------------
// Wick exponential

inline double wick_exp_closed(const CellModel& model, const DualVector& x,
                              std::span<const double> xi) {
  require_dim(model, x.size(), "wick_exp_closed");
  require_dim(model, xi.size(), "wick_exp_closed");
  double e = 0.0;
  for (std::size_t c = 0; c < xi.size(); ++c) {
    if (!(xi[c] > -1.0)) throw std::domain_error("wick_exp_closed: requires 1 + xi_c > 0");
    e += model.nu(c) * (x.density[c] * std::log1p(xi[c]) - xi[c]);
  }
  return std::exp(e);
}

struct WickExpSeries {
  double value = 0.0;
  std::vector<double> partial_sums;
  double last_term = 0.0;
  bool converged = false;
  /// |xi|_1 < max{1, C_1}; informational only, not enforced.
  bool stated_condition = false;
};

/// Partial sums of sum_{n<=N} (n!)^{-1} <:x^n:, xi^{(x)n}>. Requires
/// sup_c |xi_c| < 1 and |xi|_p < 1. `converged` is set when the last term is
/// at most tol in magnitude.
inline WickExpSeries wick_exp_series(const CellModel& model, const DualVector& x,
                                     std::span<const double> xi, int N, double tol, int p = 1) {
  require_dim(model, xi.size(), "wick_exp_series");
  double sup = 0.0;
  for (double v : xi) sup = std::max(sup, std::abs(v));
  if (!(sup < 1.0)) throw std::domain_error("wick_exp_series: requires sup_c |xi_c| < 1");
  if (!(test_norm(model, xi, p) < 1.0)) {
    throw std::domain_error("wick_exp_series: requires |xi|_p < 1");
  }
  WickExpSeries r;
  r.stated_condition = test_norm(model, xi, 1) < std::max(1.0, c_p(model, 1));
  const auto wick = wick_power_kernels(model, x, N);
  double s = 0.0;
  for (int n = 0; n <= N; ++n) {
    const double term = pairing(model, wick[n], power(xi, n)) / factorial(n);
    s += term;
    r.partial_sums.push_back(s);
    r.last_term = term;
  }
  r.value = s;
  r.converged = std::abs(r.last_term) <= tol;
  return r;
}

// ---------------------------------------------------------------------------
// Delta function

/// delta~_y = sum_n <:x^n:, (n!)^{-1} :y^n:>, truncated at N.
inline ChaosVector delta_distribution(const CellModel& model, const DualVector& y, int N) {
  const auto wick = wick_power_kernels(model, y, N);
  ChaosVector out(model.size(), N);
  for (int n = 0; n <= N; ++n) out.kernel(n) = (1.0 / factorial(n)) * wick[n];
  return out;
}

// ---------------------------------------------------------------------------
// Growth bounds

/// Y_{p,R} = R + ||delta||_inf + C_p + ||delta||^2 and Z_{p,R} = max{1, Y}.
inline double growth_constant(const CellModel& model, int p, double R) {
  const double Y = R + delta_inf(model) + c_p(model, p) + delta_sq(model);
  return std::max(1.0, Y);
}

struct GrowthBoundRow {
  int n = 0;            ///< checks :x^{n+1}:
  double norm = 0.0;    ///< |:x^{n+1}:|_{-p}
  double bound = 0.0;   ///< n! Z^n
  double ratio = 0.0;   ///< norm / bound
  double chain_bound = 0.0;  ///< n! Z^{n+1}, what the recursion chain proves
};

struct GrowthBoundReport {
  int p = 1;
  double R = 0.0;
  double Z = 1.0;
  std::vector<GrowthBoundRow> rows;
  /// n! Z^n holds for every n in [1, N).
  bool pass = true;
  /// n! Z^{n+1} holds for every n in [0, N).
  bool chain_pass = true;
};

/// Tabulates |:x^{n+1}:|_{-p} against n! Z_{p,R}^n for n < N with R = |x|_{-p}.
/// The n! Z^n bound is derived from the recursion for n >= 1; row n = 0 is
/// listed but only held to the chain bound Z.
inline GrowthBoundReport growth_bound_check(const CellModel& model, const DualVector& x, int p,
                                            int N) {
  if (p < 1) throw std::invalid_argument("growth_bound_check: p must be >= 1");
  GrowthBoundReport r;
  r.p = p;
  r.R = dual_norm(model, x.density, p);
  r.Z = growth_constant(model, p, r.R);
  const auto wick = wick_power_kernels(model, x, N);
  for (int n = 0; n + 1 <= N; ++n) {
    GrowthBoundRow row;
    row.n = n;
    row.norm = norm(model, wick[n + 1], p, Side::dual);
    row.bound = factorial(n) * std::pow(r.Z, n);
    row.chain_bound = row.bound * r.Z;
    row.ratio = row.norm / row.bound;
    constexpr double slack = 1.0 + 1e-12;
    if (n >= 1 && row.norm > row.bound * slack) r.pass = false;
    if (row.norm > row.chain_bound * slack) r.chain_pass = false;
    r.rows.push_back(row);
  }
  return r;
}

/// Smallest p1 = p + m with rho^m Z_{p,R} <= 1/2, which gives
/// |:x^n:|_{-p1} <= n! 2^{-n} whenever |x|_{-p} <= R.
inline int p1_selector(const CellModel& model, int p, double R) {
  if (!(R > 0.0)) throw std::invalid_argument("p1_selector: R must be > 0");
  const double Z = growth_constant(model, p, R);
  const double r = rho(model);
  int m = 0;
  double scaled = Z;
  while (scaled > 0.5) {
    scaled *= r;
    ++m;
  }
  return p + m;
}

struct DeltaNormProfile {
  std::vector<double> terms;         ///< (n!)^{1-kappa} (n!)^{-2} |:y^n:|_{-p}^2
  std::vector<double> partial_sums;
};

inline DeltaNormProfile delta_norm_profile(const CellModel& model, const DualVector& y,
                                           double kappa, int p, int N) {
  const auto wick = wick_power_kernels(model, y, N);
  DeltaNormProfile r;
  double s = 0.0;
  for (int n = 0; n <= N; ++n) {
    const double k = norm(model, wick[n], p, Side::dual);
    const double lf = std::lgamma(n + 1.0);
    const double term = std::exp((1.0 - kappa) * lf - 2.0 * lf) * k * k;
    s += term;
    r.terms.push_back(term);
    r.partial_sums.push_back(s);
  }
  return r;
}

/// Smallest n0 such that terms[n+1] > terms[n] for every n0 <= n < size-1,
/// or -1 when the last step does not increase.
inline int increasing_tail_start(const std::vector<double>& terms) {
  if (terms.size() < 2) return -1;
  int n0 = static_cast<int>(terms.size()) - 1;
  while (n0 >= 1 && terms[n0] > terms[n0 - 1]) --n0;
  return n0 == static_cast<int>(terms.size()) - 1 ? -1 : n0;
}

}  // namespace pwn

#endif  // PWN_WICK_HPP_
