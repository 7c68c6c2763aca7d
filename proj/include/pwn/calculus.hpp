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
 * @file calculus.hpp
 * @brief Hida derivative and its adjoint, coordinate multiplication, pointwise
 * products, and the norm bound for products.
 *
 * Products are formed per cell: both factors are expanded over products of
 * Charlier polynomials in the cell counts, each pair C_a C_b is linearized
 * with charlier_linearize(), and the result is folded back into kernels.
 * Finite-degree inputs give an exact finite-degree output of truncation
 * trunc(phi) + trunc(psi).
 */

#ifndef PWN_CALCULUS_HPP_
#define PWN_CALCULUS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pwn/charlier.hpp"
#include "pwn/chaos.hpp"
#include "pwn/model.hpp"
#include "pwn/symtensor.hpp"

namespace pwn {

/// (d_c phi)^(n-1) = n f^(n)(., ..., ., c).
inline ChaosVector hida_derivative(const ChaosVector& phi, CellIndex c) {
  if (c >= phi.dim()) throw std::out_of_range("hida_derivative: cell index out of range");
  ChaosVector out(phi.dim(), std::max(phi.trunc() - 1, 0));
  for (int n = 1; n <= phi.trunc(); ++n) out.kernel(n - 1) = double(n) * slice(phi.kernel(n), c);
  return out;
}

/// (d_c^* Phi)^(n+1) = F^(n) (x)^ delta_c, the dual of hida_derivative under
/// dual_pair().
inline ChaosVector hida_adjoint(const CellModel& model, const ChaosVector& Phi, CellIndex c) {
  require_model(model, Phi, "hida_adjoint");
  if (c >= model.size()) throw std::out_of_range("hida_adjoint: cell index out of range");
  const SymKernel delta = SymKernel::vector(delta_density(model, c));
  ChaosVector out(Phi.dim(), Phi.trunc() + 1);
  for (int n = 0; n <= Phi.trunc(); ++n) out.kernel(n + 1) = sym_product(Phi.kernel(n), delta);
  return out;
}

/// x(c). = d_c^* d_c + d_c + d_c^* + 1.
inline ChaosVector coord_mult(const CellModel& model, const ChaosVector& phi, CellIndex c) {
  const ChaosVector d = hida_derivative(phi, c);
  ChaosVector out = hida_adjoint(model, d, c);
  out += d;
  out += hida_adjoint(model, phi, c);
  out += phi;
  return out;
}

/// The distribution x(c) = <:x^1:, delta_c> + 1.
inline ChaosVector coordinate(const CellModel& model, CellIndex c) {
  ChaosVector out = ChaosVector::vacuum(model.size());
  out.set_kernel(SymKernel::vector(delta_density(model, c)));
  return out;
}

inline ChaosVector pointwise_product(const CellModel& model, const ChaosVector& phi,
                                     const ChaosVector& psi) {
  require_model(model, phi, "pointwise_product");
  require_model(model, psi, "pointwise_product");
  const CellExpansion a = to_cell_expansion(phi);
  const CellExpansion b = to_cell_expansion(psi);
  const int top = std::max({phi.trunc(), psi.trunc(), 0});
  std::vector<CharlierProductTable> tables;
  tables.reserve(model.size());
  for (std::size_t c = 0; c < model.size(); ++c) tables.emplace_back(top, model.nu(c));

  CellExpansion prod;
  for (const auto& [ia, ca] : a) {
    for (const auto& [ib, cb] : b) {
      std::vector<std::pair<MultiIndex, double>> partial{{MultiIndex(model.size(), 0), ca * cb}};
      for (std::size_t c = 0; c < model.size(); ++c) {
        const auto& lin = tables[c](ia[c], ib[c]);
        std::vector<std::pair<MultiIndex, double>> next;
        next.reserve(partial.size() * lin.size());
        for (const auto& [idx, val] : partial) {
          for (std::size_t k = 0; k < lin.size(); ++k) {
            if (lin[k] == 0.0) continue;
            MultiIndex j = idx;
            j[c] = static_cast<int>(k);
            next.emplace_back(std::move(j), val * lin[k]);
          }
        }
        partial = std::move(next);
      }
      for (auto& [idx, val] : partial) prod[idx] += val;
    }
  }
  return from_cell_expansion(model.size(), phi.trunc() + psi.trunc(), prod);
}

struct ProductBoundReport {
  int p = 1;
  double kappa = 1.0;
  int q = 1;           ///< smallest q >= 1 with rho^q < (1-rho)^2 / Y_p
  double y_p = 1.0;    ///< max{1, C_p} max{1, ||delta||_inf}
  double constant = 0.0;
  double lhs = 0.0;    ///< ||phi psi||_{kappa,p}
  double rhs = 0.0;    ///< constant ||phi||_{kappa,p+1} ||psi||_{kappa,p+q}
  bool pass = false;
};

inline int product_bound_q(const CellModel& model, int p) {
  const double r = rho(model);
  const double y_p = std::max(1.0, c_p(model, p)) * std::max(1.0, delta_inf(model));
  const double target = (1.0 - r) * (1.0 - r) / y_p;
  int q = 1;
  double rq = r;
  while (!(rq < target)) {
    rq *= r;
    ++q;
  }
  return q;
}

/// 1/2 (1-rho)^{-2} (sum_n (n+1)^2 (n+2)^2 [(1-rho)^{-2} Y_p rho^q]^{2n})^{1/2}.
inline double product_bound_constant(const CellModel& model, int p, int q) {
  const double r = rho(model);
  const double y_p = std::max(1.0, c_p(model, p)) * std::max(1.0, delta_inf(model));
  const double ratio = y_p * std::pow(r, q) / ((1.0 - r) * (1.0 - r));
  if (!(ratio < 1.0)) throw std::logic_error("product_bound_constant: series diverges");
  const double r2 = ratio * ratio;
  double sum = 0.0;
  double geo = 1.0;
  for (int n = 0; n < 100000; ++n) {
    const double term = (n + 1.0) * (n + 1.0) * (n + 2.0) * (n + 2.0) * geo;
    sum += term;
    if (n > 8 && term < 1e-18 * sum) break;
    geo *= r2;
  }
  return 0.5 / ((1.0 - r) * (1.0 - r)) * std::sqrt(sum);
}

inline ProductBoundReport product_bound(const CellModel& model, const ChaosVector& phi,
                                        const ChaosVector& psi, int p, double kappa = 1.0) {
  if (p < 1) throw std::invalid_argument("product_bound: p must be >= 1");
  ProductBoundReport r;
  r.p = p;
  r.kappa = kappa;
  r.y_p = std::max(1.0, c_p(model, p)) * std::max(1.0, delta_inf(model));
  r.q = product_bound_q(model, p);
  r.constant = product_bound_constant(model, p, r.q);
  r.lhs = fock_norm(model, pointwise_product(model, phi, psi), kappa, p);
  r.rhs = r.constant * fock_norm(model, phi, kappa, p + 1) * fock_norm(model, psi, kappa, p + r.q);
  r.pass = r.lhs <= r.rhs * (1.0 + 1e-12);
  return r;
}

}  // namespace pwn

#endif  // PWN_CALCULUS_HPP_
