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
 * @file chaos.hpp
 * @brief Truncated chaos vectors, weighted Fock norms, the dual pairing, the
 * S-transform and the monomial <-> Wick change of basis.
 *
 * One ChaosVector type holds both test functions and generalized functions;
 * the side is picked per call by the (kappa, p, side) arguments of
 * fock_norm(). A chaos vector (f^(0), ..., f^(N)) stands for the function
 * sum_n <:x^n:, f^(n)>.
 */

#ifndef PWN_CHAOS_HPP_
#define PWN_CHAOS_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pwn/charlier.hpp"
#include "pwn/model.hpp"
#include "pwn/multiset.hpp"
#include "pwn/symtensor.hpp"

namespace pwn {

/// Element of the distribution side in density coordinates relative to nu.
struct DualVector {
  std::vector<double> density;

  std::size_t size() const { return density.size(); }
  bool operator==(const DualVector&) const = default;
};

/// Integer point counts per cell; a sample of the Poisson random measure.
struct Configuration {
  std::vector<std::int64_t> counts;

  DualVector to_dual(const CellModel& model) const {
    require_dim(model, counts.size(), "Configuration");
    DualVector y{std::vector<double>(counts.size())};
    for (std::size_t c = 0; c < counts.size(); ++c) {
      y.density[c] = static_cast<double>(counts[c]) / model.nu(c);
    }
    return y;
  }
  bool operator==(const Configuration&) const = default;
};

class ChaosVector {
 public:
  ChaosVector() = default;
  ChaosVector(std::size_t dim, int trunc) : dim_(dim) {
    if (trunc < 0) throw std::invalid_argument("ChaosVector: negative truncation");
    kernels_.reserve(static_cast<std::size_t>(trunc) + 1);
    for (int n = 0; n <= trunc; ++n) kernels_.emplace_back(dim, n);
  }

  static ChaosVector vacuum(std::size_t dim, double value = 1.0) {
    ChaosVector v(dim, 0);
    v.kernels_[0].set({}, value);
    return v;
  }

  std::size_t dim() const { return dim_; }
  int trunc() const { return static_cast<int>(kernels_.size()) - 1; }

  const SymKernel& kernel(int n) const { return kernels_.at(static_cast<std::size_t>(n)); }
  SymKernel& kernel(int n) { return kernels_.at(static_cast<std::size_t>(n)); }

  /// Replaces the kernel of its own degree, extending the truncation if needed.
  void set_kernel(SymKernel k) {
    if (k.dim() != dim_) throw std::invalid_argument("ChaosVector: kernel dimension mismatch");
    extend(k.degree());
    kernels_[static_cast<std::size_t>(k.degree())] = std::move(k);
  }

  void extend(int trunc) {
    for (int n = this->trunc() + 1; n <= trunc; ++n) kernels_.emplace_back(dim_, n);
  }

  ChaosVector& operator+=(const ChaosVector& o) {
    if (o.dim_ != dim_) throw std::invalid_argument("ChaosVector: dimension mismatch");
    extend(o.trunc());
    for (int n = 0; n <= o.trunc(); ++n) kernels_[n] += o.kernels_[n];
    return *this;
  }
  ChaosVector& operator-=(const ChaosVector& o) { return *this += (-1.0) * o; }
  ChaosVector& operator*=(double s) {
    for (auto& k : kernels_) k *= s;
    return *this;
  }
  friend ChaosVector operator+(ChaosVector a, const ChaosVector& b) { return a += b; }
  friend ChaosVector operator-(ChaosVector a, const ChaosVector& b) { return a -= b; }
  friend ChaosVector operator*(double s, ChaosVector a) { return a *= s; }

  bool operator==(const ChaosVector&) const = default;

 private:
  std::size_t dim_ = 0;
  std::vector<SymKernel> kernels_;
};

inline void require_model(const CellModel& model, const ChaosVector& v, const char* what) {
  if (v.dim() != model.size()) {
    throw std::invalid_argument(std::string(what) + ": chaos vector built for " +
                                std::to_string(v.dim()) + " cells, model has " +
                                std::to_string(model.size()));
  }
}

/// ||v||_{kappa, +-p} = (sum_n |f^(n)|_{+-p}^2 (n!)^{1+kappa})^{1/2}.
/// Distribution-side norms ||.||_{-kappa,-p} are fock_norm(v, -kappa, p, Side::dual).
inline double fock_norm(const CellModel& model, const ChaosVector& v, double kappa, int p,
                        Side side = Side::test) {
  require_model(model, v, "fock_norm");
  const int k = signed_index(p, side);
  double s = 0.0;
  for (int n = 0; n <= v.trunc(); ++n) {
    const double kn = norm_k(model, v.kernel(n), k);
    s += kn * kn * std::pow(factorial(n), 1.0 + kappa);
  }
  return std::sqrt(s);
}

/// <<Phi, phi>> = sum_n n! <F^(n), f^(n)>.
inline double dual_pair(const CellModel& model, const ChaosVector& Phi, const ChaosVector& phi) {
  require_model(model, Phi, "dual_pair");
  require_model(model, phi, "dual_pair");
  const int top = std::min(Phi.trunc(), phi.trunc());
  double s = 0.0;
  for (int n = 0; n <= top; ++n) s += factorial(n) * pairing(model, Phi.kernel(n), phi.kernel(n));
  return s;
}

/// S[Phi](xi) = <<Phi, :e^{<x,xi>}:>> = sum_n <F^(n), xi^{(x)n}>.
inline double s_transform(const CellModel& model, const ChaosVector& Phi,
                          std::span<const double> xi) {
  require_model(model, Phi, "s_transform");
  require_dim(model, xi.size(), "s_transform");
  double s = 0.0;
  for (int n = 0; n <= Phi.trunc(); ++n) s += pairing(model, Phi.kernel(n), power(xi, n));
  return s;
}

// ---------------------------------------------------------------------------
// Per-cell expansions.
//
// A degree-n kernel f is the sum over multisets m of (n!/prod mult!) f_m
// chi_{c_1} (x)^ ... (x)^ chi_{c_n}. Pairing the indicator products with
// :x^n: factorizes over cells, so a chaos vector is a polynomial
// sum_alpha a_alpha prod_c P_{alpha_c}(u_c) in the cell counts u_c = <x, chi_c>,
// where alpha is the multiplicity vector and a_alpha = (n!/prod mult!) f_m.
// With P_k = C_k(., nu_c) this is the Wick representation; with P_k = u^k it
// is the monomial one, sum_n <x^{(x)n}, g^(n)>.

using MultiIndex = std::vector<int>;
using CellExpansion = std::map<MultiIndex, double>;

inline MultiIndex to_multi_index(const Multiset& m, std::size_t dim) {
  MultiIndex a(dim, 0);
  for (CellIndex c : m) ++a[c];
  return a;
}

inline Multiset to_multiset(const MultiIndex& a) {
  Multiset m;
  for (std::size_t c = 0; c < a.size(); ++c) {
    for (int k = 0; k < a[c]; ++k) m.push_back(static_cast<CellIndex>(c));
  }
  return m;
}

inline int total_degree(const MultiIndex& a) {
  int s = 0;
  for (int k : a) s += k;
  return s;
}

inline CellExpansion to_cell_expansion(const ChaosVector& v) {
  CellExpansion out;
  for (int n = 0; n <= v.trunc(); ++n) {
    for (const auto& [m, f] : v.kernel(n).terms()) {
      out[to_multi_index(m, v.dim())] += ordered_count(m) * f;
    }
  }
  return out;
}

inline ChaosVector from_cell_expansion(std::size_t dim, int trunc, const CellExpansion& e) {
  ChaosVector v(dim, trunc);
  for (const auto& [a, coef] : e) {
    const int n = total_degree(a);
    if (n > trunc) throw std::logic_error("from_cell_expansion: degree exceeds truncation");
    Multiset m = to_multiset(a);
    const double f = coef / ordered_count(m);
    v.kernel(n).add_sorted(std::move(m), f);
  }
  return v;
}

namespace detail {

/// Re-expands every per-cell basis function P_j through table[c][j], a
/// coefficient list over the target basis Q_0..Q_j.
inline CellExpansion change_cell_basis(const CellExpansion& e,
                                       const std::vector<std::vector<std::vector<double>>>& table) {
  CellExpansion out;
  for (const auto& [a, coef] : e) {
    // cartesian product over cells of the per-cell re-expansions
    std::vector<std::pair<MultiIndex, double>> partial{{MultiIndex(a.size(), 0), coef}};
    for (std::size_t c = 0; c < a.size(); ++c) {
      const auto& row = table[c][a[c]];
      std::vector<std::pair<MultiIndex, double>> next;
      for (const auto& [idx, val] : partial) {
        for (std::size_t k = 0; k < row.size(); ++k) {
          if (row[k] == 0.0) continue;
          MultiIndex j = idx;
          j[c] = static_cast<int>(k);
          next.emplace_back(std::move(j), val * row[k]);
        }
      }
      partial = std::move(next);
    }
    for (auto& [idx, val] : partial) out[idx] += val;
  }
  return out;
}

inline int max_cell_degree(const CellExpansion& e) {
  int d = 0;
  for (const auto& [a, coef] : e) {
    for (int k : a) d = std::max(d, k);
  }
  return d;
}

}  // namespace detail

/// Converts a chaos vector given in the monomial basis sum_n <x^{(x)n}, g^(n)>
/// into Wick kernels with the same values at every dual vector.
inline ChaosVector monomial_to_wick(const CellModel& model, const ChaosVector& v) {
  require_model(model, v, "monomial_to_wick");
  const CellExpansion e = to_cell_expansion(v);
  const int top = detail::max_cell_degree(e);
  std::vector<std::vector<std::vector<double>>> table(model.size());
  for (std::size_t c = 0; c < model.size(); ++c) {
    for (int j = 0; j <= top; ++j) {
      std::vector<double> mono(static_cast<std::size_t>(j) + 1, 0.0);
      mono[j] = 1.0;
      table[c].push_back(monomial_to_charlier(std::move(mono), model.nu(c)));
    }
  }
  return from_cell_expansion(v.dim(), v.trunc(), detail::change_cell_basis(e, table));
}

/// Inverse of monomial_to_wick.
inline ChaosVector wick_to_monomial(const CellModel& model, const ChaosVector& v) {
  require_model(model, v, "wick_to_monomial");
  const CellExpansion e = to_cell_expansion(v);
  const int top = detail::max_cell_degree(e);
  std::vector<std::vector<std::vector<double>>> table(model.size());
  for (std::size_t c = 0; c < model.size(); ++c) table[c] = charlier_monomial_table(top, model.nu(c));
  return from_cell_expansion(v.dim(), v.trunc(), detail::change_cell_basis(e, table));
}

/// Value of sum_n <y^{(x)n}, g^(n)> at a dual vector.
inline double eval_monomial(const CellModel& model, const ChaosVector& v, const DualVector& y) {
  require_model(model, v, "eval_monomial");
  require_dim(model, y.size(), "eval_monomial");
  double s = 0.0;
  for (int n = 0; n <= v.trunc(); ++n) s += pairing(model, power(y.density, n), v.kernel(n));
  return s;
}

}  // namespace pwn

#endif  // PWN_CHAOS_HPP_
