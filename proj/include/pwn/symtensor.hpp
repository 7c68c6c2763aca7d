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
 * @file symtensor.hpp
 * @brief Sparse symmetric kernels over the cell index set.
 *
 * A SymKernel of degree n is a symmetric function on n-tuples of cells. It is
 * stored once per multiset (sorted index tuple); the stored value is the
 * function value at any ordering of that multiset. Pairings and norms sum
 * over multisets with the multinomial weight n!/prod mult!, which accounts
 * for every ordered tuple:
 *
 *     <F, f>   = sum_m (n!/prod mult_m!) prod_i nu_{c_i}            F_m f_m
 *     |f|_k^2  = sum_m (n!/prod mult_m!) prod_i nu_{c_i} w^{2k}_{c_i} f_m^2
 *
 * Test kernels use function coordinates and distribution kernels density
 * coordinates, so the same storage serves both sides.
 */

#ifndef PWN_SYMTENSOR_HPP_
#define PWN_SYMTENSOR_HPP_

#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pwn/model.hpp"
#include "pwn/multiset.hpp"

namespace pwn {

class SymKernel {
 public:
  using Terms = std::map<Multiset, double>;

  SymKernel() = default;
  SymKernel(std::size_t dim, int degree) : dim_(dim), degree_(degree) {
    if (degree < 0) throw std::invalid_argument("SymKernel: negative degree");
  }

  static SymKernel scalar(std::size_t dim, double value) {
    SymKernel k(dim, 0);
    k.set({}, value);
    return k;
  }

  /// Degree-1 kernel with the given coordinates.
  static SymKernel vector(std::span<const double> v) {
    SymKernel k(v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) k.set({static_cast<CellIndex>(i)}, v[i]);
    return k;
  }

  std::size_t dim() const { return dim_; }
  int degree() const { return degree_; }
  const Terms& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  double at(const Multiset& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? 0.0 : it->second;
  }

  /// Sets the value at the multiset formed by `cells` (any order).
  void set(Multiset cells, double value) {
    normalize_key(cells);
    if (value == 0.0) {
      terms_.erase(cells);
    } else {
      terms_[std::move(cells)] = value;
    }
  }

  void add(Multiset cells, double value) {
    normalize_key(cells);
    add_sorted(std::move(cells), value);
  }

  /// Precondition: key is sorted with size == degree and indices < dim.
  void add_sorted(Multiset key, double value) {
    if (value == 0.0) return;
    auto [it, inserted] = terms_.try_emplace(std::move(key), value);
    if (!inserted) {
      it->second += value;
      if (it->second == 0.0) terms_.erase(it);
    }
  }

  SymKernel& operator+=(const SymKernel& o) {
    check_same_shape(o);
    for (const auto& [m, v] : o.terms_) add_sorted(m, v);
    return *this;
  }
  SymKernel& operator-=(const SymKernel& o) {
    check_same_shape(o);
    for (const auto& [m, v] : o.terms_) add_sorted(m, -v);
    return *this;
  }
  SymKernel& operator*=(double s) {
    if (s == 0.0) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, v] : terms_) v *= s;
    return *this;
  }

  friend SymKernel operator+(SymKernel a, const SymKernel& b) { return a += b; }
  friend SymKernel operator-(SymKernel a, const SymKernel& b) { return a -= b; }
  friend SymKernel operator*(double s, SymKernel a) { return a *= s; }
  friend SymKernel operator*(SymKernel a, double s) { return a *= s; }

  bool operator==(const SymKernel&) const = default;

 private:
  void normalize_key(Multiset& cells) const {
    if (static_cast<int>(cells.size()) != degree_) {
      throw std::invalid_argument("SymKernel: key length " + std::to_string(cells.size()) +
                                  " does not match degree " + std::to_string(degree_));
    }
    for (CellIndex c : cells) {
      if (c >= dim_) throw std::out_of_range("SymKernel: cell index out of range");
    }
    std::sort(cells.begin(), cells.end());
  }

  void check_same_shape(const SymKernel& o) const {
    if (o.dim_ != dim_ || o.degree_ != degree_) {
      throw std::invalid_argument("SymKernel: dimension or degree mismatch");
    }
  }

  std::size_t dim_ = 0;
  int degree_ = 0;
  Terms terms_;
};

inline void require_model(const CellModel& model, const SymKernel& f, const char* what) {
  if (f.dim() != model.size()) {
    throw std::invalid_argument(std::string(what) + ": kernel built for " +
                                std::to_string(f.dim()) + " cells, model has " +
                                std::to_string(model.size()));
  }
}

namespace detail {

inline double slot_product(const CellModel& model, const Multiset& m, int k) {
  double r = 1.0;
  for (CellIndex c : m) r *= model.slot_weight(c, k);
  return r;
}

}  // namespace detail

/// Inner product of E_k^{(x)n}; k = 0 is the canonical pairing <F, f>.
inline double inner_k(const CellModel& model, const SymKernel& F, const SymKernel& f, int k) {
  require_model(model, F, "inner");
  require_model(model, f, "inner");
  if (F.degree() != f.degree()) throw std::invalid_argument("inner: degree mismatch");
  const auto& small = F.terms().size() <= f.terms().size() ? F : f;
  const auto& large = &small == &F ? f : F;
  double s = 0.0;
  for (const auto& [m, v] : small.terms()) {
    auto it = large.terms().find(m);
    if (it == large.terms().end()) continue;
    s += ordered_count(m) * detail::slot_product(model, m, k) * v * it->second;
  }
  return s;
}

inline double inner(const CellModel& model, const SymKernel& F, const SymKernel& f, int p = 0,
                    Side side = Side::test) {
  return inner_k(model, F, f, signed_index(p, side));
}

/// Canonical pairing <F, f> (no chain weights).
inline double pairing(const CellModel& model, const SymKernel& F, const SymKernel& f) {
  return inner_k(model, F, f, 0);
}

inline double norm_k(const CellModel& model, const SymKernel& f, int k) {
  require_model(model, f, "norm");
  double s = 0.0;
  for (const auto& [m, v] : f.terms()) {
    s += ordered_count(m) * detail::slot_product(model, m, k) * v * v;
  }
  return std::sqrt(s);
}

inline double norm(const CellModel& model, const SymKernel& f, int p, Side side = Side::test) {
  return norm_k(model, f, signed_index(p, side));
}

/// Symmetric tensor product. The value at a multiset u of size m+n is the
/// average over all orderings of f(first m slots) g(last n slots), so that
/// power(xi, m) (x)^ power(xi, n) = power(xi, m+n).
inline SymKernel sym_product(const SymKernel& f, const SymKernel& g) {
  if (f.dim() != g.dim()) throw std::invalid_argument("sym_product: model mismatch");
  const int m = f.degree();
  const int n = g.degree();
  SymKernel out(f.dim(), m + n);
  const double norm_splits = binomial(m + n, m);
  for (const auto& [a, fa] : f.terms()) {
    for (const auto& [b, gb] : g.terms()) {
      Multiset u = merge(a, b);
      double ways = 1.0;
      for (const auto& [c, ka] : multiplicities(a)) {
        ways *= binomial(multiplicity(u, c), ka);
      }
      out.add_sorted(std::move(u), ways / norm_splits * fa * gb);
    }
  }
  return out;
}

/// Diagonal restriction (D f)(c) = f(c, c) of a degree-2 kernel.
inline SymKernel diagonal_D(const SymKernel& f) {
  if (f.degree() != 2) throw std::invalid_argument("diagonal_D: degree must be 2");
  SymKernel out(f.dim(), 1);
  for (const auto& [m, v] : f.terms()) {
    if (m[0] == m[1]) out.add_sorted({m[0]}, v);
  }
  return out;
}

/// Sum of the n single-pair diagonalizations on a symmetric degree-(n+1)
/// kernel, i.e. n * Sym[f(c_1, ..., c_{n-1}, c_n, c_n)]. At a multiset u of
/// size n this equals sum over distinct c in u of mult_u(c) f(u + c).
inline SymKernel diagonal_Dn(const SymKernel& f) {
  if (f.degree() < 2) throw std::invalid_argument("diagonal_Dn: degree must be >= 2");
  SymKernel out(f.dim(), f.degree() - 1);
  for (const auto& [m, v] : f.terms()) {
    for (const auto& [c, k] : multiplicities(m)) {
      if (k >= 2) out.add_sorted(without_cell(m, c), (k - 1) * v);
    }
  }
  return out;
}

/// Adjoint of diagonal_Dn with respect to the canonical pairing, acting on a
/// density-coordinate kernel of degree n and returning degree n+1:
/// <diagonal_Dn_adjoint(K), f> = <K, diagonal_Dn(f)>.
inline SymKernel diagonal_Dn_adjoint(const CellModel& model, const SymKernel& K) {
  require_model(model, K, "diagonal_Dn_adjoint");
  const int n = K.degree();
  if (n < 1) throw std::invalid_argument("diagonal_Dn_adjoint: degree must be >= 1");
  SymKernel out(K.dim(), n + 1);
  for (const auto& [u, v] : K.terms()) {
    for (const auto& [c, k] : multiplicities(u)) {
      // target multiset u + c has multiplicity k + 1 at c
      const double coef = double(k + 1) * k / (n + 1) / model.nu(c);
      out.add_sorted(with_cell(u, c), coef * v);
    }
  }
  return out;
}

/// Trace kernel tau in density coordinates: tau(c, c) = 1/nu_c, so that
/// <tau, f> = sum_c nu_c f(c, c).
inline SymKernel trace_tau(const CellModel& model) {
  SymKernel t(model.size(), 2);
  for (std::size_t c = 0; c < model.size(); ++c) {
    const auto ci = static_cast<CellIndex>(c);
    t.set({ci, ci}, 1.0 / model.nu(c));
  }
  return t;
}

/// g(c_1..c_{n-1}) = f(c_1..c_{n-1}, c).
inline SymKernel slice(const SymKernel& f, CellIndex c) {
  if (f.degree() < 1) throw std::invalid_argument("slice: degree must be >= 1");
  if (c >= f.dim()) throw std::out_of_range("slice: cell index out of range");
  SymKernel out(f.dim(), f.degree() - 1);
  for (const auto& [m, v] : f.terms()) {
    if (std::binary_search(m.begin(), m.end(), c)) out.add_sorted(without_cell(m, c), v);
  }
  return out;
}

/// g(c_1..c_{n-1}) = sum_c nu_c y_c f(c_1..c_{n-1}, c): pairs the last slot
/// with a density vector.
inline SymKernel contract_last(const CellModel& model, const SymKernel& f,
                               std::span<const double> y) {
  require_model(model, f, "contract_last");
  require_dim(model, y.size(), "contract_last");
  if (f.degree() < 1) throw std::invalid_argument("contract_last: degree must be >= 1");
  SymKernel out(f.dim(), f.degree() - 1);
  for (const auto& [m, v] : f.terms()) {
    for (const auto& [c, k] : multiplicities(m)) {
      out.add_sorted(without_cell(m, c), model.nu(c) * y[c] * v);
    }
  }
  return out;
}

/// h(c_1..c_{n-2}) = sum_c nu_c f(c_1..c_{n-2}, c, c) = <tau, f> on the last
/// two slots.
inline SymKernel trace_last_pair(const CellModel& model, const SymKernel& f) {
  require_model(model, f, "trace_last_pair");
  if (f.degree() < 2) throw std::invalid_argument("trace_last_pair: degree must be >= 2");
  SymKernel out(f.dim(), f.degree() - 2);
  for (const auto& [m, v] : f.terms()) {
    for (const auto& [c, k] : multiplicities(m)) {
      if (k >= 2) out.add_sorted(without_cell(without_cell(m, c), c), model.nu(c) * v);
    }
  }
  return out;
}

/// Tensor power xi^{(x)n}: value prod_i xi_{c_i} at every multiset.
inline SymKernel power(std::span<const double> xi, int n) {
  if (n < 0) throw std::invalid_argument("power: negative degree");
  SymKernel out(xi.size(), n);
  std::vector<CellIndex> support;
  for (std::size_t i = 0; i < xi.size(); ++i) {
    if (xi[i] != 0.0) support.push_back(static_cast<CellIndex>(i));
  }
  if (n == 0) {
    out.set({}, 1.0);
    return out;
  }
  for_each_multiset(support, n, [&](const Multiset& m) {
    double v = 1.0;
    for (CellIndex c : m) v *= xi[c];
    out.add_sorted(m, v);
  });
  return out;
}

/// Indicator kernel chi_c^{(x)n}.
inline SymKernel indicator_power(std::size_t dim, CellIndex c, int n) {
  SymKernel out(dim, n);
  out.set(Multiset(static_cast<std::size_t>(n), c), 1.0);
  return out;
}

}  // namespace pwn

#endif  // PWN_SYMTENSOR_HPP_
