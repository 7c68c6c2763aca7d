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
 * @file model.hpp
 * @brief Finite cell model of the intensity measure and its weighted Hilbert
 * chain.
 *
 * The base space is a finite set of cells. Cell c carries an intensity mass
 * nu_c > 0 and a chain weight w_c > 1. The chain E_p has norm
 *
 *     |xi|_p^2 = sum_c nu_c w_c^{2p} xi_c^2
 *
 * in function coordinates, and the dual chain E_{-p} has
 *
 *     |y|_{-p}^2 = sum_c nu_c w_c^{-2p} y_c^2
 *
 * in density coordinates (relative to nu). The pairing is
 * <y, xi> = sum_c nu_c y_c xi_c. The point mass delta_c has density 1/nu_c at
 * c, so <delta_c, xi> = xi_c and |delta_c|_{-p}^2 = (nu_c w_c^{2p})^{-1}.
 *
 * An atomic measure stands in for a non-atomic one: every identity the
 * library checks is polynomial in the per-cell counts and holds exactly per
 * cell, so nothing is lost by working on step functions.
 *
 * Construction only checks structure (non-empty, unique ids, finite numbers).
 * The chain inequalities are reported by validate_assumptions() so that
 * failing models can be built and inspected on purpose.
 */

#ifndef PWN_MODEL_HPP_
#define PWN_MODEL_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pwn/multiset.hpp"

namespace pwn {

/// Selects the test side (|.|_p) or the distribution side (|.|_{-p}).
enum class Side { test, dual };

inline int signed_index(int p, Side side) { return side == Side::test ? p : -p; }

class ModelError : public std::runtime_error {
 public:
  explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

struct Cell {
  std::string id;
  double nu = 1.0;
  double w = 2.0;

  bool operator==(const Cell&) const = default;
};

class CellModel {
 public:
  explicit CellModel(std::vector<Cell> cells) : cells_(std::move(cells)) {
    if (cells_.empty()) throw ModelError("cell model has no cells");
    std::vector<std::string> bad;
    for (std::size_t i = 0; i < cells_.size(); ++i) {
      const Cell& c = cells_[i];
      if (!std::isfinite(c.nu) || !std::isfinite(c.w)) bad.push_back(c.id);
      for (std::size_t j = 0; j < i; ++j) {
        if (cells_[j].id == c.id) throw ModelError("duplicate cell id '" + c.id + "'");
      }
    }
    if (!bad.empty()) {
      std::string msg = "non-finite nu or w in cells:";
      for (const auto& id : bad) msg += " " + id;
      throw ModelError(msg);
    }
  }

  std::size_t size() const { return cells_.size(); }
  std::span<const Cell> cells() const { return cells_; }
  const Cell& cell(std::size_t i) const { return cells_.at(i); }
  double nu(std::size_t i) const { return cells_[i].nu; }
  double w(std::size_t i) const { return cells_[i].w; }

  CellIndex index_of(std::string_view id) const {
    for (std::size_t i = 0; i < cells_.size(); ++i) {
      if (cells_[i].id == id) return static_cast<CellIndex>(i);
    }
    throw std::out_of_range("unknown cell id '" + std::string(id) + "'");
  }

  /// Per-slot weight nu_c w_c^{2k} of the E_k tensor norms; k may be negative.
  double slot_weight(std::size_t i, int k) const {
    return cells_[i].nu * std::pow(cells_[i].w, 2.0 * k);
  }

  bool operator==(const CellModel&) const = default;

 private:
  std::vector<Cell> cells_;
};

inline void require_dim(const CellModel& model, std::size_t n, const char* what) {
  if (n != model.size()) {
    throw std::invalid_argument(std::string(what) + ": expected " +
                                std::to_string(model.size()) + " coordinates, got " +
                                std::to_string(n));
  }
}

/// |xi|_k for function coordinates when k >= 0, density coordinates when k < 0.
inline double chain_norm(const CellModel& model, std::span<const double> v, int k) {
  require_dim(model, v.size(), "chain_norm");
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += model.slot_weight(i, k) * v[i] * v[i];
  return std::sqrt(s);
}

inline double test_norm(const CellModel& model, std::span<const double> xi, int p) {
  return chain_norm(model, xi, p);
}

inline double dual_norm(const CellModel& model, std::span<const double> y, int p) {
  return chain_norm(model, y, -p);
}

/// <y, xi> = sum_c nu_c y_c xi_c.
inline double pair(const CellModel& model, std::span<const double> y,
                   std::span<const double> xi) {
  require_dim(model, y.size(), "pair");
  require_dim(model, xi.size(), "pair");
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) s += model.nu(i) * y[i] * xi[i];
  return s;
}

/// Density coordinates of delta_c.
inline std::vector<double> delta_density(const CellModel& model, CellIndex c) {
  std::vector<double> d(model.size(), 0.0);
  d.at(c) = 1.0 / model.nu(c);
  return d;
}

// ---------------------------------------------------------------------------
// Chain constants

/// Operator norm of the diagonal map E_p^{(x)2} -> E_p, attained on
/// diagonal-supported kernels.
inline double c_p(const CellModel& model, int p) {
  double best = 0.0;
  for (std::size_t i = 0; i < model.size(); ++i) {
    best = std::max(best, 1.0 / (std::sqrt(model.nu(i)) * std::pow(model.w(i), p)));
  }
  return best;
}

inline double rho(const CellModel& model) {
  double best = 0.0;
  for (const auto& c : model.cells()) best = std::max(best, 1.0 / c.w);
  return best;
}

/// ||delta||^2 = sum_c nu_c |delta_c|_{-1}^2 = sum_c w_c^{-2}.
inline double delta_sq(const CellModel& model) {
  double s = 0.0;
  for (const auto& c : model.cells()) s += 1.0 / (c.w * c.w);
  return s;
}

/// ||delta||_inf = sum_c nu_c |delta_c|_{-1} + max_c |delta_c|_{-1}.
inline double delta_inf(const CellModel& model) {
  double integral = 0.0;
  double sup = 0.0;
  for (const auto& c : model.cells()) {
    const double d = 1.0 / (std::sqrt(c.nu) * c.w);
    integral += c.nu * d;
    sup = std::max(sup, d);
  }
  return integral + sup;
}

/// |delta_c|_{-p} = (sqrt(nu_c) w_c^p)^{-1}.
inline double delta_dual_norm(const CellModel& model, std::string_view cell, int p) {
  if (p < 0) throw std::invalid_argument("delta_dual_norm: p must be >= 0");
  const CellIndex c = model.index_of(cell);
  return 1.0 / (std::sqrt(model.nu(c)) * std::pow(model.w(c), p));
}

struct ChainConstants {
  double rho = 0.0;
  std::map<int, double> c_p;
  double delta_sq = 0.0;
  double delta_inf = 0.0;
};

struct AssumptionCheck {
  std::string name;
  bool pass = false;
  double witness = 0.0;
  std::string detail;
};

struct AssumptionReport {
  std::optional<ChainConstants> constants;
  std::array<AssumptionCheck, 5> checks;
  /// "id: reason" for every structurally offending cell.
  std::vector<std::string> offending_cells;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const AssumptionCheck& c) { return c.pass; });
  }
};

/// Checks the five chain assumptions on the cell model. C_p is reported for
/// p = 1..p_max. Constants are only filled in when every nu_c > 0 and every
/// w_c > 0, since they are undefined otherwise.
inline AssumptionReport validate_assumptions(const CellModel& model, int p_max = 3) {
  AssumptionReport r;
  bool nu_ok = true;
  bool w_pos = true;
  bool w_gt1 = true;
  for (const auto& c : model.cells()) {
    if (!(c.nu > 0.0)) {
      nu_ok = false;
      r.offending_cells.push_back(c.id + ": nu <= 0");
    }
    if (!(c.w > 1.0)) {
      w_gt1 = false;
      if (!(c.w > 0.0)) w_pos = false;
      r.offending_cells.push_back(c.id + ": w <= 1");
    }
  }
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  const double rho_v = w_pos ? rho(model) : std::numeric_limits<double>::infinity();
  const double dsq = w_pos ? delta_sq(model) : nan;
  const double dinf = (w_pos && nu_ok) ? delta_inf(model) : nan;

  if (w_pos && nu_ok) {
    ChainConstants k;
    k.rho = rho_v;
    k.delta_sq = dsq;
    k.delta_inf = dinf;
    for (int p = 1; p <= p_max; ++p) k.c_p[p] = c_p(model, p);
    r.constants = k;
  }

  r.checks[0] = {"A.1", nu_ok && w_pos && dsq < 1.0, dsq,
                 "Hilbert-Schmidt norm squared of E_1 -> E_0 must be < 1"};
  r.checks[1] = {"A.2", nu_ok && w_pos && std::isfinite(dinf), dinf,
                 "||delta||_inf must be finite"};
  r.checks[2] = {"A.3", w_gt1, rho_v, "rho = max_c 1/w_c must lie in (0,1)"};
  const double c1 = (w_pos && nu_ok) ? c_p(model, 1) : nan;
  r.checks[3] = {"A.4", nu_ok && w_pos && std::isfinite(c1) && c1 > 0.0, c1,
                 "diagonal map bounded on E_p^(x)2 with constant C_p"};
  r.checks[4] = {"A.5", true, 0.0, "finite model: finitely supported functions are everything"};
  return r;
}

// ---------------------------------------------------------------------------
// Hermite-function diagnostic on the real line

/// Truncated S_{-p}(R) norm of delta_t in the Hermite basis,
/// (sum_{j<J} e_j(t)^2 (2j+2)^{-2p})^{1/2}.
inline double hermite_delta_norm(double t, double p, int J) {
  if (J < 1) throw std::invalid_argument("hermite_delta_norm: J must be >= 1");
  if (0.5 * t * t > 700.0) {
    throw std::overflow_error("hermite_delta_norm: |t| too large for e_0(t)");
  }
  double prev = 0.0;
  double cur = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * t * t);
  double sum = 0.0;
  for (int j = 0; j < J; ++j) {
    sum += cur * cur * std::pow(2.0 * j + 2.0, -2.0 * p);
    const double next = t * std::sqrt(2.0 / (j + 1)) * cur - std::sqrt(double(j) / (j + 1)) * prev;
    prev = cur;
    cur = next;
  }
  return std::sqrt(sum);
}

}  // namespace pwn

#endif  // PWN_MODEL_HPP_
