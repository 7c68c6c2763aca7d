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

// JSON file formats.
//
//   model:  {"cells": [{"id": str, "nu": number, "w": number}, ...]}
//   kernel: {"degree": n, "terms": [{"cells": [ids...], "coeff": number}, ...]}
//   chaos:  {"trunc": N, "kernels": [kernel, ...]}   (kernel i has degree i)
//   point:  {"counts": {id: int, ...}} or {"density": {id: number, ...}}
//
// Cell order in the model file is the canonical order for every index.

#ifndef PWN_IO_HPP_
#define PWN_IO_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "pwn/chaos.hpp"
#include "pwn/model.hpp"
#include "pwn/symtensor.hpp"

namespace pwn {

using Json = nlohmann::json;

class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

/// A well-formed file that refers to cells the model does not have.
class ModelMismatchError : public FormatError {
 public:
  explicit ModelMismatchError(const std::string& what) : FormatError(what) {}
};

namespace detail {

inline const Json& field(const Json& j, const char* key, const char* where) {
  if (!j.is_object() || !j.contains(key)) {
    throw FormatError(std::string(where) + ": missing field '" + key + "'");
  }
  return j.at(key);
}

inline double number(const Json& j, const char* where) {
  if (!j.is_number()) throw FormatError(std::string(where) + ": expected a number");
  return j.get<double>();
}

}  // namespace detail

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Json parse_json(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw FormatError(origin + ": " + e.what());
  }
}

inline CellModel model_from_json(const Json& j) {
  const Json& cells = detail::field(j, "cells", "model");
  if (!cells.is_array()) throw FormatError("model: 'cells' must be an array");
  std::vector<Cell> out;
  for (const Json& c : cells) {
    const Json& id = detail::field(c, "id", "model cell");
    if (!id.is_string()) throw FormatError("model cell: 'id' must be a string");
    out.push_back(Cell{id.get<std::string>(), detail::number(detail::field(c, "nu", "model cell"), "nu"),
                       detail::number(detail::field(c, "w", "model cell"), "w")});
  }
  return CellModel(std::move(out));
}

inline Json model_to_json(const CellModel& model) {
  Json cells = Json::array();
  for (const auto& c : model.cells()) cells.push_back({{"id", c.id}, {"nu", c.nu}, {"w", c.w}});
  return {{"cells", cells}};
}

inline SymKernel kernel_from_json(const CellModel& model, const Json& j) {
  const Json& deg = detail::field(j, "degree", "kernel");
  if (!deg.is_number_integer() || deg.get<int>() < 0) {
    throw FormatError("kernel: 'degree' must be a non-negative integer");
  }
  const int n = deg.get<int>();
  SymKernel k(model.size(), n);
  const Json& terms = detail::field(j, "terms", "kernel");
  if (!terms.is_array()) throw FormatError("kernel: 'terms' must be an array");
  for (const Json& t : terms) {
    const Json& cells = detail::field(t, "cells", "kernel term");
    if (!cells.is_array() || static_cast<int>(cells.size()) != n) {
      throw FormatError("kernel term: 'cells' must list exactly " + std::to_string(n) + " ids");
    }
    Multiset m;
    for (const Json& id : cells) {
      if (!id.is_string()) throw FormatError("kernel term: cell ids must be strings");
      try {
        m.push_back(model.index_of(id.get<std::string>()));
      } catch (const std::out_of_range& e) {
        throw ModelMismatchError(std::string("kernel term: ") + e.what());
      }
    }
    std::sort(m.begin(), m.end());
    if (k.terms().count(m) != 0) throw FormatError("kernel: duplicate term");
    k.set(std::move(m), detail::number(detail::field(t, "coeff", "kernel term"), "coeff"));
  }
  return k;
}

inline Json kernel_to_json(const CellModel& model, const SymKernel& k) {
  Json terms = Json::array();
  for (const auto& [m, v] : k.terms()) {
    Json ids = Json::array();
    for (CellIndex c : m) ids.push_back(model.cell(c).id);
    terms.push_back({{"cells", ids}, {"coeff", v}});
  }
  return {{"degree", k.degree()}, {"terms", terms}};
}

inline ChaosVector chaos_from_json(const CellModel& model, const Json& j) {
  const Json& trunc = detail::field(j, "trunc", "chaos");
  if (!trunc.is_number_integer() || trunc.get<int>() < 0) {
    throw FormatError("chaos: 'trunc' must be a non-negative integer");
  }
  ChaosVector v(model.size(), trunc.get<int>());
  const Json& kernels = detail::field(j, "kernels", "chaos");
  if (!kernels.is_array() || static_cast<int>(kernels.size()) > v.trunc() + 1) {
    throw FormatError("chaos: 'kernels' must be an array of at most trunc+1 kernels");
  }
  for (std::size_t n = 0; n < kernels.size(); ++n) {
    SymKernel k = kernel_from_json(model, kernels[n]);
    if (k.degree() != static_cast<int>(n)) {
      throw FormatError("chaos: kernel " + std::to_string(n) + " has degree " +
                        std::to_string(k.degree()));
    }
    v.kernel(static_cast<int>(n)) = std::move(k);
  }
  return v;
}

inline Json chaos_to_json(const CellModel& model, const ChaosVector& v) {
  Json kernels = Json::array();
  for (int n = 0; n <= v.trunc(); ++n) kernels.push_back(kernel_to_json(model, v.kernel(n)));
  return {{"trunc", v.trunc()}, {"kernels", kernels}};
}

/// An evaluation point; `counts` is set when the file gave integer counts.
struct EvalPoint {
  DualVector density;
  std::optional<Configuration> counts;
};

inline EvalPoint point_from_json(const CellModel& model, const Json& j) {
  EvalPoint p;
  const bool has_counts = j.is_object() && j.contains("counts");
  const bool has_density = j.is_object() && j.contains("density");
  if (has_counts == has_density) {
    throw FormatError("point: exactly one of 'counts' or 'density' is required");
  }
  const Json& obj = j.at(has_counts ? "counts" : "density");
  if (!obj.is_object()) throw FormatError("point: expected an object keyed by cell id");
  std::vector<double> values(model.size(), 0.0);
  for (const auto& [id, val] : obj.items()) {
    CellIndex c = 0;
    try {
      c = model.index_of(id);
    } catch (const std::out_of_range& e) {
      throw ModelMismatchError(std::string("point: ") + e.what());
    }
    values[c] = detail::number(val, "point");
  }
  if (has_counts) {
    Configuration x{std::vector<std::int64_t>(model.size())};
    for (std::size_t c = 0; c < values.size(); ++c) {
      if (values[c] < 0.0 || values[c] != std::floor(values[c])) {
        throw FormatError("point: counts must be non-negative integers");
      }
      x.counts[c] = static_cast<std::int64_t>(values[c]);
    }
    p.density = x.to_dual(model);
    p.counts = std::move(x);
  } else {
    p.density = DualVector{std::move(values)};
  }
  return p;
}

}  // namespace pwn

#endif  // PWN_IO_HPP_
