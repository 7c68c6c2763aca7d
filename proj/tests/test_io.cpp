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

#include <gtest/gtest.h>

#include <random>

#include "pwn/io.hpp"
#include "test_support.hpp"

namespace pwn {
namespace {

using testing::model_a;

TEST(Io, ModelRoundTrip) {
  const CellModel m = testing::model_3();
  EXPECT_EQ(model_from_json(parse_json(model_to_json(m).dump(), "mem")), m);
}

TEST(Io, ModelErrors) {
  EXPECT_THROW(parse_json("{\"cells\": [", "mem"), FormatError);
  EXPECT_THROW(model_from_json(Json::parse("{}")), FormatError);
  EXPECT_THROW(model_from_json(Json::parse(R"({"cells": [{"id": "a", "nu": "x", "w": 2}]})")),
               FormatError);
  EXPECT_THROW(model_from_json(Json::parse(R"({"cells": []})")), ModelError);
  EXPECT_THROW(read_text_file("/nonexistent/file.json"), FormatError);
}

TEST(Io, ChaosRoundTripIsExact) {
  const CellModel m = model_a();
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 10; ++trial) {
    const ChaosVector v = testing::random_chaos(2, 4, rng);
    const ChaosVector back = chaos_from_json(m, parse_json(chaos_to_json(m, v).dump(), "mem"));
    EXPECT_EQ(back, v);
  }
}

TEST(Io, KernelValidation) {
  const CellModel m = model_a();
  const SymKernel k = kernel_from_json(m, Json::parse(R"({"degree": 2, "terms": [
      {"cells": ["c2", "c1"], "coeff": 0.5}, {"cells": ["c1", "c1"], "coeff": -1}]})"));
  EXPECT_EQ(k.at({0, 1}), 0.5);
  EXPECT_EQ(k.at({0, 0}), -1.0);
  EXPECT_THROW(kernel_from_json(m, Json::parse(R"({"degree": 2, "terms": [{"cells": ["c1"], "coeff": 1}]})")),
               FormatError);
  EXPECT_THROW(kernel_from_json(m, Json::parse(R"({"degree": 1, "terms": [{"cells": ["zz"], "coeff": 1}]})")),
               ModelMismatchError);
  EXPECT_THROW(kernel_from_json(m, Json::parse(R"({"degree": 2, "terms": [
      {"cells": ["c1", "c2"], "coeff": 1}, {"cells": ["c2", "c1"], "coeff": 1}]})")),
               FormatError);
  EXPECT_THROW(kernel_from_json(m, Json::parse(R"({"degree": -1, "terms": []})")), FormatError);
}

TEST(Io, ChaosValidation) {
  const CellModel m = model_a();
  EXPECT_THROW(chaos_from_json(m, Json::parse(R"({"trunc": 1, "kernels": [
      {"degree": 1, "terms": []}]})")),
               FormatError);
  EXPECT_THROW(chaos_from_json(m, Json::parse(R"({"trunc": 0, "kernels": [
      {"degree": 0, "terms": []}, {"degree": 1, "terms": []}]})")),
               FormatError);
  const ChaosVector v = chaos_from_json(m, Json::parse(R"({"trunc": 2, "kernels": [
      {"degree": 0, "terms": [{"cells": [], "coeff": 1.75}]}]})"));
  EXPECT_EQ(v.trunc(), 2);
  EXPECT_EQ(v.kernel(0).at({}), 1.75);
}

TEST(Io, Points) {
  const CellModel m = model_a();
  const EvalPoint p = point_from_json(m, Json::parse(R"({"counts": {"c1": 3}})"));
  ASSERT_TRUE(p.counts.has_value());
  EXPECT_EQ(p.counts->counts, (std::vector<std::int64_t>{3, 0}));
  EXPECT_EQ(p.density.density[0], 6.0);
  const EvalPoint q = point_from_json(m, Json::parse(R"({"density": {"c2": -0.5}})"));
  EXPECT_FALSE(q.counts.has_value());
  EXPECT_EQ(q.density.density[1], -0.5);
  EXPECT_THROW(point_from_json(m, Json::parse(R"({"counts": {"c1": 1.5}})")), FormatError);
  EXPECT_THROW(point_from_json(m, Json::parse(R"({"counts": {"c1": -1}})")), FormatError);
  EXPECT_THROW(point_from_json(m, Json::parse(R"({"counts": {}, "density": {}})")), FormatError);
  EXPECT_THROW(point_from_json(m, Json::parse(R"({"counts": {"q": 1}})")), ModelMismatchError);
}

}  // namespace
}  // namespace pwn
