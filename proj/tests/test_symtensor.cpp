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

#include <cmath>
#include <random>
#include <vector>

#include "pwn/symtensor.hpp"
#include "test_support.hpp"

namespace pwn {
namespace {

using testing::model_a;

void expect_kernel_near(const SymKernel& a, const SymKernel& b, double tol) {
  ASSERT_EQ(a.degree(), b.degree());
  for (const auto& [m, v] : a.terms()) EXPECT_NEAR(v, b.at(m), tol * (1 + std::abs(v)));
  for (const auto& [m, v] : b.terms()) EXPECT_NEAR(v, a.at(m), tol * (1 + std::abs(v)));
}

TEST(SymKernel, KeysAreSorted) {
  SymKernel k(2, 2);
  k.set({1, 0}, 3.0);
  EXPECT_EQ(k.at({0, 1}), 3.0);
  EXPECT_THROW(k.set({0}, 1.0), std::invalid_argument);
  EXPECT_THROW(k.set({0, 2}, 1.0), std::out_of_range);
}

TEST(SymProduct, MixedIndicatorIsHalf) {
  const SymKernel a = indicator_power(2, 0, 1);
  const SymKernel b = indicator_power(2, 1, 1);
  const SymKernel ab = sym_product(a, b);
  EXPECT_EQ(ab.degree(), 2);
  EXPECT_DOUBLE_EQ(ab.at({0, 1}), 0.5);
  EXPECT_EQ(ab.terms().size(), 1u);
  // the pairing weight of {c1,c2} is 2 nu1 nu2, so <ab, 1> = nu1 nu2
  const SymKernel one = power(std::vector<double>{1.0, 1.0}, 2);
  EXPECT_NEAR(pairing(model_a(), ab, one), 0.5 * 0.3, 1e-15);
}

TEST(SymProduct, PowersMultiply) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const auto xi = testing::random_vector(3, rng, -1.5, 1.5);
    for (int m = 0; m <= 3; ++m) {
      for (int n = 0; n <= 3; ++n) {
        expect_kernel_near(sym_product(power(xi, m), power(xi, n)), power(xi, m + n), 1e-14);
      }
    }
  }
}

TEST(SymProduct, MatchesPermutationOracle) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 40; ++trial) {
    const int m = static_cast<int>(rng() % 4);
    const int n = static_cast<int>(rng() % 4);
    const SymKernel f = testing::random_kernel(3, m, rng, 0.7);
    const SymKernel g = testing::random_kernel(3, n, rng, 0.7);
    const SymKernel fg = sym_product(f, g);
    for_each_multiset(testing::all_cells(3), m + n, [&](const Multiset& u) {
      EXPECT_NEAR(fg.at(u), testing::brute_sym_product_at(f, g, u), 1e-13);
    });
  }
}

TEST(SymProduct, CommutativeAndAssociative) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const SymKernel f = testing::random_kernel(3, 1 + trial % 3, rng, 0.6);
    const SymKernel g = testing::random_kernel(3, trial % 2, rng, 0.6);
    const SymKernel h = testing::random_kernel(3, 2, rng, 0.6);
    expect_kernel_near(sym_product(f, g), sym_product(g, f), 1e-14);
    expect_kernel_near(sym_product(sym_product(f, g), h), sym_product(f, sym_product(g, h)), 1e-12);
  }
}

TEST(SymProduct, DimensionMismatch) {
  EXPECT_THROW(sym_product(SymKernel(2, 1), SymKernel(3, 1)), std::invalid_argument);
}

TEST(Inner, IndicatorNorms) {
  const CellModel m = model_a();
  EXPECT_NEAR(std::pow(norm(m, indicator_power(2, 0, 1), 0), 2), 0.5, 1e-15);
  EXPECT_NEAR(norm(m, indicator_power(2, 0, 2), 1), 2.0, 1e-15);
  EXPECT_NEAR(std::pow(norm(m, indicator_power(2, 0, 2), 1), 2), 4.0, 1e-14);
}

TEST(Inner, SelfInnerIsNormSquared) {
  std::mt19937_64 rng(4);
  const CellModel m = testing::model_3();
  for (int trial = 0; trial < 20; ++trial) {
    const SymKernel f = testing::random_kernel(3, trial % 4, rng);
    EXPECT_NEAR(inner(m, f, f, 0), std::pow(norm(m, f, 0), 2), 1e-12);
    EXPECT_NEAR(inner(m, f, f, 2, Side::dual), std::pow(norm(m, f, 2, Side::dual), 2), 1e-12);
  }
}

TEST(Inner, MatchesOrderedTupleSum) {
  std::mt19937_64 rng(5);
  for (const CellModel& m : {testing::model_1(), model_a(), testing::model_3()}) {
    for (int n = 0; n <= 3; ++n) {
      for (int k : {-2, 0, 1}) {
        const SymKernel F = testing::random_kernel(m.size(), n, rng, 0.8);
        const SymKernel f = testing::random_kernel(m.size(), n, rng, 0.8);
        const double want = testing::brute_inner(m, F, f, k);
        EXPECT_NEAR(inner_k(m, F, f, k), want, 1e-12 * (1 + std::abs(want)));
      }
    }
  }
}

TEST(Inner, DegreeMismatchThrows) {
  const CellModel m = model_a();
  EXPECT_THROW(pairing(m, SymKernel(2, 1), SymKernel(2, 2)), std::invalid_argument);
  EXPECT_THROW(norm(testing::model_3(), SymKernel(2, 1), 0), std::invalid_argument);
}

TEST(Inner, RhoScalingOnKernels) {
  std::mt19937_64 rng(6);
  const CellModel m = model_a();
  const double r = rho(m);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + trial % 4;
    const SymKernel f = testing::random_kernel(2, n, rng);
    for (int p = 0; p < 3; ++p) {
      for (int k = 1; k <= 2; ++k) {
        const double s = std::pow(r, k * n);
        EXPECT_GE(s * norm(m, f, p + k) * (1 + 1e-13), norm(m, f, p));
        EXPECT_LE(norm(m, f, p + k, Side::dual), s * norm(m, f, p, Side::dual) * (1 + 1e-13));
      }
    }
  }
}

TEST(Diagonal, Examples) {
  const SymKernel d = diagonal_D(indicator_power(2, 0, 2));
  EXPECT_EQ(d.degree(), 1);
  EXPECT_DOUBLE_EQ(d.at({0}), 1.0);
  EXPECT_DOUBLE_EQ(d.at({1}), 0.0);
  SymKernel off(2, 2);
  off.set({0, 1}, 2.5);
  EXPECT_TRUE(diagonal_D(off).empty());
  EXPECT_THROW(diagonal_D(SymKernel(2, 3)), std::invalid_argument);
}

TEST(Diagonal, BoundedByCp) {
  std::mt19937_64 rng(7);
  const CellModel m = model_a();
  for (int trial = 0; trial < 200; ++trial) {
    const SymKernel f = testing::random_kernel(2, 2, rng);
    for (int p : {1, 2}) {
      EXPECT_LE(norm(m, diagonal_D(f), p), c_p(m, p) * norm(m, f, p) * (1 + 1e-13));
    }
  }
}

TEST(DiagonalN, BaseCaseAndIndicators) {
  std::mt19937_64 rng(8);
  const SymKernel f = testing::random_kernel(3, 2, rng);
  expect_kernel_near(diagonal_Dn(f), diagonal_D(f), 0.0);
  for (int n = 1; n <= 5; ++n) {
    expect_kernel_near(diagonal_Dn(indicator_power(2, 1, n + 1)),
                       double(n) * indicator_power(2, 1, n), 1e-15);
  }
  EXPECT_THROW(diagonal_Dn(SymKernel(2, 1)), std::invalid_argument);
}

TEST(DiagonalN, MatchesLiteralSummandForm) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const int deg = 2 + trial % 4;
    const SymKernel f = testing::random_kernel(3, deg, rng, 0.7);
    const SymKernel g = diagonal_Dn(f);
    for_each_multiset(testing::all_cells(3), deg - 1, [&](const Multiset& u) {
      EXPECT_NEAR(g.at(u), testing::brute_diagonal_Dn_at(f, u), 1e-12);
    });
  }
}

TEST(DiagonalN, OperatorBound) {
  std::mt19937_64 rng(10);
  const CellModel m = model_a();
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 5;
    const SymKernel f = testing::random_kernel(2, n + 1, rng);
    for (int p : {1, 2}) {
      EXPECT_LE(norm(m, diagonal_Dn(f), p), n * c_p(m, p) * norm(m, f, p) * (1 + 1e-13));
    }
  }
}

TEST(DiagonalN, AdjointUnderPairing) {
  std::mt19937_64 rng(11);
  const CellModel m = testing::model_3();
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + trial % 4;
    const SymKernel K = testing::random_kernel(3, n, rng);
    const SymKernel f = testing::random_kernel(3, n + 1, rng);
    const double lhs = pairing(m, diagonal_Dn_adjoint(m, K), f);
    const double rhs = pairing(m, K, diagonal_Dn(f));
    EXPECT_NEAR(lhs, rhs, 1e-12 * (1 + std::abs(rhs)));
  }
}

TEST(Tau, Pairings) {
  const CellModel m = model_a();
  const SymKernel tau = trace_tau(m);
  EXPECT_NEAR(pairing(m, tau, indicator_power(2, 0, 2)), 0.5, 1e-15);
  SymKernel off(2, 2);
  off.set({0, 1}, 1.0);
  EXPECT_EQ(pairing(m, tau, off), 0.0);
  for (int p = 1; p <= 4; ++p) EXPECT_LE(norm(m, tau, p, Side::dual), delta_sq(m));
  // <tau, f> = sum_c nu_c f(c,c)
  std::mt19937_64 rng(12);
  const SymKernel f = testing::random_kernel(2, 2, rng);
  EXPECT_NEAR(pairing(m, tau, f), 0.5 * f.at({0, 0}) + 0.3 * f.at({1, 1}), 1e-15);
}

TEST(Slice, Examples) {
  expect_kernel_near(slice(indicator_power(2, 0, 2), 0), indicator_power(2, 0, 1), 0.0);
  EXPECT_TRUE(slice(indicator_power(2, 0, 2), 1).empty());
  const std::vector<double> xi{0.7, -1.2, 0.4};
  for (int n = 1; n <= 4; ++n) {
    for (CellIndex c = 0; c < 3; ++c) {
      expect_kernel_near(slice(power(xi, n), c), xi[c] * power(xi, n - 1), 1e-15);
    }
  }
  EXPECT_THROW(slice(SymKernel::scalar(2, 1.0), 0), std::invalid_argument);
}

TEST(Contractions, OnTensorPowers) {
  const CellModel m = testing::model_3();
  const std::vector<double> a{0.7, -1.2, 0.4};
  const std::vector<double> y{2.0, 0.5, -1.0};
  const double ya = pair(m, y, a);
  const double aa = m.nu(0) * a[0] * a[0] + m.nu(1) * a[1] * a[1] + m.nu(2) * a[2] * a[2];
  for (int n = 2; n <= 5; ++n) {
    expect_kernel_near(contract_last(m, power(a, n), y), ya * power(a, n - 1), 1e-14);
    expect_kernel_near(trace_last_pair(m, power(a, n)), aa * power(a, n - 2), 1e-14);
  }
}

TEST(Contractions, MatchOrderedTupleSum) {
  std::mt19937_64 rng(13);
  const CellModel m = model_a();
  const SymKernel f = testing::random_kernel(2, 3, rng);
  const std::vector<double> y{1.5, -0.4};
  const SymKernel g = contract_last(m, f, y);
  testing::for_each_tuple(2, 2, [&](const std::vector<CellIndex>& t) {
    double s = 0.0;
    for (CellIndex c = 0; c < 2; ++c) {
      s += m.nu(c) * y[c] * testing::value_at(f, {t[0], t[1], c});
    }
    EXPECT_NEAR(testing::value_at(g, t), s, 1e-14);
  });
  EXPECT_THROW(trace_last_pair(m, SymKernel(2, 1)), std::invalid_argument);
}

TEST(Power, Examples) {
  const CellModel m = model_a();
  const std::vector<double> xi{0.3, -0.8};
  expect_kernel_near(power(xi, 1), SymKernel::vector(xi), 0.0);
  EXPECT_DOUBLE_EQ(power(xi, 0).at({}), 1.0);
  for (int n = 1; n <= 4; ++n) EXPECT_TRUE(power(std::vector<double>{0.0, 0.0}, n).empty());
  for (int n = 0; n <= 6; ++n) {
    for (int p = 0; p <= 2; ++p) {
      EXPECT_NEAR(norm(m, power(xi, n), p), std::pow(test_norm(m, xi, p), n), 1e-12);
    }
  }
  EXPECT_THROW(power(xi, -1), std::invalid_argument);
}

}  // namespace
}  // namespace pwn
