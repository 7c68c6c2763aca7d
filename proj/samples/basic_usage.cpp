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

// Small tour: build a two-cell model, make a chaos vector, evaluate it,
// multiply two vectors pointwise and estimate a norm by sampling.

#include <cstdio>
#include <vector>

#include "pwn/pwn.hpp"

int main() {
  using namespace pwn;
  const CellModel m({{"c1", 0.5, 2.0}, {"c2", 0.3, 4.0}});

  const AssumptionReport check = validate_assumptions(m);
  std::printf("assumptions hold: %s, rho = %g\n", check.passed() ? "yes" : "no",
              check.constants->rho);

  // phi = 1 + <:x:, chi_c1> + <:x^2:, chi_c1 (x) chi_c2>
  ChaosVector phi(m.size(), 2);
  phi.kernel(0) = SymKernel::scalar(m.size(), 1.0);
  phi.kernel(1) = indicator_power(m.size(), 0, 1);
  phi.kernel(2) = sym_product(indicator_power(m.size(), 0, 1), indicator_power(m.size(), 1, 1));

  const DualVector x = Configuration{{3, 1}}.to_dual(m);
  std::printf("phi(x) = %.12g (factorized %.12g)\n", eval_chaos(m, phi, x),
              eval_chaos_factorized(m, phi, x));

  const ChaosVector sq = pointwise_product(m, phi, phi);
  std::printf("phi^2(x) = %.12g, phi(x)^2 = %.12g\n", eval_chaos(m, sq, x),
              eval_chaos(m, phi, x) * eval_chaos(m, phi, x));

  const IsometryReport r = isometry_check(m, phi, 100000, 7);
  std::printf("E[phi^2] ~ %.6f +- %.6f, exact %.6f\n", r.estimate.mean, r.estimate.std_error, r.target);
  return 0;
}
