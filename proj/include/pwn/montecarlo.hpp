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

// Poisson sampling on the cell model and Monte-Carlo checks of the chaos
// isometry E[phi psi] = sum_n n! <f^(n), g^(n)>.
//
// Samples are split into a fixed number of blocks. Block b draws from its own
// mt19937_64 stream seeded by splitmix64(seed, b), and block statistics are
// merged in block order, so results are bit-identical for a given seed no
// matter how many threads run (PWN_THREADS caps the thread count).

#ifndef PWN_MONTECARLO_HPP_
#define PWN_MONTECARLO_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "pwn/chaos.hpp"
#include "pwn/model.hpp"
#include "pwn/wick.hpp"

namespace pwn {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of stream `stream` derived from a user seed.
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

/// Uniform on [0, 1) with 53 random bits.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Inversion sampling of Poisson(lambda); lambda is desk-scale.
inline std::int64_t poisson_inversion(double lambda, std::mt19937_64& rng) {
  const double u = uniform01(rng);
  double p = std::exp(-lambda);
  double cdf = p;
  std::int64_t k = 0;
  while (u >= cdf && p > 0.0) {
    ++k;
    p *= lambda / static_cast<double>(k);
    cdf += p;
  }
  return k;
}

inline Configuration sample_configuration(const CellModel& model, std::mt19937_64& rng) {
  Configuration x{std::vector<std::int64_t>(model.size())};
  for (std::size_t c = 0; c < model.size(); ++c) x.counts[c] = poisson_inversion(model.nu(c), rng);
  return x;
}

inline Configuration sample_configuration(const CellModel& model, std::uint64_t seed) {
  std::mt19937_64 rng(stream_seed(seed, 0));
  return sample_configuration(model, rng);
}

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t n_samples = 0;
  std::uint64_t seed = 0;
};

inline unsigned thread_budget() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("PWN_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(v));
  }
  return n;
}

namespace detail {

inline constexpr int kBlocks = 64;

struct Moments {
  double n = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  void push(double v) {
    n += 1.0;
    const double d = v - mean;
    mean += d / n;
    m2 += d * (v - mean);
  }
  void merge(const Moments& o) {
    if (o.n == 0.0) return;
    const double total = n + o.n;
    const double d = o.mean - mean;
    mean += d * o.n / total;
    m2 += o.m2 + d * d * n * o.n / total;
    n = total;
  }
};

/// Runs fn(block, rng, moments) for every block, spread over the thread budget.
template <typename Fn>
std::vector<Moments> run_blocks(std::uint64_t seed, Fn&& fn) {
  std::vector<Moments> blocks(kBlocks);
  const unsigned workers = std::min<unsigned>(thread_budget(), kBlocks);
  auto work = [&](unsigned w) {
    for (int b = static_cast<int>(w); b < kBlocks; b += static_cast<int>(workers)) {
      std::mt19937_64 rng(stream_seed(seed, static_cast<std::uint64_t>(b)));
      fn(b, rng, blocks[b]);
    }
  };
  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  return blocks;
}

inline std::int64_t block_size(std::int64_t n_samples, int b) {
  return n_samples / kBlocks + (b < n_samples % kBlocks ? 1 : 0);
}

}  // namespace detail

/// Monte-Carlo estimate of E[phi(X) psi(X)] under the Poisson measure.
inline Estimate estimate_inner(const CellModel& model, const ChaosVector& phi,
                               const ChaosVector& psi, std::int64_t n_samples,
                               std::uint64_t seed) {
  require_model(model, phi, "estimate_inner");
  require_model(model, psi, "estimate_inner");
  if (n_samples < 2) throw std::invalid_argument("estimate_inner: need at least 2 samples");
  auto blocks = detail::run_blocks(seed, [&](int b, std::mt19937_64& rng, detail::Moments& acc) {
    // configurations repeat often at desk-scale intensities
    std::map<std::vector<std::int64_t>, double> cache;
    const std::int64_t count = detail::block_size(n_samples, b);
    for (std::int64_t i = 0; i < count; ++i) {
      Configuration x = sample_configuration(model, rng);
      auto it = cache.find(x.counts);
      if (it == cache.end()) {
        const DualVector y = x.to_dual(model);
        const double v = eval_chaos(model, phi, y) * eval_chaos(model, psi, y);
        it = cache.emplace(std::move(x.counts), v).first;
      }
      acc.push(it->second);
    }
  });
  detail::Moments total;
  for (const auto& b : blocks) total.merge(b);
  Estimate e;
  e.mean = total.mean;
  e.std_error = std::sqrt(total.m2 / (total.n - 1.0) / total.n);
  e.n_samples = n_samples;
  e.seed = seed;
  return e;
}

struct IsometryReport {
  Estimate estimate;
  double target = 0.0;  ///< fock_norm(phi, 0, 0)^2
  double z = 0.0;
};

inline IsometryReport isometry_check(const CellModel& model, const ChaosVector& phi,
                                     std::int64_t n_samples, std::uint64_t seed) {
  IsometryReport r;
  r.estimate = estimate_inner(model, phi, phi, n_samples, seed);
  const double f = fock_norm(model, phi, 0.0, 0);
  r.target = f * f;
  const double diff = r.estimate.mean - r.target;
  if (r.estimate.std_error > 0.0) {
    r.z = diff / r.estimate.std_error;
  } else {
    r.z = std::abs(diff) <= 1e-12 * (1.0 + std::abs(r.target)) ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return r;
}

/// Empirical mean and variance of the counts, with standard errors, for
/// checking the sampler.
struct CountMoments {
  std::vector<double> mean, mean_se, var, var_se;
};

inline CountMoments count_moments(const CellModel& model, std::int64_t n_samples,
                                  std::uint64_t seed) {
  std::mt19937_64 rng(stream_seed(seed, 0));
  const std::size_t d = model.size();
  std::vector<double> s1(d, 0.0), s2(d, 0.0), s3(d, 0.0), s4(d, 0.0);
  for (std::int64_t i = 0; i < n_samples; ++i) {
    const Configuration x = sample_configuration(model, rng);
    for (std::size_t c = 0; c < d; ++c) {
      const double v = static_cast<double>(x.counts[c]);
      s1[c] += v;
      s2[c] += v * v;
      s3[c] += v * v * v;
      s4[c] += v * v * v * v;
    }
  }
  CountMoments m;
  const double n = static_cast<double>(n_samples);
  for (std::size_t c = 0; c < d; ++c) {
    const double mu = s1[c] / n;
    const double var = s2[c] / n - mu * mu;
    // fourth central moment for the standard error of the variance
    const double m4 = s4[c] / n - 4 * mu * s3[c] / n + 6 * mu * mu * s2[c] / n - 3 * mu * mu * mu * mu;
    m.mean.push_back(mu);
    m.mean_se.push_back(std::sqrt(var / n));
    m.var.push_back(var * n / (n - 1.0));
    m.var_se.push_back(std::sqrt(std::max(0.0, m4 - var * var) / n));
  }
  return m;
}

}  // namespace pwn

#endif  // PWN_MONTECARLO_HPP_
