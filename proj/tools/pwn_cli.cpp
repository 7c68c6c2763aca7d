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

// pwn_cli: validate models, evaluate chaos vectors, run verification suites.
//
// Every command prints one JSON report on stdout and a short log on stderr.
// Exit codes: 0 all checks pass, 1 a check failed, 2 usage or input error.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pwn/io.hpp"
#include "pwn/pwn.hpp"

namespace {

using namespace pwn;

constexpr int kSchemaVersion = 1;
constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

struct Options {
  std::string model_path;
  std::string chaos_path;
  std::string config_path;
  std::string suite;
  std::optional<int> trunc;
  std::optional<double> kappa;
  std::optional<int> p;
  std::uint64_t seed = 20260101;
  std::optional<std::int64_t> samples;
  std::optional<double> tol;
};

/// Accumulates the report while a command runs.
class Report {
 public:
  explicit Report(std::string command) : t0_(std::chrono::steady_clock::now()) {
    j_["schema_version"] = kSchemaVersion;
    j_["command"] = std::move(command);
    j_["inputs"] = Json::object();
    j_["parameters"] = Json::object();
    j_["outputs"] = Json::object();
  }

  std::string load(const std::string& role, const std::string& path) {
    std::string text = read_text_file(path);
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a(text)));
    j_["inputs"][role] = {{"path", path}, {"fnv1a64", hex}};
    return text;
  }

  Json& parameters() { return j_["parameters"]; }
  Json& outputs() { return j_["outputs"]; }

  int finish(bool pass) {
    j_["pass"] = pass;
    j_["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    std::cout << j_.dump(2) << "\n";
    return pass ? kExitPass : kExitFail;
  }

 private:
  Json j_;
  std::chrono::steady_clock::time_point t0_;
};

CellModel load_model(Report& report, const std::string& path) {
  return model_from_json(parse_json(report.load("model", path), path));
}

Json report_json(const AssumptionReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail},
                      {"witness", std::isfinite(c.witness) ? Json(c.witness) : Json(nullptr)}});
  }
  Json out = {{"pass", r.passed()}, {"checks", checks}, {"offending_cells", r.offending_cells}};
  if (r.constants) {
    Json cp = Json::object();
    for (const auto& [p, v] : r.constants->c_p) cp[std::to_string(p)] = v;
    out["constants"] = {{"rho", r.constants->rho},
                        {"c_p", cp},
                        {"delta_sq", r.constants->delta_sq},
                        {"delta_inf", r.constants->delta_inf}};
  }
  return out;
}

// ---------------------------------------------------------------------------
// random inputs for the suites

SymKernel random_kernel(std::size_t dim, int degree, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<CellIndex> cells(dim);
  for (std::size_t i = 0; i < dim; ++i) cells[i] = static_cast<CellIndex>(i);
  SymKernel k(dim, degree);
  for_each_multiset(cells, degree, [&](const Multiset& m) { k.add_sorted(m, u(rng)); });
  return k;
}

ChaosVector random_chaos(std::size_t dim, int trunc, std::mt19937_64& rng) {
  ChaosVector v(dim, trunc);
  for (int n = 0; n <= trunc; ++n) v.kernel(n) = random_kernel(dim, n, rng);
  return v;
}

std::vector<double> uniform_vector(std::size_t dim, double lo, double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(dim);
  for (double& x : v) x = u(rng);
  return v;
}

// ---------------------------------------------------------------------------
// suites

bool suite_exp_compare(const CellModel& m, const Options& o, Report& rep) {
  const int N = o.trunc.value_or(20);
  const double tol = o.tol.value_or(1e-8);
  const int p = o.p.value_or(1);
  const int cases = 100;
  rep.parameters() = {{"trunc", N}, {"tol", tol}, {"p", p}, {"cases", cases}, {"seed", o.seed}};
  std::mt19937_64 rng(o.seed);
  double worst = 0.0;
  int bad = 0;
  for (int i = 0; i < cases; ++i) {
    const DualVector x = sample_configuration(m, rng).to_dual(m);
    std::vector<double> xi = uniform_vector(m.size(), -0.3, 0.3, rng);
    // keep inside the convergence guard on models with heavy weights
    const double nrm = test_norm(m, xi, p);
    if (nrm >= 0.9) {
      for (double& v : xi) v *= 0.9 / nrm;
    }
    const double err = std::abs(wick_exp_series(m, x, xi, N, tol, p).value - wick_exp_closed(m, x, xi));
    worst = std::max(worst, err);
    if (!(err <= tol)) ++bad;
  }
  rep.outputs() = {{"max_abs_error", worst}, {"violations", bad}};
  std::cerr << "exp-compare: " << cases << " cases, max |series - closed| = " << worst << "\n";
  return bad == 0;
}

bool suite_delta_profile(const CellModel& m, const Options& o, Report& rep) {
  const double kappa = o.kappa.value_or(0.5);
  const int p = o.p.value_or(1);
  const int N = o.trunc.value_or(60);
  const int cases = 10;
  rep.parameters() = {{"kappa", kappa}, {"p", p}, {"trunc", N}, {"cases", cases}, {"seed", o.seed}};
  std::mt19937_64 rng(o.seed);
  Json rows = Json::array();
  bool diverges = true, bounded = true;
  for (int i = 0; i < cases; ++i) {
    const DualVector y{uniform_vector(m.size(), 0.05, 6.0, rng)};
    const double R = dual_norm(m, y.density, p);
    const int p_used = kappa < 1.0 ? p : p1_selector(m, p, R);
    const DeltaNormProfile prof = delta_norm_profile(m, y, kappa, p_used, N);
    const int n0 = increasing_tail_start(prof.terms);
    double top = 0.0;
    for (double s : prof.partial_sums) top = std::max(top, s);
    if (n0 < 0 || n0 > N / 2) diverges = false;
    if (!(top <= 4.0 / 3.0)) bounded = false;
    rows.push_back({{"density", y.density}, {"p", p_used}, {"tail_start", n0},
                    {"last_term", prof.terms.back()}, {"max_partial_sum", top}});
  }
  rep.outputs() = {{"cases", rows}, {"divergence_detected", diverges}, {"bounded_by_4_3", bounded}};
  std::cerr << "delta-profile: kappa=" << kappa << (diverges ? " divergence detected" : "")
            << (bounded ? " bounded" : "") << "\n";
  return kappa < 1.0 ? diverges : bounded;
}

bool suite_product_bound(const CellModel& m, const Options& o, Report& rep) {
  const int trunc = o.trunc.value_or(4);
  const int p = o.p.value_or(1);
  const double kappa = o.kappa.value_or(1.0);
  const int cases = 100;
  rep.parameters() = {{"trunc", trunc}, {"p", p}, {"kappa", kappa}, {"cases", cases}, {"seed", o.seed}};
  std::mt19937_64 rng(o.seed);
  std::uniform_int_distribution<int> deg(0, trunc);
  int bad = 0;
  double worst = 0.0;
  ProductBoundReport last;
  for (int i = 0; i < cases; ++i) {
    const ChaosVector phi = random_chaos(m.size(), deg(rng), rng);
    const ChaosVector psi = random_chaos(m.size(), deg(rng), rng);
    last = product_bound(m, phi, psi, p, kappa);
    worst = std::max(worst, last.lhs / last.rhs);
    if (!last.pass) ++bad;
  }
  rep.outputs() = {{"q", last.q}, {"y_p", last.y_p}, {"constant", last.constant},
                   {"max_lhs_over_rhs", worst}, {"violations", bad}};
  std::cerr << "product-bound: q=" << last.q << " const=" << last.constant << " violations=" << bad
            << "\n";
  return bad == 0;
}

bool suite_mc_isometry(const CellModel& m, const Options& o, Report& rep) {
  const int trunc = o.trunc.value_or(3);
  const std::int64_t samples = o.samples.value_or(200000);
  const int cases = 20;
  if (samples < 2) throw UsageError("--samples must be at least 2");
  rep.parameters() = {{"trunc", trunc}, {"samples", samples}, {"cases", cases}, {"seed", o.seed},
                      {"threads", thread_budget()}};
  std::mt19937_64 rng(o.seed);
  Json rows = Json::array();
  int within = 0;
  for (int i = 0; i < cases; ++i) {
    const ChaosVector phi = random_chaos(m.size(), 1 + i % std::max(trunc, 1), rng);
    const IsometryReport r = isometry_check(m, phi, samples, o.seed + 1000 + i);
    if (std::abs(r.z) <= 4.0) ++within;
    rows.push_back({{"estimate", r.estimate.mean}, {"std_error", r.estimate.std_error},
                    {"target", r.target}, {"z", std::isfinite(r.z) ? Json(r.z) : Json(nullptr)}});
  }
  rep.outputs() = {{"cases", rows}, {"within_4_sigma", within}};
  std::cerr << "mc-isometry: " << within << "/" << cases << " within 4 sigma\n";
  return within >= cases - 1;
}

bool suite_growth_bound(const CellModel& m, const Options& o, Report& rep) {
  const int p = o.p.value_or(1);
  const int N = o.trunc.value_or(8);
  const int cases = 100;
  rep.parameters() = {{"p", p}, {"trunc", N}, {"cases", cases}, {"seed", o.seed}};
  std::mt19937_64 rng(o.seed);
  int bad = 0, bad_chain = 0;
  double worst = 0.0;
  for (int i = 0; i < cases; ++i) {
    const DualVector x = sample_configuration(m, rng).to_dual(m);
    const GrowthBoundReport r = growth_bound_check(m, x, p, N);
    if (!r.pass) ++bad;
    if (!r.chain_pass) ++bad_chain;
    for (const auto& row : r.rows) {
      if (row.n >= 1) worst = std::max(worst, row.ratio);
    }
  }
  rep.outputs() = {{"violations", bad}, {"chain_violations", bad_chain}, {"max_ratio_n_ge_1", worst}};
  std::cerr << "growth-bound: violations=" << bad << " chain violations=" << bad_chain << "\n";
  return bad == 0 && bad_chain == 0;
}

// ---------------------------------------------------------------------------
// commands

int cmd_validate(const Options& o) {
  Report rep("validate");
  const CellModel m = load_model(rep, o.model_path);
  const AssumptionReport r = validate_assumptions(m, o.p.value_or(3));
  rep.outputs() = report_json(r);
  std::cerr << "validate: " << (r.passed() ? "all assumptions hold" : "assumptions violated") << "\n";
  for (const auto& c : r.offending_cells) std::cerr << "  " << c << "\n";
  return rep.finish(r.passed());
}

int cmd_eval(const Options& o) {
  Report rep("eval");
  const CellModel m = load_model(rep, o.model_path);
  const double tol = o.tol.value_or(1e-6);
  rep.parameters() = {{"tol", tol}};
  ChaosVector phi;
  EvalPoint x;
  try {
    phi = chaos_from_json(m, parse_json(rep.load("chaos", o.chaos_path), o.chaos_path));
    x = point_from_json(m, parse_json(rep.load("config", o.config_path), o.config_path));
  } catch (const ModelMismatchError& e) {
    std::cerr << "eval: " << e.what() << "\n";
    rep.outputs() = {{"error", e.what()}};
    return rep.finish(false);
  }
  const double a = eval_chaos(m, phi, x.density);
  const double b = eval_chaos_factorized(m, phi, x.density);
  const double diff = std::abs(a - b);
  rep.outputs() = {{"value_recursion", a}, {"value_factorized", b}, {"discrepancy", diff}};
  std::cerr << "eval: recursion " << a << ", factorized " << b << ", |diff| " << diff << "\n";
  return rep.finish(diff <= tol);
}

int cmd_suite(const Options& o) {
  using Fn = bool (*)(const CellModel&, const Options&, Report&);
  static const std::map<std::string, Fn> suites{
      {"exp-compare", suite_exp_compare},     {"delta-profile", suite_delta_profile},
      {"product-bound", suite_product_bound}, {"mc-isometry", suite_mc_isometry},
      {"growth-bound", suite_growth_bound},
  };
  const auto it = suites.find(o.suite);
  if (it == suites.end()) throw UsageError("unknown suite '" + o.suite + "'");
  Report rep("suite " + o.suite);
  const CellModel m = load_model(rep, o.model_path);
  const AssumptionReport check = validate_assumptions(m);
  if (!check.passed()) {
    // the bounds and selectors are undefined off the assumptions
    rep.outputs() = {{"validation", report_json(check)}};
    std::cerr << "suite: model violates the chain assumptions\n";
    return rep.finish(false);
  }
  const bool pass = it->second(m, o, rep);
  return rep.finish(pass);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Poisson white-noise calculus on a finite cell model"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--model", o.model_path, "model JSON file")->required();
  };
  auto numeric = [&](CLI::App* sub) {
    sub->add_option("--trunc", o.trunc, "truncation degree");
    sub->add_option("--kappa", o.kappa, "Fock weight exponent");
    sub->add_option("--p", o.p, "chain index");
    sub->add_option("--seed", o.seed, "random seed");
    sub->add_option("--samples", o.samples, "Monte-Carlo sample count");
    sub->add_option("--tol", o.tol, "tolerance");
  };

  CLI::App* validate = app.add_subcommand("validate", "check the chain assumptions of a model");
  common(validate);
  validate->add_option("--p", o.p, "largest p for which C_p is reported");

  CLI::App* eval = app.add_subcommand("eval", "evaluate a chaos vector by recursion and by factorization");
  common(eval);
  eval->add_option("--chaos", o.chaos_path, "chaos JSON file")->required();
  eval->add_option("--config", o.config_path, "point JSON file")->required();
  eval->add_option("--tol", o.tol, "largest allowed discrepancy (default 1e-6)");

  CLI::App* suite = app.add_subcommand("suite", "run a verification suite");
  suite->add_option("name", o.suite,
                    "exp-compare | delta-profile | product-bound | mc-isometry | growth-bound")
      ->required();
  common(suite);
  numeric(suite);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (validate->parsed()) return cmd_validate(o);
    if (eval->parsed()) return cmd_eval(o);
    return cmd_suite(o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const FormatError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ModelError& e) {
    std::cerr << "model error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
}
