// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "mmlaw/diversity.hpp"
#include "mmlaw/enumeration.hpp"
#include "mmlaw/fitting.hpp"
#include "mmlaw/io.hpp"
#include "mmlaw/oracle_loss.hpp"
#include "mmlaw/pareto.hpp"
#include "mmlaw/report.hpp"
#include "mmlaw/synth.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

using namespace mmlaw;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void criterion(const std::string& name, double budget_seconds, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = budget_seconds <= 0 || secs < budget_seconds;
  const bool pass = o.pass && in_time;
  if (!pass) ++failures;
  std::printf("%s  %-34s %7.3fs", pass ? "PASS" : "FAIL", name.c_str(), secs);
  if (budget_seconds > 0) std::printf(" (limit %gs)", budget_seconds);
  std::printf("  %s\n", o.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

Outcome fit_recovery(double A, double alpha, double L) {
  std::vector<double> budgets;
  for (int i = 0; i <= 10; ++i) budgets.push_back(std::ldexp(1.0, i));
  const auto clean = fit_scaling_law(synth_curve_points(A, alpha, L, budgets, 0.0, 0));
  const double worst = std::max({std::abs(clean.A - A) / A, std::abs(clean.alpha - alpha) / alpha,
                                 std::abs(clean.L_inf - L) / L});
  std::vector<double> alpha_err, floor_err;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto fit = fit_scaling_law(synth_curve_points(A, alpha, L, budgets, 0.01, seed));
    alpha_err.push_back(std::abs(fit.alpha - alpha) / alpha);
    floor_err.push_back(std::abs(fit.L_inf - L));
  }
  const double ma = median(alpha_err), mf = median(floor_err);
  return {worst <= 1e-3 && ma <= 0.05 && mf <= 0.02,
          "noise-free max rel err " + fmt("%.2e", worst) + "; 20 seeds sigma=0.01: median alpha rel err " +
              fmt("%.4f", ma) + ", median L_inf abs err " + fmt("%.4f", mf)};
}

Outcome pareto_correctness() {
  std::mt19937_64 gen(20240601);
  const std::size_t sets = 120;
  std::size_t largest = 0, checked = 0;
  bool ok = true;
  for (std::size_t s = 0; s < sets; ++s) {
    const std::size_t n = s % 10 == 0 ? 10000 : 1 + gen() % 3000;
    // Half the sets sit on a coarse grid so ties in budget and loss are frequent.
    const bool grid = s % 2 == 1;
    std::uniform_real_distribution<double> cont(0.01, 100.0);
    std::uniform_int_distribution<int> cell(1, 25);
    std::vector<FrontierPoint> points;
    points.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double p = grid ? cell(gen) * 0.5 : cont(gen);
      const double l = grid ? cell(gen) * 0.1 : cont(gen);
      points.push_back({p, l, "k" + std::to_string(i)});
    }
    const auto rule = s % 3 == 2 ? Dominance::Strict : Dominance::Weak;
    const auto f = pareto_front(points, rule);
    ok = ok && f == oracles::exhaustive_pareto(points, rule);
    ok = ok && pareto_front(f.points, rule) == f;
    for (std::size_t i = 1; i < f.size() && rule == Dominance::Weak; ++i) {
      ok = ok && f.points[i].total_params_billions > f.points[i - 1].total_params_billions &&
           f.points[i].loss < f.points[i - 1].loss;
    }
    largest = std::max(largest, n);
    ++checked;
  }
  return {ok, std::to_string(checked) + " sets, largest " + std::to_string(largest) +
                  " points, weak and strict rules, ties included"};
}

Outcome oracle_loss_correctness() {
  std::mt19937_64 gen(77);
  std::size_t subsets = 0, mismatches = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n_models = 3 + gen() % 8;
    const std::size_t n_texts = 1 + gen() % 50;
    const auto m = testing::random_matrix(gen, n_models, n_texts);
    for (std::uint32_t mask = 1; mask < (1u << n_models); ++mask) {
      if (std::popcount(mask) > 3) continue;
      std::vector<std::size_t> members;
      for (std::size_t i = 0; i < n_models; ++i) {
        if (mask & (1u << i)) members.push_back(i);
      }
      const auto got = oracle_loss(m, build_min_vector(m, std::span<const std::size_t>(members)));
      if (got.oracle_loss != oracles::argmin_oracle_loss(m, members)) ++mismatches;
      ++subsets;
    }
  }
  std::size_t violations = 0;
  for (int pair = 0; pair < 1000; ++pair) {
    const std::size_t n_models = 2 + gen() % 9;
    const auto m = testing::random_matrix(gen, n_models, 1 + gen() % 50);
    std::vector<std::size_t> order(n_models);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), gen);
    const std::size_t small = 1 + gen() % (n_models - 1);
    const std::size_t large = small + 1 + gen() % (n_models - small);
    const double a = oracle_loss(m, build_min_vector(m, std::span<const std::size_t>(order.data(), small))).oracle_loss;
    const double b = oracle_loss(m, build_min_vector(m, std::span<const std::size_t>(order.data(), large))).oracle_loss;
    if (b > a) ++violations;
  }
  return {mismatches == 0 && violations == 0,
          "100 matrices, " + std::to_string(subsets) + " subsets of size <= 3, " + std::to_string(mismatches) +
              " mismatches; 1000 nested pairs, " + std::to_string(violations) + " monotonicity violations"};
}

/// Rows ordered so a larger model is at least as good on every text.
LossMatrix random_monotone_matrix(std::mt19937_64& gen, std::size_t n_models, std::size_t n_texts) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> params(n_models);
  for (auto& p : params) p = 0.1 + 20.0 * u(gen);
  std::sort(params.begin(), params.end());
  std::vector<std::vector<double>> losses(n_models, std::vector<double>(n_texts));
  for (std::size_t t = 0; t < n_texts; ++t) {
    double level = 400.0 + 100.0 * u(gen);
    for (std::size_t m = 0; m < n_models; ++m) {
      level -= 1.0 + 20.0 * u(gen);
      losses[m][t] = level;
    }
  }
  std::vector<std::vector<std::int64_t>> counts(n_models, std::vector<std::int64_t>(n_texts));
  for (auto& row : counts) {
    for (auto& c : row) c = 1 + static_cast<std::int64_t>(gen() % 300);
  }
  return testing::make_matrix(losses, counts, params);
}

Outcome pruning_vs_exact() {
  std::mt19937_64 gen(4242);
  std::size_t pools = 0, envelope_violations = 0, full_mismatch = 0, points = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 8 + static_cast<std::size_t>(trial) % 5;
    const auto m = testing::random_matrix(gen, n, 10 + gen() % 30);
    const auto pruned = enumerate_pruned(m, n);
    const auto exact = brute_force_enumerate(m, n);
    for (const auto& g : pruned.generations) {
      for (const auto& p : g.frontier.points) {
        ++points;
        if (oracles::envelope_at(exact.merged, p.total_params_billions) > p.loss) ++envelope_violations;
      }
    }
    if (!(pruned.generations.back().frontier.points.at(0) == exact.by_size.back().points.at(0))) ++full_mismatch;
    ++pools;
  }
  std::size_t monotone = 0, monotone_mismatch = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 8 + static_cast<std::size_t>(trial) % 5;
    const auto m = random_monotone_matrix(gen, n, 20);
    if (!(enumerate_pruned(m, n).merged == brute_force_enumerate(m, n).merged)) ++monotone_mismatch;
    ++monotone;
  }
  for (std::size_t per_family : {8, 10, 12}) {
    SynthConfig cfg;
    cfg.n_families = 1;
    cfg.models_per_family = per_family;
    cfg.params_grid_billions = {0.5, 1, 2, 3, 4, 6, 8, 12, 16, 24, 32, 64};
    cfg.family_signature_strength = 0.0;
    cfg.n_texts = 20;
    const auto m = synth_pool(cfg);
    if (!(enumerate_pruned(m, per_family).merged == brute_force_enumerate(m, per_family).merged)) {
      ++monotone_mismatch;
    }
    ++monotone;
  }
  return {envelope_violations == 0 && full_mismatch == 0 && monotone_mismatch == 0,
          std::to_string(pools) + " pools of 8-12 models, " + std::to_string(points) + " explored frontier points, " +
              std::to_string(envelope_violations) + " envelope violations, " + std::to_string(full_mismatch) +
              " full-pool mismatches; " + std::to_string(monotone) + " monotone pools, " +
              std::to_string(monotone_mismatch) + " differ"};
}

Outcome pair_partition() {
  std::mt19937_64 gen(9);
  bool ok = true;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + gen() % 40;
    const auto m = testing::random_matrix(gen, n, 1, 1 + gen() % 6);
    const auto p = partition_pairs(m);
    ok = ok && p.homogeneous.size() + p.heterogeneous.size() == n * (n - 1) / 2;
  }
  // 71 models in families of 7, 14, 15, 17 and 18.
  std::vector<std::vector<double>> losses;
  std::vector<double> params;
  std::vector<std::string> families;
  for (const std::size_t size : {7, 14, 15, 17, 18}) {
    for (std::size_t j = 0; j < size; ++j) {
      losses.push_back({1.0 + static_cast<double>(losses.size())});
      params.push_back(1.0);
      families.push_back("fam" + std::to_string(size));
    }
  }
  const auto m = testing::make_matrix(losses, testing::flat_counts(71, 1, 1), params, families);
  const auto p = partition_pairs(m);
  const bool paper = p.homogeneous.size() == 506 && p.heterogeneous.size() == 1979 && 506 + 1979 == 2485 &&
                     71 * 70 / 2 == 2485;
  return {ok && paper, "200 random pools satisfy |hom| + |het| = C(n,2); 71-model pool gives " +
                           std::to_string(p.homogeneous.size()) + " + " + std::to_string(p.heterogeneous.size()) +
                           " = 2485 = C(71,2)"};
}

Outcome qualitative() {
  std::string detail;
  bool ok = true;
  for (std::uint64_t seed : {1, 2, 3}) {
    SynthConfig cfg;
    cfg.n_families = 3;
    cfg.models_per_family = 5;
    cfg.noise_sigma = 0.01;
    cfg.seed = seed;
    const auto artifacts = run_pipelines(synth_pool(cfg), RunConfig{});
    auto fit_of = [&](const std::string& name) {
      for (const auto& a : artifacts) {
        if (a.name == name) return parse_fit_json(a.content);
      }
      return std::optional<ScalingFitd>{};
    };
    const auto single = fit_of("single_fit.json"), ensemble = fit_of("ensemble_fit.json");
    const auto hom = fit_of("homogeneous_fit.json"), het = fit_of("heterogeneous_fit.json");
    if (!single || !ensemble || !hom || !het) {
      ok = false;
      detail += "seed " + std::to_string(seed) + ": a fit was skipped; ";
      continue;
    }
    ok = ok && ensemble->L_inf < single->L_inf && het->L_inf < hom->L_inf;
    detail += "seed " + std::to_string(seed) + ": L_inf ensemble " + fmt("%.3f", ensemble->L_inf) + " < single " +
              fmt("%.3f", single->L_inf) + ", het " + fmt("%.3f", het->L_inf) + " < hom " +
              fmt("%.3f", hom->L_inf) + "; ";
  }
  return {ok, detail};
}

Outcome gradient_check() {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> a(0.2, 4.0), al(0.05, 1.5), fl(0.0, 3.0), lp(-1.0, 3.0);
  const double h = 1e-6;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    VectorX<double> p(11), y = VectorX<double>::Zero(11);
    for (int i = 0; i < 11; ++i) p(i) = std::pow(10.0, lp(gen));
    const double A = a(gen), alpha = al(gen), L = fl(gen);
    const auto J = power_law_jacobian(p, A, alpha);
    Eigen::Matrix<double, Eigen::Dynamic, 3> fd(11, 3);
    fd.col(0) = (power_law_residuals(p, y, A + h, alpha, L) - power_law_residuals(p, y, A - h, alpha, L)) / (2 * h);
    fd.col(1) = (power_law_residuals(p, y, A, alpha + h, L) - power_law_residuals(p, y, A, alpha - h, L)) / (2 * h);
    fd.col(2) = (power_law_residuals(p, y, A, alpha, L + h) - power_law_residuals(p, y, A, alpha, L - h)) / (2 * h);
    worst = std::max(worst, (J - fd).norm() / J.norm());
  }
  return {worst < 1e-5, "100 parameter points, worst relative Frobenius error " + fmt("%.2e", worst)};
}

Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / ("mmlaw_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  SynthConfig s;
  s.noise_sigma = 0.02;
  s.seed = 17;
  const auto m = synth_pool(s);
  io::write_file_atomic(dir / "metadata.csv", metadata_csv(m));
  io::write_file_atomic(dir / "matrix.csv", matrix_csv(m));
  RunConfig cfg;
  cfg.metadata = dir / "metadata.csv";
  cfg.matrix = dir / "matrix.csv";
  std::ostringstream o1, e1, o2, e2;
  cfg.out_dir = dir / "a";
  const int r1 = cmd_run(cfg, o1, e1);
  cfg.out_dir = dir / "b";
  const int r2 = cmd_run(cfg, o2, e2);
  std::size_t files = 0, differ = 0;
  if (r1 == 0 && r2 == 0) {
    for (const auto& entry : fs::directory_iterator(dir / "a")) {
      ++files;
      const auto twin = dir / "b" / entry.path().filename();
      if (!fs::exists(twin) || io::read_file(entry.path()) != io::read_file(twin)) ++differ;
    }
  }
  fs::remove_all(dir);
  return {r1 == 0 && r2 == 0 && files > 0 && differ == 0 && o1.str() == o2.str(),
          std::to_string(files) + " output files compared, " + std::to_string(differ) + " differ"};
}

}  // namespace

int main() {
  criterion("fit recovery (A=2.02 a=0.3502 L=1.25)", 5, [] { return fit_recovery(2.02, 0.3502, 1.25); });
  criterion("fit recovery (A=1.11 a=0.3578 L=2.21)", 5, [] { return fit_recovery(1.11, 0.3578, 2.21); });
  criterion("pareto correctness", 10, pareto_correctness);
  criterion("oracle-loss correctness", 0, oracle_loss_correctness);
  criterion("pruning vs exact", 60, pruning_vs_exact);
  criterion("pair partition identity", 0, pair_partition);
  criterion("qualitative floors on synthetic pools", 120, qualitative);
  criterion("gradient check", 0, gradient_check);
  criterion("determinism of run", 0, determinism);
  std::printf("%s: %d failing criteria\n", failures ? "FAILED" : "ALL PASSED", failures);
  return failures ? 1 : 0;
}
