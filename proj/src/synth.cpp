#include "mmlaw/synth.hpp"

#include "mmlaw/error.hpp"
#include "mmlaw/io.hpp"
#include "mmlaw/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace mmlaw {
namespace {

std::string padded(char prefix, std::size_t value, std::size_t count) {
  const int width = static_cast<int>(std::to_string(count > 0 ? count - 1 : 0).size());
  char buf[32];
  std::snprintf(buf, sizeof buf, "%c%0*zu", prefix, width, value);
  return buf;
}

}  // namespace

void SynthConfig::validate() const {
  auto fail = [](const std::string& why) { throw Error(ErrorKind::InvalidSynthConfig, why); };
  if (n_families < 1 || models_per_family < 1 || n_texts < 1) fail("counts must be >= 1");
  if (params_grid_billions.size() < models_per_family) {
    fail("params grid needs at least models_per_family entries");
  }
  for (const double p : params_grid_billions) {
    if (!(p > 0.0) || !std::isfinite(p)) fail("params must be positive");
  }
  if (!(base_floor >= 0.0) || !(amplitude >= 0.0) || !(alpha_true >= 0.0) ||
      !(family_signature_strength >= 0.0) || !(noise_sigma >= 0.0)) {
    fail("floor, amplitude, alpha, signature strength and noise must be non-negative");
  }
  if (token_min < 1 || token_max < token_min) fail("token range must satisfy 1 <= min <= max");
}

LossMatrix synth_pool(const SynthConfig& config) {
  config.validate();
  const CounterRng rng(config.seed);
  const std::size_t n_models = config.n_families * config.models_per_family;
  const auto rows = static_cast<Eigen::Index>(n_models);
  const auto cols = static_cast<Eigen::Index>(config.n_texts);

  std::vector<ModelMeta> models;
  models.reserve(n_models);
  for (std::size_t f = 0; f < config.n_families; ++f) {
    for (std::size_t j = 0; j < config.models_per_family; ++j) {
      models.push_back({padded('f', f, config.n_families) + "-" + padded('m', j, config.models_per_family),
                        padded('f', f, config.n_families), config.params_grid_billions[j]});
    }
  }
  std::vector<std::string> texts;
  texts.reserve(config.n_texts);
  for (std::size_t t = 0; t < config.n_texts; ++t) texts.push_back(padded('t', t, config.n_texts));

  // Counters per cell c: 4c for the token count, 4c+2 and 4c+3 for the normal draw.
  CountArray counts(rows, cols);
  long double total = 0;
  for (Eigen::Index m = 0; m < rows; ++m) {
    for (Eigen::Index t = 0; t < cols; ++t) {
      const auto cell = static_cast<std::uint64_t>(m * cols + t);
      counts(m, t) = rng.uniform_int(4 * cell, config.token_min, config.token_max);
      total += static_cast<long double>(counts(m, t));
    }
  }
  const double n_bar = static_cast<double>(total / (static_cast<long double>(rows) * cols));

  LossArray losses(rows, cols);
  for (Eigen::Index m = 0; m < rows; ++m) {
    const auto family = static_cast<std::size_t>(m) / config.models_per_family;
    const double params = models[static_cast<std::size_t>(m)].params_billions;
    const double scale_term = config.amplitude * std::pow(params, -config.alpha_true);
    for (Eigen::Index t = 0; t < cols; ++t) {
      const auto cell = static_cast<std::uint64_t>(m * cols + t);
      const double signature =
          static_cast<std::size_t>(t) % config.n_families == family ? 0.0 : 1.0;
      double per_token = config.base_floor + scale_term + config.family_signature_strength * signature;
      if (config.noise_sigma > 0.0) per_token += config.noise_sigma * rng.normal(2 * cell + 1);
      losses(m, t) = std::max(0.0, n_bar * per_token);
    }
  }
  return LossMatrix(std::move(models), std::move(texts), std::move(losses), std::move(counts));
}

std::string describe_generator(const SynthConfig& config) {
  std::ostringstream out;
  out << "# synthetic loss matrix\n"
      << "# sum_loss(m,t) = max(0, n_bar * (base_floor + amplitude * P_m^-alpha_true"
         " + signature_strength * s_f(t) + noise_sigma * z(m,t)))\n"
      << "# s_f(t) = 0 if t mod n_families == f else 1; z ~ N(0,1) via Box-Muller\n"
      << "# tokens(m,t) ~ uniform integer [token_min, token_max]; n_bar = mean token count\n"
      << "# rng: splitmix64 output at counter c: mix(seed + (c+1) * 0x9E3779B97F4A7C15)\n"
      << "# counters per cell index c = m*n_texts + t: tokens 4c, normal uses 4c+2 and 4c+3\n"
      << "n_families=" << config.n_families << '\n'
      << "models_per_family=" << config.models_per_family << '\n'
      << "params_grid_billions=";
  for (std::size_t i = 0; i < config.params_grid_billions.size(); ++i) {
    if (i) out << ';';
    out << io::format_exact(config.params_grid_billions[i]);
  }
  out << '\n'
      << "n_texts=" << config.n_texts << '\n'
      << "base_floor=" << io::format_exact(config.base_floor) << '\n'
      << "amplitude=" << io::format_exact(config.amplitude) << '\n'
      << "alpha_true=" << io::format_exact(config.alpha_true) << '\n'
      << "family_signature_strength=" << io::format_exact(config.family_signature_strength) << '\n'
      << "noise_sigma=" << io::format_exact(config.noise_sigma) << '\n'
      << "token_min=" << config.token_min << '\n'
      << "token_max=" << config.token_max << '\n'
      << "seed=" << config.seed << '\n';
  return out.str();
}

Frontier synth_curve_points(double A, double alpha, double L_inf, std::span<const double> budgets,
                            double noise_sigma, std::uint64_t seed) {
  if (!(A > 0.0) || !(alpha > 0.0) || !(L_inf >= 0.0) || !(noise_sigma >= 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "need A > 0, alpha > 0, L_inf >= 0, noise_sigma >= 0");
  }
  const CounterRng rng(seed);
  Frontier out;
  out.points.reserve(budgets.size());
  for (std::size_t i = 0; i < budgets.size(); ++i) {
    const double p = budgets[i];
    if (!(p > 0.0) || !std::isfinite(p)) throw Error(ErrorKind::InvalidBudget, "P must be positive");
    double loss = A * std::pow(p, -alpha) + L_inf;
    if (noise_sigma > 0.0) loss += noise_sigma * rng.normal(i);
    out.points.push_back({p, loss, "p" + std::to_string(i)});
  }
  return out;
}

}  // namespace mmlaw
