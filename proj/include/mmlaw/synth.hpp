#pragma once

#include "mmlaw/core_data.hpp"
#include "mmlaw/pareto.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mmlaw {

/// Generator settings for a synthetic pool.
///
/// Model j of family f has params_grid_billions[j]. Texts fall into n_families
/// disjoint strata (text t belongs to stratum t mod n_families), and family f
/// has affinity for stratum f. Per cell:
///
///   tokens(m, t)   ~ uniform integer in [token_min, token_max]
///   sum_loss(m, t) = max(0, n_bar * (base_floor + amplitude * P^-alpha_true
///                                    + signature_strength * s_f(t)
///                                    + noise_sigma * z(m, t)))
///
/// with s_f(t) = 0 on the family's own stratum and 1 elsewhere, z standard normal,
/// and n_bar the mean of the drawn token counts. All draws come from CounterRng(seed).
struct SynthConfig {
  std::size_t n_families = 3;
  std::size_t models_per_family = 5;
  std::vector<double> params_grid_billions{0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0};
  std::size_t n_texts = 60;
  double base_floor = 1.0;
  double amplitude = 1.0;
  double alpha_true = 0.35;
  double family_signature_strength = 0.5;
  double noise_sigma = 0.0;
  std::int64_t token_min = 64;
  std::int64_t token_max = 192;
  std::uint64_t seed = 0;

  /// Throws "invalid synth config".
  void validate() const;
};

LossMatrix synth_pool(const SynthConfig& config);

/// Human-readable record of the generative equation and every setting.
std::string describe_generator(const SynthConfig& config);

/// Points with loss = A * P^-alpha + L_inf + noise_sigma * z_i, keyed "p0", "p1", ...
/// and kept in the order of `budgets`. Throws "invalid argument" on bad parameters.
Frontier synth_curve_points(double A, double alpha, double L_inf, std::span<const double> budgets,
                            double noise_sigma, std::uint64_t seed);

}  // namespace mmlaw
