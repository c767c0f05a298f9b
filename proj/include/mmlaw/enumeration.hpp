#pragma once

#include "mmlaw/core_data.hpp"
#include "mmlaw/pareto.hpp"

#include <cstddef>
#include <vector>

namespace mmlaw {

/// Frontier of the size-k ensembles explored at one step of the pruned search.
struct Generation {
  std::size_t k = 0;
  Frontier frontier;
  std::size_t explored_count = 0;  // unique candidates evaluated at this k
};

struct PrunedEnumeration {
  std::vector<Generation> generations;  // k = 1 .. k_max
  Frontier merged;                      // envelope over every generation

  /// Envelope over generations with k >= min_k; empty if none qualify.
  Frontier merged_from(std::size_t min_k, Dominance rule = Dominance::Weak) const;
};

/// Generational Pareto-pruned search.
///
/// Generation 1 is the frontier of all singletons. Generation k extends every
/// frontier ensemble of generation k-1 by each model it does not contain,
/// deduplicates children by their canonical key, evaluates each child once and
/// keeps the frontier. Dominated ensembles are never extended, so the result is
/// an inner approximation of the exact envelope.
///
/// Throws "invalid k_max" unless 1 <= k_max <= n_models.
PrunedEnumeration enumerate_pruned(const LossMatrix& matrix, std::size_t k_max,
                                   Dominance rule = Dominance::Weak);

inline constexpr std::size_t kBruteForceLimit = 20;

struct ExactEnumeration {
  Frontier merged;                 // global frontier over all subsets of size <= k_max
  std::vector<Frontier> by_size;   // by_size[k - 1]: frontier of the size-k subsets
  std::size_t evaluated = 0;       // subsets evaluated
};

/// Evaluates every non-empty subset of size <= k_max. Throws "pool exceeds
/// brute-force limit" above kBruteForceLimit models.
ExactEnumeration brute_force_enumerate(const LossMatrix& matrix, std::size_t k_max,
                                       Dominance rule = Dominance::Weak);

}  // namespace mmlaw
