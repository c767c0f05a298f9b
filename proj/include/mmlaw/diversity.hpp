#pragma once

#include "mmlaw/core_data.hpp"
#include "mmlaw/fitting.hpp"
#include "mmlaw/pareto.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mmlaw {

/// All unordered model pairs, split by exact family-label equality.
struct PairPartition {
  std::vector<std::pair<std::size_t, std::size_t>> homogeneous;    // same family, (i < j) rows
  std::vector<std::pair<std::size_t, std::size_t>> heterogeneous;  // different families
};

/// Throws "insufficient pool" for fewer than two models.
PairPartition partition_pairs(const LossMatrix& matrix);

/// Oracle (budget, loss, key) for each listed pair.
std::vector<FrontierPoint> pair_points(const LossMatrix& matrix,
                                       const std::vector<std::pair<std::size_t, std::size_t>>& pairs);

struct SideReport {
  std::string side;                     // "homogeneous" | "heterogeneous"
  std::size_t raw_pairs = 0;
  Frontier frontier;                    // empty when the side has no pairs
  std::optional<ScalingFitd> fit;
  std::string skip_reason;              // set when fit is absent
};

struct PairwiseReport {
  SideReport homogeneous;
  SideReport heterogeneous;
};

/// Evaluates every pair, extracts one frontier per side and fits each side that
/// has at least four frontier points.
PairwiseReport pairwise_frontiers_and_fits(const LossMatrix& matrix, const FitConfigd& config = {},
                                           Dominance rule = Dominance::Weak);

/// Frontier + fit for an arbitrary candidate set, shared with the CLI pipelines.
SideReport frontier_and_fit(std::string side, std::vector<FrontierPoint> candidates,
                            const FitConfigd& config, Dominance rule);

/// CSV `side,raw_pairs,pareto_pairs,L_inf,A,alpha`; skipped fits leave the last three empty.
void write_pairs_report_csv(const PairwiseReport& report, std::ostream& out);

}  // namespace mmlaw
