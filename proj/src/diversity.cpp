#include "mmlaw/diversity.hpp"

#include "mmlaw/error.hpp"
#include "mmlaw/io.hpp"
#include "mmlaw/oracle_loss.hpp"

#include <ostream>

namespace mmlaw {

PairPartition partition_pairs(const LossMatrix& matrix) {
  const std::size_t n = matrix.n_models();
  if (n < 2) throw Error(ErrorKind::InsufficientPool, std::to_string(n) + " model(s), need 2");
  PairPartition out;
  const auto& models = matrix.models();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      auto& side = models[i].family == models[j].family ? out.homogeneous : out.heterogeneous;
      side.emplace_back(i, j);
    }
  }
  return out;
}

std::vector<FrontierPoint> pair_points(const LossMatrix& matrix,
                                       const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  std::vector<FrontierPoint> points;
  points.reserve(pairs.size());
  for (const auto& [i, j] : pairs) {
    const std::size_t members[] = {i, j};
    const auto vec = build_min_vector(matrix, std::span<const std::size_t>(members));
    const auto eval = oracle_loss(matrix, vec);
    points.push_back({eval.total_params_billions, eval.oracle_loss, ensemble_key(matrix, vec.members)});
  }
  return points;
}

SideReport frontier_and_fit(std::string side, std::vector<FrontierPoint> candidates,
                            const FitConfigd& config, Dominance rule) {
  SideReport report;
  report.side = std::move(side);
  report.raw_pairs = candidates.size();
  if (!candidates.empty()) report.frontier = pareto_front(std::move(candidates), rule);
  if (report.frontier.size() < 4) {
    report.skip_reason = std::string(to_string(ErrorKind::InsufficientPoints));
    return report;
  }
  try {
    report.fit = fit_scaling_law(report.frontier, config);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::DegenerateAbscissae && e.kind() != ErrorKind::InfeasibleStart) throw;
    report.skip_reason = std::string(e.code());
  }
  return report;
}

PairwiseReport pairwise_frontiers_and_fits(const LossMatrix& matrix, const FitConfigd& config,
                                           Dominance rule) {
  const auto partition = partition_pairs(matrix);
  return {frontier_and_fit("homogeneous", pair_points(matrix, partition.homogeneous), config, rule),
          frontier_and_fit("heterogeneous", pair_points(matrix, partition.heterogeneous), config, rule)};
}

void write_pairs_report_csv(const PairwiseReport& report, std::ostream& out) {
  out << "side,raw_pairs,pareto_pairs,L_inf,A,alpha\n";
  for (const auto* side : {&report.homogeneous, &report.heterogeneous}) {
    out << side->side << ',' << side->raw_pairs << ',' << side->frontier.size() << ',';
    if (side->fit) {
      out << io::format_exact(side->fit->L_inf) << ',' << io::format_exact(side->fit->A) << ','
          << io::format_exact(side->fit->alpha);
    } else {
      out << ",,";
    }
    out << '\n';
  }
}

}  // namespace mmlaw
