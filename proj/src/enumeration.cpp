#include "mmlaw/enumeration.hpp"

#include "mmlaw/error.hpp"
#include "mmlaw/oracle_loss.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

namespace mmlaw {
namespace {

void check_k_max(const LossMatrix& matrix, std::size_t k_max) {
  if (k_max < 1 || k_max > matrix.n_models()) {
    throw Error(ErrorKind::InvalidKMax, "k_max=" + std::to_string(k_max) + " with " +
                                            std::to_string(matrix.n_models()) + " models");
  }
}

struct Candidate {
  MinLossVector vec;
  FrontierPoint point;
};

FrontierPoint to_point(const LossMatrix& matrix, const MinLossVector& vec) {
  const auto eval = oracle_loss(matrix, vec);
  return {eval.total_params_billions, eval.oracle_loss, ensemble_key(matrix, vec.members)};
}

/// Frontier of the candidates plus the surviving candidates, in frontier order.
std::pair<Frontier, std::vector<Candidate>> extract(std::vector<Candidate> candidates,
                                                    Dominance rule) {
  std::vector<FrontierPoint> points;
  points.reserve(candidates.size());
  std::unordered_map<std::string, std::size_t> by_key;
  by_key.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    points.push_back(candidates[i].point);
    by_key.emplace(candidates[i].point.ensemble_key, i);
  }
  Frontier frontier = pareto_front(std::move(points), rule);
  std::vector<Candidate> survivors;
  survivors.reserve(frontier.size());
  for (const auto& p : frontier.points) survivors.push_back(std::move(candidates[by_key.at(p.ensemble_key)]));
  return {std::move(frontier), std::move(survivors)};
}

}  // namespace

Frontier PrunedEnumeration::merged_from(std::size_t min_k, Dominance rule) const {
  Frontier out;
  for (const auto& g : generations) {
    if (g.k >= min_k) out = merge_frontiers(out, g.frontier, rule);
  }
  return out;
}

PrunedEnumeration enumerate_pruned(const LossMatrix& matrix, std::size_t k_max, Dominance rule) {
  check_k_max(matrix, k_max);
  const std::size_t n = matrix.n_models();

  std::vector<Candidate> candidates;
  candidates.reserve(n);
  for (std::size_t m = 0; m < n; ++m) {
    const std::size_t row[] = {m};
    auto vec = build_min_vector(matrix, std::span<const std::size_t>(row));
    auto point = to_point(matrix, vec);
    candidates.push_back({std::move(vec), std::move(point)});
  }

  PrunedEnumeration result;
  auto [frontier, parents] = extract(std::move(candidates), rule);
  result.generations.push_back({1, frontier, n});
  result.merged = std::move(frontier);

  for (std::size_t k = 2; k <= k_max; ++k) {
    std::set<std::vector<std::size_t>> seen;
    std::vector<Candidate> children;
    // Parents in frontier order, then models ascending; first occurrence wins.
    for (const auto& parent : parents) {
      for (std::size_t m = 0; m < n; ++m) {
        if (std::binary_search(parent.vec.members.begin(), parent.vec.members.end(), m)) continue;
        std::vector<std::size_t> members = parent.vec.members;
        members.insert(std::lower_bound(members.begin(), members.end(), m), m);
        if (!seen.insert(std::move(members)).second) continue;
        auto vec = extend_min_vector(parent.vec, matrix, m);
        auto point = to_point(matrix, vec);
        children.push_back({std::move(vec), std::move(point)});
      }
    }
    const std::size_t explored = children.size();
    auto [gen_frontier, survivors] = extract(std::move(children), rule);
    result.merged = merge_frontiers(result.merged, gen_frontier, rule);
    result.generations.push_back({k, std::move(gen_frontier), explored});
    parents = std::move(survivors);
  }
  return result;
}

ExactEnumeration brute_force_enumerate(const LossMatrix& matrix, std::size_t k_max,
                                       Dominance rule) {
  const std::size_t n = matrix.n_models();
  if (n > kBruteForceLimit) {
    throw Error(ErrorKind::PoolTooLarge, std::to_string(n) + " models > " +
                                             std::to_string(kBruteForceLimit));
  }
  check_k_max(matrix, k_max);

  std::vector<std::vector<FrontierPoint>> by_size(k_max);
  std::vector<Eigen::ArrayXd> mins(k_max);
  std::vector<std::size_t> members;
  members.reserve(k_max);
  std::size_t evaluated = 0;

  // Depth-first over ascending member indices; mins[d] holds the running
  // per-text minimum of the first d + 1 members.
  auto visit = [&](auto&& self, std::size_t start) -> void {
    const std::size_t depth = members.size();
    for (std::size_t m = start; m < n; ++m) {
      if (depth == 0) {
        mins[0] = matrix.loss_row(m).transpose();
      } else {
        mins[depth] = mins[depth - 1].min(matrix.loss_row(m).transpose());
      }
      members.push_back(m);
      by_size[depth].push_back({total_params(matrix, members),
                                normalized_mean_loss(matrix, mins[depth]),
                                ensemble_key(matrix, members)});
      ++evaluated;
      if (depth + 1 < k_max) self(self, m + 1);
      members.pop_back();
    }
  };
  visit(visit, 0);

  ExactEnumeration result;
  result.evaluated = evaluated;
  for (auto& points : by_size) {
    result.by_size.push_back(pareto_front(std::move(points), rule));
    result.merged = merge_frontiers(result.merged, result.by_size.back(), rule);
  }
  return result;
}

}  // namespace mmlaw
