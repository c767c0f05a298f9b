#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace mmlaw {

/// Which points count as dominated.
///
///  - Weak: q dominates p iff q.params <= p.params and q.loss <= p.loss with at
///    least one strict. Identical (params, loss) pairs keep only the smallest key.
///    Output is a strict staircase.
///  - Strict: q dominates p only if both coordinates are strictly lower. Ties and
///    same-budget points survive.
enum class Dominance { Weak, Strict };

struct FrontierPoint {
  double total_params_billions = 0.0;
  double loss = 0.0;           // nats per token
  std::string ensemble_key;    // '+'-joined sorted model_ids

  /// Number of members encoded in the key.
  std::size_t size() const noexcept;

  friend bool operator==(const FrontierPoint&, const FrontierPoint&) = default;
};

/// Points sorted ascending by params (then loss, then key).
struct Frontier {
  std::vector<FrontierPoint> points;

  bool empty() const noexcept { return points.empty(); }
  std::size_t size() const noexcept { return points.size(); }

  friend bool operator==(const Frontier&, const Frontier&) = default;
};

bool dominates(const FrontierPoint& q, const FrontierPoint& p, Dominance rule = Dominance::Weak);

/// Non-dominated subset of `points`. Deterministic under input permutation.
/// Throws "empty point set" on empty input, "invalid point" on non-finite or
/// non-positive budgets.
Frontier pareto_front(std::vector<FrontierPoint> points, Dominance rule = Dominance::Weak);

/// pareto_front of the union; an empty frontier acts as identity.
Frontier merge_frontiers(const Frontier& a, const Frontier& b, Dominance rule = Dominance::Weak);

/// Sorts ids and joins them with '+'.
std::string join_key(std::vector<std::string> ids);

/// CSV with header `k,total_params_billions,oracle_loss_nats_per_token,ensemble_key`.
/// Numbers use the shortest exact decimal form.
void write_frontier_csv(const Frontier& frontier, std::ostream& out);
std::string frontier_csv(const Frontier& frontier);
Frontier read_frontier_csv(std::istream& in);

}  // namespace mmlaw
