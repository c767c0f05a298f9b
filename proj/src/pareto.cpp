#include "mmlaw/pareto.hpp"

#include "mmlaw/error.hpp"
#include "mmlaw/io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <tuple>

namespace mmlaw {

std::size_t FrontierPoint::size() const noexcept {
  if (ensemble_key.empty()) return 0;
  return static_cast<std::size_t>(std::count(ensemble_key.begin(), ensemble_key.end(), '+')) + 1;
}

bool dominates(const FrontierPoint& q, const FrontierPoint& p, Dominance rule) {
  if (rule == Dominance::Strict) {
    return q.total_params_billions < p.total_params_billions && q.loss < p.loss;
  }
  return q.total_params_billions <= p.total_params_billions && q.loss <= p.loss &&
         (q.total_params_billions < p.total_params_billions || q.loss < p.loss);
}

namespace {

bool canonical_less(const FrontierPoint& a, const FrontierPoint& b) {
  return std::tie(a.total_params_billions, a.loss, a.ensemble_key) <
         std::tie(b.total_params_billions, b.loss, b.ensemble_key);
}

}  // namespace

Frontier pareto_front(std::vector<FrontierPoint> points, Dominance rule) {
  if (points.empty()) throw Error(ErrorKind::EmptyPointSet, "pareto_front needs at least one point");
  for (const auto& p : points) {
    if (!std::isfinite(p.total_params_billions) || !std::isfinite(p.loss) ||
        !(p.total_params_billions > 0.0)) {
      throw Error(ErrorKind::InvalidPoint, "'" + p.ensemble_key + "'");
    }
  }
  std::sort(points.begin(), points.end(), canonical_less);

  Frontier out;
  if (rule == Dominance::Weak) {
    // Sweep: a point survives iff its loss beats everything at a smaller-or-equal
    // budget that sorted before it.
    double best = std::numeric_limits<double>::infinity();
    for (auto& p : points) {
      if (p.loss < best) {
        best = p.loss;
        out.points.push_back(std::move(p));
      }
    }
    return out;
  }

  // Strict: compare only against groups with strictly smaller budgets.
  double best_before = std::numeric_limits<double>::infinity();
  std::size_t i = 0;
  while (i < points.size()) {
    std::size_t j = i;
    double group_min = std::numeric_limits<double>::infinity();
    while (j < points.size() && points[j].total_params_billions == points[i].total_params_billions) {
      group_min = std::min(group_min, points[j].loss);
      ++j;
    }
    for (std::size_t g = i; g < j; ++g) {
      if (!(points[g].loss > best_before)) out.points.push_back(std::move(points[g]));
    }
    best_before = std::min(best_before, group_min);
    i = j;
  }
  return out;
}

Frontier merge_frontiers(const Frontier& a, const Frontier& b, Dominance rule) {
  if (a.empty() && b.empty()) return {};
  std::vector<FrontierPoint> all;
  all.reserve(a.size() + b.size());
  all.insert(all.end(), a.points.begin(), a.points.end());
  all.insert(all.end(), b.points.begin(), b.points.end());
  return pareto_front(std::move(all), rule);
}

std::string join_key(std::vector<std::string> ids) {
  std::sort(ids.begin(), ids.end());
  std::string key;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) key += '+';
    key += ids[i];
  }
  return key;
}

void write_frontier_csv(const Frontier& frontier, std::ostream& out) {
  out << "k,total_params_billions,oracle_loss_nats_per_token,ensemble_key\n";
  for (const auto& p : frontier.points) {
    out << p.size() << ',' << io::format_exact(p.total_params_billions) << ','
        << io::format_exact(p.loss) << ',' << p.ensemble_key << '\n';
  }
}

std::string frontier_csv(const Frontier& frontier) {
  std::ostringstream out;
  write_frontier_csv(frontier, out);
  return out.str();
}

Frontier read_frontier_csv(std::istream& in) {
  const auto rows = io::read_csv(in);
  if (rows.empty()) throw Error(ErrorKind::Parse, "frontier: empty file");
  io::expect_header(rows.front(),
                    {"k", "total_params_billions", "oracle_loss_nats_per_token", "ensemble_key"},
                    "frontier");
  Frontier frontier;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& rec = rows[r];
    if (rec.fields.size() != 4) {
      throw Error(ErrorKind::Parse, "frontier line " + std::to_string(rec.line) + ": expected 4 fields");
    }
    FrontierPoint p{io::parse_double(rec.fields[1], "total_params_billions", rec.line),
                    io::parse_double(rec.fields[2], "oracle_loss_nats_per_token", rec.line),
                    rec.fields[3]};
    const auto k = io::parse_int(rec.fields[0], "k", rec.line);
    if (k < 0 || static_cast<std::size_t>(k) != p.size()) {
      throw Error(ErrorKind::Parse, "frontier line " + std::to_string(rec.line) +
                                        ": k does not match ensemble_key");
    }
    frontier.points.push_back(std::move(p));
  }
  return frontier;
}

}  // namespace mmlaw
