#include "mmlaw/report.hpp"

#include "mmlaw/enumeration.hpp"
#include "mmlaw/error.hpp"
#include "mmlaw/io.hpp"
#include "mmlaw/oracle_loss.hpp"

#include <json.hpp>

#include <ostream>
#include <sstream>

namespace mmlaw {

using ordered_json = nlohmann::ordered_json;

RunMode parse_run_mode(std::string_view text) {
  if (text == "single") return RunMode::Single;
  if (text == "ensemble") return RunMode::Ensemble;
  if (text == "pairs") return RunMode::Pairs;
  if (text == "all") return RunMode::All;
  throw Error(ErrorKind::InvalidArgument, "mode must be single|ensemble|pairs|all");
}

Dominance parse_dominance(std::string_view text) {
  if (text == "weak") return Dominance::Weak;
  if (text == "strict") return Dominance::Strict;
  throw Error(ErrorKind::InvalidArgument, "dominance must be weak|strict");
}

std::string fit_json(const ScalingFitd& fit) {
  ordered_json j;
  j["A"] = fit.A;
  j["alpha"] = fit.alpha;
  j["L_inf"] = fit.L_inf;
  j["rss"] = fit.rss;
  j["n_points"] = fit.n_points;
  j["converged"] = fit.converged;
  j["iterations"] = fit.iterations;
  return j.dump() + "\n";
}

std::string skipped_fit_json(std::string_view reason, std::size_t n_points) {
  ordered_json j;
  j["skipped"] = std::string(reason);
  j["n_points"] = n_points;
  return j.dump() + "\n";
}

std::optional<ScalingFitd> parse_fit_json(std::string_view text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("fit json: ") + e.what());
  }
  if (j.contains("skipped")) return std::nullopt;
  try {
    ScalingFitd fit;
    fit.A = j.at("A").get<double>();
    fit.alpha = j.at("alpha").get<double>();
    fit.L_inf = j.at("L_inf").get<double>();
    fit.rss = j.at("rss").get<double>();
    fit.n_points = j.at("n_points").get<std::size_t>();
    fit.converged = j.at("converged").get<bool>();
    fit.iterations = j.at("iterations").get<std::size_t>();
    return fit;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("fit json: ") + e.what());
  }
}

std::string error_json(std::string_view code, std::string_view message) {
  ordered_json j;
  j["error"] = std::string(code);
  j["message"] = std::string(message);
  return j.dump() + "\n";
}

namespace {

std::string summary_row(std::string_view setting, std::size_t raw, const SideReport& side) {
  std::string row = std::string(setting) + ',' + std::to_string(raw) + ',' +
                    std::to_string(side.frontier.size()) + ',';
  if (side.fit) {
    row += io::format_exact(side.fit->L_inf) + ',' + io::format_exact(side.fit->A) + ',' +
           io::format_exact(side.fit->alpha);
  } else {
    row += ",,";
  }
  return row + '\n';
}

std::string fit_artifact(const SideReport& side) {
  return side.fit ? fit_json(*side.fit) : skipped_fit_json(side.skip_reason, side.frontier.size());
}

}  // namespace

std::vector<Artifact> run_pipelines(const LossMatrix& matrix, const RunConfig& config) {
  config.fit.validate();
  const bool all = config.mode == RunMode::All;
  std::vector<Artifact> artifacts;
  std::vector<PlotSeries> scaling_series;
  std::string summary;

  if (all || config.mode == RunMode::Single) {
    std::vector<FrontierPoint> singles;
    for (std::size_t m = 0; m < matrix.n_models(); ++m) {
      singles.push_back({matrix.models()[m].params_billions, single_model_loss(matrix, m),
                         matrix.models()[m].model_id});
    }
    const auto side = frontier_and_fit("single", std::move(singles), config.fit, config.dominance);
    artifacts.push_back({"single_frontier.csv", frontier_csv(side.frontier)});
    artifacts.push_back({"single_fit.json", fit_artifact(side)});
    summary += summary_row("single", side.raw_pairs, side);
    scaling_series.push_back({"single model", side.frontier, side.fit});
  }

  if (all || config.mode == RunMode::Ensemble) {
    const std::size_t k_max = config.k_max == 0 ? matrix.n_models() : config.k_max;
    const auto result = enumerate_pruned(matrix, k_max, config.dominance);
    std::string stats;
    Frontier per_generation;
    std::size_t raw = 0;
    for (const auto& g : result.generations) {
      ordered_json j;
      j["k"] = g.k;
      j["candidates"] = g.explored_count;
      j["pareto"] = g.frontier.size();
      stats += j.dump() + "\n";
      per_generation.points.insert(per_generation.points.end(), g.frontier.points.begin(),
                                   g.frontier.points.end());
      if (g.k >= 2) raw += g.frontier.size();
    }
    const auto side = frontier_and_fit("ensemble", result.merged_from(2, config.dominance).points,
                                       config.fit, config.dominance);
    artifacts.push_back({"ensemble_generations.jsonl", stats});
    artifacts.push_back({"ensemble_generations.csv", frontier_csv(per_generation)});
    artifacts.push_back({"ensemble_all_sizes_frontier.csv", frontier_csv(result.merged)});
    artifacts.push_back({"ensemble_frontier.csv", frontier_csv(side.frontier)});
    artifacts.push_back({"ensemble_fit.json", fit_artifact(side)});
    summary += summary_row("ensemble", raw, side);
    scaling_series.push_back({"model ensemble", side.frontier, side.fit});
  }

  if (!summary.empty()) {
    artifacts.push_back({"scaling_summary.csv", "setting,raw_points,pareto_points,L_inf,A,alpha\n" + summary});
    artifacts.push_back({"scaling.svg", emit_svg_plot(scaling_series, "oracle loss vs. total parameters").svg});
  }

  if (all || config.mode == RunMode::Pairs) {
    if (matrix.n_models() < 2) {
      if (config.mode == RunMode::Pairs) throw Error(ErrorKind::InsufficientPool, "pairs need 2 models");
    } else {
      const auto report = pairwise_frontiers_and_fits(matrix, config.fit, config.dominance);
      std::ostringstream csv;
      write_pairs_report_csv(report, csv);
      artifacts.push_back({"pairs_report.csv", csv.str()});
      for (const auto* side : {&report.homogeneous, &report.heterogeneous}) {
        artifacts.push_back({side->side + "_frontier.csv", frontier_csv(side->frontier)});
        artifacts.push_back({side->side + "_fit.json", fit_artifact(*side)});
      }
      const std::vector<PlotSeries> pair_series{
          {"same-family pairs", report.homogeneous.frontier, report.homogeneous.fit},
          {"cross-family pairs", report.heterogeneous.frontier, report.heterogeneous.fit}};
      artifacts.push_back({"pairs.svg", emit_svg_plot(pair_series, "pairwise oracle loss").svg});
    }
  }
  return artifacts;
}

void write_artifacts(const std::filesystem::path& dir, const std::vector<Artifact>& artifacts) {
  std::vector<std::filesystem::path> written;
  try {
    for (const auto& a : artifacts) {
      io::write_file_atomic(dir / a.name, a.content);
      written.push_back(dir / a.name);
    }
  } catch (...) {
    std::error_code ignored;
    for (const auto& p : written) std::filesystem::remove(p, ignored);
    throw;
  }
}

int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  bool created_dir = false;
  try {
    const auto matrix = load_loss_matrix(config.metadata, config.matrix);
    const auto artifacts = run_pipelines(matrix, config);
    std::error_code ec;
    created_dir = std::filesystem::create_directories(config.out_dir, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create '" + config.out_dir.string() + "'");
    write_artifacts(config.out_dir, artifacts);
    for (const auto& a : artifacts) {
      if (a.name == "ensemble_generations.jsonl") out << a.content;
    }
    return 0;
  } catch (const Error& e) {
    err << error_json(e.code(), e.detail());
  } catch (const std::exception& e) {
    err << error_json("internal error", e.what());
  }
  if (created_dir) {
    std::error_code ignored;
    std::filesystem::remove(config.out_dir, ignored);  // only succeeds when empty
  }
  return 1;
}

}  // namespace mmlaw
