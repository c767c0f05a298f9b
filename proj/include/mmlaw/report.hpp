#pragma once

#include "mmlaw/core_data.hpp"
#include "mmlaw/diversity.hpp"
#include "mmlaw/fitting.hpp"
#include "mmlaw/pareto.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mmlaw {

enum class RunMode { Single, Ensemble, Pairs, All };

RunMode parse_run_mode(std::string_view text);
Dominance parse_dominance(std::string_view text);

struct RunConfig {
  std::filesystem::path metadata;
  std::filesystem::path matrix;
  std::filesystem::path out_dir;
  std::size_t k_max = 0;  // 0 = pool size
  FitConfigd fit;
  RunMode mode = RunMode::All;
  Dominance dominance = Dominance::Weak;
};

/// One output file held in memory until the whole run succeeds.
struct Artifact {
  std::string name;
  std::string content;
};

/// Fit report JSON, or {"skipped": reason, "n_points": n} when no fit exists.
std::string fit_json(const ScalingFitd& fit);
std::string skipped_fit_json(std::string_view reason, std::size_t n_points);
/// Parses either form; nullopt for a skipped report.
std::optional<ScalingFitd> parse_fit_json(std::string_view text);

/// Error document written on failure: {"error": code, "message": detail}.
std::string error_json(std::string_view code, std::string_view message);

struct PlotSeries {
  std::string label;
  Frontier frontier;
  std::optional<ScalingFitd> fit;
};

/// Rendered plot plus the data behind it.
struct PlotDocument {
  struct Curve {
    std::string label;
    std::vector<double> budgets;  // 200 log-spaced budgets
    std::vector<double> losses;   // predict() at each budget
  };
  std::string svg;
  std::vector<Curve> curves;
  double x_min = 0, x_max = 0;  // budget axis (billions), log scale
  double y_min = 0, y_max = 0;  // loss axis
};

inline constexpr std::size_t kCurveSamples = 200;

/// Self-contained SVG: log-x scatter of every frontier and its fitted curve.
/// Series without points are omitted and flagged with a warning annotation.
PlotDocument emit_svg_plot(std::span<const PlotSeries> series, std::string_view title = "");

/// Runs the requested pipelines on an in-memory matrix. Throws mmlaw::Error.
std::vector<Artifact> run_pipelines(const LossMatrix& matrix, const RunConfig& config);

/// Loads inputs, runs, and writes every artifact into out_dir (temp + rename).
/// Returns the process exit status. On failure writes error JSON to `err` and
/// removes anything this run wrote.
int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Writes artifacts atomically; on any failure removes the ones already written.
void write_artifacts(const std::filesystem::path& dir, const std::vector<Artifact>& artifacts);

}  // namespace mmlaw
