// mmlaw: oracle frontiers and multi-model scaling fits from loss matrices.

#include "mmlaw/core_data.hpp"
#include "mmlaw/diversity.hpp"
#include "mmlaw/error.hpp"
#include "mmlaw/fitting.hpp"
#include "mmlaw/io.hpp"
#include "mmlaw/report.hpp"
#include "mmlaw/synth.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace mmlaw;

namespace {

int fail(const Error& e) {
  std::cerr << error_json(e.code(), e.detail());
  return 1;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create '" + dir.string() + "'");
}

PlotSeries parse_series(const std::string& spec) {
  const auto first = spec.find(':');
  if (first == std::string::npos) {
    throw Error(ErrorKind::InvalidArgument, "series must be label:frontier.csv[:fit.json]");
  }
  const auto second = spec.find(':', first + 1);
  PlotSeries series;
  series.label = spec.substr(0, first);
  const auto frontier_path = spec.substr(first + 1, second == std::string::npos ? std::string::npos : second - first - 1);
  std::istringstream frontier(io::read_file(frontier_path));
  series.frontier = read_frontier_csv(frontier);
  if (second != std::string::npos) series.fit = parse_fit_json(io::read_file(spec.substr(second + 1)));
  return series;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Oracle performance frontiers and saturating power-law fits for model pools"};
  app.require_subcommand(1);

  std::string metadata, matrix, out, dominance = "weak", mode = "all", frontier_path, title;
  std::size_t k_max = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> series_specs;
  SynthConfig synth;
  FitConfigd fit_config;

  auto* validate = app.add_subcommand("validate", "Check a metadata + matrix pair and print its shape");
  validate->add_option("--metadata", metadata, "model metadata CSV")->required();
  validate->add_option("--matrix", matrix, "loss matrix CSV")->required();

  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic metadata + matrix pair");
  synth_cmd->add_option("--out", out, "output directory")->required();
  synth_cmd->add_option("--seed", seed, "generator seed");
  synth_cmd->add_option("--families", synth.n_families, "number of model families");
  synth_cmd->add_option("--models-per-family", synth.models_per_family, "models in each family");
  synth_cmd->add_option("--texts", synth.n_texts, "number of texts");
  synth_cmd->add_option("--params", synth.params_grid_billions, "parameter grid in billions");
  synth_cmd->add_option("--floor", synth.base_floor, "per-token loss floor");
  synth_cmd->add_option("--amplitude", synth.amplitude, "power-law amplitude");
  synth_cmd->add_option("--alpha", synth.alpha_true, "power-law exponent");
  synth_cmd->add_option("--signature", synth.family_signature_strength, "cross-family complementarity");
  synth_cmd->add_option("--noise", synth.noise_sigma, "per-token noise sigma");

  auto* run = app.add_subcommand("run", "Single, ensemble and pairwise pipelines with fits and plots");
  run->add_option("--metadata", metadata, "model metadata CSV")->required();
  run->add_option("--matrix", matrix, "loss matrix CSV")->required();
  run->add_option("--out", out, "output directory")->required();
  run->add_option("--k-max", k_max, "largest ensemble size (default: pool size)");
  run->add_option("--mode", mode, "single|ensemble|pairs|all");
  run->add_option("--dominance", dominance, "weak|strict");

  auto* fit = app.add_subcommand("fit", "Fit the power law to a frontier CSV");
  fit->add_option("--frontier", frontier_path, "frontier CSV")->required();
  fit->add_option("--out", out, "fit JSON path (default: stdout)");

  auto* pairs = app.add_subcommand("pairs", "Same-family vs cross-family pair frontiers and fits");
  pairs->add_option("--metadata", metadata, "model metadata CSV")->required();
  pairs->add_option("--matrix", matrix, "loss matrix CSV")->required();
  pairs->add_option("--out", out, "output directory")->required();
  pairs->add_option("--dominance", dominance, "weak|strict");

  auto* plot = app.add_subcommand("plot", "Render frontiers and fits as SVG");
  plot->add_option("--series", series_specs, "label:frontier.csv[:fit.json], repeatable")->required();
  plot->add_option("--out", out, "SVG path")->required();
  plot->add_option("--title", title, "plot title");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) {
      const auto m = load_loss_matrix(metadata, matrix);
      std::cout << "{\"models\":" << m.n_models() << ",\"texts\":" << m.n_texts()
                << ",\"cells\":" << m.n_models() * m.n_texts()
                << ",\"n_bar\":" << io::format_exact(m.n_bar()) << "}\n";
      return 0;
    }
    if (*synth_cmd) {
      synth.seed = seed;
      const auto m = synth_pool(synth);
      ensure_dir(out);
      write_artifacts(out, {{"metadata.csv", metadata_csv(m)},
                            {"matrix.csv", matrix_csv(m)},
                            {"generator.txt", describe_generator(synth)}});
      return 0;
    }
    if (*run) {
      RunConfig config;
      config.metadata = metadata;
      config.matrix = matrix;
      config.out_dir = out;
      config.k_max = k_max;
      config.mode = parse_run_mode(mode);
      config.dominance = parse_dominance(dominance);
      return cmd_run(config, std::cout, std::cerr);
    }
    if (*fit) {
      std::istringstream in(io::read_file(frontier_path));
      const auto frontier = read_frontier_csv(in);
      const auto text = fit_json(fit_scaling_law(frontier, fit_config));
      if (out.empty()) {
        std::cout << text;
      } else {
        io::write_file_atomic(out, text);
      }
      return 0;
    }
    if (*pairs) {
      RunConfig config;
      config.metadata = metadata;
      config.matrix = matrix;
      config.out_dir = out;
      config.mode = RunMode::Pairs;
      config.dominance = parse_dominance(dominance);
      return cmd_run(config, std::cout, std::cerr);
    }
    if (*plot) {
      std::vector<PlotSeries> series;
      for (const auto& spec : series_specs) series.push_back(parse_series(spec));
      io::write_file_atomic(out, emit_svg_plot(series, title).svg);
      return 0;
    }
  } catch (const Error& e) {
    return fail(e);
  } catch (const std::exception& e) {
    std::cerr << error_json("internal error", e.what());
    return 1;
  }
  return 0;
}
