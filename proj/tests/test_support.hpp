#pragma once

#include "mmlaw/core_data.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace mmlaw::testing {

/// Matrix from explicit rows; ids are "m0", "m1", ... and "t0", "t1", ...
inline LossMatrix make_matrix(const std::vector<std::vector<double>>& losses,
                              const std::vector<std::vector<std::int64_t>>& counts,
                              const std::vector<double>& params,
                              const std::vector<std::string>& families = {}) {
  const auto rows = static_cast<Eigen::Index>(losses.size());
  const auto cols = static_cast<Eigen::Index>(losses.front().size());
  std::vector<ModelMeta> models;
  for (Eigen::Index m = 0; m < rows; ++m) {
    models.push_back({"m" + std::to_string(m),
                      families.empty() ? "fam" : families[static_cast<std::size_t>(m)],
                      params[static_cast<std::size_t>(m)]});
  }
  std::vector<std::string> texts;
  for (Eigen::Index t = 0; t < cols; ++t) texts.push_back("t" + std::to_string(t));
  LossArray l(rows, cols);
  CountArray c(rows, cols);
  for (Eigen::Index m = 0; m < rows; ++m) {
    for (Eigen::Index t = 0; t < cols; ++t) {
      l(m, t) = losses[static_cast<std::size_t>(m)][static_cast<std::size_t>(t)];
      c(m, t) = counts[static_cast<std::size_t>(m)][static_cast<std::size_t>(t)];
    }
  }
  return LossMatrix(std::move(models), std::move(texts), std::move(l), std::move(c));
}

/// Uniform counts of `count` tokens.
inline std::vector<std::vector<std::int64_t>> flat_counts(std::size_t rows, std::size_t cols,
                                                          std::int64_t count) {
  return std::vector<std::vector<std::int64_t>>(rows, std::vector<std::int64_t>(cols, count));
}

/// Random pool with continuous losses, random token counts, params in [0.1, 20].
inline LossMatrix random_matrix(std::mt19937_64& gen, std::size_t n_models, std::size_t n_texts,
                                std::size_t n_families = 3) {
  std::uniform_real_distribution<double> loss(5.0, 500.0);
  std::uniform_int_distribution<std::int64_t> tokens(1, 300);
  std::uniform_real_distribution<double> params(0.1, 20.0);
  std::uniform_int_distribution<std::size_t> family(0, n_families - 1);
  std::vector<std::vector<double>> l(n_models, std::vector<double>(n_texts));
  std::vector<std::vector<std::int64_t>> c(n_models, std::vector<std::int64_t>(n_texts));
  std::vector<double> p(n_models);
  std::vector<std::string> f(n_models);
  for (std::size_t m = 0; m < n_models; ++m) {
    p[m] = params(gen);
    f[m] = "fam" + std::to_string(family(gen));
    for (std::size_t t = 0; t < n_texts; ++t) {
      l[m][t] = loss(gen);
      c[m][t] = tokens(gen);
    }
  }
  return make_matrix(l, c, p, f);
}

}  // namespace mmlaw::testing
