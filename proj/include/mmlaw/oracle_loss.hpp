#pragma once

#include "mmlaw/core_data.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mmlaw {

/// Per-text minimum of text-level loss over an ensemble's members.
struct MinLossVector {
  Eigen::ArrayXd per_text_min;        // nats, one entry per text
  std::vector<std::size_t> members;   // matrix row indices, sorted ascending, non-empty
};

struct EnsembleEval {
  std::vector<std::size_t> members;   // sorted row indices
  double total_params_billions = 0.0;
  double oracle_loss = 0.0;           // nats per token, normalized by n_bar
};

/// Normalized expected loss of one model: mean over texts of its summed loss, over n_bar.
double single_model_loss(const LossMatrix& matrix, std::string_view model_id);
double single_model_loss(const LossMatrix& matrix, std::size_t model);

/// Duplicate ids collapse (set semantics). Throws "empty ensemble" / "unknown model".
MinLossVector build_min_vector(const LossMatrix& matrix, std::span<const std::string> member_ids);
MinLossVector build_min_vector(const LossMatrix& matrix, std::span<const std::size_t> members);

/// O(T) extension by one model. Throws "duplicate member" if already present.
MinLossVector extend_min_vector(const MinLossVector& base, const LossMatrix& matrix,
                                std::string_view new_model_id);
MinLossVector extend_min_vector(const MinLossVector& base, const LossMatrix& matrix,
                                std::size_t new_model);

EnsembleEval oracle_loss(const LossMatrix& matrix, const MinLossVector& vec);

/// Sum of member params, accumulated in ascending row order.
double total_params(const LossMatrix& matrix, std::span<const std::size_t> sorted_members);

/// Normalizes a vector of text-level losses: (sum in text order / T) / n_bar.
double normalized_mean_loss(const LossMatrix& matrix, const Eigen::Ref<const Eigen::ArrayXd>& per_text);

/// Canonical ensemble key: member model_ids sorted lexicographically, joined by '+'.
std::string ensemble_key(const LossMatrix& matrix, std::span<const std::size_t> members);

}  // namespace mmlaw
