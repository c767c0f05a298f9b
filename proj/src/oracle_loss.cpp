#include "mmlaw/oracle_loss.hpp"

#include "mmlaw/error.hpp"

#include <algorithm>

namespace mmlaw {

double normalized_mean_loss(const LossMatrix& matrix,
                            const Eigen::Ref<const Eigen::ArrayXd>& per_text) {
  // Sequential in text order so every caller reduces identically.
  double sum = 0.0;
  for (Eigen::Index t = 0; t < per_text.size(); ++t) sum += per_text(t);
  return (sum / static_cast<double>(per_text.size())) / matrix.n_bar();
}

double single_model_loss(const LossMatrix& matrix, std::size_t model) {
  if (model >= matrix.n_models()) {
    throw Error(ErrorKind::UnknownModel, "row index " + std::to_string(model));
  }
  const Eigen::ArrayXd row = matrix.loss_row(model).transpose();
  return normalized_mean_loss(matrix, row);
}

double single_model_loss(const LossMatrix& matrix, std::string_view model_id) {
  return single_model_loss(matrix, matrix.model_index(model_id));
}

MinLossVector build_min_vector(const LossMatrix& matrix, std::span<const std::size_t> members) {
  if (members.empty()) throw Error(ErrorKind::EmptyEnsemble, "no members given");
  std::vector<std::size_t> sorted(members.begin(), members.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (sorted.back() >= matrix.n_models()) {
    throw Error(ErrorKind::UnknownModel, "row index " + std::to_string(sorted.back()));
  }

  MinLossVector vec;
  vec.per_text_min = matrix.loss_row(sorted.front()).transpose();
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    vec.per_text_min = vec.per_text_min.min(matrix.loss_row(sorted[i]).transpose());
  }
  vec.members = std::move(sorted);
  return vec;
}

MinLossVector build_min_vector(const LossMatrix& matrix, std::span<const std::string> member_ids) {
  if (member_ids.empty()) throw Error(ErrorKind::EmptyEnsemble, "no members given");
  std::vector<std::size_t> rows;
  rows.reserve(member_ids.size());
  for (const auto& id : member_ids) rows.push_back(matrix.model_index(id));
  return build_min_vector(matrix, std::span<const std::size_t>(rows));
}

MinLossVector extend_min_vector(const MinLossVector& base, const LossMatrix& matrix,
                                std::size_t new_model) {
  if (new_model >= matrix.n_models()) {
    throw Error(ErrorKind::UnknownModel, "row index " + std::to_string(new_model));
  }
  const auto pos = std::lower_bound(base.members.begin(), base.members.end(), new_model);
  if (pos != base.members.end() && *pos == new_model) {
    throw Error(ErrorKind::DuplicateMember, "'" + matrix.models()[new_model].model_id + "'");
  }
  MinLossVector out;
  out.per_text_min = base.per_text_min.min(matrix.loss_row(new_model).transpose());
  out.members.reserve(base.members.size() + 1);
  out.members.assign(base.members.begin(), pos);
  out.members.push_back(new_model);
  out.members.insert(out.members.end(), pos, base.members.end());
  return out;
}

MinLossVector extend_min_vector(const MinLossVector& base, const LossMatrix& matrix,
                                std::string_view new_model_id) {
  return extend_min_vector(base, matrix, matrix.model_index(new_model_id));
}

double total_params(const LossMatrix& matrix, std::span<const std::size_t> sorted_members) {
  double total = 0.0;
  for (const auto m : sorted_members) total += matrix.models()[m].params_billions;
  return total;
}

EnsembleEval oracle_loss(const LossMatrix& matrix, const MinLossVector& vec) {
  return {vec.members, total_params(matrix, vec.members),
          normalized_mean_loss(matrix, vec.per_text_min)};
}

std::string ensemble_key(const LossMatrix& matrix, std::span<const std::size_t> members) {
  std::vector<std::string_view> ids;
  ids.reserve(members.size());
  for (const auto m : members) ids.push_back(matrix.models()[m].model_id);
  std::sort(ids.begin(), ids.end());
  std::string key;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) key += '+';
    key += ids[i];
  }
  return key;
}

}  // namespace mmlaw
