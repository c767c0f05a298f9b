#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mmlaw {

struct ModelMeta {
  std::string model_id;
  std::string family;
  double params_billions = 0.0;  // units of 10^9 parameters
};

/// Text-level loss of one model on one text, under the model's own tokenizer.
struct LossCell {
  double sum_loss = 0.0;        // nats, summed over predicted tokens
  std::int64_t token_count = 0;
};

using LossArray = Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CountArray = Eigen::Array<std::int64_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Complete (model x text) grid of summed losses and token counts.
///
/// Immutable once constructed. Rows follow `models()`, columns follow `texts()`.
/// The pool-wide mean token length is computed once here and shared by every
/// subset evaluation downstream.
class LossMatrix {
 public:
  /// Validates every invariant; throws mmlaw::Error on the first violation.
  LossMatrix(std::vector<ModelMeta> models, std::vector<std::string> texts, LossArray sum_loss,
             CountArray token_counts);

  const std::vector<ModelMeta>& models() const noexcept { return models_; }
  const std::vector<std::string>& texts() const noexcept { return texts_; }
  std::size_t n_models() const noexcept { return models_.size(); }
  std::size_t n_texts() const noexcept { return texts_.size(); }

  const LossArray& sum_loss() const noexcept { return sum_loss_; }
  const CountArray& token_counts() const noexcept { return token_counts_; }

  LossCell cell(std::size_t model, std::size_t text) const {
    return {sum_loss_(static_cast<Eigen::Index>(model), static_cast<Eigen::Index>(text)),
            token_counts_(static_cast<Eigen::Index>(model), static_cast<Eigen::Index>(text))};
  }

  /// Contiguous view of one model's text-level losses.
  auto loss_row(std::size_t model) const { return sum_loss_.row(static_cast<Eigen::Index>(model)); }

  /// Cached mean token count over all cells.
  double n_bar() const noexcept { return n_bar_; }

  std::optional<std::size_t> find_model(std::string_view model_id) const;
  /// Throws "unknown model".
  std::size_t model_index(std::string_view model_id) const;

 private:
  std::vector<ModelMeta> models_;
  std::vector<std::string> texts_;
  LossArray sum_loss_;
  CountArray token_counts_;
  std::unordered_map<std::string, std::size_t> index_;
  double n_bar_ = 0.0;
};

/// Mean of token_count over all (model, text) cells, recomputed from the grid.
double mean_token_length(const LossMatrix& matrix);

/// Parses the two CSV inputs. Row order of the result follows the metadata file
/// for models and first appearance in the matrix file for texts.
LossMatrix parse_loss_matrix(std::istream& metadata, std::istream& matrix);
LossMatrix load_loss_matrix(const std::filesystem::path& metadata_path,
                            const std::filesystem::path& matrix_path);

/// Canonical serialization: rows sorted by id, '.' decimals, 12 significant digits.
void write_metadata_csv(const LossMatrix& matrix, std::ostream& out);
void write_matrix_csv(const LossMatrix& matrix, std::ostream& out);
std::string metadata_csv(const LossMatrix& matrix);
std::string matrix_csv(const LossMatrix& matrix);

}  // namespace mmlaw
