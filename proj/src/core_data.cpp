#include "mmlaw/core_data.hpp"

#include "mmlaw/error.hpp"
#include "mmlaw/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_set>

namespace mmlaw {
namespace {

void check_id(std::string_view id, std::string_view what) {
  if (id.empty()) throw Error(ErrorKind::InvalidId, std::string(what) + " is empty");
  if (id.find_first_of("+,\"\r\n") != std::string_view::npos) {
    throw Error(ErrorKind::InvalidId,
                std::string(what) + " '" + std::string(id) + "' contains a reserved character");
  }
}

}  // namespace

LossMatrix::LossMatrix(std::vector<ModelMeta> models, std::vector<std::string> texts,
                       LossArray sum_loss, CountArray token_counts)
    : models_(std::move(models)),
      texts_(std::move(texts)),
      sum_loss_(std::move(sum_loss)),
      token_counts_(std::move(token_counts)) {
  if (models_.empty()) throw Error(ErrorKind::IncompleteMatrix, "no models");
  if (texts_.empty()) throw Error(ErrorKind::IncompleteMatrix, "no texts");
  const auto rows = static_cast<Eigen::Index>(models_.size());
  const auto cols = static_cast<Eigen::Index>(texts_.size());
  if (sum_loss_.rows() != rows || sum_loss_.cols() != cols || token_counts_.rows() != rows ||
      token_counts_.cols() != cols) {
    throw Error(ErrorKind::IncompleteMatrix, "grid shape does not match models x texts");
  }

  for (std::size_t m = 0; m < models_.size(); ++m) {
    const auto& meta = models_[m];
    check_id(meta.model_id, "model_id");
    if (meta.family.empty()) {
      throw Error(ErrorKind::InvalidId, "model '" + meta.model_id + "' has an empty family");
    }
    if (meta.family.find_first_of(",\"\r\n") != std::string::npos) {
      throw Error(ErrorKind::InvalidId, "family of '" + meta.model_id + "' contains a reserved character");
    }
    if (!(meta.params_billions > 0.0) || !std::isfinite(meta.params_billions)) {
      throw Error(ErrorKind::InvalidCell,
                  "model '" + meta.model_id + "' has non-positive params_billions");
    }
    if (!index_.emplace(meta.model_id, m).second) {
      throw Error(ErrorKind::DuplicateId, "model_id '" + meta.model_id + "'");
    }
  }
  std::unordered_set<std::string_view> seen_texts;
  for (const auto& t : texts_) {
    check_id(t, "text_id");
    if (!seen_texts.insert(t).second) throw Error(ErrorKind::DuplicateId, "text_id '" + t + "'");
  }

  long double total_tokens = 0;
  for (Eigen::Index m = 0; m < rows; ++m) {
    for (Eigen::Index t = 0; t < cols; ++t) {
      const double loss = sum_loss_(m, t);
      const auto count = token_counts_(m, t);
      if (!(loss >= 0.0) || !std::isfinite(loss) || count < 1) {
        throw Error(ErrorKind::InvalidCell, "(" + models_[static_cast<std::size_t>(m)].model_id +
                                                ", " + texts_[static_cast<std::size_t>(t)] + ")");
      }
      total_tokens += static_cast<long double>(count);
    }
  }
  n_bar_ = static_cast<double>(total_tokens / (static_cast<long double>(rows) * cols));
}

std::optional<std::size_t> LossMatrix::find_model(std::string_view model_id) const {
  const auto it = index_.find(std::string(model_id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t LossMatrix::model_index(std::string_view model_id) const {
  if (auto idx = find_model(model_id)) return *idx;
  throw Error(ErrorKind::UnknownModel, "'" + std::string(model_id) + "'");
}

double mean_token_length(const LossMatrix& matrix) {
  // Integer sum: exact and independent of cell order.
  long double total = 0;
  const auto& counts = matrix.token_counts();
  for (Eigen::Index i = 0; i < counts.size(); ++i) total += static_cast<long double>(counts(i));
  return static_cast<double>(total / (static_cast<long double>(matrix.n_models()) *
                                      static_cast<long double>(matrix.n_texts())));
}

LossMatrix parse_loss_matrix(std::istream& metadata, std::istream& matrix) {
  const auto meta_rows = io::read_csv(metadata);
  if (meta_rows.empty()) throw Error(ErrorKind::Parse, "metadata: empty file");
  io::expect_header(meta_rows.front(), {"model_id", "family", "params_billions"}, "metadata");

  std::vector<ModelMeta> models;
  std::unordered_map<std::string, std::size_t> model_row;
  for (std::size_t r = 1; r < meta_rows.size(); ++r) {
    const auto& rec = meta_rows[r];
    if (rec.fields.size() != 3) {
      throw Error(ErrorKind::Parse,
                  "metadata line " + std::to_string(rec.line) + ": expected 3 fields");
    }
    ModelMeta meta{rec.fields[0], rec.fields[1],
                   io::parse_double(rec.fields[2], "params_billions", rec.line)};
    if (!model_row.emplace(meta.model_id, models.size()).second) {
      throw Error(ErrorKind::DuplicateId, "model_id '" + meta.model_id + "'");
    }
    models.push_back(std::move(meta));
  }

  const auto cell_rows = io::read_csv(matrix);
  if (cell_rows.empty()) throw Error(ErrorKind::Parse, "matrix: empty file");
  io::expect_header(cell_rows.front(), {"model_id", "text_id", "sum_loss_nats", "token_count"},
                    "matrix");

  struct Entry {
    std::size_t model, text;
    double loss;
    long long count;
  };
  std::vector<std::string> texts;
  std::unordered_map<std::string, std::size_t> text_col;
  std::vector<Entry> entries;
  entries.reserve(cell_rows.size());
  for (std::size_t r = 1; r < cell_rows.size(); ++r) {
    const auto& rec = cell_rows[r];
    if (rec.fields.size() != 4) {
      throw Error(ErrorKind::Parse, "matrix line " + std::to_string(rec.line) + ": expected 4 fields");
    }
    const auto mit = model_row.find(rec.fields[0]);
    if (mit == model_row.end()) {
      throw Error(ErrorKind::UnknownModel, "'" + rec.fields[0] + "' (matrix line " +
                                               std::to_string(rec.line) + ")");
    }
    auto [tit, inserted] = text_col.emplace(rec.fields[1], texts.size());
    if (inserted) texts.push_back(rec.fields[1]);
    const double loss = io::parse_double(rec.fields[2], "sum_loss_nats", rec.line);
    const long long count = io::parse_int(rec.fields[3], "token_count", rec.line);
    if (!(loss >= 0.0) || !std::isfinite(loss) || count < 1) {
      throw Error(ErrorKind::InvalidCell, "(" + rec.fields[0] + ", " + rec.fields[1] +
                                              ") on matrix line " + std::to_string(rec.line));
    }
    entries.push_back({mit->second, tit->second, loss, count});
  }
  if (models.empty()) throw Error(ErrorKind::IncompleteMatrix, "no models");
  if (texts.empty()) throw Error(ErrorKind::IncompleteMatrix, "no texts");

  const auto rows = static_cast<Eigen::Index>(models.size());
  const auto cols = static_cast<Eigen::Index>(texts.size());
  LossArray losses(rows, cols);
  CountArray counts(rows, cols);
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> filled(rows, cols);
  filled.setConstant(false);
  for (const auto& e : entries) {
    const auto m = static_cast<Eigen::Index>(e.model);
    const auto t = static_cast<Eigen::Index>(e.text);
    if (filled(m, t)) {
      throw Error(ErrorKind::DuplicateId,
                  "cell (" + models[e.model].model_id + ", " + texts[e.text] + ") repeated");
    }
    filled(m, t) = true;
    losses(m, t) = e.loss;
    counts(m, t) = e.count;
  }
  for (Eigen::Index m = 0; m < rows; ++m) {
    for (Eigen::Index t = 0; t < cols; ++t) {
      if (!filled(m, t)) {
        throw Error(ErrorKind::IncompleteMatrix,
                    "missing cell (" + models[static_cast<std::size_t>(m)].model_id + ", " +
                        texts[static_cast<std::size_t>(t)] + ")");
      }
    }
  }
  return LossMatrix(std::move(models), std::move(texts), std::move(losses), std::move(counts));
}

LossMatrix load_loss_matrix(const std::filesystem::path& metadata_path,
                            const std::filesystem::path& matrix_path) {
  std::istringstream meta(io::read_file(metadata_path));
  std::istringstream cells(io::read_file(matrix_path));
  return parse_loss_matrix(meta, cells);
}

namespace {

std::vector<std::size_t> sorted_order(const std::vector<std::string>& keys) {
  std::vector<std::size_t> order(keys.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  return order;
}

std::vector<std::string> model_ids(const LossMatrix& matrix) {
  std::vector<std::string> ids;
  ids.reserve(matrix.n_models());
  for (const auto& m : matrix.models()) ids.push_back(m.model_id);
  return ids;
}

}  // namespace

void write_metadata_csv(const LossMatrix& matrix, std::ostream& out) {
  out << "model_id,family,params_billions\n";
  for (const auto m : sorted_order(model_ids(matrix))) {
    const auto& meta = matrix.models()[m];
    out << meta.model_id << ',' << meta.family << ',' << io::format_g12(meta.params_billions)
        << '\n';
  }
}

void write_matrix_csv(const LossMatrix& matrix, std::ostream& out) {
  out << "model_id,text_id,sum_loss_nats,token_count\n";
  const auto text_order = sorted_order(matrix.texts());
  for (const auto m : sorted_order(model_ids(matrix))) {
    for (const auto t : text_order) {
      const auto cell = matrix.cell(m, t);
      out << matrix.models()[m].model_id << ',' << matrix.texts()[t] << ','
          << io::format_g12(cell.sum_loss) << ',' << cell.token_count << '\n';
    }
  }
}

std::string metadata_csv(const LossMatrix& matrix) {
  std::ostringstream out;
  write_metadata_csv(matrix, out);
  return out.str();
}

std::string matrix_csv(const LossMatrix& matrix) {
  std::ostringstream out;
  write_matrix_csv(matrix, out);
  return out.str();
}

}  // namespace mmlaw
