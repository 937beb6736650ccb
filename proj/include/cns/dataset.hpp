#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace cns {

enum class Task { Classification, Regression };

struct SparseEntry {
  std::uint32_t index;
  double value;
  bool operator==(const SparseEntry&) const = default;
};

/// Read-only view of one sample's features.
struct SparseRow {
  std::span<const std::uint32_t> indices;
  std::span<const double> values;

  std::size_t size() const noexcept { return indices.size(); }
  double dot(std::span<const double> x) const noexcept {
    double s = 0.0;
    for (std::size_t k = 0; k < indices.size(); ++k) s += values[k] * x[indices[k]];
    return s;
  }
  double squared_norm() const noexcept {
    double s = 0.0;
    for (double v : values) s += v * v;
    return s;
  }
};

/// Row-indexed sparse design matrix with labels.
///
/// Stored twice: CSR for per-sample access and CSC for column gathers. The
/// CSC copy keeps the row order inside each column, so a gather over a column
/// adds terms in exactly the order a row-wise scatter would.
///
/// Immutable once built; safe to share between threads.
class SparseDataset {
 public:
  SparseDataset() = default;

  /// Validates every invariant (indices < dim, strictly ascending per row,
  /// n >= 1, classification labels in {-1,+1}); throws ContractViolation.
  SparseDataset(std::size_t dim, std::vector<std::size_t> row_ptr,
                std::vector<std::uint32_t> indices, std::vector<double> values,
                std::vector<double> labels, Task task);

  std::size_t n() const noexcept { return labels_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t nnz() const noexcept { return values_.size(); }
  Task task() const noexcept { return task_; }

  SparseRow row(std::size_t i) const noexcept {
    const auto b = row_ptr_[i], e = row_ptr_[i + 1];
    return {std::span(indices_).subspan(b, e - b), std::span(values_).subspan(b, e - b)};
  }
  /// Column j as (row index, value) pairs in ascending row order.
  std::span<const std::uint32_t> column_rows(std::size_t j) const noexcept {
    const auto b = col_ptr_[j], e = col_ptr_[j + 1];
    return std::span(col_rows_).subspan(b, e - b);
  }
  std::span<const double> column_values(std::size_t j) const noexcept {
    const auto b = col_ptr_[j], e = col_ptr_[j + 1];
    return std::span(col_values_).subspan(b, e - b);
  }

  double label(std::size_t i) const noexcept { return labels_[i]; }
  std::span<const double> labels() const noexcept { return labels_; }
  std::span<const std::size_t> row_ptr() const noexcept { return row_ptr_; }
  std::span<const std::uint32_t> indices() const noexcept { return indices_; }
  std::span<const double> values() const noexcept { return values_; }

  /// max_i ||z_i||_2^2, cached at construction.
  double max_row_squared_norm() const noexcept { return max_row_sq_norm_; }

  /// Rows picked by `rows` (duplicates allowed), same dimension and task.
  SparseDataset subset(std::span<const std::size_t> rows) const;

  bool operator==(const SparseDataset& o) const;

 private:
  void build_columns();

  std::size_t dim_ = 0;
  Task task_ = Task::Classification;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::uint32_t> indices_;
  std::vector<double> values_;
  std::vector<double> labels_;
  std::vector<std::size_t> col_ptr_;
  std::vector<std::uint32_t> col_rows_;
  std::vector<double> col_values_;
  double max_row_sq_norm_ = 0.0;
};

/// Incremental construction helper.
class SparseDatasetBuilder {
 public:
  explicit SparseDatasetBuilder(Task task) : task_(task) {}

  void add_row(std::span<const SparseEntry> entries, double label);
  std::size_t rows() const noexcept { return labels_.size(); }
  std::size_t max_index_plus_one() const noexcept { return max_index_ + (any_ ? 1 : 0); }

  /// dim = 0 means "max index seen + 1".
  SparseDataset build(std::size_t dim = 0) &&;

 private:
  Task task_;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::uint32_t> indices_;
  std::vector<double> values_;
  std::vector<double> labels_;
  std::uint32_t max_index_ = 0;
  bool any_ = false;
};

}  // namespace cns
