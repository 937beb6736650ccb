#include "cns/dataset.hpp"

#include <algorithm>
#include <string>

#include "cns/errors.hpp"

namespace cns {

SparseDataset::SparseDataset(std::size_t dim, std::vector<std::size_t> row_ptr,
                             std::vector<std::uint32_t> indices, std::vector<double> values,
                             std::vector<double> labels, Task task)
    : dim_(dim),
      task_(task),
      row_ptr_(std::move(row_ptr)),
      indices_(std::move(indices)),
      values_(std::move(values)),
      labels_(std::move(labels)) {
  detail::require(!labels_.empty(), "dataset must contain at least one sample");
  detail::require(row_ptr_.size() == labels_.size() + 1, "row_ptr size must be n + 1");
  detail::require(row_ptr_.front() == 0 && row_ptr_.back() == indices_.size(),
                  "row_ptr does not span the index array");
  detail::require(indices_.size() == values_.size(), "indices/values size mismatch");
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    detail::require(row_ptr_[i] <= row_ptr_[i + 1], "row_ptr must be non-decreasing");
    for (auto k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      if (indices_[k] >= dim_)
        throw ContractViolation("feature index " + std::to_string(indices_[k]) +
                                " out of range for dimension " + std::to_string(dim_));
      if (k > row_ptr_[i] && indices_[k] <= indices_[k - 1])
        throw ContractViolation("row " + std::to_string(i) +
                                " has duplicate or unsorted feature indices");
    }
    if (task_ == Task::Classification && labels_[i] != 1.0 && labels_[i] != -1.0)
      throw ContractViolation("classification labels must be exactly +1 or -1");
  }
  for (std::size_t i = 0; i < n(); ++i)
    max_row_sq_norm_ = std::max(max_row_sq_norm_, row(i).squared_norm());
  build_columns();
}

void SparseDataset::build_columns() {
  col_ptr_.assign(dim_ + 1, 0);
  for (auto j : indices_) ++col_ptr_[j + 1];
  for (std::size_t j = 0; j < dim_; ++j) col_ptr_[j + 1] += col_ptr_[j];
  col_rows_.resize(indices_.size());
  col_values_.resize(values_.size());
  std::vector<std::size_t> cursor(col_ptr_.begin(), col_ptr_.end() - 1);
  for (std::size_t i = 0; i < n(); ++i) {
    for (auto k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const auto dst = cursor[indices_[k]]++;
      col_rows_[dst] = static_cast<std::uint32_t>(i);
      col_values_[dst] = values_[k];
    }
  }
}

SparseDataset SparseDataset::subset(std::span<const std::size_t> rows) const {
  SparseDatasetBuilder b(task_);
  std::vector<SparseEntry> buf;
  for (auto i : rows) {
    detail::require(i < n(), "subset row index out of range");
    const auto r = row(i);
    buf.clear();
    for (std::size_t k = 0; k < r.size(); ++k) buf.push_back({r.indices[k], r.values[k]});
    b.add_row(buf, labels_[i]);
  }
  return std::move(b).build(dim_);
}

bool SparseDataset::operator==(const SparseDataset& o) const {
  return dim_ == o.dim_ && task_ == o.task_ && row_ptr_ == o.row_ptr_ &&
         indices_ == o.indices_ && values_ == o.values_ && labels_ == o.labels_;
}

void SparseDatasetBuilder::add_row(std::span<const SparseEntry> entries, double label) {
  for (const auto& e : entries) {
    indices_.push_back(e.index);
    values_.push_back(e.value);
    if (!any_ || e.index > max_index_) max_index_ = e.index;
    any_ = true;
  }
  row_ptr_.push_back(indices_.size());
  labels_.push_back(label);
}

SparseDataset SparseDatasetBuilder::build(std::size_t dim) && {
  const auto seen = max_index_plus_one();
  if (dim == 0) dim = seen;
  detail::require(dim >= seen, "dimension override is smaller than the largest feature index");
  return SparseDataset(dim, std::move(row_ptr_), std::move(indices_), std::move(values_),
                       std::move(labels_), task_);
}

}  // namespace cns
