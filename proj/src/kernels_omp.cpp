#include <omp.h>

#include <cstdint>

#include "cns/kernels.hpp"

namespace cns::kernels::omp {

void scores(const SparseDataset& data, std::span<const double> x, std::span<double> out) {
  const auto n = static_cast<std::int64_t>(data.n());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) out[i] = data.row(static_cast<std::size_t>(i)).dot(x);
}

void transpose_accumulate(const SparseDataset& data, std::span<const double> coef,
                          std::span<double> out) {
  const auto d = static_cast<std::int64_t>(data.dim());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t j = 0; j < d; ++j) {
    const auto rows = data.column_rows(static_cast<std::size_t>(j));
    const auto vals = data.column_values(static_cast<std::size_t>(j));
    // start from +0.0 and add in ascending row order, like the serial scatter
    double s = 0.0;
    for (std::size_t k = 0; k < rows.size(); ++k) s += coef[rows[k]] * vals[k];
    out[j] = s;
  }
}

}  // namespace cns::kernels::omp
