#include <algorithm>

#include "cns/kernels.hpp"

namespace cns::kernels::serial {

void scores(const SparseDataset& data, std::span<const double> x, std::span<double> out) {
  for (std::size_t i = 0; i < data.n(); ++i) out[i] = data.row(i).dot(x);
}

void transpose_accumulate(const SparseDataset& data, std::span<const double> coef,
                          std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t i = 0; i < data.n(); ++i) {
    const auto r = data.row(i);
    const double c = coef[i];
    for (std::size_t k = 0; k < r.size(); ++k) out[r.indices[k]] += c * r.values[k];
  }
}

}  // namespace cns::kernels::serial
