#include "cns/kernels.hpp"

#include <atomic>

namespace cns::kernels {
namespace {
std::atomic<Policy> g_policy{Policy::Automatic};

bool use_parallel(const SparseDataset& data) {
  switch (g_policy.load(std::memory_order_relaxed)) {
    case Policy::Serial:
      return false;
    case Policy::Parallel:
      return true;
    case Policy::Automatic:
      break;
  }
  return data.nnz() >= kParallelThreshold;
}
}  // namespace

void set_policy(Policy p) noexcept { g_policy.store(p, std::memory_order_relaxed); }
Policy policy() noexcept { return g_policy.load(std::memory_order_relaxed); }

void scores(const SparseDataset& data, std::span<const double> x, std::span<double> out) {
  if (use_parallel(data))
    omp::scores(data, x, out);
  else
    serial::scores(data, x, out);
}

void transpose_accumulate(const SparseDataset& data, std::span<const double> coef,
                          std::span<double> out) {
  if (use_parallel(data))
    omp::transpose_accumulate(data, coef, out);
  else
    serial::transpose_accumulate(data, coef, out);
}

void batch_transpose_accumulate(const SparseDataset& data, std::span<const std::size_t> rows,
                                std::span<const double> coef, std::span<double> out) {
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto r = data.row(rows[k]);
    const double c = coef[k];
    if (c == 0.0) continue;
    for (std::size_t e = 0; e < r.size(); ++e) out[r.indices[e]] += c * r.values[e];
  }
}

double ordered_sum(std::span<const double> v) noexcept {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

}  // namespace cns::kernels
