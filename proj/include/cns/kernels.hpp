#pragma once

#include <cstddef>
#include <span>

#include "cns/dataset.hpp"

/// Data-parallel inner loops shared by objectives and gradients.
///
/// Every kernel has a serial reference (`serial::`) and an OpenMP version
/// (`omp::`). The two produce bit-identical results regardless of thread
/// count: scores are independent per row, and the transposed product is
/// computed per column over the CSC copy, whose row order matches the
/// serial scatter's addition order.
namespace cns::kernels {

enum class Policy { Serial, Parallel, Automatic };

void set_policy(Policy p) noexcept;
Policy policy() noexcept;

/// Below this many stored entries `Automatic` stays serial.
inline constexpr std::size_t kParallelThreshold = std::size_t{1} << 15;

namespace serial {
/// out[i] = z_i . x
void scores(const SparseDataset& data, std::span<const double> x, std::span<double> out);
/// out = sum_i coef[i] * z_i  (out is overwritten)
void transpose_accumulate(const SparseDataset& data, std::span<const double> coef,
                          std::span<double> out);
}  // namespace serial

namespace omp {
void scores(const SparseDataset& data, std::span<const double> x, std::span<double> out);
void transpose_accumulate(const SparseDataset& data, std::span<const double> coef,
                          std::span<double> out);
}  // namespace omp

void scores(const SparseDataset& data, std::span<const double> x, std::span<double> out);
void transpose_accumulate(const SparseDataset& data, std::span<const double> coef,
                          std::span<double> out);

/// out += sum_k coef[k] * z_{rows[k]}; serial, for mini-batches.
void batch_transpose_accumulate(const SparseDataset& data, std::span<const std::size_t> rows,
                                std::span<const double> coef, std::span<double> out);

/// Left-to-right sum; the fixed order keeps reductions reproducible.
double ordered_sum(std::span<const double> v) noexcept;

}  // namespace cns::kernels
