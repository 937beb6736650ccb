#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace cns {

using Rng = std::mt19937_64;

/// b indices drawn uniformly from [0, n) with replacement.
std::vector<std::size_t> sample_minibatch(std::size_t n, std::size_t b, Rng& rng);

/// Same, writing into an existing buffer of size b.
void sample_minibatch_into(std::size_t n, std::vector<std::size_t>& out, Rng& rng);

/// Derives an independent stream seed from a base seed and a salt (splitmix64).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt) noexcept;

}  // namespace cns
