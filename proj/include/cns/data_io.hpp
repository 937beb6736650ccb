#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "cns/dataset.hpp"
#include "cns/sampling.hpp"

namespace cns {

struct LibsvmOptions {
  Task task = Task::Classification;
  /// 0 = largest index seen; a larger value aligns train/test dimensions.
  std::size_t dim = 0;
  /// Map a {0,1}-labelled classification file to {-1,+1} (reported in the result).
  bool map_binary_labels = true;
};

struct LibsvmData {
  SparseDataset data;
  bool labels_remapped = false;
};

/// Parses `label idx:val idx:val ...` lines with 1-based, strictly ascending
/// indices. Blank lines and '#' comments are skipped. Throws ParseError with
/// the offending line number.
LibsvmData parse_libsvm(std::istream& in, const LibsvmOptions& opts = {});

/// Same, from a file; gzip-compressed input is detected and decompressed.
LibsvmData load_libsvm(const std::filesystem::path& path, const LibsvmOptions& opts = {});

/// Canonical form: labels "+1"/"-1" for classification, shortest round-trip
/// decimal otherwise; entries as 1-based `idx:val`.
void write_libsvm(const SparseDataset& data, std::ostream& out);
void save_libsvm(const SparseDataset& data, const std::filesystem::path& path);

struct SyntheticSpec {
  std::size_t n = 1000;
  std::size_t d = 50;
  Task task = Task::Classification;
  double weight_density = 0.2;   // fraction of nonzero ground-truth weights
  double weight_scale = 1.0;
  double feature_density = 1.0;  // expected fraction of stored features per row
  double noise = 0.0;            // margin noise (Gaussian) or residual noise (Laplace scale)
  /// Classification: resample rows with |cos(z, w*)| below this before noise is added.
  double min_margin = 0.0;
  double min_row_norm = 1.0;
  double max_row_norm = 1.0;
  std::size_t n_test = 0;
  std::uint64_t seed = 1;
};

struct ReferenceInfo {
  std::uint64_t seed = 0;
  /// High-accuracy P(x*), filled in by an oracle run.
  std::optional<double> optimum;
};

struct SyntheticInstance {
  SparseDataset train;
  std::optional<SparseDataset> test;
  std::vector<double> w_true;
  ReferenceInfo reference;
};

/// Bit-reproducible from spec.seed. Classification labels are sign(z.w* + noise)
/// and, when noise is 0, no sample sits exactly on the separating hyperplane.
SyntheticInstance make_synthetic(const SyntheticSpec& spec);

}  // namespace cns
