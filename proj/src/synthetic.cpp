#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "cns/data_io.hpp"
#include "cns/errors.hpp"

namespace cns {
namespace {

struct Generator {
  const SyntheticSpec& spec;
  const std::vector<double>& w;
  Rng& rng;
  std::normal_distribution<double> gauss{0.0, 1.0};
  std::uniform_real_distribution<double> unif{0.0, 1.0};
  double w_sq = 1.0;

  std::vector<SparseEntry> draw_row() {
    std::vector<SparseEntry> row;
    for (std::size_t j = 0; j < spec.d; ++j) {
      if (spec.feature_density < 1.0 && unif(rng) >= spec.feature_density) continue;
      row.push_back({static_cast<std::uint32_t>(j), gauss(rng)});
    }
    if (row.empty()) {
      std::uniform_int_distribution<std::size_t> pick(0, spec.d - 1);
      row.push_back({static_cast<std::uint32_t>(pick(rng)), gauss(rng)});
    }
    double sq = 0.0;
    for (const auto& e : row) sq += e.value * e.value;
    const double target = spec.min_row_norm + (spec.max_row_norm - spec.min_row_norm) * unif(rng);
    const double scale = sq > 0.0 ? target / std::sqrt(sq) : 0.0;
    for (auto& e : row) e.value *= scale;
    return row;
  }

  double score(const std::vector<SparseEntry>& row) const {
    double s = 0.0;
    for (const auto& e : row) s += e.value * w[e.index];
    return s;
  }

  double cosine(const std::vector<SparseEntry>& row, double s) const {
    double zz = 0.0;
    for (const auto& e : row) zz += e.value * e.value;
    return std::abs(s) / std::sqrt(zz * w_sq);
  }

  double laplace(double b) {
    const double u = unif(rng) - 0.5;
    return -b * std::copysign(1.0, u) * std::log(1.0 - 2.0 * std::abs(u));
  }

  SparseDataset draw(std::size_t n) {
    SparseDatasetBuilder builder(spec.task);
    for (std::size_t i = 0; i < n; ++i) {
      auto row = draw_row();
      double label = 0.0;
      if (spec.task == Task::Classification) {
        double s = score(row);
        for (int tries = 0; spec.min_margin > 0.0 && cosine(row, s) < spec.min_margin && tries < 10000;
             ++tries) {
          row = draw_row();
          s = score(row);
        }
        if (spec.noise == 0.0) {
          // keep the noiseless instance strictly separable
          for (int tries = 0; std::abs(s) <= 1e-12 && tries < 1000; ++tries) {
            row = draw_row();
            s = score(row);
          }
        } else {
          s += spec.noise * gauss(rng);
        }
        label = s >= 0.0 ? 1.0 : -1.0;
      } else {
        label = score(row) + (spec.noise > 0.0 ? laplace(spec.noise) : 0.0);
      }
      builder.add_row(row, label);
    }
    return std::move(builder).build(spec.d);
  }
};

}  // namespace

SyntheticInstance make_synthetic(const SyntheticSpec& spec) {
  detail::require(spec.n >= 1 && spec.d >= 1, "synthetic instance needs n, d >= 1");
  detail::require(spec.weight_density > 0.0 && spec.weight_density <= 1.0,
                  "weight density must lie in (0, 1]");
  detail::require(spec.feature_density > 0.0, "feature density must be positive");
  detail::require(spec.min_row_norm > 0.0 && spec.max_row_norm >= spec.min_row_norm,
                  "row norm range must be positive and ordered");
  detail::require(spec.noise >= 0.0, "noise must be non-negative");
  detail::require(spec.min_margin >= 0.0 && spec.min_margin < 1.0, "min_margin must lie in [0, 1)");

  Rng rng(spec.seed);
  std::vector<double> w(spec.d, 0.0);
  const auto k = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::lround(spec.weight_density * static_cast<double>(spec.d))), 1,
      spec.d);
  std::vector<std::size_t> perm(spec.d);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t j = 0; j < k; ++j) {
    std::uniform_int_distribution<std::size_t> pick(j, spec.d - 1);
    std::swap(perm[j], perm[pick(rng)]);
  }
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t j = 0; j < k; ++j) w[perm[j]] = spec.weight_scale * gauss(rng);

  Generator gen{spec, w, rng};
  gen.w_sq = 0.0;
  for (double v : w) gen.w_sq += v * v;
  SyntheticInstance inst{gen.draw(spec.n), std::nullopt, w, {spec.seed, std::nullopt}};
  if (spec.n_test > 0) inst.test = gen.draw(spec.n_test);
  return inst;
}

}  // namespace cns
