// Serial reference vs OpenMP kernels on synthetic sparse data.
//
//   ./kernels_bench --benchmark_filter=Scores
//
// Args: {n, d, feature density in percent}.

#include <benchmark/benchmark.h>

#include <map>
#include <memory>
#include <tuple>
#include <vector>

#include "cns/data_io.hpp"
#include "cns/kernels.hpp"
#include "cns/problem.hpp"

namespace {

using namespace cns;

std::shared_ptr<const SparseDataset> dataset(std::size_t n, std::size_t d, int density_pct) {
  static std::map<std::tuple<std::size_t, std::size_t, int>, std::shared_ptr<const SparseDataset>>
      cache;
  auto& slot = cache[{n, d, density_pct}];
  if (!slot) {
    SyntheticSpec s;
    s.n = n;
    s.d = d;
    s.feature_density = density_pct / 100.0;
    s.seed = 11;
    slot = std::make_shared<const SparseDataset>(make_synthetic(s).train);
  }
  return slot;
}

std::vector<double> ramp(std::size_t k) {
  std::vector<double> v(k);
  for (std::size_t i = 0; i < k; ++i) v[i] = 1.0 / static_cast<double>(i + 1);
  return v;
}

template <auto Fn>
void BM_Scores(benchmark::State& state) {
  const auto data = dataset(state.range(0), state.range(1), static_cast<int>(state.range(2)));
  const auto x = ramp(data->dim());
  std::vector<double> out(data->n());
  for (auto _ : state) {
    Fn(*data, x, out);
    benchmark::DoNotOptimize(out.data());
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * data->nnz()));
}

template <auto Fn>
void BM_Transpose(benchmark::State& state) {
  const auto data = dataset(state.range(0), state.range(1), static_cast<int>(state.range(2)));
  const auto coef = ramp(data->n());
  std::vector<double> out(data->dim());
  for (auto _ : state) {
    Fn(*data, coef, out);
    benchmark::DoNotOptimize(out.data());
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * data->nnz()));
}

void BM_Objective(benchmark::State& state, kernels::Policy policy) {
  const auto data = dataset(state.range(0), state.range(1), static_cast<int>(state.range(2)));
  const CompositeProblem problem(data, LossKind::Hinge, Regularizer::elastic_net(1e-4, 1e-4));
  const auto x = ramp(data->dim());
  const auto saved = kernels::policy();
  kernels::set_policy(policy);
  for (auto _ : state) benchmark::DoNotOptimize(objective_original(problem, x));
  kernels::set_policy(saved);
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * data->nnz()));
}

void shapes(benchmark::internal::Benchmark* b) {
  b->Args({1000, 50, 100})->Args({20000, 2000, 2})->Args({100000, 500, 10});
  b->Unit(benchmark::kMicrosecond);
}

}  // namespace

BENCHMARK(BM_Scores<&cns::kernels::serial::scores>)->Name("Scores/serial")->Apply(shapes);
BENCHMARK(BM_Scores<&cns::kernels::omp::scores>)->Name("Scores/omp")->Apply(shapes);
BENCHMARK(BM_Transpose<&cns::kernels::serial::transpose_accumulate>)
    ->Name("Transpose/serial")
    ->Apply(shapes);
BENCHMARK(BM_Transpose<&cns::kernels::omp::transpose_accumulate>)
    ->Name("Transpose/omp")
    ->Apply(shapes);
BENCHMARK_CAPTURE(BM_Objective, serial, cns::kernels::Policy::Serial)->Apply(shapes);
BENCHMARK_CAPTURE(BM_Objective, omp, cns::kernels::Policy::Parallel)->Apply(shapes);

BENCHMARK_MAIN();
