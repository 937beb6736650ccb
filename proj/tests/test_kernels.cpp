#include <doctest.h>

#include <cstring>
#include <random>
#include <vector>

#include "cns/kernels.hpp"
#include "cns/problem.hpp"
#include "cns/smoothing.hpp"
#include "oracles.hpp"

using namespace cns;

namespace {

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

struct PolicyGuard {
  kernels::Policy saved = kernels::policy();
  ~PolicyGuard() { kernels::set_policy(saved); }
};

}  // namespace

TEST_CASE("serial and OpenMP kernels are bit-identical") {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 5; ++rep) {
    const auto data = oracle::random_dataset(rng, 500 + 100 * rep, 40, 0.3, Task::Regression);
    const auto x = oracle::random_vector(rng, data->dim());
    const auto coef = oracle::random_vector(rng, data->n());

    std::vector<double> s1(data->n()), s2(data->n());
    kernels::serial::scores(*data, x, s1);
    kernels::omp::scores(*data, x, s2);
    CHECK(bitwise_equal(s1, s2));

    std::vector<double> t1(data->dim()), t2(data->dim(), 7.0);
    kernels::serial::transpose_accumulate(*data, coef, t1);
    kernels::omp::transpose_accumulate(*data, coef, t2);
    CHECK(bitwise_equal(t1, t2));
  }
}

TEST_CASE("kernels match a dense reference") {
  std::mt19937_64 rng(5);
  const auto data = oracle::random_dataset(rng, 30, 8, 0.5, Task::Regression);
  const auto x = oracle::random_vector(rng, 8);
  const auto coef = oracle::random_vector(rng, 30);
  std::vector<double> s(30), t(8);
  kernels::scores(*data, x, s);
  kernels::transpose_accumulate(*data, coef, t);
  std::vector<double> t_ref(8, 0.0);
  for (std::size_t i = 0; i < 30; ++i) {
    const auto r = data->row(i);
    double acc = 0.0;
    for (std::size_t k = 0; k < r.size(); ++k) {
      acc += r.values[k] * x[r.indices[k]];
      t_ref[r.indices[k]] += coef[i] * r.values[k];
    }
    CHECK(s[i] == doctest::Approx(acc).epsilon(1e-14));
  }
  for (std::size_t j = 0; j < 8; ++j) CHECK(t[j] == doctest::Approx(t_ref[j]).epsilon(1e-14));
}

TEST_CASE("objective and gradient do not depend on the kernel policy") {
  PolicyGuard guard;
  std::mt19937_64 rng(9);
  const auto data = oracle::random_dataset(rng, 2000, 60, 0.4, Task::Classification);
  const CompositeProblem problem(data, LossKind::Hinge, Regularizer::elastic_net(1e-3, 1e-3));
  const SmoothedProblem sp(problem, 0.05, 1e-4);
  const auto x = oracle::random_vector(rng, data->dim(), 0.5);

  std::vector<double> obj, sm;
  std::vector<std::vector<double>> grads;
  for (auto p : {kernels::Policy::Serial, kernels::Policy::Parallel, kernels::Policy::Automatic}) {
    kernels::set_policy(p);
    obj.push_back(objective_original(problem, x));
    sm.push_back(objective_smoothed(sp, x));
    grads.push_back(smoothed_loss_gradient(sp, x));
  }
  for (std::size_t k = 1; k < obj.size(); ++k) {
    CHECK(std::memcmp(&obj[0], &obj[k], sizeof(double)) == 0);
    CHECK(std::memcmp(&sm[0], &sm[k], sizeof(double)) == 0);
    CHECK(bitwise_equal(grads[0], grads[k]));
  }
}

TEST_CASE("ordered_sum adds left to right") {
  const std::vector<double> v{1e16, 1.0, -1e16, 1.0};
  CHECK(kernels::ordered_sum(v) == ((1e16 + 1.0) - 1e16) + 1.0);
}

TEST_CASE("batch transpose accumulates with duplicates") {
  std::mt19937_64 rng(2);
  const auto data = oracle::random_dataset(rng, 10, 5, 1.0, Task::Regression);
  const std::vector<std::size_t> rows{1, 1, 4};
  const std::vector<double> coef{0.5, 0.25, -1.0};
  std::vector<double> out(5, 1.0);
  kernels::batch_transpose_accumulate(*data, rows, coef, out);
  for (std::size_t j = 0; j < 5; ++j) {
    double ref = 1.0;
    for (std::size_t k = 0; k < 3; ++k) {
      const auto r = data->row(rows[k]);
      for (std::size_t q = 0; q < r.size(); ++q)
        if (r.indices[q] == j) ref += coef[k] * r.values[q];
    }
    CHECK(out[j] == doctest::Approx(ref).epsilon(1e-14));
  }
}
