#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "cns/errors.hpp"
#include "cns/smoothing.hpp"
#include "oracles.hpp"

using namespace cns;

TEST_CASE("smoothed hinge examples") {
  auto r = smoothed_hinge(1.2, 0.1);
  CHECK(r.value == 0.0);
  CHECK(r.derivative == 0.0);
  CHECK(r.branch == Branch::Flat);
  r = smoothed_hinge(0.5, 0.5);
  CHECK(r.value == doctest::Approx(0.25));
  CHECK(r.derivative == doctest::Approx(-1.0));
  r = smoothed_hinge(-1.0, 0.5);
  CHECK(r.value == doctest::Approx(1.75));
  CHECK(r.derivative == -1.0);
  CHECK(r.branch == Branch::Linear);
  CHECK_THROWS_AS(smoothed_hinge(0.0, 0.0), ContractViolation);
}

TEST_CASE("smoothed absolute examples") {
  auto r = smoothed_absolute(2.0, 1.0);
  CHECK(r.value == doctest::Approx(1.5));
  CHECK(r.derivative == 1.0);
  r = smoothed_absolute(0.0, 0.3);
  CHECK(r.value == 0.0);
  CHECK(r.derivative == 0.0);
  r = smoothed_absolute(-0.5, 1.0);
  CHECK(r.value == doctest::Approx(0.125));
  CHECK(r.derivative == doctest::Approx(-0.5));
  CHECK(r.branch == Branch::Quadratic);
  CHECK_THROWS_AS(smoothed_absolute(0.0, -1.0), ContractViolation);
}

TEST_CASE("closed forms match the dual maximization") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> arg(-3.0, 3.0);
  for (int rep = 0; rep < 500; ++rep) {
    const double a = arg(rng);
    const double gamma = std::exp(std::uniform_real_distribution<>(-6, 1)(rng));
    CHECK(smoothed_hinge(a, gamma).value ==
          doctest::Approx(oracle::smoothed_by_dual(true, a, gamma)).epsilon(1e-9));
    CHECK(smoothed_absolute(a, gamma).value ==
          doctest::Approx(oracle::smoothed_by_dual(false, a, gamma)).epsilon(1e-9));
  }
}

TEST_CASE("branches agree at the breakpoints") {
  for (double gamma : {1.0, 0.1, 0.01, 0.001}) {
    // hinge: m = 1 (flat | quadratic), m = 1 - gamma (quadratic | linear)
    const double m2 = 1.0 - gamma;
    CHECK(std::abs(smoothed_hinge(1.0, gamma).value) <= 1e-12);
    CHECK(std::abs(smoothed_hinge(std::nextafter(1.0, 2.0), gamma).value) <= 1e-12);
    CHECK(std::abs(smoothed_hinge(1.0, gamma).derivative) <= 1e-12);
    CHECK(std::abs(smoothed_hinge(m2, gamma).value - (1.0 - m2 - 0.5 * gamma)) <= 1e-12);
    CHECK(std::abs(smoothed_hinge(m2, gamma).derivative - (-1.0)) <= 1e-12);
    CHECK(std::abs(smoothed_hinge(std::nextafter(m2, -1.0), gamma).value -
                   smoothed_hinge(m2, gamma).value) <= 1e-12);
    // absolute: rho = +-gamma
    for (double s : {1.0, -1.0}) {
      const double rho = s * gamma;
      const auto q = smoothed_absolute(rho, gamma);
      CHECK(std::abs(q.value - (std::abs(rho) - 0.5 * gamma)) <= 1e-12);
      CHECK(std::abs(q.derivative - s) <= 1e-12);
      const auto out = smoothed_absolute(std::nextafter(rho, 10.0 * rho), gamma);
      CHECK(std::abs(out.value - q.value) <= 1e-12);
      CHECK(std::abs(out.derivative - q.derivative) <= 1e-12);
    }
  }
}

TEST_CASE("uniform approximation on a dense grid and gamma -> 0 convergence") {
  for (double gamma : {1.0, 0.1, 1e-3}) {
    for (int k = -4000; k <= 4000; ++k) {
      const double a = k * 1e-3;
      for (auto loss : {LossKind::Hinge, LossKind::Absolute}) {
        const double gap = nonsmooth_loss(loss, a) - smoothed_loss(loss, a, gamma).value;
        CHECK(gap >= -1e-15);
        CHECK(gap <= 0.5 * gamma + 1e-15);
        CHECK(std::abs(smoothed_loss(loss, a, gamma).derivative) <= 1.0);
      }
    }
  }
  for (int k = -300; k <= 300; ++k) {
    const double m = k * 1e-2;
    CHECK(std::abs(smoothed_hinge(m, 1e-8).value - std::max(0.0, 1.0 - m)) <= 1e-7);
  }
}

TEST_CASE("gradients match central finite differences") {
  std::mt19937_64 rng(8);
  for (auto task : {Task::Classification, Task::Regression}) {
    const auto loss = task == Task::Classification ? LossKind::Hinge : LossKind::Absolute;
    const auto data = oracle::random_dataset(rng, 1, 6, 1.0, task);
    const CompositeProblem p(data, loss, Regularizer::l1(0.0));
    const SmoothedProblem sp(p, 0.05, 0.1);
    int checked = 0;
    while (checked < 100) {
      const auto x = oracle::random_vector(rng, 6);
      const double arg = loss_argument(loss, data->label(0), data->row(0).dot(x));
      const double d1 = loss == LossKind::Hinge ? std::abs(arg - 1.0) : std::abs(arg - 0.05);
      const double d2 = loss == LossKind::Hinge ? std::abs(arg - 0.95) : std::abs(arg + 0.05);
      if (std::min(d1, d2) < 1e-3) continue;
      ++checked;
      const auto g = smoothed_loss_gradient(sp, x);
      auto f = [&](const std::vector<double>& v) { return objective_smoothed(sp, v); };
      for (std::size_t j = 0; j < 6; ++j) {
        const double fd = oracle::central_difference(f, x, j, 1e-6);
        CHECK(std::abs(g[j] - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
      }
    }
  }
}

TEST_CASE("gradient examples and batch semantics") {
  const auto cls = oracle::dense_dataset({{1.0, 0.0}}, {1.0}, Task::Classification);
  const SmoothedProblem flat(CompositeProblem(cls, LossKind::Hinge, Regularizer::l1(0)), 0.1);
  const std::vector<double> x{2.0, 0.0};
  const auto g = smoothed_loss_gradient(flat, x);
  CHECK(g[0] == 0.0);
  CHECK(g[1] == 0.0);

  const auto reg = oracle::dense_dataset({{1.0}}, {0.0}, Task::Regression);
  const SmoothedProblem lin(CompositeProblem(reg, LossKind::Absolute, Regularizer::l1(0)), 1.0);
  const std::vector<double> two{2.0};
  CHECK(smoothed_loss_gradient(lin, two)[0] == 1.0);

  std::mt19937_64 rng(1);
  const auto data = oracle::random_dataset(rng, 20, 4, 1.0, Task::Regression);
  const SmoothedProblem sp(CompositeProblem(data, LossKind::Absolute, Regularizer::l1(0)), 0.2,
                           0.5);
  const auto y = oracle::random_vector(rng, 4);
  std::vector<std::size_t> all(20);
  for (std::size_t i = 0; i < 20; ++i) all[i] = i;
  const auto full = smoothed_loss_gradient(sp, y);
  const auto batch = smoothed_loss_gradient(sp, y, std::span<const std::size_t>(all));
  for (std::size_t j = 0; j < 4; ++j) CHECK(full[j] == doctest::Approx(batch[j]).epsilon(1e-13));
  const std::vector<std::size_t> bad{20};
  CHECK_THROWS_AS(smoothed_loss_gradient(sp, y, std::span<const std::size_t>(bad)),
                  ContractViolation);
}

TEST_CASE("dual spec, smoothing gap, Lipschitz constant and condition number") {
  for (auto loss : {LossKind::Hinge, LossKind::Absolute}) {
    const auto s = dual_spec(loss);
    CHECK(s.d_u == 0.5);
    CHECK(s.zeta == 1.0);
    CHECK(s.hat_lipschitz == 0.0);
    CHECK(s.d_u == std::max(s.omega(s.u_domain.lo), s.omega(s.u_domain.hi)));
  }
  CHECK(smoothing_gap(dual_spec(LossKind::Hinge), 0.01) == doctest::Approx(0.005));
  CHECK(smoothing_gap(dual_spec(LossKind::Absolute), 1.0) == 0.5);
  double last = 1.0;
  for (double g = 1.0; g > 1e-6; g /= 3.0) {
    const double gap = smoothing_gap(dual_spec(LossKind::Hinge), g);
    CHECK(gap <= last);
    last = gap;
  }

  const auto data = oracle::dense_dataset({{3.0, 4.0}}, {1.0}, Task::Classification);
  const CompositeProblem p(data, LossKind::Hinge, Regularizer::l1(0.0));
  CHECK(lipschitz_constant(SmoothedProblem(p, 1.0)) == 25.0);
  CHECK(lipschitz_constant(SmoothedProblem(p, 0.5)) == 50.0);
  CHECK(condition_number(SmoothedProblem(p, 0.5), 0.5) == 100.0);
  CHECK(condition_number(SmoothedProblem(p, 0.25), 0.5) == 200.0);
  CHECK_THROWS_AS(condition_number(SmoothedProblem(p, 0.5), 0.0), ContractViolation);
  // general convex schedule: L x tau and lambda / tau -> kappa x tau^2
  const double k1 = condition_number(SmoothedProblem(p, 0.1, 1e-3), 1e-3);
  const double k2 = condition_number(SmoothedProblem(p, 0.05, 5e-4), 5e-4);
  CHECK(k2 / k1 == doctest::Approx(4.0).epsilon(1e-3));
}

TEST_CASE("sampled Lipschitz bound holds") {
  std::mt19937_64 rng(12);
  for (auto task : {Task::Classification, Task::Regression}) {
    const auto loss = task == Task::Classification ? LossKind::Hinge : LossKind::Absolute;
    const auto data = oracle::random_dataset(rng, 60, 10, 0.6, task);
    const SmoothedProblem sp(CompositeProblem(data, loss, Regularizer::l1(0)), 0.05, 0.01);
    const double L = lipschitz_constant(sp);
    for (int rep = 0; rep < 200; ++rep) {
      const auto x = oracle::random_vector(rng, 10);
      auto y = x;
      const auto dir = oracle::random_vector(rng, 10, 0.1);
      for (std::size_t j = 0; j < 10; ++j) y[j] += dir[j];
      const auto gx = smoothed_loss_gradient(sp, x), gy = smoothed_loss_gradient(sp, y);
      double dg = 0.0, dx = 0.0;
      for (std::size_t j = 0; j < 10; ++j) {
        dg += (gx[j] - gy[j]) * (gx[j] - gy[j]);
        dx += (x[j] - y[j]) * (x[j] - y[j]);
      }
      CHECK(std::sqrt(dg) <= L * std::sqrt(dx) * (1.0 + 1e-12));
    }
  }
}
