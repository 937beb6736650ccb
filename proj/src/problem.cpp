#include "cns/problem.hpp"

#include <cmath>
#include <string>

#include "cns/errors.hpp"
#include "cns/kernels.hpp"
#include "cns/smoothing.hpp"

namespace cns {

Regularizer Regularizer::l1(double nu1) {
  detail::require(nu1 >= 0.0, "nu1 must be non-negative");
  return {RegularizerKind::L1, nu1, 0.0};
}

Regularizer Regularizer::elastic_net(double nu1, double nu2) {
  detail::require(nu1 >= 0.0, "nu1 must be non-negative");
  detail::require(nu2 > 0.0, "elastic net needs nu2 > 0");
  return {RegularizerKind::ElasticNet, nu1, nu2};
}

double Regularizer::value(std::span<const double> x) const noexcept {
  double l1 = 0.0, l2 = 0.0;
  for (double v : x) {
    l1 += std::abs(v);
    l2 += v * v;
  }
  return nu1_ * l1 + 0.5 * nu2_ * l2;
}

CompositeProblem::CompositeProblem(std::shared_ptr<const SparseDataset> data, LossKind loss,
                                   Regularizer reg)
    : data_(std::move(data)), loss_(loss), reg_(reg) {
  detail::require(data_ != nullptr && data_->n() > 0, "problem needs a non-empty dataset");
  const bool cls = data_->task() == Task::Classification;
  detail::require(cls == (loss_ == LossKind::Hinge),
                  "hinge loss pairs with classification, absolute loss with regression");
}

SmoothedProblem::SmoothedProblem(CompositeProblem base, double gamma, double lambda)
    : base_(std::move(base)), gamma_(gamma), lambda_(lambda) {
  detail::require(gamma_ > 0.0, "smoothing parameter must be positive");
  detail::require(lambda_ >= 0.0, "lambda must be non-negative");
}

namespace {

void check_dim(const CompositeProblem& p, std::span<const double> x) {
  if (x.size() != p.dim())
    throw ContractViolation("weight vector has dimension " + std::to_string(x.size()) +
                            ", expected " + std::to_string(p.dim()));
}

template <class PerSample>
double mean_over_samples(const CompositeProblem& p, std::span<const double> x, PerSample f) {
  const auto& data = p.data();
  std::vector<double> v(data.n());
  kernels::scores(data, x, v);
  for (std::size_t i = 0; i < data.n(); ++i)
    v[i] = f(loss_argument(p.loss(), data.label(i), v[i]));
  return kernels::ordered_sum(v) / static_cast<double>(data.n());
}

}  // namespace

double mean_loss(const CompositeProblem& problem, std::span<const double> x) {
  check_dim(problem, x);
  const auto loss = problem.loss();
  return mean_over_samples(problem, x, [loss](double a) { return nonsmooth_loss(loss, a); });
}

double objective_original(const CompositeProblem& problem, std::span<const double> x) {
  return mean_loss(problem, x) + problem.reg().value(x);
}

double objective_smoothed(const SmoothedProblem& sp, std::span<const double> x) {
  const auto& p = sp.base();
  check_dim(p, x);
  const auto loss = p.loss();
  const double gamma = sp.gamma();
  double f = mean_over_samples(
      p, x, [loss, gamma](double a) { return smoothed_loss(loss, a, gamma).value; });
  f += p.reg().value(x);
  if (sp.lambda() != 0.0) {
    double sq = 0.0;
    for (double v : x) sq += v * v;
    f += 0.5 * sp.lambda() * sq;
  }
  return f;
}

}  // namespace cns
