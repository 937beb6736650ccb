#pragma once

#include <memory>
#include <span>
#include <vector>

#include "cns/dataset.hpp"

namespace cns {

enum class LossKind { Hinge, Absolute };
enum class RegularizerKind { L1, ElasticNet };

/// r(x) = nu1 ||x||_1 + (nu2 / 2) ||x||_2^2
class Regularizer {
 public:
  static Regularizer l1(double nu1);
  static Regularizer elastic_net(double nu1, double nu2);

  RegularizerKind kind() const noexcept { return kind_; }
  double nu1() const noexcept { return nu1_; }
  double nu2() const noexcept { return nu2_; }
  double strong_convexity() const noexcept { return nu2_; }
  double value(std::span<const double> x) const noexcept;

 private:
  Regularizer(RegularizerKind k, double nu1, double nu2) : kind_(k), nu1_(nu1), nu2_(nu2) {}
  RegularizerKind kind_;
  double nu1_;
  double nu2_;
};

/// P(x) = (1/n) sum_i loss_i(x) + r(x).
class CompositeProblem {
 public:
  CompositeProblem(std::shared_ptr<const SparseDataset> data, LossKind loss, Regularizer reg);

  const SparseDataset& data() const noexcept { return *data_; }
  std::shared_ptr<const SparseDataset> data_ptr() const noexcept { return data_; }
  LossKind loss() const noexcept { return loss_; }
  const Regularizer& reg() const noexcept { return reg_; }
  /// Strong-convexity modulus of P; only the regularizer contributes.
  double mu() const noexcept { return reg_.strong_convexity(); }
  std::size_t dim() const noexcept { return data_->dim(); }
  std::size_t n() const noexcept { return data_->n(); }

 private:
  std::shared_ptr<const SparseDataset> data_;
  LossKind loss_;
  Regularizer reg_;
};

/// (1/n) sum_i f~_i(x) + r(x) + (lambda/2) ||x||^2 at smoothness gamma.
class SmoothedProblem {
 public:
  SmoothedProblem(CompositeProblem base, double gamma, double lambda = 0.0);

  const CompositeProblem& base() const noexcept { return base_; }
  const SparseDataset& data() const noexcept { return base_.data(); }
  double gamma() const noexcept { return gamma_; }
  double lambda() const noexcept { return lambda_; }
  /// Strong convexity of the whole smoothed objective: nu2 + lambda.
  double mu_eff() const noexcept { return base_.mu() + lambda_; }

 private:
  CompositeProblem base_;
  double gamma_;
  double lambda_;
};

/// Per-sample argument of the scalar loss: margin y z.x (hinge) or residual
/// y - z.x (absolute).
inline double loss_argument(LossKind loss, double label, double score) noexcept {
  return loss == LossKind::Hinge ? label * score : label - score;
}

/// Exact nonsmooth P(x).
double objective_original(const CompositeProblem& problem, std::span<const double> x);
/// Smoothed objective including the lambda term.
double objective_smoothed(const SmoothedProblem& sp, std::span<const double> x);

/// Mean nonsmooth loss only (no regularizer), over all samples.
double mean_loss(const CompositeProblem& problem, std::span<const double> x);

}  // namespace cns
