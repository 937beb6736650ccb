#pragma once

#include <optional>
#include <span>
#include <vector>

#include "cns/problem.hpp"

namespace cns {

enum class Branch { Flat, Linear, Quadratic };

struct ScalarBranchResult {
  double value;
  double derivative;  // w.r.t. the scalar margin / residual
  Branch branch;
};

/// Smoothed hinge on margin m = y z.x:
///   0                     m >= 1
///   1 - m - gamma/2       m < 1 - gamma
///   (1 - m)^2 / (2 gamma) otherwise
ScalarBranchResult smoothed_hinge(double margin, double gamma);

/// Smoothed absolute loss (Huber) on residual rho = y - z.x:
///   rho - gamma/2          rho > gamma
///   -rho - gamma/2         rho < -gamma
///   rho^2 / (2 gamma)      otherwise
/// Both breakpoints belong to the quadratic branch; the formulas agree there.
ScalarBranchResult smoothed_absolute(double residual, double gamma);

ScalarBranchResult smoothed_loss(LossKind loss, double arg, double gamma);

/// max(0, 1 - m) or |rho|.
double nonsmooth_loss(LossKind loss, double arg) noexcept;

/// Minimal-norm subgradient w.r.t. the scalar argument: 0 at the hinge kink
/// (m = 1) and at rho = 0.
double nonsmooth_subgradient(LossKind loss, double arg) noexcept;

struct Interval {
  double lo;
  double hi;
};

/// Dual description of a loss in max_u <A x, u> - Q(u) form, smoothed with
/// omega(u) = u^2 / 2.
struct LossDualSpec {
  LossKind kind;
  Interval u_domain;
  double zeta;             // strong convexity of omega
  double d_u;              // max of omega over u_domain
  double hat_lipschitz;    // Lipschitz constant of the smooth part g^ (zero for both losses)

  double omega(double u) const noexcept { return 0.5 * u * u; }
};

LossDualSpec dual_spec(LossKind loss) noexcept;

/// gamma * D_u: how far the smoothed objective can sit below the original.
double smoothing_gap(const LossDualSpec& spec, double gamma);

/// L_s = max_i ||z_i||^2 / (gamma zeta) + lambda. Per-sample bound, valid for the
/// averaged loss; not the tighter spectral bound.
double lipschitz_constant(const SmoothedProblem& sp);

/// kappa_s = L_s / mu_eff.
double condition_number(const SmoothedProblem& sp, double mu_eff);

/// Scalar c with grad f~_i(x) = c z_i, given the sample's score z_i.x.
inline double gradient_coefficient(LossKind loss, double label, double score, double gamma) {
  const auto r = smoothed_loss(loss, loss_argument(loss, label, score), gamma);
  return loss == LossKind::Hinge ? r.derivative * label : -r.derivative;
}

/// Full-batch gradient of (1/n) sum_i f~_i, without the lambda term.
void loss_gradient(const SmoothedProblem& sp, std::span<const double> x, std::span<double> out);

/// Mini-batch gradient (1/|batch|) sum_{i in batch} grad f~_i(x), without lambda.
void loss_gradient(const SmoothedProblem& sp, std::span<const double> x,
                   std::span<const std::size_t> batch, std::span<double> out);

/// Gradient of the smooth part (1/|batch|) sum f~_i(x) + lambda x; full batch
/// when `batch` is empty.
std::vector<double> smoothed_loss_gradient(
    const SmoothedProblem& sp, std::span<const double> x,
    std::optional<std::span<const std::size_t>> batch = std::nullopt);

}  // namespace cns
