#include "cns/smoothing.hpp"

#include <cmath>

#include "cns/errors.hpp"
#include "cns/kernels.hpp"

namespace cns {

ScalarBranchResult smoothed_hinge(double m, double gamma) {
  detail::require(gamma > 0.0, "smoothing parameter must be positive");
  if (m >= 1.0) return {0.0, 0.0, Branch::Flat};
  // branch on the slack itself so the quadratic slope never exceeds 1 in magnitude
  const double slack = 1.0 - m;
  if (slack > gamma) return {slack - 0.5 * gamma, -1.0, Branch::Linear};
  return {slack * slack / (2.0 * gamma), -slack / gamma, Branch::Quadratic};
}

ScalarBranchResult smoothed_absolute(double rho, double gamma) {
  detail::require(gamma > 0.0, "smoothing parameter must be positive");
  if (rho > gamma) return {rho - 0.5 * gamma, 1.0, Branch::Linear};
  if (rho < -gamma) return {-rho - 0.5 * gamma, -1.0, Branch::Linear};
  return {rho * rho / (2.0 * gamma), rho / gamma, Branch::Quadratic};
}

ScalarBranchResult smoothed_loss(LossKind loss, double arg, double gamma) {
  return loss == LossKind::Hinge ? smoothed_hinge(arg, gamma) : smoothed_absolute(arg, gamma);
}

double nonsmooth_loss(LossKind loss, double arg) noexcept {
  return loss == LossKind::Hinge ? std::max(0.0, 1.0 - arg) : std::abs(arg);
}

double nonsmooth_subgradient(LossKind loss, double arg) noexcept {
  if (loss == LossKind::Hinge) return arg < 1.0 ? -1.0 : 0.0;
  return arg > 0.0 ? 1.0 : (arg < 0.0 ? -1.0 : 0.0);
}

LossDualSpec dual_spec(LossKind loss) noexcept {
  // omega(u) = u^2/2 peaks at an endpoint of U; both domains reach |u| = 1.
  const Interval dom = loss == LossKind::Hinge ? Interval{0.0, 1.0} : Interval{-1.0, 1.0};
  const double du = std::max(0.5 * dom.lo * dom.lo, 0.5 * dom.hi * dom.hi);
  return {loss, dom, 1.0, du, 0.0};
}

double smoothing_gap(const LossDualSpec& spec, double gamma) {
  detail::require(gamma > 0.0, "smoothing parameter must be positive");
  return gamma * spec.d_u;
}

double lipschitz_constant(const SmoothedProblem& sp) {
  detail::require(sp.data().n() > 0, "Lipschitz constant of an empty dataset");
  const auto spec = dual_spec(sp.base().loss());
  return spec.hat_lipschitz + sp.data().max_row_squared_norm() / (sp.gamma() * spec.zeta) +
         sp.lambda();
}

double condition_number(const SmoothedProblem& sp, double mu_eff) {
  detail::require(mu_eff > 0.0, "condition number needs a positive strong-convexity modulus");
  return lipschitz_constant(sp) / mu_eff;
}

void loss_gradient(const SmoothedProblem& sp, std::span<const double> x, std::span<double> out) {
  const auto& data = sp.data();
  detail::require(x.size() == data.dim() && out.size() == data.dim(), "dimension mismatch");
  std::vector<double> coef(data.n());
  kernels::scores(data, x, coef);
  const auto loss = sp.base().loss();
  for (std::size_t i = 0; i < data.n(); ++i)
    coef[i] = gradient_coefficient(loss, data.label(i), coef[i], sp.gamma());
  kernels::transpose_accumulate(data, coef, out);
  const double inv_n = 1.0 / static_cast<double>(data.n());
  for (auto& g : out) g *= inv_n;
}

void loss_gradient(const SmoothedProblem& sp, std::span<const double> x,
                   std::span<const std::size_t> batch, std::span<double> out) {
  const auto& data = sp.data();
  detail::require(x.size() == data.dim() && out.size() == data.dim(), "dimension mismatch");
  detail::require(!batch.empty(), "empty mini-batch");
  std::vector<double> coef(batch.size());
  const auto loss = sp.base().loss();
  for (std::size_t k = 0; k < batch.size(); ++k) {
    const auto i = batch[k];
    detail::require(i < data.n(), "mini-batch index out of range");
    coef[k] = gradient_coefficient(loss, data.label(i), data.row(i).dot(x), sp.gamma()) /
              static_cast<double>(batch.size());
  }
  std::fill(out.begin(), out.end(), 0.0);
  kernels::batch_transpose_accumulate(data, batch, coef, out);
}

std::vector<double> smoothed_loss_gradient(const SmoothedProblem& sp, std::span<const double> x,
                                           std::optional<std::span<const std::size_t>> batch) {
  std::vector<double> g(sp.data().dim());
  if (batch)
    loss_gradient(sp, x, *batch, g);
  else
    loss_gradient(sp, x, g);
  if (sp.lambda() != 0.0)
    for (std::size_t j = 0; j < g.size(); ++j) g[j] += sp.lambda() * x[j];
  return g;
}

}  // namespace cns
