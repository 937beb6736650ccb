#include <cmath>
#include <string>

#include "cns/errors.hpp"
#include "cns/solvers.hpp"

namespace cns {

double BudgetRow::evaluate(double kappa, double rho) const {
  const double f = phi(rho);
  const double k = family == SolverFamily::Accelerated ? std::sqrt(kappa) : kappa;
  return a * k * f + b * f + c;
}

BudgetRow budget_row(const SolverSpec& spec, std::size_t n) {
  using F = SolverFamily;
  switch (spec.id) {
    case SolverId::ProxGD:
      return {4.0, 0.0, 0.0, F::NonAccelerated, [](double r) { return std::log(1.0 / r); }};
    case SolverId::ProxSVRG: {
      const double th = spec.theta;
      if (!(th > 0.0 && th < 0.25)) throw InfeasibleBudget("theta must lie in (0, 0.25)");
      return {th, 4.0 * th, 0.0, F::NonAccelerated,
              [th](double r) { return 1.0 / ((1.0 - 4.0 * th) * r - 4.0 * th); }};
    }
    case SolverId::SAGA:
      detail::require(n > 0, "SAGA budget needs the sample count");
      return {9.0, 3.0 * static_cast<double>(n), 0.0, F::NonAccelerated,
              [](double r) { return 1.0 / r; }};
    case SolverId::MISO:
      detail::require(n > 0, "MISO budget needs the sample count");
      return {static_cast<double>(n), 0.0, 0.0, F::NonAccelerated,
              [](double r) { return 1.0 / r; }};
    case SolverId::APG:
      return {1.0, 0.0, 0.0, F::Accelerated, [](double r) { return std::log(2.0 / r); }};
    case SolverId::AccProxSVRG: {
      const double p = spec.p;
      if (!(p > 0.0 && p < 1.0)) throw InfeasibleBudget("p must lie in (0, 1)");
      return {std::sqrt(2.0) / (1.0 - p), 0.0, 0.0, F::Accelerated, [p](double r) {
                return std::log(1.0 / (r / (2.0 + p) - p / (1.0 - p)));
              }};
    }
  }
  throw ContractViolation("unknown solver id");
}

std::size_t required_t1(const SolverSpec& spec, double kappa, double rho, std::size_t n) {
  detail::require(kappa > 0.0, "condition number must be positive");
  detail::require(rho > 0.0 && rho < 1.0, "target reduction factor must lie in (0, 1)");
  const auto row = budget_row(spec, n);
  if (spec.id == SolverId::ProxSVRG && !((1.0 - 4.0 * spec.theta) * rho - 4.0 * spec.theta > 0.0))
    throw InfeasibleBudget("Prox-SVRG budget needs (1 - 4 theta) rho - 4 theta > 0");
  if (spec.id == SolverId::AccProxSVRG && !(rho > spec.p * (2.0 + spec.p) / (1.0 - spec.p)))
    throw InfeasibleBudget("accelerated Prox-SVRG budget needs rho > p (2 + p) / (1 - p), got rho = " +
                           std::to_string(rho));
  const double t = row.evaluate(kappa, rho);
  if (!std::isfinite(t) || t <= 0.0) throw InfeasibleBudget("budget formula is not positive");
  return static_cast<std::size_t>(std::ceil(t));
}

}  // namespace cns
