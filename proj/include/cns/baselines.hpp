#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "cns/problem.hpp"
#include "cns/solvers.hpp"

namespace cns {

enum class BaselineId { FOBOS, RDA, PolySGD };

std::string_view to_string(BaselineId id) noexcept;

/// Stochastic subgradient competitors working on the nonsmooth objective.
///
/// Step schedules (t = 1, 2, ...):
///   general          eta_t = eta0 / sqrt(t)
///   strongly convex  eta_t = eta0 / (mu t)
/// RDA uses beta_t = rda_scale sqrt(t) (general) or rda_scale (strongly convex).
struct BaselineSpec {
  BaselineId id = BaselineId::FOBOS;
  double eta0 = 1.0;
  double rda_scale = 1.0;
  double averaging_exponent = 3.0;  // Poly-SGD
  std::size_t minibatch = 50;
  std::uint64_t seed = 1;
  bool strongly_convex = false;
};

/// Mini-batch subgradient of the mean nonsmooth loss (regularizer excluded).
void loss_subgradient(const CompositeProblem& problem, std::span<const double> x,
                      std::span<const std::size_t> batch, std::span<double> out);

/// eta_t for FOBOS and Poly-SGD.
double baseline_step(const CompositeProblem& problem, const BaselineSpec& spec, std::size_t t);

/// RDA closed form: argmin_x <g_bar, x> + r(x) + (beta / t)/2 ||x||^2, i.e.
/// x_j = -soft(g_bar_j, nu1) / (nu2 + beta / t).
void rda_minimizer(std::span<const double> g_bar, const Regularizer& reg, double beta_over_t,
                   std::span<double> out);

/// Weight on x_t in the Poly-SGD running average: (c + 1) / (t + c).
double poly_average_weight(std::size_t t, double exponent) noexcept;

SolverRun run_fobos(const CompositeProblem& problem, const BaselineSpec& spec, std::size_t T,
                    std::span<const double> x0 = {}, const RunControl& ctl = {});
SolverRun run_rda(const CompositeProblem& problem, const BaselineSpec& spec, std::size_t T,
                  std::span<const double> x0 = {}, const RunControl& ctl = {});
/// Returns the polynomial-decay average, not the last iterate. Never applies a prox.
SolverRun run_poly_sgd(const CompositeProblem& problem, const BaselineSpec& spec, std::size_t T,
                       std::span<const double> x0 = {}, const RunControl& ctl = {});

SolverRun run_baseline(const CompositeProblem& problem, const BaselineSpec& spec, std::size_t T,
                       std::span<const double> x0 = {}, const RunControl& ctl = {});

}  // namespace cns
