#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "cns/problem.hpp"

namespace cns {

enum class SolverId { ProxGD, APG, ProxSVRG, AccProxSVRG, SAGA, MISO };
enum class SolverFamily { NonAccelerated, Accelerated };

SolverFamily family_of(SolverId id) noexcept;
bool is_runnable(SolverId id) noexcept;
bool is_stochastic(SolverId id) noexcept;
std::string_view to_string(SolverId id) noexcept;
SolverId solver_from_string(std::string_view name);

/// Inner-solver configuration.
///
/// Step sizes are `step_scale` times the nominal step:
///   ProxGD, APG     1 / L_s
///   ProxSVRG        theta / L_s
///   AccProxSVRG     1 / (2 L_s), momentum (1 - sqrt(mu eta)) / (1 + sqrt(mu eta))
/// `p` only enters the budget row of AccProxSVRG.
struct SolverSpec {
  SolverId id = SolverId::ProxGD;
  double theta = 0.1;          // ProxSVRG, in (0, 0.25)
  double p = 0.05;             // AccProxSVRG, in (0, 1)
  std::size_t minibatch = 50;  // stochastic solvers
  std::size_t epoch_length = 0;  // inner iterations per snapshot; 0 = ceil(n / minibatch)
  double step_scale = 1.0;     // eta_1 multiplier
  std::uint64_t seed = 1;

  SolverFamily family() const noexcept { return family_of(id); }
};

struct TracePoint {
  std::size_t iteration;
  double objective;  // smoothed objective of the stage
  double elapsed;
};

struct SolverRun {
  std::vector<double> x;
  std::size_t iterations = 0;
  std::vector<TracePoint> trace;
  double elapsed = 0.0;  // seconds, excluding checkpoint work
  bool stopped_early = false;
};

struct Progress {
  std::size_t iteration;
  std::span<const double> x;
  double elapsed;  // optimization time so far in this run
};

/// Called every `check_every` iterations and after the last one. Time spent
/// inside is fenced out of `elapsed`. Return false to stop the run.
using Monitor = std::function<bool(const Progress&)>;

struct RunControl {
  std::size_t check_every = 0;  // 0 disables checkpoints
  bool record_objective = false;
  Monitor monitor;
};

SolverRun run_prox_gd(const SmoothedProblem& sp, std::span<const double> x0, std::size_t T,
                      const SolverSpec& spec = {}, const RunControl& ctl = {});
SolverRun run_apg(const SmoothedProblem& sp, std::span<const double> x0, std::size_t T,
                  const SolverSpec& spec = {SolverId::APG}, const RunControl& ctl = {});
SolverRun run_prox_svrg(const SmoothedProblem& sp, std::span<const double> x0, std::size_t T,
                        const SolverSpec& spec = {SolverId::ProxSVRG},
                        const RunControl& ctl = {});
SolverRun run_acc_prox_svrg(const SmoothedProblem& sp, std::span<const double> x0,
                            std::size_t T, const SolverSpec& spec = {SolverId::AccProxSVRG},
                            const RunControl& ctl = {});

/// Dispatches on spec.id; SAGA and MISO are budget-only and rejected here.
SolverRun run_solver(const SmoothedProblem& sp, std::span<const double> x0, std::size_t T,
                     const SolverSpec& spec, const RunControl& ctl = {});

/// Variance-reduced estimate grad_B(x) - grad_B(snapshot) + full_grad.
void svrg_estimate(const SmoothedProblem& sp, std::span<const double> x,
                   std::span<const double> snapshot, std::span<const double> full_grad,
                   std::span<const std::size_t> batch, std::span<double> out);

// ---- Iteration budgets per solver ------------------------------------------------

/// T_s = a kappa^e phi(rho) + b phi(rho) + c, with e = 1 (non-accelerated) or 1/2.
struct BudgetRow {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  SolverFamily family = SolverFamily::NonAccelerated;
  std::function<double(double)> phi;

  double evaluate(double kappa, double rho) const;
};

/// Row for `spec.id`; `n` is the sample count (SAGA, MISO).
/// Throws InfeasibleBudget when theta / p lie outside their intervals.
BudgetRow budget_row(const SolverSpec& spec, std::size_t n = 0);

/// ceil(T_s) for the stage-1 condition number and target reduction factor.
/// Throws InfeasibleBudget when rho violates the row's constraint.
std::size_t required_t1(const SolverSpec& spec, double kappa, double rho, std::size_t n = 0);

}  // namespace cns
