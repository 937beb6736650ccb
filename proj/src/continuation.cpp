#include "cns/continuation.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "cns/errors.hpp"
#include "cns/prox.hpp"
#include "cns/sampling.hpp"
#include "cns/smoothing.hpp"

namespace cns {
namespace {

std::size_t ceil_budget(double v) {
  // pow() noise must not push an exact integer budget up by one
  const double r = std::round(v);
  if (std::abs(v - r) <= 1e-9 * std::max(1.0, v)) return static_cast<std::size_t>(r);
  return static_cast<std::size_t>(std::ceil(v));
}

double growth_exponent(Algorithm algo, BudgetOption opt) {
  if (algo == Algorithm::StronglyConvex) return opt == BudgetOption::I ? 1.0 : 0.5;
  return opt == BudgetOption::I ? 2.0 : 1.0;
}

void validate(Algorithm algo, const CompositeProblem& problem, const ContinuationConfig& cfg) {
  detail::require(cfg.gamma1 > 0.0, "gamma1 must be positive");
  detail::require(cfg.tau > 1.0, "tau must exceed 1");
  detail::require(cfg.stages >= 1, "at least one stage is required");
  detail::require(!cfg.t1 || *cfg.t1 >= 1, "T1 must be at least 1");
  detail::require(is_runnable(cfg.solver.id), "inner solver is budget-only");
  const bool accel = cfg.solver.family() == SolverFamily::Accelerated;
  detail::require(accel == (cfg.option == BudgetOption::II),
                  "option II pairs with accelerated solvers, option I with non-accelerated ones");
  detail::require(cfg.x0.empty() || cfg.x0.size() == problem.dim(),
                  "initial iterate has the wrong dimension");
  if (algo == Algorithm::StronglyConvex) {
    if (!(problem.mu() > 0.0))
      throw WrongDriverError("the strongly convex driver needs mu > 0 (elastic-net regularizer)");
    if (cfg.lambda1 != 0.0)
      throw WrongDriverError("the strongly convex driver takes lambda1 = 0");
  } else if (!(cfg.lambda1 > 0.0)) {
    throw WrongDriverError("the general convex driver needs lambda1 > 0");
  }
}

std::vector<double> initial_point(const CompositeProblem& problem, const ContinuationConfig& cfg) {
  return cfg.x0.empty() ? std::vector<double>(problem.dim(), 0.0) : cfg.x0;
}

SolverSpec stage_solver(const SolverSpec& base, std::size_t stage) {
  SolverSpec s = base;
  if (stage > 1) s.seed = derive_seed(base.seed, stage);
  return s;
}

/// x0 is a fixed point of one full prox-gradient step.
bool is_stationary(const SmoothedProblem& sp, std::span<const double> x0) {
  const double eta = 1.0 / lipschitz_constant(sp);
  std::vector<double> g(x0.size());
  loss_gradient(sp, x0, g);
  std::vector<double> x1(x0.begin(), x0.end());
  for (std::size_t j = 0; j < x1.size(); ++j) x1[j] -= eta * g[j];
  prox_regularizer_inplace(x1, eta, sp.base().reg(), sp.lambda());
  double diff = 0.0, scale = 1.0;
  for (std::size_t j = 0; j < x1.size(); ++j) {
    diff = std::max(diff, std::abs(x1[j] - x0[j]));
    scale = std::max(scale, std::abs(x0[j]));
  }
  return diff <= 1e-12 * scale;
}

ContinuationResult drive(Algorithm algo, const CompositeProblem& problem,
                         const ContinuationConfig& cfg) {
  validate(algo, problem, cfg);
  const std::size_t t1 = cfg.t1 ? *cfg.t1 : auto_t1(problem, cfg);
  const auto plan = stage_schedule(algo, cfg, t1);

  ContinuationResult result;
  result.x = initial_point(problem, cfg);
  double elapsed_total = 0.0;
  for (const auto& st : plan) {
    if (cfg.gamma_min > 0.0 && st.gamma < cfg.gamma_min) break;
    const SmoothedProblem sp(problem, st.gamma, st.lambda);
    const double before = objective_smoothed(sp, result.x);

    RunControl ctl;
    ctl.check_every = cfg.check_every;
    if (cfg.monitor) {
      const std::size_t offset = result.total_iterations;
      const double time_offset = elapsed_total;
      ctl.monitor = [&cfg, &st, offset, time_offset](const Progress& p) {
        return cfg.monitor(StageProgress{st.stage, offset + p.iteration, p.x,
                                         time_offset + p.elapsed});
      };
    }
    SolverRun run;
    try {
      run = run_solver(sp, result.x, st.iterations, stage_solver(cfg.solver, st.stage), ctl);
    } catch (const DivergenceError& e) {
      throw DivergenceError("stage " + std::to_string(st.stage) + ": " + e.what(), st.stage);
    }

    StageReport rep{st.stage, st.gamma, st.lambda, run.iterations, before, 0.0, 0.0,
                    std::nullopt, run.elapsed};
    rep.smoothed_after = objective_smoothed(sp, run.x);
    rep.original_after = objective_original(problem, run.x);
    if (cfg.oracle_budget > 0)
      rep.measured_rho =
          measure_stage_reduction(problem, sp, result.x, run.x, cfg.oracle_budget);
    result.stages.push_back(rep);
    result.total_iterations += run.iterations;
    elapsed_total += run.elapsed;
    result.x = std::move(run.x);
    if (run.stopped_early) {
      result.stopped_early = true;
      break;
    }
  }
  return result;
}

}  // namespace

std::vector<StagePlan> stage_schedule(Algorithm algo, const ContinuationConfig& cfg,
                                      std::size_t t1) {
  std::vector<StagePlan> plan;
  const double g = growth_exponent(algo, cfg.option);
  double gamma = cfg.gamma1;
  double lambda = algo == Algorithm::GeneralConvex ? cfg.lambda1 : 0.0;
  for (std::size_t s = 1; s <= cfg.stages; ++s) {
    std::size_t T = t1;
    if (!cfg.fixed_smoothing && s > 1)
      T = ceil_budget(static_cast<double>(t1) *
                      std::pow(cfg.tau, g * static_cast<double>(s - 1)));
    plan.push_back({s, gamma, lambda, T});
    if (!cfg.fixed_smoothing) {
      gamma /= cfg.tau;
      lambda /= cfg.tau;
    }
  }
  return plan;
}

ContinuationResult cns_strongly_convex(const CompositeProblem& problem,
                                       const ContinuationConfig& cfg) {
  return drive(Algorithm::StronglyConvex, problem, cfg);
}

ContinuationResult cns_general_convex(const CompositeProblem& problem,
                                      const ContinuationConfig& cfg) {
  return drive(Algorithm::GeneralConvex, problem, cfg);
}

ContinuationResult run_continuation(const CompositeProblem& problem,
                                    const ContinuationConfig& cfg) {
  if (problem.mu() > 0.0 && cfg.lambda1 == 0.0) return cns_strongly_convex(problem, cfg);
  return cns_general_convex(problem, cfg);
}

std::size_t auto_t1(const CompositeProblem& problem, const ContinuationConfig& cfg) {
  detail::require(cfg.tau > 1.0, "tau must exceed 1");
  detail::require(cfg.solver.minibatch >= 1, "mini-batch size must be positive");
  const SmoothedProblem sp(problem, cfg.gamma1, cfg.lambda1);
  const auto x0 = initial_point(problem, cfg);
  std::size_t T = (problem.n() + cfg.solver.minibatch - 1) / cfg.solver.minibatch;
  if (is_stationary(sp, x0)) return T;

  const double start = objective_smoothed(sp, x0);
  const double target = start / (cfg.tau * cfg.tau);
  double last = start;
  while (T <= cfg.auto_t1_cap) {
    const auto run = run_solver(sp, x0, T, stage_solver(cfg.solver, 1));
    last = objective_smoothed(sp, run.x);
    if (last <= target) return T;
    T *= 2;
  }
  std::ostringstream msg;
  msg << "auto_t1: no T <= " << cfg.auto_t1_cap << " reached the stage-1 target " << target
      << " (start " << start << ", best attempt " << last << ")";
  throw BudgetEstimationError(msg.str());
}

std::optional<double> measure_stage_reduction(const CompositeProblem& problem,
                                              const SmoothedProblem& sp,
                                              std::span<const double> x_before,
                                              std::span<const double> x_after,
                                              std::size_t oracle_budget) {
  detail::require(oracle_budget >= 1, "oracle budget must be at least 1");
  detail::require(&sp.base().data() == &problem.data(), "stage problem does not match");
  const auto oracle = run_apg(sp, x_after, oracle_budget, SolverSpec{SolverId::APG});
  const double before = objective_smoothed(sp, x_before);
  const double after = objective_smoothed(sp, x_after);
  const double best = std::min({objective_smoothed(sp, oracle.x), before, after});
  const double denom = before - best;
  if (denom <= 1e-14) return std::nullopt;
  return (after - best) / denom;
}

ReferenceSolution reference_solution(const CompositeProblem& problem, std::size_t stages,
                                     std::size_t iterations, double gamma1) {
  detail::require(stages >= 1 && iterations >= 1, "reference run needs a positive budget");
  detail::require(gamma1 > 0.0, "gamma1 must be positive");
  std::vector<double> x(problem.dim(), 0.0);
  double gamma = gamma1;
  for (std::size_t s = 0; s < stages; ++s, gamma /= 2.0) {
    const SmoothedProblem sp(problem, gamma);
    x = run_apg(sp, x, iterations).x;
  }
  const double obj = objective_original(problem, x);
  return {std::move(x), obj};
}

}  // namespace cns
