#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "cns/problem.hpp"
#include "cns/solvers.hpp"

namespace cns {

/// Option I grows the stage budget for non-accelerated solvers, Option II for
/// accelerated ones.
enum class BudgetOption { I, II };

enum class Algorithm { StronglyConvex, GeneralConvex };

struct StageProgress {
  std::size_t stage;
  std::size_t cumulative_iterations;
  std::span<const double> x;
  double elapsed;  // optimization seconds since the driver started
};

/// Return false to halt the whole continuation run.
using StageMonitor = std::function<bool(const StageProgress&)>;

struct ContinuationConfig {
  double gamma1 = 0.01;
  double tau = 2.0;
  std::optional<std::size_t> t1;  // nullopt: estimate with auto_t1
  double lambda1 = 0.0;           // > 0 only for the general convex driver
  std::size_t stages = 1;
  double gamma_min = 0.0;         // stop before a stage whose gamma falls below this
  SolverSpec solver{};
  BudgetOption option = BudgetOption::I;
  std::vector<double> x0;         // empty: zero vector
  /// Hold gamma, lambda and T at their stage-1 values (no continuation).
  bool fixed_smoothing = false;
  std::size_t auto_t1_cap = std::size_t{1} << 22;
  /// > 0: compute measured_rho per stage with an APG oracle of this many
  /// iterations. Diagnostic only; expensive.
  std::size_t oracle_budget = 0;
  std::size_t check_every = 0;
  StageMonitor monitor;
};

struct StageReport {
  std::size_t stage;
  double gamma;
  double lambda;
  std::size_t iterations;
  double smoothed_before;
  double smoothed_after;
  double original_after;
  std::optional<double> measured_rho;
  double wall_time;
};

struct ContinuationResult {
  std::vector<double> x;
  std::vector<StageReport> stages;
  std::size_t total_iterations = 0;
  bool stopped_early = false;
};

struct StagePlan {
  std::size_t stage;
  double gamma;
  double lambda;
  std::size_t iterations;
};

/// Stage parameters for S stages starting from T1:
///   gamma_{s+1} = gamma_s / tau, lambda_{s+1} = lambda_s / tau,
///   T_s = ceil(T1 * tau^{g (s-1)}) with g = 1 / 0.5 (strongly convex, option I / II)
///   or 2 / 1 (general convex). Fractional budgets round up.
std::vector<StagePlan> stage_schedule(Algorithm algo, const ContinuationConfig& cfg,
                                      std::size_t t1);

/// Strongly convex driver. Requires problem.mu() > 0 and lambda1 == 0.
ContinuationResult cns_strongly_convex(const CompositeProblem& problem,
                                       const ContinuationConfig& cfg);

/// General convex driver. Requires lambda1 > 0.
ContinuationResult cns_general_convex(const CompositeProblem& problem,
                                      const ContinuationConfig& cfg);

/// Picks the driver from the problem: strongly convex when mu > 0 and lambda1 == 0.
ContinuationResult run_continuation(const CompositeProblem& problem,
                                    const ContinuationConfig& cfg);

/// Smallest T = ceil(n / b) * 2^k with stage-1 objective at most its starting
/// value divided by tau^2 (or the initial probe when x0 is already stationary).
/// Throws BudgetEstimationError past cfg.auto_t1_cap.
std::size_t auto_t1(const CompositeProblem& problem, const ContinuationConfig& cfg);

/// (obj(x_after) - obj*) / (obj(x_before) - obj*), with obj* from an APG run of
/// `oracle_budget` iterations warm-started at x_after. nullopt when the
/// denominator is at most 1e-14 (stage already converged).
std::optional<double> measure_stage_reduction(const CompositeProblem& problem,
                                              const SmoothedProblem& sp,
                                              std::span<const double> x_before,
                                              std::span<const double> x_after,
                                              std::size_t oracle_budget);

struct ReferenceSolution {
  std::vector<double> x;
  double objective;  // nonsmooth P(x)
};

/// High-accuracy reference for P(x*): warm-started APG runs of `iterations`
/// steps each over gamma1, gamma1/2, ... (`stages` values, lambda = 0).
ReferenceSolution reference_solution(const CompositeProblem& problem, std::size_t stages = 22,
                                     std::size_t iterations = 3000, double gamma1 = 1e-2);

}  // namespace cns
