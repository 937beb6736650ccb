#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cns/baselines.hpp"
#include "cns/continuation.hpp"
#include "cns/data_io.hpp"
#include "cns/problem.hpp"

namespace cns {

enum class Method { CnsA, CnsNA, Fobos, Rda, PolySgd, FixedGamma };

std::string_view to_string(Method m) noexcept;
Method method_from_string(std::string_view name);

/// One experiment. With an empty train_path the data come from `synthetic`.
///
/// cns-a forces Acc-Prox-SVRG with option II, cns-na Prox-SVRG with option I;
/// the remaining continuation fields (gamma1, tau, t1, lambda1, stages, step
/// scale, ...) are taken as given. fixed-gamma runs continuation.solver for a
/// single stage of `iterations` steps at gamma1 (and lambda1).
struct RunConfig {
  std::string train_path;
  std::string test_path;
  SyntheticSpec synthetic{};
  LossKind loss = LossKind::Hinge;
  double nu1 = 0.0;
  double nu2 = 0.0;
  Method method = Method::CnsA;
  ContinuationConfig continuation{};
  BaselineSpec baseline{};
  /// Total inner-iteration budget. Required for baselines and fixed-gamma;
  /// 0 lets a continuation method run its whole schedule.
  std::size_t iterations = 0;
  std::size_t cadence = 100;
  double time_budget = 0.0;  // optimization seconds, 0 = unlimited
  std::string output;        // CSV path, empty = do not write
  std::uint64_t seed = 1;    // overrides the solver and baseline seeds
};

enum class RowStatus { Ok, Diverged };

struct TraceRow {
  double wall_time_s = 0.0;
  std::size_t cumulative_iterations = 0;
  int stage = 0;  // continuation stage, 0 for the initial row, -1 for baselines
  double objective_original = 0.0;
  double test_metric = 0.0;  // NaN without a test split
  std::size_t nnz = 0;
  RowStatus status = RowStatus::Ok;

  bool operator==(const TraceRow&) const = default;
};

struct ExperimentData {
  std::shared_ptr<const SparseDataset> train;
  std::shared_ptr<const SparseDataset> test;  // may be null
};

/// Loads (or generates) train and test splits with matching dimensions.
ExperimentData load_experiment_data(const RunConfig& cfg);

Regularizer make_regularizer(double nu1, double nu2);

/// Misclassification rate of sign(z.x) (score 0 counts as -1) or mean |y - z.x|.
double test_metric(const SparseDataset& test, std::span<const double> x);

/// Runs the configured method and snapshots every `cadence` cumulative
/// iterations, plus an initial and a final row. Wall time counts optimization
/// only. A diverging run ends with a Diverged row. Writes cfg.output if set.
std::vector<TraceRow> run_experiment(const RunConfig& cfg);
std::vector<TraceRow> run_experiment(const RunConfig& cfg, const ExperimentData& data);

/// Header plus one line per row; reals use 17 significant digits.
void write_trace_csv(std::ostream& out, std::span<const TraceRow> rows);
void save_trace_csv(const std::string& path, std::span<const TraceRow> rows);
std::vector<TraceRow> read_trace_csv(std::istream& in);
std::vector<TraceRow> load_trace_csv(const std::string& path);

struct NamedTrace {
  std::string name;
  std::vector<TraceRow> rows;
};

struct CompareLine {
  std::string name;
  std::optional<std::size_t> iterations_to_target;
  std::optional<double> time_to_target;
  std::optional<double> slope;  // log gap vs log iterations, trailing half
  double final_gap = 0.0;
};

/// gap = objective_original - reference. Needs at least two traces.
std::vector<CompareLine> compare_report(std::span<const NamedTrace> traces, double reference,
                                        double target_gap);
std::string format_report(std::span<const CompareLine> lines, double target_gap);

/// Least-squares slope of log(gap) against log(cumulative iterations) over the
/// trailing half of the rows with positive iterations and gap. nullopt with
/// fewer than two usable points.
std::optional<double> trailing_slope(std::span<const TraceRow> rows, double reference);

struct TuneOptions {
  double subset_fraction = 0.2;
  std::size_t epochs = 5;
};

/// Tries each candidate on a seeded random subset for a few epochs and returns
/// the one with the lowest final training objective. The candidate sets the
/// continuation step scale for cns-a, cns-na and fixed-gamma, eta0 for FOBOS
/// and Poly-SGD, and rda_scale for RDA. Throws TuningError when every
/// candidate diverges.
double tune_stepsize(const RunConfig& cfg, std::span<const double> grid,
                     const TuneOptions& opts = {});
double tune_stepsize(const RunConfig& cfg, const ExperimentData& data,
                     std::span<const double> grid, const TuneOptions& opts = {});

/// Copy of cfg with the tuned parameter set to `value`.
RunConfig with_step(const RunConfig& cfg, double value);

}  // namespace cns
