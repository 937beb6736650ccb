#include "cns/bench.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>

#include "cns/errors.hpp"
#include "cns/kernels.hpp"
#include "cns/sampling.hpp"

namespace cns {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Task task_for(LossKind loss) {
  return loss == LossKind::Hinge ? Task::Classification : Task::Regression;
}

bool is_continuation(Method m) {
  return m == Method::CnsA || m == Method::CnsNA || m == Method::FixedGamma;
}

BaselineId baseline_for(Method m) {
  switch (m) {
    case Method::Fobos: return BaselineId::FOBOS;
    case Method::Rda: return BaselineId::RDA;
    default: return BaselineId::PolySGD;
  }
}

std::size_t count_nonzeros(std::span<const double> x) {
  return static_cast<std::size_t>(std::count_if(x.begin(), x.end(), [](double v) { return v != 0.0; }));
}

class TraceRecorder {
 public:
  TraceRecorder(const CompositeProblem& problem, const SparseDataset* test, std::size_t cadence)
      : problem_(problem), test_(test), cadence_(cadence) {}

  void record(double wall, std::size_t iters, int stage, std::span<const double> x) {
    rows_.push_back({wall, iters, stage, objective_original(problem_, x),
                     test_ ? test_metric(*test_, x) : kNaN, count_nonzeros(x), RowStatus::Ok});
  }

  bool due(std::size_t iters) const { return iters % cadence_ == 0; }

  std::size_t last_iterations() const { return rows_.back().cumulative_iterations; }

  void diverged(int stage) {
    const auto& last = rows_.back();
    rows_.push_back({last.wall_time_s, last.cumulative_iterations, stage, kNaN, kNaN, 0,
                     RowStatus::Diverged});
  }

  std::vector<TraceRow> take() { return std::move(rows_); }

 private:
  const CompositeProblem& problem_;
  const SparseDataset* test_;
  std::size_t cadence_;
  std::vector<TraceRow> rows_;
};

bool within_budget(const RunConfig& cfg, std::size_t iters, double elapsed) {
  if (cfg.iterations > 0 && iters >= cfg.iterations) return false;
  if (cfg.time_budget > 0.0 && elapsed >= cfg.time_budget) return false;
  return true;
}

ContinuationConfig continuation_for(const RunConfig& cfg) {
  ContinuationConfig c = cfg.continuation;
  c.solver.seed = cfg.seed;
  switch (cfg.method) {
    case Method::CnsA:
      c.solver.id = SolverId::AccProxSVRG;
      c.option = BudgetOption::II;
      break;
    case Method::CnsNA:
      c.solver.id = SolverId::ProxSVRG;
      c.option = BudgetOption::I;
      break;
    case Method::FixedGamma:
      detail::require(cfg.iterations > 0, "fixed-gamma needs an iteration budget");
      c.fixed_smoothing = true;
      c.stages = 1;
      c.t1 = cfg.iterations;
      c.option = c.solver.family() == SolverFamily::Accelerated ? BudgetOption::II
                                                                 : BudgetOption::I;
      break;
    default: break;
  }
  return c;
}

std::vector<TraceRow> run_continuation_method(const RunConfig& cfg,
                                              const CompositeProblem& problem,
                                              const SparseDataset* test) {
  TraceRecorder rec(problem, test, cfg.cadence);
  ContinuationConfig c = continuation_for(cfg);
  const auto x0 = c.x0.empty() ? std::vector<double>(problem.dim(), 0.0) : c.x0;
  rec.record(0.0, 0, 0, x0);

  std::size_t last_stage = 1;
  double last_elapsed = 0.0;
  c.check_every = 1;
  c.monitor = [&](const StageProgress& p) {
    last_stage = p.stage;
    last_elapsed = p.elapsed;
    if (rec.due(p.cumulative_iterations))
      rec.record(p.elapsed, p.cumulative_iterations, static_cast<int>(p.stage), p.x);
    return within_budget(cfg, p.cumulative_iterations, p.elapsed);
  };

  ContinuationResult res;
  try {
    // A strongly convex problem with lambda1 = 0 goes to the strongly convex driver.
    res = run_continuation(problem, c);
  } catch (const DivergenceError& e) {
    rec.diverged(static_cast<int>(e.stage() > 0 ? e.stage() : last_stage));
    return rec.take();
  }
  if (rec.last_iterations() != res.total_iterations) {
    double wall = 0.0;
    for (const auto& s : res.stages) wall += s.wall_time;
    rec.record(std::max(wall, last_elapsed), res.total_iterations,
               static_cast<int>(res.stages.empty() ? 0 : res.stages.back().stage), res.x);
  }
  return rec.take();
}

std::vector<TraceRow> run_baseline_method(const RunConfig& cfg, const CompositeProblem& problem,
                                          const SparseDataset* test) {
  detail::require(cfg.iterations > 0, "baselines need an iteration budget");
  TraceRecorder rec(problem, test, cfg.cadence);
  BaselineSpec spec = cfg.baseline;
  spec.id = baseline_for(cfg.method);
  spec.seed = cfg.seed;
  const std::vector<double> x0(problem.dim(), 0.0);
  rec.record(0.0, 0, -1, x0);

  RunControl ctl;
  ctl.check_every = 1;
  ctl.monitor = [&](const Progress& p) {
    if (rec.due(p.iteration)) rec.record(p.elapsed, p.iteration, -1, p.x);
    return within_budget(cfg, p.iteration, p.elapsed);
  };
  SolverRun run;
  try {
    run = run_baseline(problem, spec, cfg.iterations, x0, ctl);
  } catch (const DivergenceError&) {
    rec.diverged(-1);
    return rec.take();
  }
  if (rec.last_iterations() != run.iterations) rec.record(run.elapsed, run.iterations, -1, run.x);
  return rec.take();
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_real(std::string_view s, std::size_t line) {
  const std::string tmp(s);
  char* end = nullptr;
  const double v = std::strtod(tmp.c_str(), &end);
  if (tmp.empty() || end != tmp.c_str() + tmp.size()) throw ParseError("bad number '" + tmp + "'", line);
  return v;
}

template <class Int>
Int parse_int(std::string_view s, std::size_t line) {
  Int v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw ParseError("bad integer '" + std::string(s) + "'", line);
  return v;
}

constexpr const char* kHeader =
    "wall_time_s,cumulative_iterations,stage,objective_original,test_metric,nnz,status";

}  // namespace

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::CnsA: return "cns-a";
    case Method::CnsNA: return "cns-na";
    case Method::Fobos: return "fobos";
    case Method::Rda: return "rda";
    case Method::PolySgd: return "poly-sgd";
    case Method::FixedGamma: return "fixed-gamma";
  }
  return "?";
}

Method method_from_string(std::string_view name) {
  for (auto m : {Method::CnsA, Method::CnsNA, Method::Fobos, Method::Rda, Method::PolySgd,
                 Method::FixedGamma})
    if (to_string(m) == name) return m;
  throw ContractViolation("unknown method '" + std::string(name) + "'");
}

Regularizer make_regularizer(double nu1, double nu2) {
  return nu2 > 0.0 ? Regularizer::elastic_net(nu1, nu2) : Regularizer::l1(nu1);
}

ExperimentData load_experiment_data(const RunConfig& cfg) {
  ExperimentData out;
  const Task task = task_for(cfg.loss);
  if (cfg.train_path.empty()) {
    SyntheticSpec spec = cfg.synthetic;
    spec.task = task;
    auto inst = make_synthetic(spec);
    out.train = std::make_shared<const SparseDataset>(std::move(inst.train));
    if (inst.test) out.test = std::make_shared<const SparseDataset>(std::move(*inst.test));
    return out;
  }
  LibsvmOptions opts;
  opts.task = task;
  auto train = load_libsvm(cfg.train_path, opts).data;
  if (!cfg.test_path.empty()) {
    opts.dim = train.dim();
    auto test = load_libsvm(cfg.test_path, LibsvmOptions{task, 0, true}).data;
    if (test.dim() > train.dim()) {
      opts.dim = test.dim();
      train = load_libsvm(cfg.train_path, opts).data;
    } else if (test.dim() < train.dim()) {
      test = load_libsvm(cfg.test_path, opts).data;
    }
    out.test = std::make_shared<const SparseDataset>(std::move(test));
  }
  out.train = std::make_shared<const SparseDataset>(std::move(train));
  return out;
}

double test_metric(const SparseDataset& test, std::span<const double> x) {
  detail::require(x.size() == test.dim(), "iterate dimension does not match the test split");
  if (test.n() == 0) return kNaN;
  std::vector<double> scores(test.n());
  kernels::scores(test, x, scores);
  std::vector<double> per(test.n());
  for (std::size_t i = 0; i < test.n(); ++i) {
    const double y = test.label(i);
    if (test.task() == Task::Classification)
      per[i] = (scores[i] > 0.0 ? 1.0 : -1.0) != y ? 1.0 : 0.0;
    else
      per[i] = std::abs(y - scores[i]);
  }
  return kernels::ordered_sum(per) / static_cast<double>(test.n());
}

std::vector<TraceRow> run_experiment(const RunConfig& cfg) {
  return run_experiment(cfg, load_experiment_data(cfg));
}

std::vector<TraceRow> run_experiment(const RunConfig& cfg, const ExperimentData& data) {
  detail::require(cfg.cadence >= 1, "cadence must be at least 1");
  detail::require(data.train != nullptr, "no training data");
  const CompositeProblem problem(data.train, cfg.loss, make_regularizer(cfg.nu1, cfg.nu2));
  const SparseDataset* test = data.test.get();
  auto rows = is_continuation(cfg.method) ? run_continuation_method(cfg, problem, test)
                                          : run_baseline_method(cfg, problem, test);
  if (!cfg.output.empty()) save_trace_csv(cfg.output, rows);
  return rows;
}

void write_trace_csv(std::ostream& out, std::span<const TraceRow> rows) {
  out << kHeader << '\n';
  for (const auto& r : rows) {
    out << format_double(r.wall_time_s) << ',' << r.cumulative_iterations << ',' << r.stage << ','
        << format_double(r.objective_original) << ',' << format_double(r.test_metric) << ','
        << r.nnz << ',' << (r.status == RowStatus::Ok ? "ok" : "diverged") << '\n';
  }
}

void save_trace_csv(const std::string& path, std::span<const TraceRow> rows) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  write_trace_csv(f, rows);
  if (!f) throw std::runtime_error("failed writing " + path);
}

std::vector<TraceRow> read_trace_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line) || line != kHeader) throw ParseError("missing trace header", lineno);
  std::vector<TraceRow> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 7) throw ParseError("expected 7 fields", lineno);
    TraceRow r;
    r.wall_time_s = parse_real(f[0], lineno);
    r.cumulative_iterations = parse_int<std::size_t>(f[1], lineno);
    r.stage = parse_int<int>(f[2], lineno);
    r.objective_original = parse_real(f[3], lineno);
    r.test_metric = parse_real(f[4], lineno);
    r.nnz = parse_int<std::size_t>(f[5], lineno);
    if (f[6] == "ok")
      r.status = RowStatus::Ok;
    else if (f[6] == "diverged")
      r.status = RowStatus::Diverged;
    else
      throw ParseError("unknown status '" + std::string(f[6]) + "'", lineno);
    rows.push_back(r);
  }
  return rows;
}

std::vector<TraceRow> load_trace_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  return read_trace_csv(f);
}

std::optional<double> trailing_slope(std::span<const TraceRow> rows, double reference) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : rows) {
    const double gap = r.objective_original - reference;
    if (r.status == RowStatus::Ok && r.cumulative_iterations > 0 && gap > 0.0)
      pts.emplace_back(std::log(static_cast<double>(r.cumulative_iterations)), std::log(gap));
  }
  pts.erase(pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(pts.size() / 2));
  if (pts.size() < 2) return std::nullopt;
  double mx = 0.0, my = 0.0;
  for (auto [a, b] : pts) {
    mx += a;
    my += b;
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxx = 0.0, sxy = 0.0;
  for (auto [a, b] : pts) {
    sxx += (a - mx) * (a - mx);
    sxy += (a - mx) * (b - my);
  }
  if (sxx <= 0.0) return std::nullopt;
  return sxy / sxx;
}

std::vector<CompareLine> compare_report(std::span<const NamedTrace> traces, double reference,
                                        double target_gap) {
  detail::require(traces.size() >= 2, "comparison needs at least two traces");
  std::vector<CompareLine> out;
  for (const auto& t : traces) {
    detail::require(!t.rows.empty(), "empty trace");
    CompareLine line{t.name, std::nullopt, std::nullopt, trailing_slope(t.rows, reference), kNaN};
    for (const auto& r : t.rows) {
      if (r.status != RowStatus::Ok) continue;
      const double gap = r.objective_original - reference;
      line.final_gap = gap;
      if (!line.iterations_to_target && gap <= target_gap) {
        line.iterations_to_target = r.cumulative_iterations;
        line.time_to_target = r.wall_time_s;
      }
    }
    out.push_back(std::move(line));
  }
  return out;
}

std::string format_report(std::span<const CompareLine> lines, double target_gap) {
  std::ostringstream os;
  os << "target gap " << format_double(target_gap) << '\n';
  for (const auto& l : lines) {
    os << l.name << ": ";
    if (l.iterations_to_target)
      os << "reached at " << *l.iterations_to_target << " iterations, "
         << format_double(*l.time_to_target) << " s";
    else
      os << "unreached";
    os << "; final gap " << format_double(l.final_gap) << "; slope "
       << (l.slope ? format_double(*l.slope) : std::string("n/a")) << '\n';
  }
  return os.str();
}

RunConfig with_step(const RunConfig& cfg, double value) {
  RunConfig c = cfg;
  switch (cfg.method) {
    case Method::CnsA:
    case Method::CnsNA:
    case Method::FixedGamma: c.continuation.solver.step_scale = value; break;
    case Method::Rda: c.baseline.rda_scale = value; break;
    case Method::Fobos:
    case Method::PolySgd: c.baseline.eta0 = value; break;
  }
  return c;
}

double tune_stepsize(const RunConfig& cfg, std::span<const double> grid, const TuneOptions& opts) {
  return tune_stepsize(cfg, load_experiment_data(cfg), grid, opts);
}

double tune_stepsize(const RunConfig& cfg, const ExperimentData& data,
                     std::span<const double> grid, const TuneOptions& opts) {
  detail::require(!grid.empty(), "step-size grid is empty");
  detail::require(opts.subset_fraction > 0.0 && opts.subset_fraction <= 1.0,
                  "subset fraction must lie in (0, 1]");
  detail::require(opts.epochs >= 1, "tuning needs at least one epoch");
  const auto& full = *data.train;
  const auto m = static_cast<std::size_t>(
      std::ceil(opts.subset_fraction * static_cast<double>(full.n())));
  std::vector<std::size_t> rows(full.n());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  Rng rng(derive_seed(cfg.seed, 0x7475));
  std::shuffle(rows.begin(), rows.end(), rng);
  rows.resize(std::max<std::size_t>(m, 1));
  std::sort(rows.begin(), rows.end());
  ExperimentData sub{std::make_shared<const SparseDataset>(full.subset(rows)), nullptr};

  const std::size_t b = is_continuation(cfg.method) ? cfg.continuation.solver.minibatch
                                                    : cfg.baseline.minibatch;
  const std::size_t mb = std::min(b, sub.train->n());
  const std::size_t epoch = (sub.train->n() + mb - 1) / mb;

  RunConfig base = cfg;
  base.output.clear();
  base.time_budget = 0.0;
  base.iterations = opts.epochs * epoch;
  base.cadence = base.iterations;
  base.continuation.solver.minibatch = mb;
  base.baseline.minibatch = mb;
  base.continuation.monitor = nullptr;
  base.continuation.oracle_budget = 0;
  if (cfg.method == Method::CnsA || cfg.method == Method::CnsNA) {
    base.continuation.t1 = epoch;
    base.continuation.stages = std::max<std::size_t>(base.continuation.stages, 64);
  }

  std::optional<double> best;
  double best_obj = std::numeric_limits<double>::infinity();
  for (double cand : grid) {
    const auto rows_out = run_experiment(with_step(base, cand), sub);
    const auto& last = rows_out.back();
    if (last.status != RowStatus::Ok || !std::isfinite(last.objective_original)) continue;
    if (last.objective_original < best_obj) {
      best_obj = last.objective_original;
      best = cand;
    }
  }
  if (!best) throw TuningError("every step-size candidate diverged");
  return *best;
}

}  // namespace cns
