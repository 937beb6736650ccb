#include "cns/baselines.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "cns/errors.hpp"
#include "cns/kernels.hpp"
#include "cns/prox.hpp"
#include "cns/sampling.hpp"
#include "cns/smoothing.hpp"

namespace cns {

std::string_view to_string(BaselineId id) noexcept {
  switch (id) {
    case BaselineId::FOBOS: return "fobos";
    case BaselineId::RDA: return "rda";
    case BaselineId::PolySGD: return "poly-sgd";
  }
  return "?";
}

void loss_subgradient(const CompositeProblem& problem, std::span<const double> x,
                      std::span<const std::size_t> batch, std::span<double> out) {
  const auto& data = problem.data();
  const auto loss = problem.loss();
  std::vector<double> coef(batch.size());
  for (std::size_t k = 0; k < batch.size(); ++k) {
    const auto i = batch[k];
    const double y = data.label(i);
    const double s = nonsmooth_subgradient(loss, loss_argument(loss, y, data.row(i).dot(x)));
    coef[k] = (loss == LossKind::Hinge ? s * y : -s) / static_cast<double>(batch.size());
  }
  std::fill(out.begin(), out.end(), 0.0);
  kernels::batch_transpose_accumulate(data, batch, coef, out);
}

double baseline_step(const CompositeProblem& problem, const BaselineSpec& spec, std::size_t t) {
  const double tt = static_cast<double>(t);
  if (spec.strongly_convex) {
    detail::require(problem.mu() > 0.0, "strongly convex step schedule needs mu > 0");
    return spec.eta0 / (problem.mu() * tt);
  }
  return spec.eta0 / std::sqrt(tt);
}

void rda_minimizer(std::span<const double> g_bar, const Regularizer& reg, double beta_over_t,
                   std::span<double> out) {
  const double denom = reg.nu2() + beta_over_t;
  detail::require(denom > 0.0, "RDA needs nu2 + beta_t / t > 0");
  for (std::size_t j = 0; j < g_bar.size(); ++j)
    out[j] = -soft_threshold(g_bar[j], reg.nu1()) / denom;
}

double poly_average_weight(std::size_t t, double exponent) noexcept {
  return (exponent + 1.0) / (static_cast<double>(t) + exponent);
}

namespace {

using SteadyClock = std::chrono::steady_clock;

void check_spec(const CompositeProblem& problem, const BaselineSpec& spec, std::size_t T,
                std::span<const double> x0) {
  detail::require(T >= 1, "iteration budget must be at least 1");
  detail::require(spec.eta0 > 0.0, "eta0 must be positive");
  detail::require(spec.averaging_exponent >= 1.0, "averaging exponent must be at least 1");
  detail::require(spec.minibatch >= 1 && spec.minibatch <= problem.n(),
                  "mini-batch size must lie in [1, n]");
  detail::require(x0.empty() || x0.size() == problem.dim(), "initial iterate has the wrong dimension");
  detail::require(!spec.strongly_convex || problem.mu() > 0.0,
                  "strongly convex schedules need an elastic-net regularizer");
}

/// Timing, divergence detection and checkpoints for the baseline loops.
class Loop {
 public:
  Loop(std::size_t T, const RunControl& ctl, SolverRun& run) : T_(T), ctl_(ctl), run_(run) {}

  bool step_done(std::size_t t, std::span<const double> x) {
    for (double v : x)
      if (!std::isfinite(v))
        throw DivergenceError("non-finite iterate at iteration " + std::to_string(t));
    run_.iterations = t;
    const bool due = (ctl_.check_every > 0 && t % ctl_.check_every == 0) || t == T_;
    if (!due || !ctl_.monitor) return true;
    lap();
    const bool go = ctl_.monitor(Progress{t, x, total_});
    last_ = SteadyClock::now();
    if (!go) run_.stopped_early = true;
    return go;
  }

  void finish(std::vector<double> x) {
    lap();
    run_.elapsed = total_;
    run_.x = std::move(x);
  }

 private:
  void lap() {
    const auto now = SteadyClock::now();
    total_ += std::chrono::duration<double>(now - last_).count();
    last_ = now;
  }
  std::size_t T_;
  const RunControl& ctl_;
  SolverRun& run_;
  SteadyClock::time_point last_ = SteadyClock::now();
  double total_ = 0.0;
};

std::vector<double> start_point(const CompositeProblem& p, std::span<const double> x0) {
  return x0.empty() ? std::vector<double>(p.dim(), 0.0)
                    : std::vector<double>(x0.begin(), x0.end());
}

}  // namespace

SolverRun run_fobos(const CompositeProblem& problem, const BaselineSpec& spec, std::size_t T,
                    std::span<const double> x0, const RunControl& ctl) {
  check_spec(problem, spec, T, x0);
  Rng rng(spec.seed);
  SolverRun run;
  Loop loop(T, ctl, run);
  auto x = start_point(problem, x0);
  std::vector<double> g(x.size());
  std::vector<std::size_t> batch(spec.minibatch);
  for (std::size_t t = 1; t <= T; ++t) {
    sample_minibatch_into(problem.n(), batch, rng);
    loss_subgradient(problem, x, batch, g);
    const double eta = baseline_step(problem, spec, t);
    for (std::size_t j = 0; j < x.size(); ++j) x[j] -= eta * g[j];
    prox_regularizer_inplace(x, eta, problem.reg());
    if (!loop.step_done(t, x)) break;
  }
  loop.finish(std::move(x));
  return run;
}

SolverRun run_rda(const CompositeProblem& problem, const BaselineSpec& spec, std::size_t T,
                  std::span<const double> x0, const RunControl& ctl) {
  check_spec(problem, spec, T, x0);
  detail::require(spec.rda_scale > 0.0, "RDA scale must be positive");
  Rng rng(spec.seed);
  SolverRun run;
  Loop loop(T, ctl, run);
  auto x = start_point(problem, x0);
  std::vector<double> g(x.size()), g_bar(x.size(), 0.0);
  std::vector<std::size_t> batch(spec.minibatch);
  for (std::size_t t = 1; t <= T; ++t) {
    sample_minibatch_into(problem.n(), batch, rng);
    loss_subgradient(problem, x, batch, g);
    const double tt = static_cast<double>(t);
    for (std::size_t j = 0; j < x.size(); ++j) g_bar[j] += (g[j] - g_bar[j]) / tt;
    const double beta = spec.strongly_convex ? spec.rda_scale : spec.rda_scale * std::sqrt(tt);
    rda_minimizer(g_bar, problem.reg(), beta / tt, x);
    if (!loop.step_done(t, x)) break;
  }
  loop.finish(std::move(x));
  return run;
}

SolverRun run_poly_sgd(const CompositeProblem& problem, const BaselineSpec& spec, std::size_t T,
                       std::span<const double> x0, const RunControl& ctl) {
  check_spec(problem, spec, T, x0);
  Rng rng(spec.seed);
  SolverRun run;
  Loop loop(T, ctl, run);
  auto x = start_point(problem, x0);
  auto avg = x;
  std::vector<double> g(x.size());
  std::vector<std::size_t> batch(spec.minibatch);
  const auto& reg = problem.reg();
  for (std::size_t t = 1; t <= T; ++t) {
    sample_minibatch_into(problem.n(), batch, rng);
    loss_subgradient(problem, x, batch, g);
    const double eta = baseline_step(problem, spec, t);
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double sign = x[j] > 0.0 ? 1.0 : (x[j] < 0.0 ? -1.0 : 0.0);
      x[j] -= eta * (g[j] + reg.nu1() * sign + reg.nu2() * x[j]);
    }
    const double w = poly_average_weight(t, spec.averaging_exponent);
    for (std::size_t j = 0; j < x.size(); ++j) avg[j] = (1.0 - w) * avg[j] + w * x[j];
    if (!loop.step_done(t, avg)) break;
  }
  loop.finish(std::move(avg));
  return run;
}

SolverRun run_baseline(const CompositeProblem& problem, const BaselineSpec& spec, std::size_t T,
                       std::span<const double> x0, const RunControl& ctl) {
  switch (spec.id) {
    case BaselineId::FOBOS: return run_fobos(problem, spec, T, x0, ctl);
    case BaselineId::RDA: return run_rda(problem, spec, T, x0, ctl);
    case BaselineId::PolySGD: return run_poly_sgd(problem, spec, T, x0, ctl);
  }
  throw ContractViolation("unknown baseline");
}

}  // namespace cns
