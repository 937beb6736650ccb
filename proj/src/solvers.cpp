#include "cns/solvers.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "cns/errors.hpp"
#include "cns/prox.hpp"
#include "cns/sampling.hpp"
#include "cns/smoothing.hpp"

namespace cns {

SolverFamily family_of(SolverId id) noexcept {
  return (id == SolverId::APG || id == SolverId::AccProxSVRG) ? SolverFamily::Accelerated
                                                               : SolverFamily::NonAccelerated;
}

bool is_runnable(SolverId id) noexcept { return id != SolverId::SAGA && id != SolverId::MISO; }

bool is_stochastic(SolverId id) noexcept {
  return id == SolverId::ProxSVRG || id == SolverId::AccProxSVRG || id == SolverId::SAGA ||
         id == SolverId::MISO;
}

std::string_view to_string(SolverId id) noexcept {
  switch (id) {
    case SolverId::ProxGD: return "prox-gd";
    case SolverId::APG: return "apg";
    case SolverId::ProxSVRG: return "prox-svrg";
    case SolverId::AccProxSVRG: return "acc-prox-svrg";
    case SolverId::SAGA: return "saga";
    case SolverId::MISO: return "miso";
  }
  return "?";
}

SolverId solver_from_string(std::string_view name) {
  for (auto id : {SolverId::ProxGD, SolverId::APG, SolverId::ProxSVRG, SolverId::AccProxSVRG,
                  SolverId::SAGA, SolverId::MISO})
    if (to_string(id) == name) return id;
  throw ContractViolation("unknown solver '" + std::string(name) + "'");
}

namespace {

using SteadyClock = std::chrono::steady_clock;

/// Accumulates optimization time; checkpoint work is excluded.
class FencedClock {
 public:
  FencedClock() : last_(SteadyClock::now()) {}
  double lap() {
    const auto now = SteadyClock::now();
    total_ += std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return total_;
  }
  void resume() { last_ = SteadyClock::now(); }
  double total() const { return total_; }

 private:
  SteadyClock::time_point last_;
  double total_ = 0.0;
};

/// Shared per-iteration bookkeeping: divergence check, checkpoints, timing.
class IterationDriver {
 public:
  IterationDriver(const SmoothedProblem& sp, std::size_t T, const RunControl& ctl,
                  SolverRun& run)
      : sp_(sp), T_(T), ctl_(ctl), run_(run) {}

  /// Returns false when the monitor asked to stop.
  bool after_iteration(std::size_t t, std::span<const double> x) {
    for (double v : x)
      if (!std::isfinite(v))
        throw DivergenceError("non-finite iterate at iteration " + std::to_string(t));
    run_.iterations = t;
    const bool due = (ctl_.check_every > 0 && t % ctl_.check_every == 0) || t == T_;
    if (!due || (!ctl_.record_objective && !ctl_.monitor)) return true;
    const double elapsed = clock_.lap();
    bool keep_going = true;
    if (ctl_.record_objective) {
      const double obj = objective_smoothed(sp_, x);
      if (!std::isfinite(obj))
        throw DivergenceError("non-finite objective at iteration " + std::to_string(t));
      run_.trace.push_back({t, obj, elapsed});
    }
    if (ctl_.monitor) keep_going = ctl_.monitor(Progress{t, x, elapsed});
    clock_.resume();
    if (!keep_going) run_.stopped_early = true;
    return keep_going;
  }

  void finish(std::vector<double> x) {
    run_.elapsed = clock_.lap();
    run_.x = std::move(x);
  }

 private:
  const SmoothedProblem& sp_;
  std::size_t T_;
  const RunControl& ctl_;
  SolverRun& run_;
  FencedClock clock_;
};

void check_common(const SmoothedProblem& sp, std::span<const double> x0, std::size_t T) {
  detail::require(T >= 1, "iteration budget must be at least 1");
  detail::require(x0.size() == sp.data().dim(), "initial iterate has the wrong dimension");
}

std::size_t epoch_length(const SmoothedProblem& sp, const SolverSpec& spec) {
  if (spec.epoch_length > 0) return spec.epoch_length;
  return (sp.data().n() + spec.minibatch - 1) / spec.minibatch;
}

void check_stochastic(const SmoothedProblem& sp, const SolverSpec& spec) {
  detail::require(spec.minibatch >= 1 && spec.minibatch <= sp.data().n(),
                  "mini-batch size must lie in [1, n]");
  detail::require(spec.step_scale > 0.0, "step scale must be positive");
}

}  // namespace

SolverRun run_prox_gd(const SmoothedProblem& sp, std::span<const double> x0, std::size_t T,
                      const SolverSpec& spec, const RunControl& ctl) {
  check_common(sp, x0, T);
  detail::require(spec.step_scale > 0.0, "step scale must be positive");
  const double eta = spec.step_scale / lipschitz_constant(sp);
  const auto& reg = sp.base().reg();

  SolverRun run;
  IterationDriver drv(sp, T, ctl, run);
  std::vector<double> x(x0.begin(), x0.end()), g(x.size());
  for (std::size_t t = 1; t <= T; ++t) {
    loss_gradient(sp, x, g);
    for (std::size_t j = 0; j < x.size(); ++j) x[j] -= eta * g[j];
    prox_regularizer_inplace(x, eta, reg, sp.lambda());
    if (!drv.after_iteration(t, x)) break;
  }
  drv.finish(std::move(x));
  return run;
}

SolverRun run_apg(const SmoothedProblem& sp, std::span<const double> x0, std::size_t T,
                  const SolverSpec& spec, const RunControl& ctl) {
  check_common(sp, x0, T);
  detail::require(spec.step_scale > 0.0, "step scale must be positive");
  const double eta = spec.step_scale / lipschitz_constant(sp);
  const auto& reg = sp.base().reg();
  const double mu = sp.mu_eff();
  // Strongly convex: constant momentum. Otherwise fall back to the FISTA sequence.
  double beta = 0.0;
  if (mu > 0.0) {
    const double root = std::sqrt(condition_number(sp, mu));
    beta = (root - 1.0) / (root + 1.0);
  }
  double t_seq = 1.0;

  SolverRun run;
  IterationDriver drv(sp, T, ctl, run);
  std::vector<double> x(x0.begin(), x0.end()), y = x, x_next(x.size()), g(x.size());
  for (std::size_t t = 1; t <= T; ++t) {
    loss_gradient(sp, y, g);
    for (std::size_t j = 0; j < x.size(); ++j) x_next[j] = y[j] - eta * g[j];
    prox_regularizer_inplace(x_next, eta, reg, sp.lambda());
    if (mu <= 0.0) {
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_seq * t_seq));
      beta = (t_seq - 1.0) / t_next;
      t_seq = t_next;
    }
    for (std::size_t j = 0; j < x.size(); ++j) y[j] = x_next[j] + beta * (x_next[j] - x[j]);
    std::swap(x, x_next);
    if (!drv.after_iteration(t, x)) break;
  }
  drv.finish(std::move(x));
  return run;
}

void svrg_estimate(const SmoothedProblem& sp, std::span<const double> x,
                   std::span<const double> snapshot, std::span<const double> full_grad,
                   std::span<const std::size_t> batch, std::span<double> out) {
  const auto& data = sp.data();
  const auto loss = sp.base().loss();
  const double gamma = sp.gamma();
  const double inv_b = 1.0 / static_cast<double>(batch.size());
  std::copy(full_grad.begin(), full_grad.end(), out.begin());
  for (auto i : batch) {
    detail::require(i < data.n(), "mini-batch index out of range");
    const auto row = data.row(i);
    const double y = data.label(i);
    const double diff = gradient_coefficient(loss, y, row.dot(x), gamma) -
                        gradient_coefficient(loss, y, row.dot(snapshot), gamma);
    if (diff == 0.0) continue;
    const double c = diff * inv_b;
    for (std::size_t k = 0; k < row.size(); ++k) out[row.indices[k]] += c * row.values[k];
  }
}

SolverRun run_prox_svrg(const SmoothedProblem& sp, std::span<const double> x0, std::size_t T,
                        const SolverSpec& spec, const RunControl& ctl) {
  check_common(sp, x0, T);
  check_stochastic(sp, spec);
  detail::require(spec.theta > 0.0 && spec.theta < 0.25, "theta must lie in (0, 0.25)");
  const double eta = spec.step_scale * spec.theta / lipschitz_constant(sp);
  const auto& reg = sp.base().reg();
  const auto m = epoch_length(sp, spec);
  const auto n = sp.data().n();
  Rng rng(spec.seed);

  SolverRun run;
  IterationDriver drv(sp, T, ctl, run);
  const auto d = x0.size();
  std::vector<double> x(x0.begin(), x0.end()), snapshot(d), full(d), v(d);
  std::vector<std::size_t> batch(spec.minibatch);
  for (std::size_t t = 1; t <= T; ++t) {
    if ((t - 1) % m == 0) {
      snapshot = x;
      loss_gradient(sp, snapshot, full);
    }
    sample_minibatch_into(n, batch, rng);
    svrg_estimate(sp, x, snapshot, full, batch, v);
    for (std::size_t j = 0; j < d; ++j) x[j] -= eta * v[j];
    prox_regularizer_inplace(x, eta, reg, sp.lambda());
    if (!drv.after_iteration(t, x)) break;
  }
  drv.finish(std::move(x));
  return run;
}

SolverRun run_acc_prox_svrg(const SmoothedProblem& sp, std::span<const double> x0,
                            std::size_t T, const SolverSpec& spec, const RunControl& ctl) {
  check_common(sp, x0, T);
  check_stochastic(sp, spec);
  detail::require(spec.p > 0.0 && spec.p < 1.0, "p must lie in (0, 1)");
  const double mu = sp.mu_eff();
  detail::require(mu > 0.0, "accelerated Prox-SVRG needs a strongly convex stage objective");
  const double eta = spec.step_scale * 0.5 / lipschitz_constant(sp);
  const double root = std::sqrt(mu * eta);
  const double beta = (1.0 - root) / (1.0 + root);
  const auto& reg = sp.base().reg();
  const auto m = epoch_length(sp, spec);
  const auto n = sp.data().n();
  Rng rng(spec.seed);

  SolverRun run;
  IterationDriver drv(sp, T, ctl, run);
  const auto d = x0.size();
  std::vector<double> x(x0.begin(), x0.end()), y = x, x_next(d), snapshot(d), full(d), v(d);
  std::vector<std::size_t> batch(spec.minibatch);
  for (std::size_t t = 1; t <= T; ++t) {
    if ((t - 1) % m == 0) {
      snapshot = x;
      y = x;
      loss_gradient(sp, snapshot, full);
    }
    sample_minibatch_into(n, batch, rng);
    svrg_estimate(sp, y, snapshot, full, batch, v);
    for (std::size_t j = 0; j < d; ++j) x_next[j] = y[j] - eta * v[j];
    prox_regularizer_inplace(x_next, eta, reg, sp.lambda());
    for (std::size_t j = 0; j < d; ++j) y[j] = x_next[j] + beta * (x_next[j] - x[j]);
    std::swap(x, x_next);
    if (!drv.after_iteration(t, x)) break;
  }
  drv.finish(std::move(x));
  return run;
}

SolverRun run_solver(const SmoothedProblem& sp, std::span<const double> x0, std::size_t T,
                     const SolverSpec& spec, const RunControl& ctl) {
  switch (spec.id) {
    case SolverId::ProxGD: return run_prox_gd(sp, x0, T, spec, ctl);
    case SolverId::APG: return run_apg(sp, x0, T, spec, ctl);
    case SolverId::ProxSVRG: return run_prox_svrg(sp, x0, T, spec, ctl);
    case SolverId::AccProxSVRG: return run_acc_prox_svrg(sp, x0, T, spec, ctl);
    case SolverId::SAGA:
    case SolverId::MISO: break;
  }
  throw ContractViolation(std::string(to_string(spec.id)) +
                          " is only available in the budget calculator");
}

}  // namespace cns
