#pragma once

#include <span>
#include <vector>

#include "cns/problem.hpp"

namespace cns {

struct ProxRequest {
  std::span<const double> v;
  double eta;             // step size, > 0
  Regularizer reg;
  double lambda_extra = 0.0;  // additional l2 weight folded into the prox
};

/// sign(v_j) max(|v_j| - t, 0)
std::vector<double> prox_l1(std::span<const double> v, double t);

/// prox of eta (nu1 ||x||_1 + ((nu2 + lambda_extra)/2) ||x||^2):
/// soft-threshold at eta nu1, then shrink by 1 / (1 + eta (nu2 + lambda_extra)).
std::vector<double> prox_regularizer(const ProxRequest& req);

/// In-place form used by the solvers.
void prox_regularizer_inplace(std::span<double> v, double eta, const Regularizer& reg,
                              double lambda_extra = 0.0);

inline double soft_threshold(double v, double t) noexcept {
  return v > t ? v - t : (v < -t ? v + t : 0.0);
}

}  // namespace cns
