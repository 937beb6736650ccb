#include "cns/prox.hpp"

#include "cns/errors.hpp"

namespace cns {

std::vector<double> prox_l1(std::span<const double> v, double t) {
  detail::require(t >= 0.0, "soft-threshold level must be non-negative");
  std::vector<double> out(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) out[j] = soft_threshold(v[j], t);
  return out;
}

void prox_regularizer_inplace(std::span<double> v, double eta, const Regularizer& reg,
                              double lambda_extra) {
  detail::require(eta > 0.0, "prox step size must be positive");
  detail::require(lambda_extra >= 0.0, "lambda_extra must be non-negative");
  const double t = eta * reg.nu1();
  const double shrink = 1.0 + eta * (reg.nu2() + lambda_extra);
  if (shrink == 1.0) {
    for (auto& x : v) x = soft_threshold(x, t);
  } else {
    for (auto& x : v) x = soft_threshold(x, t) / shrink;
  }
}

std::vector<double> prox_regularizer(const ProxRequest& req) {
  std::vector<double> out(req.v.begin(), req.v.end());
  prox_regularizer_inplace(out, req.eta, req.reg, req.lambda_extra);
  return out;
}

}  // namespace cns
