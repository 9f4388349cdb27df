#pragma once

#include <cstddef>
#include <functional>

namespace voljump {

struct QuadratureConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  std::size_t max_subdivisions = 2000;

  void validate() const;
};

struct QuadratureResult {
  double value;
  double error;
  std::size_t subdivisions;
};

/// Globally adaptive 21-point Gauss-Kronrod on [a, b]: the panel with the
/// largest error estimate is bisected until the summed error is below
/// max(abs_tol, rel_tol |I|). Throws quadrature-failure when the budget of
/// subdivisions runs out first.
QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, const QuadratureConfig& cfg = {});

/// E[g(S)] for S ~ Exp(1), where g(s) ~ s^c near 0 with c > -1. Substitutes
/// s = w^{1/(1+c)} so the transformed integrand is bounded at the origin, and
/// truncates where e^{-s} drops below abs_tol / 100.
double expect_exponential(const std::function<double(double)>& g,
                          double singular_exponent,
                          const QuadratureConfig& cfg = {});

/// Upper end of an exponentially weighted integral: e^{-s_max} = abs_tol/100.
double exponential_cutoff(const QuadratureConfig& cfg);

}  // namespace voljump
