#pragma once

// Small-horizon limits of the model: scaling of moments, the diffusive
// scaling density, and the decay of auto- and cross-correlations of absolute
// returns. All evaluations are deterministic (quadrature and Gamma functions).

#include <span>
#include <string_view>
#include <vector>

#include "voljump/model.hpp"
#include "voljump/quadrature.hpp"

namespace voljump {

/// Moment order where the limit density stops having finite moments,
/// 1 / (1/2 - D). +infinity at D = 1/2.
double q_star(double D);

/// A(q): q/2 up to q*, Dq + 1 beyond.
double scaling_exponent(double D, double q);

/// Limit density of (X_{t+h} - X_t)/sqrt(h): a Gaussian mixture over an
/// exponential shock age.
double scaling_density(const ModelParams& p, double x,
                       const QuadratureConfig& cfg = {});

/// Total mass of scaling_density over the real line (1 up to quadrature
/// error).
double scaling_density_mass(const ModelParams& p,
                            const QuadratureConfig& cfg = {});

/// lim E[I_h]/h = 2 D sigma^2 lambda^{1-2D} Gamma(2D).
double moment_rate(const ModelParams& p);

/// Var(|N| S^{D-1/2}) = Gamma(2D) - (2/pi) Gamma(D+1/2)^2 for independent
/// N ~ N(0,1), S ~ Exp(1).
double absolute_return_variance_factor(double D);

/// Limit autocorrelation of absolute returns at lag t (days).
double autocorr_limit(const ModelParams& p, double t,
                      const QuadratureConfig& cfg = {});

/// Cov((-tau^X_0)^{D^X-1/2}, (t - tau^Y_0)^{D^Y-1/2}) with
/// (-tau^X_0, -tau^Y_0) = (min(E1,E2), min(E1,E3)), E_i ~ Exp(lambda_i).
/// Conditions on E1; the conditional moments use incomplete Gamma functions.
double shock_age_covariance(const CouplingParams& cp, double t,
                            const QuadratureConfig& cfg = {});

/// Same quantity with the conditional moments also integrated numerically
/// (nested quadrature). Slower; kept as an independent check.
double shock_age_covariance_nested(const CouplingParams& cp, double t,
                                   const QuadratureConfig& cfg = {});

/// lim Cov(|X_h - X_0|, |Y_{t+h} - Y_t|) / h.
double cross_cov_limit(const CouplingParams& cp, double t,
                       const QuadratureConfig& cfg = {});

/// lim corr(|X_h - X_0|, |Y_{t+h} - Y_t|).
double cross_corr_limit(const CouplingParams& cp, double t,
                        const QuadratureConfig& cfg = {});

/// Signed returns at positive lag are uncorrelated in the limit: always 0.
double simple_return_cross_cov(const CouplingParams& cp, double t);

enum class CurveKind { Autocorr, Crosscorr, Crosscov };

std::string_view to_string(CurveKind kind);

struct CorrDecayCurve {
  std::vector<double> lags;
  std::vector<double> values;
  CurveKind kind = CurveKind::Autocorr;

  /// Lags non-negative and increasing; correlation values in [-1, 1].
  void validate() const;
};

CorrDecayCurve autocorr_curve(const ModelParams& p, std::span<const double> lags,
                              const QuadratureConfig& cfg = {});
CorrDecayCurve crosscorr_curve(const CouplingParams& cp,
                               std::span<const double> lags,
                               const QuadratureConfig& cfg = {});
CorrDecayCurve crosscov_curve(const CouplingParams& cp,
                              std::span<const double> lags,
                              const QuadratureConfig& cfg = {});

/// 1, 2, ..., n as doubles.
std::vector<double> integer_lags(int first, int last);

}  // namespace voljump
