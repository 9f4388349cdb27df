#include "voljump/theory.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>

#include "voljump/error.hpp"

namespace voljump {

namespace {

constexpr double kTwoOverPi = 2.0 / std::numbers::pi;

void check_lag(double t) {
  require(std::isfinite(t) && t >= 0.0, ErrorKind::InvalidParameter,
          "lag must be non-negative");
}

QuadratureConfig inner_config(const QuadratureConfig& cfg) {
  QuadratureConfig inner = cfg;
  inner.abs_tol = cfg.abs_tol * 1e-2;
  inner.rel_tol = cfg.rel_tol * 1e-2;
  return inner;
}

// E[(shift + min(u, E))^e] for E ~ Exp(rate), e in (-1/2, 0]. The density
// part is mapped to y in [0, 1] with v = u y^{1/(1+e)}, which removes the
// v^e singularity when shift = 0 and keeps the integrand bounded otherwise.
double truncated_power_moment(double u, double rate, double shift, double e,
                              const QuadratureConfig& cfg) {
  const double atom = std::pow(shift + u, e);
  if (rate == 0.0) return atom;
  const double p = 1.0 / (1.0 + e);
  auto integrand = [&](double y) {
    const double yp = std::pow(y, p);
    return std::exp(-rate * u * yp) * std::pow(shift + u * yp, e) *
           std::pow(y, p - 1.0);
  };
  const double body = rate * u * p * integrate(integrand, 0.0, 1.0, cfg).value;
  return body + std::exp(-rate * u) * atom;
}

// Same expectation through incomplete Gamma functions:
//   int_0^u rate e^{-rate v} (shift + v)^e dv
//     = rate^{-e} e^{rate shift} [Gamma(1+e, rate shift) - Gamma(1+e, rate (shift+u))].
double truncated_power_moment_closed(double u, double rate, double shift, double e,
                                     const QuadratureConfig& cfg) {
  const double atom = std::pow(shift + u, e);
  if (rate == 0.0) return atom;
  const double x0 = rate * shift;
  const double x1 = rate * (shift + u);
  if (x1 > 600.0) return truncated_power_moment(u, rate, shift, e, cfg);
  double body;
  if (shift == 0.0) {
    body = std::pow(rate, -e) * boost::math::tgamma_lower(1.0 + e, x1);
  } else {
    body = std::pow(rate, -e) * std::exp(x0) *
           (boost::math::tgamma(1.0 + e, x0) - boost::math::tgamma(1.0 + e, x1));
  }
  return body + std::exp(-rate * u) * atom;
}

template <typename Moment>
double age_covariance(const CouplingParams& cp, double t,
                      const QuadratureConfig& cfg, Moment&& moment) {
  cp.validate();
  check_lag(t);
  if (cp.lambda1 == 0.0) return 0.0;
  const double a = cp.x.D - 0.5;
  const double b = cp.y.D - 0.5;
  if (a == 0.0 || b == 0.0) return 0.0;
  const double ly = cp.lambda_y();
  const QuadratureConfig inner = inner_config(cfg);
  const double mean_y = expect_exponential(
      [&](double s) { return std::pow(t + s / ly, b); }, b, inner);
  // Given E1 = u the two ages are independent, so
  //   Cov = int lambda1 e^{-lambda1 u} A(u) (B(u) - E[Y]) du.
  auto conditional = [&](double s) {
    const double u = s / cp.lambda1;
    const double A = moment(u, cp.lambda2, 0.0, a, inner);
    const double B = moment(u, cp.lambda3, t, b, inner);
    return A * (B - mean_y);
  };
  return expect_exponential(conditional, a + b, cfg);
}

}  // namespace

double q_star(double D) {
  require(D > 0.0 && D <= 0.5, ErrorKind::InvalidParameter,
          "D must lie in (0, 1/2]");
  if (D == 0.5) return std::numeric_limits<double>::infinity();
  return 1.0 / (0.5 - D);
}

double scaling_exponent(double D, double q) {
  require(q > 0.0, ErrorKind::InvalidParameter, "q must be positive");
  return q <= q_star(D) ? 0.5 * q : D * q + 1.0;
}

double scaling_density(const ModelParams& p, double x,
                       const QuadratureConfig& cfg) {
  p.validate();
  const double s2 = p.sigma * p.sigma;
  if (p.D == 0.5) {
    return std::exp(-0.5 * x * x / s2) / std::sqrt(2.0 * std::numbers::pi * s2);
  }
  // With z = t^{1-2D}:
  //   f(x) = K int_0^inf z^e exp(-lambda z^r - z x^2 / c) dz,
  // r = 1/(1-2D), e = (1+2D) / (2(1-2D)), c = 4 D sigma^2. The variable is
  // rescaled by whichever exponential decays first.
  const double one_minus = 1.0 - 2.0 * p.D;
  const double r = 1.0 / one_minus;
  const double e = (1.0 + 2.0 * p.D) / (2.0 * one_minus);
  const double c = 4.0 * p.D * s2;
  const double K =
      p.lambda / (one_minus * p.sigma * std::sqrt(4.0 * p.D * std::numbers::pi));
  const double envelope_scale = std::pow(p.lambda, -one_minus);
  const double scale =
      x == 0.0 ? envelope_scale : std::min(envelope_scale, c / (x * x));
  const double cutoff = exponential_cutoff(cfg);
  double w_max = cutoff;
  for (int i = 0; i < 20; ++i) w_max = cutoff + e * std::log(std::max(w_max, 1.0));
  auto integrand = [&](double w) {
    const double z = scale * w;
    return std::pow(w, e) * std::exp(-p.lambda * std::pow(z, r) - z * x * x / c);
  };
  return K * std::pow(scale, e + 1.0) * integrate(integrand, 0.0, w_max, cfg).value;
}

double scaling_density_mass(const ModelParams& p, const QuadratureConfig& cfg) {
  p.validate();
  const double x0 = std::sqrt(moment_rate(p));
  const QuadratureConfig inner = inner_config(cfg);
  auto integrand = [&](double u) {
    const double x = x0 * u / (1.0 - u);
    return scaling_density(p, x, inner) * x0 / ((1.0 - u) * (1.0 - u));
  };
  return 2.0 * integrate(integrand, 0.0, 1.0, cfg).value;
}

double moment_rate(const ModelParams& p) {
  p.validate();
  return 2.0 * p.D * p.sigma * p.sigma * std::pow(p.lambda, 1.0 - 2.0 * p.D) *
         std::tgamma(2.0 * p.D);
}

double absolute_return_variance_factor(double D) {
  require(D > 0.0 && D <= 0.5, ErrorKind::InvalidParameter,
          "D must lie in (0, 1/2]");
  const double g = std::tgamma(D + 0.5);
  return std::tgamma(2.0 * D) - kTwoOverPi * g * g;
}

double autocorr_limit(const ModelParams& p, double t,
                      const QuadratureConfig& cfg) {
  p.validate();
  check_lag(t);
  if (p.D == 0.5) return 0.0;
  const double a = p.D - 0.5;
  const double x = p.lambda * t;
  const double decay = std::exp(-x);
  if (decay == 0.0) return 0.0;
  const QuadratureConfig inner = inner_config(cfg);
  // For t > 0 the lagged factor is smooth at the origin, so only s^a is
  // singular there.
  const double mean_lagged = expect_exponential(
      [&](double s) { return std::pow(x + s, a); }, x > 0.0 ? 0.0 : a, inner);
  // Centre the lagged factor so the covariance is integrated directly.
  const double cov = expect_exponential(
      [&](double s) { return std::pow(s, a) * (std::pow(x + s, a) - mean_lagged); },
      x > 0.0 ? a : 2.0 * a, cfg);
  return kTwoOverPi * cov / absolute_return_variance_factor(p.D) * decay;
}

double shock_age_covariance(const CouplingParams& cp, double t,
                            const QuadratureConfig& cfg) {
  return age_covariance(cp, t, cfg, truncated_power_moment_closed);
}

double shock_age_covariance_nested(const CouplingParams& cp, double t,
                                   const QuadratureConfig& cfg) {
  return age_covariance(cp, t, cfg, truncated_power_moment);
}

double cross_cov_limit(const CouplingParams& cp, double t,
                       const QuadratureConfig& cfg) {
  const double decay = std::exp(-cp.lambda_y() * t);
  if (decay == 0.0) return 0.0;
  const double prefactor = 4.0 * cp.x.sigma * cp.y.sigma *
                           std::sqrt(cp.x.D * cp.y.D) / std::numbers::pi;
  return prefactor * shock_age_covariance(cp, t, cfg) * decay;
}

double cross_corr_limit(const CouplingParams& cp, double t,
                        const QuadratureConfig& cfg) {
  cp.validate();
  check_lag(t);
  if (cp.x.D == 0.5 || cp.y.D == 0.5) return 0.0;
  const double decay = std::exp(-cp.lambda_y() * t);
  if (decay == 0.0) return 0.0;
  // Rescale ages to unit-rate exponentials: Cov_S = Cov_tau lX^a lY^b.
  const double scale = std::pow(cp.lambda_x(), cp.x.D - 0.5) *
                       std::pow(cp.lambda_y(), cp.y.D - 0.5);
  const double denom = std::sqrt(absolute_return_variance_factor(cp.x.D) *
                                 absolute_return_variance_factor(cp.y.D));
  return kTwoOverPi * shock_age_covariance(cp, t, cfg) * scale / denom * decay;
}

double simple_return_cross_cov(const CouplingParams& cp, double t) {
  cp.validate();
  require(t > 0.0, ErrorKind::InvalidParameter, "lag must be positive");
  return 0.0;
}

std::string_view to_string(CurveKind kind) {
  switch (kind) {
    case CurveKind::Autocorr: return "autocorr";
    case CurveKind::Crosscorr: return "crosscorr";
    case CurveKind::Crosscov: return "crosscov";
  }
  return "unknown";
}

void CorrDecayCurve::validate() const {
  require(lags.size() == values.size(), ErrorKind::InvalidParameter,
          "curve lags and values differ in length");
  for (std::size_t i = 0; i < lags.size(); ++i) {
    require(lags[i] >= 0.0 && (i == 0 || lags[i] > lags[i - 1]),
            ErrorKind::InvalidParameter, "lags must be non-negative and increasing");
    if (kind != CurveKind::Crosscov) {
      require(std::abs(values[i]) <= 1.0, ErrorKind::InvalidParameter,
              "correlation outside [-1, 1]");
    }
  }
}

namespace {

template <typename Fn>
CorrDecayCurve build_curve(CurveKind kind, std::span<const double> lags, Fn&& fn) {
  CorrDecayCurve curve;
  curve.kind = kind;
  curve.lags.assign(lags.begin(), lags.end());
  curve.values.reserve(lags.size());
  for (double t : lags) curve.values.push_back(fn(t));
  curve.validate();
  return curve;
}

}  // namespace

CorrDecayCurve autocorr_curve(const ModelParams& p, std::span<const double> lags,
                              const QuadratureConfig& cfg) {
  return build_curve(CurveKind::Autocorr, lags,
                     [&](double t) { return autocorr_limit(p, t, cfg); });
}

CorrDecayCurve crosscorr_curve(const CouplingParams& cp,
                               std::span<const double> lags,
                               const QuadratureConfig& cfg) {
  return build_curve(CurveKind::Crosscorr, lags,
                     [&](double t) { return cross_corr_limit(cp, t, cfg); });
}

CorrDecayCurve crosscov_curve(const CouplingParams& cp,
                              std::span<const double> lags,
                              const QuadratureConfig& cfg) {
  return build_curve(CurveKind::Crosscov, lags,
                     [&](double t) { return cross_cov_limit(cp, t, cfg); });
}

std::vector<double> integer_lags(int first, int last) {
  std::vector<double> out;
  for (int t = first; t <= last; ++t) out.push_back(static_cast<double>(t));
  return out;
}

}  // namespace voljump
