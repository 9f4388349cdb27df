#pragma once

// Least-squares calibration of the univariate parameters (D, lambda, sigma)
// against the empirical scaling exponents and volatility autocorrelation, and
// of the shared intensity lambda1 against the cross-asset correlation curve.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "voljump/model.hpp"
#include "voljump/quadrature.hpp"
#include "voljump/series.hpp"
#include "voljump/theory.hpp"

namespace voljump {

struct CalibrationTargets {
  std::vector<double> q_grid = {0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0};
  std::vector<std::size_t> lag_grid = default_lag_grid();
  std::vector<std::size_t> h_range = {1, 2, 3, 4, 5};
  double weight_scaling = 1.0;
  double weight_autocorr = 1.0;

  void validate() const;

  static std::vector<std::size_t> default_lag_grid();  // 1..400
};

struct SearchConfig {
  std::size_t grid_D = 20;
  std::size_t grid_lambda = 20;
  double D_min = 0.01;
  double D_max = 0.5;
  double lambda_min = 1e-4;
  double lambda_max = 1e-1;
  std::size_t max_iterations = 200;
  double tolerance = 1e-10;
  std::size_t coupling_grid = 11;
  QuadratureConfig quadrature{};

  void validate() const;
};

/// Empirical side of the univariate objective.
struct EmpiricalTargets {
  std::vector<ScalingFit> scaling;           ///< one per q in q_grid
  std::vector<EstimateRow> autocorr;         ///< one per lag in lag_grid
  double second_moment = 0.0;                ///< m_2(1)
};

EmpiricalTargets measure_targets(const DetrendedSeries& x,
                                 const CalibrationTargets& targets);

struct TraceEntry {
  double D;
  double lambda;
  double objective;  ///< best objective found so far
};

struct Residual {
  std::string target;  ///< "scaling", "autocorr" or "crosscorr"
  double abscissa;     ///< q or lag
  double empirical;
  double theory;
};

struct CalibrationReport {
  ModelParams params{};                     ///< univariate fits
  std::optional<CouplingParams> coupling;   ///< coupling fits
  double objective = 0.0;
  std::vector<TraceEntry> trace;
  std::vector<Residual> diagnostics;
  bool boundary = false;  ///< optimum on the edge of the search domain
};

/// w_A mean_q (A(q) - A_hat(q))^2 + w_rho mean_t (rho(t) - rho_hat(t))^2.
double univariate_objective(double D, double lambda, const EmpiricalTargets& emp,
                            const CalibrationTargets& targets,
                            const QuadratureConfig& quad = {});

/// sigma^2 = m_2(1) / (2 D lambda^{1-2D} Gamma(2D)).
double sigma_from_second_moment(double D, double lambda, double m2);

CalibrationReport calibrate_univariate(const EmpiricalTargets& emp,
                                       const CalibrationTargets& targets,
                                       const SearchConfig& search = {});
CalibrationReport calibrate_univariate(const DetrendedSeries& x,
                                       const CalibrationTargets& targets = {},
                                       const SearchConfig& search = {});

/// mean_t (gamma(t) - gamma_hat(t))^2 for lambda1 on the feasible segment.
double coupling_objective(double lambda1, const ModelParams& fx,
                          const ModelParams& fy,
                          std::span<const EstimateRow> empirical,
                          const QuadratureConfig& quad = {});

CalibrationReport calibrate_coupling(std::span<const EstimateRow> empirical,
                                     const ModelParams& fx, const ModelParams& fy,
                                     const SearchConfig& search = {});
CalibrationReport calibrate_coupling(const DetrendedSeries& xf,
                                     const DetrendedSeries& xd,
                                     const ModelParams& fx, const ModelParams& fy,
                                     std::span<const std::size_t> lag_grid,
                                     const SearchConfig& search = {});

/// Coupling on the feasible segment through lambda1.
CouplingParams coupling_from_lambda1(double lambda1, const ModelParams& fx,
                                     const ModelParams& fy);

struct Histogram {
  std::vector<double> centers;
  std::vector<double> density;
};

/// Density histogram of h-day returns sampled exactly from the stationary
/// model (fresh shock history per sample).
Histogram mc_return_histogram(const ModelParams& p, double h, std::size_t samples,
                              std::size_t bins, double half_width, const Seed& seed);

struct PredictionBundle {
  std::vector<double> q_grid;
  std::vector<double> scaling;
  CorrDecayCurve autocorr;
  std::optional<CorrDecayCurve> crosscorr;
  std::vector<double> density_x;
  std::vector<double> density;
  Histogram return_histogram;
};

PredictionBundle predict_report(const ModelParams& p,
                                std::optional<CouplingParams> coupling,
                                std::span<const double> lag_grid,
                                std::span<const double> q_grid, const Seed& seed,
                                const QuadratureConfig& quad = {});

}  // namespace voljump
