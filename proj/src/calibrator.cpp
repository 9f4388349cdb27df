#include "voljump/calibrator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "voljump/error.hpp"
#include "voljump/parallel.hpp"

namespace voljump {

namespace {

constexpr double kBoundaryTol = 1e-6;

struct Point {
  double D;
  double log_lambda;
  double value;
};

}  // namespace

std::vector<std::size_t> CalibrationTargets::default_lag_grid() {
  std::vector<std::size_t> g(400);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = i + 1;
  return g;
}

void CalibrationTargets::validate() const {
  require(!q_grid.empty() && !lag_grid.empty(), ErrorKind::InvalidParameter,
          "target grids must be non-empty");
  require(h_range.size() >= 3, ErrorKind::InvalidParameter,
          "h_range needs at least three horizons");
  require(weight_scaling >= 0.0 && weight_autocorr >= 0.0 &&
              weight_scaling + weight_autocorr > 0.0,
          ErrorKind::InvalidParameter, "weights must be >= 0 and not all zero");
  for (double q : q_grid) {
    require(q > 0.0, ErrorKind::InvalidParameter, "moment orders must be positive");
  }
}

void SearchConfig::validate() const {
  require(grid_D >= 2 && grid_lambda >= 2 && coupling_grid >= 2,
          ErrorKind::InvalidParameter, "search grids need at least two points");
  require(D_min > 0.0 && D_min < D_max && D_max <= 0.5,
          ErrorKind::InvalidParameter, "D bounds must satisfy 0 < min < max <= 1/2");
  require(lambda_min > 0.0 && lambda_min < lambda_max, ErrorKind::InvalidParameter,
          "lambda bounds must satisfy 0 < min < max");
  require(tolerance > 0.0, ErrorKind::InvalidParameter, "tolerance must be positive");
  quadrature.validate();
}

EmpiricalTargets measure_targets(const DetrendedSeries& x,
                                 const CalibrationTargets& targets) {
  targets.validate();
  EmpiricalTargets emp;
  emp.scaling = parallel_map<ScalingFit>(targets.q_grid.size(), [&](std::size_t j) {
    return fit_scaling_exponent(x, targets.q_grid[j], targets.h_range);
  });
  emp.autocorr = autocorr_table(x, targets.lag_grid);
  emp.second_moment = empirical_moment(x, 2.0, 1);
  return emp;
}

double univariate_objective(double D, double lambda, const EmpiricalTargets& emp,
                            const CalibrationTargets& targets,
                            const QuadratureConfig& quad) {
  const ModelParams p{D, lambda, 1.0};
  p.validate();
  double scaling = 0.0;
  if (targets.weight_scaling > 0.0) {
    for (const auto& fit : emp.scaling) {
      const double r = scaling_exponent(D, fit.q) - fit.slope;
      scaling += r * r;
    }
    scaling /= static_cast<double>(emp.scaling.size());
  }
  double autocorr = 0.0;
  if (targets.weight_autocorr > 0.0) {
    for (const auto& row : emp.autocorr) {
      const double r = autocorr_limit(p, row.lag, quad) - row.value;
      autocorr += r * r;
    }
    autocorr /= static_cast<double>(emp.autocorr.size());
  }
  return targets.weight_scaling * scaling + targets.weight_autocorr * autocorr;
}

double sigma_from_second_moment(double D, double lambda, double m2) {
  require(m2 > 0.0, ErrorKind::DegenerateFit, "second moment must be positive");
  const ModelParams unit{D, lambda, 1.0};
  return std::sqrt(m2 / moment_rate(unit));
}

CalibrationReport calibrate_univariate(const EmpiricalTargets& emp,
                                       const CalibrationTargets& targets,
                                       const SearchConfig& search) {
  targets.validate();
  search.validate();
  const double lo_l = std::log(search.lambda_min);
  const double hi_l = std::log(search.lambda_max);
  auto clamp_point = [&](double D, double ll) {
    return std::pair{std::clamp(D, search.D_min, search.D_max),
                     std::clamp(ll, lo_l, hi_l)};
  };
  auto objective = [&](double D, double ll) {
    const double v = univariate_objective(D, std::exp(ll), emp, targets,
                                          search.quadrature);
    require(std::isfinite(v), ErrorKind::OptimizerFailure,
            "objective is not finite");
    return v;
  };

  // Coarse grid: D in (D_min, D_max], lambda log-spaced.
  const std::size_t nd = search.grid_D, nl = search.grid_lambda;
  auto grid_values = parallel_map<double>(nd * nl, [&](std::size_t idx) {
    const double D = search.D_min +
                     (search.D_max - search.D_min) * static_cast<double>(idx / nl + 1) /
                         static_cast<double>(nd);
    const double ll = lo_l + (hi_l - lo_l) * static_cast<double>(idx % nl) /
                                 static_cast<double>(nl - 1);
    return objective(D, ll);
  });
  const std::size_t best_idx = static_cast<std::size_t>(
      std::min_element(grid_values.begin(), grid_values.end()) - grid_values.begin());
  const double dD = (search.D_max - search.D_min) / static_cast<double>(nd);
  const double dl = (hi_l - lo_l) / static_cast<double>(nl - 1);
  const double D0 = search.D_min + dD * static_cast<double>(best_idx / nl + 1);
  const double l0 = lo_l + dl * static_cast<double>(best_idx % nl);

  CalibrationReport report;
  std::array<Point, 3> simplex;
  auto make = [&](double D, double ll) {
    const auto [cD, cl] = clamp_point(D, ll);
    return Point{cD, cl, objective(cD, cl)};
  };
  simplex[0] = Point{D0, l0, grid_values[best_idx]};
  simplex[1] = make(D0 - 0.5 * dD, l0);
  simplex[2] = make(D0, l0 + 0.5 * dl);
  auto sort_simplex = [&] {
    std::sort(simplex.begin(), simplex.end(),
              [](const Point& a, const Point& b) { return a.value < b.value; });
  };
  sort_simplex();
  report.trace.push_back({simplex[0].D, std::exp(simplex[0].log_lambda), simplex[0].value});

  for (std::size_t it = 0; it < search.max_iterations; ++it) {
    const double spread = simplex[2].value - simplex[0].value;
    const double size = std::max({std::abs(simplex[1].D - simplex[0].D),
                                  std::abs(simplex[2].D - simplex[0].D),
                                  std::abs(simplex[1].log_lambda - simplex[0].log_lambda),
                                  std::abs(simplex[2].log_lambda - simplex[0].log_lambda)});
    if (spread <= search.tolerance * (1.0 + simplex[0].value) && size < 1e-6) break;
    const double cD = 0.5 * (simplex[0].D + simplex[1].D);
    const double cl = 0.5 * (simplex[0].log_lambda + simplex[1].log_lambda);
    const Point& worst = simplex[2];
    const Point reflected = make(2.0 * cD - worst.D, 2.0 * cl - worst.log_lambda);
    if (reflected.value < simplex[0].value) {
      const Point expanded = make(3.0 * cD - 2.0 * worst.D, 3.0 * cl - 2.0 * worst.log_lambda);
      simplex[2] = expanded.value < reflected.value ? expanded : reflected;
    } else if (reflected.value < simplex[1].value) {
      simplex[2] = reflected;
    } else {
      const bool outside = reflected.value < worst.value;
      const Point contracted =
          outside ? make(cD + 0.5 * (reflected.D - cD), cl + 0.5 * (reflected.log_lambda - cl))
                  : make(cD + 0.5 * (worst.D - cD), cl + 0.5 * (worst.log_lambda - cl));
      if (contracted.value < std::min(worst.value, reflected.value)) {
        simplex[2] = contracted;
      } else {
        for (std::size_t j = 1; j < 3; ++j) {
          simplex[j] = make(simplex[0].D + 0.5 * (simplex[j].D - simplex[0].D),
                            simplex[0].log_lambda +
                                0.5 * (simplex[j].log_lambda - simplex[0].log_lambda));
        }
      }
    }
    sort_simplex();
    report.trace.push_back(
        {simplex[0].D, std::exp(simplex[0].log_lambda), simplex[0].value});
  }

  const Point& best = simplex[0];
  const double lambda = std::exp(best.log_lambda);
  report.params = ModelParams{best.D, lambda,
                              sigma_from_second_moment(best.D, lambda, emp.second_moment)};
  report.params.validate();
  report.objective = best.value;
  report.boundary = best.D <= search.D_min + kBoundaryTol ||
                    best.D >= search.D_max - kBoundaryTol ||
                    best.log_lambda <= lo_l + kBoundaryTol ||
                    best.log_lambda >= hi_l - kBoundaryTol;
  for (const auto& fit : emp.scaling) {
    report.diagnostics.push_back(
        {"scaling", fit.q, fit.slope, scaling_exponent(best.D, fit.q)});
  }
  for (const auto& row : emp.autocorr) {
    report.diagnostics.push_back({"autocorr", row.lag, row.value,
                                  autocorr_limit(report.params, row.lag,
                                                 search.quadrature)});
  }
  return report;
}

CalibrationReport calibrate_univariate(const DetrendedSeries& x,
                                       const CalibrationTargets& targets,
                                       const SearchConfig& search) {
  return calibrate_univariate(measure_targets(x, targets), targets, search);
}

CouplingParams coupling_from_lambda1(double lambda1, const ModelParams& fx,
                                     const ModelParams& fy) {
  const double top = std::min(fx.lambda, fy.lambda);
  require(lambda1 >= 0.0 && lambda1 <= top, ErrorKind::BoundsViolation,
          "lambda1 outside the feasible segment");
  CouplingParams cp;
  cp.x = {fx.D, fx.sigma};
  cp.y = {fy.D, fy.sigma};
  cp.lambda1 = lambda1;
  cp.lambda2 = lambda1 == fx.lambda ? 0.0 : std::max(0.0, fx.lambda - lambda1);
  cp.lambda3 = lambda1 == fy.lambda ? 0.0 : std::max(0.0, fy.lambda - lambda1);
  return cp;
}

double coupling_objective(double lambda1, const ModelParams& fx,
                          const ModelParams& fy,
                          std::span<const EstimateRow> empirical,
                          const QuadratureConfig& quad) {
  const CouplingParams cp = coupling_from_lambda1(lambda1, fx, fy);
  double sum = 0.0;
  for (const auto& row : empirical) {
    const double r = cross_corr_limit(cp, row.lag, quad) - row.value;
    sum += r * r;
  }
  return sum / static_cast<double>(empirical.size());
}

CalibrationReport calibrate_coupling(std::span<const EstimateRow> empirical,
                                     const ModelParams& fx, const ModelParams& fy,
                                     const SearchConfig& search) {
  search.validate();
  fx.validate();
  fy.validate();
  require(!empirical.empty(), ErrorKind::InvalidParameter, "no empirical lags");
  const double top = std::min(fx.lambda, fy.lambda);
  require(top > 0.0, ErrorKind::Infeasible, "feasible segment is empty");

  auto objective = [&](double l1) {
    const double v = coupling_objective(l1, fx, fy, empirical, search.quadrature);
    require(std::isfinite(v), ErrorKind::OptimizerFailure, "objective is not finite");
    return v;
  };
  const std::size_t n = search.coupling_grid;
  auto at = [&](std::size_t i) {
    return i + 1 == n ? top : top * static_cast<double>(i) / static_cast<double>(n - 1);
  };
  const auto values = parallel_map<double>(n, [&](std::size_t i) { return objective(at(i)); });

  CalibrationReport report;
  std::size_t best = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (values[i] < values[best]) best = i;
    report.trace.push_back({0.0, at(i), std::min(values[i], values[best])});
  }
  double best_l1 = at(best);
  double best_v = values[best];

  // Golden-section refinement inside the bracket around the best grid point.
  double a = at(best == 0 ? 0 : best - 1);
  double b = at(std::min(best + 1, n - 1));
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = objective(c), fd = objective(d);
  for (std::size_t it = 0; it < search.max_iterations && b - a > 1e-6 * top; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = objective(d);
    }
    const double l1 = fc < fd ? c : d;
    const double v = std::min(fc, fd);
    if (v < best_v) {
      best_v = v;
      best_l1 = l1;
    }
    report.trace.push_back({0.0, l1, best_v});
  }

  const CouplingParams cp = coupling_from_lambda1(best_l1, fx, fy);
  report.coupling = cp;
  report.params = fx;
  report.objective = best_v;
  report.boundary = best_l1 <= kBoundaryTol * top || best_l1 >= top * (1.0 - kBoundaryTol) ||
                    cp.lambda2 <= kBoundaryTol * top || cp.lambda3 <= kBoundaryTol * top;
  for (const auto& row : empirical) {
    report.diagnostics.push_back({"crosscorr", row.lag, row.value,
                                  cross_corr_limit(cp, row.lag, search.quadrature)});
  }
  return report;
}

CalibrationReport calibrate_coupling(const DetrendedSeries& xf,
                                     const DetrendedSeries& xd,
                                     const ModelParams& fx, const ModelParams& fy,
                                     std::span<const std::size_t> lag_grid,
                                     const SearchConfig& search) {
  const auto rows = crosscorr_table(xf, xd, lag_grid);
  return calibrate_coupling(rows, fx, fy, search);
}

Histogram mc_return_histogram(const ModelParams& p, double h, std::size_t samples,
                              std::size_t bins, double half_width, const Seed& seed) {
  p.validate();
  require(h > 0.0 && samples > 0 && bins > 0 && half_width > 0.0,
          ErrorKind::InvalidParameter, "histogram needs positive h, samples, bins, width");
  Engine engine = make_engine(seed);
  std::exponential_distribution<double> gap(p.lambda);
  std::normal_distribution<double> normal;
  const double two_d = 2.0 * p.D;
  const double s2 = p.sigma * p.sigma;
  Histogram out;
  out.centers.resize(bins);
  out.density.assign(bins, 0.0);
  const double width = 2.0 * half_width / static_cast<double>(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    out.centers[b] = -half_width + (static_cast<double>(b) + 0.5) * width;
  }
  for (std::size_t s = 0; s < samples; ++s) {
    // Age of the last shock before 0, then the shocks inside (0, h].
    double age = gap(engine);
    double t = 0.0;
    double I = 0.0;
    double next = gap(engine);
    while (t + next < h) {
      I += std::pow(age + next, two_d) - std::pow(age, two_d);
      t += next;
      age = 0.0;
      next = gap(engine);
    }
    I += std::pow(age + (h - t), two_d) - std::pow(age, two_d);
    const double r = std::sqrt(s2 * I) * normal(engine);
    const double pos = (r + half_width) / width;
    if (pos >= 0.0 && pos < static_cast<double>(bins)) {
      out.density[static_cast<std::size_t>(pos)] += 1.0;
    }
  }
  for (double& d : out.density) d /= static_cast<double>(samples) * width;
  return out;
}

PredictionBundle predict_report(const ModelParams& p,
                                std::optional<CouplingParams> coupling,
                                std::span<const double> lag_grid,
                                std::span<const double> q_grid, const Seed& seed,
                                const QuadratureConfig& quad) {
  p.validate();
  PredictionBundle out;
  out.q_grid.assign(q_grid.begin(), q_grid.end());
  for (double q : q_grid) out.scaling.push_back(scaling_exponent(p.D, q));
  out.autocorr = autocorr_curve(p, lag_grid, quad);
  if (coupling) out.crosscorr = crosscorr_curve(*coupling, lag_grid, quad);
  const double scale = std::sqrt(moment_rate(p));
  const std::size_t points = 201;
  for (std::size_t i = 0; i < points; ++i) {
    const double x = -10.0 * scale + 20.0 * scale * static_cast<double>(i) /
                                         static_cast<double>(points - 1);
    out.density_x.push_back(x);
    out.density.push_back(scaling_density(p, x, quad));
  }
  out.return_histogram = mc_return_histogram(p, 1.0, 200000, 200, 10.0 * scale, seed);
  return out;
}

}  // namespace voljump
