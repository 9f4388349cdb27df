#include "voljump/model.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <random>
#include <sstream>

#include "voljump/error.hpp"

namespace voljump {

namespace {

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

void check_exponent(double D, const char* name) {
  require(std::isfinite(D) && D > 0.0 && D <= 0.5, ErrorKind::InvalidParameter,
          std::string(name) + " must lie in (0, 1/2]");
}

// b^{2D} - a^{2D} for b >= a >= 0 without cancellation when b - a << a.
double power_difference(double b, double a, double two_d) {
  if (a <= 0.0) return std::pow(b, two_d);
  return std::pow(a, two_d) * std::expm1(two_d * std::log1p((b - a) / a));
}

double positive_exponential(std::exponential_distribution<double>& dist,
                            Engine& engine) {
  double g = 0.0;
  while (g <= 0.0) g = dist(engine);
  return g;
}

// Points of a stationary Poisson train on [t_min, t_max] plus the first point
// beyond each end. Appends unsorted (backward half first).
void sample_bilateral(double lambda, double t_min, double t_max, Engine& engine,
                      std::vector<double>& out) {
  if (lambda <= 0.0) return;
  std::exponential_distribution<double> gap(lambda);
  double t = 0.0;
  do {
    t -= positive_exponential(gap, engine);
    out.push_back(t);
  } while (t >= t_min);
  t = 0.0;
  do {
    t += positive_exponential(gap, engine);
    out.push_back(t);
  } while (t <= t_max);
}

void check_window(double t_min, double t_max) {
  require(std::isfinite(t_min) && std::isfinite(t_max) && t_min < 0.0 &&
              t_max >= 0.0,
          ErrorKind::InvalidParameter, "window must satisfy t_min < 0 <= t_max");
}

void check_grid(std::span<const double> grid) {
  require(!grid.empty(), ErrorKind::InvalidParameter, "empty grid");
  for (std::size_t k = 1; k < grid.size(); ++k) {
    require(grid[k] > grid[k - 1], ErrorKind::InvalidParameter,
            "grid must be strictly increasing");
  }
}

}  // namespace

void ModelParams::validate() const {
  check_exponent(D, "D");
  require(finite_positive(lambda), ErrorKind::InvalidParameter,
          "lambda must be positive");
  require(finite_positive(sigma), ErrorKind::InvalidParameter,
          "sigma must be positive");
}

void CouplingParams::validate() const {
  check_exponent(x.D, "D^X");
  check_exponent(y.D, "D^Y");
  require(finite_positive(x.sigma) && finite_positive(y.sigma),
          ErrorKind::InvalidParameter, "sigma^X and sigma^Y must be positive");
  for (double l : {lambda1, lambda2, lambda3}) {
    require(std::isfinite(l) && l >= 0.0, ErrorKind::InvalidParameter,
            "coupling intensities must be non-negative");
  }
  require(lambda_x() > 0.0 && lambda_y() > 0.0, ErrorKind::InvalidParameter,
          "lambda1 + lambda2 and lambda1 + lambda3 must be positive");
  require(std::isfinite(rho) && rho >= -1.0 && rho <= 1.0,
          ErrorKind::InvalidParameter, "rho must lie in [-1, 1]");
}

ShockTrain::ShockTrain(std::vector<double> epochs)
    : ShockTrain(epochs, epochs.empty() ? -1.0 : epochs.front(),
                 epochs.empty() ? 0.0 : epochs.back()) {}

ShockTrain::ShockTrain(std::vector<double> epochs, double t_min, double t_max)
    : epochs_(std::move(epochs)), t_min_(t_min), t_max_(t_max) {
  for (std::size_t k = 0; k < epochs_.size(); ++k) {
    require(std::isfinite(epochs_[k]), ErrorKind::InvalidParameter,
            "epochs must be finite");
    require(k == 0 || epochs_[k] > epochs_[k - 1], ErrorKind::InvalidParameter,
            "epochs must be strictly increasing");
  }
  const auto first_positive =
      std::upper_bound(epochs_.begin(), epochs_.end(), 0.0);
  require(first_positive != epochs_.begin() && first_positive != epochs_.end(),
          ErrorKind::InvalidParameter,
          "train needs an epoch below 0 and one above 0");
  require(*std::prev(first_positive) < 0.0, ErrorKind::InvalidParameter,
          "no epoch may sit exactly at 0");
  origin_ = static_cast<std::size_t>(
      std::distance(epochs_.begin(), first_positive) - 1);
  require(t_min_ < 0.0 && t_max_ >= 0.0, ErrorKind::InvalidParameter,
          "window must satisfy t_min < 0 <= t_max");
}

std::size_t ShockTrain::last_epoch_at(double t) const {
  const auto it = std::upper_bound(epochs_.begin(), epochs_.end(), t);
  require(it != epochs_.begin(), ErrorKind::OutOfWindow,
          "time precedes the first epoch");
  return static_cast<std::size_t>(std::distance(epochs_.begin(), it) - 1);
}

std::size_t ShockTrain::count_up_to(double t) const {
  require(t >= 0.0, ErrorKind::OutOfWindow, "i(t) is defined for t >= 0");
  return last_epoch_at(t) - origin_;
}

double ShockTrain::coverage_begin() const {
  return std::max(t_min_, epochs_.front());
}

bool ShockTrain::covers(double t) const {
  return t >= coverage_begin() && t <= t_max_;
}

TimeChange::TimeChange(const ModelParams& p, const ShockTrain& train)
    : params_(p), train_(train) {
  params_.validate();
  const auto e = train_.epochs();
  prefix_.assign(e.size(), 0.0);
  for (std::size_t k = 1; k < e.size(); ++k) {
    prefix_[k] = prefix_[k - 1] + gap_power(k);
  }
}

double TimeChange::gap_power(std::size_t k) const {
  const auto e = train_.epochs();
  return std::pow(e[k] - e[k - 1], 2.0 * params_.D);
}

double TimeChange::increment(double s, double t) const {
  require(s <= t, ErrorKind::InvalidParameter, "increment needs s <= t");
  if (!train_.covers(s) || !train_.covers(t)) {
    std::ostringstream msg;
    msg << "interval [" << s << ", " << t << "] outside train coverage ["
        << train_.coverage_begin() << ", " << train_.coverage_end() << "]";
    fail(ErrorKind::OutOfWindow, msg.str());
  }
  const double s2 = params_.sigma * params_.sigma;
  if (params_.D == 0.5) return s2 * (t - s);

  const double two_d = 2.0 * params_.D;
  const auto e = train_.epochs();
  const std::size_t js = train_.last_epoch_at(s);
  const std::size_t jt = train_.last_epoch_at(t);
  if (js == jt) return s2 * power_difference(t - e[js], s - e[js], two_d);
  const double head = power_difference(e[js + 1] - e[js], s - e[js], two_d);
  const double middle = prefix_[jt] - prefix_[js + 1];
  const double tail = std::pow(t - e[jt], two_d);
  return s2 * (head + middle + tail);
}

double TimeChange::value(double t) const {
  return t >= 0.0 ? increment(0.0, t) : -increment(t, 0.0);
}

double TimeChange::rate(double t) const {
  require(train_.covers(t), ErrorKind::OutOfWindow,
          "time outside train coverage");
  const double s2 = params_.sigma * params_.sigma;
  if (params_.D == 0.5) return s2;
  const auto e = train_.epochs();
  const double age = t - e[train_.last_epoch_at(t)];
  if (age == 0.0) return std::numeric_limits<double>::infinity();
  return 2.0 * params_.D * s2 * std::pow(age, 2.0 * params_.D - 1.0);
}

ShockTrain sample_shock_train(double lambda, double t_min, double t_max,
                              const Seed& seed) {
  require(finite_positive(lambda), ErrorKind::InvalidParameter,
          "lambda must be positive");
  check_window(t_min, t_max);
  Engine engine = make_engine(seed);
  std::vector<double> epochs;
  sample_bilateral(lambda, t_min, t_max, engine, epochs);
  std::sort(epochs.begin(), epochs.end());
  return ShockTrain(std::move(epochs), t_min, t_max);
}

std::pair<ShockTrain, ShockTrain> sample_coupled_trains(
    const CouplingParams& cp, double t_min, double t_max, const Seed& seed) {
  cp.validate();
  check_window(t_min, t_max);
  std::vector<double> parts[3];
  const double rates[3] = {cp.lambda1, cp.lambda2, cp.lambda3};
  for (int i = 0; i < 3; ++i) {
    Engine engine = make_engine(seed.child(static_cast<std::uint64_t>(i + 1)));
    sample_bilateral(rates[i], t_min, t_max, engine, parts[i]);
    std::sort(parts[i].begin(), parts[i].end());
  }
  auto merged = [&](const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out;
    out.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return ShockTrain(std::move(out), t_min, t_max);
  };
  return {merged(parts[0], parts[1]), merged(parts[0], parts[2])};
}

double time_change(const ModelParams& p, const ShockTrain& train, double t) {
  return TimeChange(p, train).value(t);
}

double spot_volatility(const ModelParams& p, const ShockTrain& train, double t) {
  return std::sqrt(TimeChange(p, train).rate(t));
}

SdeConstants sde_constants(const ModelParams& p) {
  p.validate();
  require(p.D < 0.5, ErrorKind::InvalidParameter,
          "drift constants degenerate at D = 1/2");
  const double one_minus = 1.0 - 2.0 * p.D;
  const double gamma = 2.0 + 2.0 * p.D / one_minus;
  const double alpha = one_minus / (std::pow(2.0 * p.D, 1.0 / one_minus) *
                                    std::pow(p.sigma, 2.0 / one_minus));
  return {gamma, alpha};
}

PathSample simulate_path(const ModelParams& p, const ShockTrain& train,
                         std::span<const double> grid, const Seed& seed) {
  check_grid(grid);
  const TimeChange clock(p, train);
  require(train.covers(grid.front()) && train.covers(grid.back()),
          ErrorKind::OutOfWindow, "grid outside train coverage");

  PathSample out;
  out.grid.assign(grid.begin(), grid.end());
  out.X.resize(grid.size());
  out.I.resize(grid.size());
  out.v.resize(grid.size());
  Engine engine = make_engine(seed);
  std::normal_distribution<double> normal;
  out.X[0] = 0.0;
  out.I[0] = 0.0;
  out.v[0] = std::sqrt(clock.rate(grid[0]));
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const double dI = clock.increment(grid[k - 1], grid[k]);
    out.I[k] = out.I[k - 1] + dI;
    out.X[k] = out.X[k - 1] + std::sqrt(dI) * normal(engine);
    out.v[k] = std::sqrt(clock.rate(grid[k]));
  }
  return out;
}

BivariateSample simulate_bivariate(const CouplingParams& cp,
                                   std::span<const double> grid,
                                   const Seed& seed) {
  cp.validate();
  check_grid(grid);
  auto [tx, ty] = sample_coupled_trains(cp, std::min(-1.0, grid.front()),
                                        std::max(0.0, grid.back()),
                                        seed.child(0));
  const TimeChange cx(cp.marginal_x(), tx);
  const TimeChange cy(cp.marginal_y(), ty);

  BivariateSample out{std::move(tx), std::move(ty), {}, {}};
  for (PathSample* ps : {&out.x, &out.y}) {
    ps->grid.assign(grid.begin(), grid.end());
    ps->X.assign(grid.size(), 0.0);
    ps->I.assign(grid.size(), 0.0);
    ps->v.assign(grid.size(), 0.0);
  }
  Engine engine = make_engine(seed.child(1));
  std::normal_distribution<double> normal;
  const double rho = cp.rho;
  const double rho_c = std::sqrt(std::max(0.0, 1.0 - rho * rho));
  out.x.v[0] = std::sqrt(cx.rate(grid[0]));
  out.y.v[0] = std::sqrt(cy.rate(grid[0]));
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const double z1 = normal(engine);
    const double z2 = normal(engine);
    const double dx = cx.increment(grid[k - 1], grid[k]);
    const double dy = cy.increment(grid[k - 1], grid[k]);
    out.x.I[k] = out.x.I[k - 1] + dx;
    out.y.I[k] = out.y.I[k - 1] + dy;
    out.x.X[k] = out.x.X[k - 1] + std::sqrt(dx) * z1;
    out.y.X[k] = out.y.X[k - 1] + std::sqrt(dy) * (rho * z1 + rho_c * z2);
    out.x.v[k] = std::sqrt(cx.rate(grid[k]));
    out.y.v[k] = std::sqrt(cy.rate(grid[k]));
  }
  return out;
}

std::vector<double> uniform_grid(std::size_t n, double step) {
  require(finite_positive(step), ErrorKind::InvalidParameter,
          "grid step must be positive");
  std::vector<double> g(n + 1);
  for (std::size_t k = 0; k <= n; ++k) g[k] = static_cast<double>(k) * step;
  return g;
}

}  // namespace voljump
