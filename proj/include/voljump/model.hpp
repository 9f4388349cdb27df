#pragma once

// Mean-reverting stochastic volatility with Poisson volatility shocks.
//
// The detrended log-price is a Brownian motion run on the business clock
//
//   I_t = sigma^2 [ (t - tau_{i(t)})^{2D} + sum_{k=1}^{i(t)} (tau_k - tau_{k-1})^{2D}
//                   - (-tau_0)^{2D} ],
//
// where (tau_n) is a stationary Poisson train on the real line labelled so
// that tau_0 < 0 < tau_1, and i(t) counts the epochs in (0, t]. Everything in
// this header samples or evaluates that construction exactly; there is no
// time discretisation anywhere.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "voljump/random.hpp"

namespace voljump {

/// (D, lambda, sigma) for one index. Times are in days.
struct ModelParams {
  double D = 0.5;       ///< scaling exponent, 0 < D <= 1/2
  double lambda = 1.0;  ///< shock intensity, 1/day
  double sigma = 1.0;   ///< volatility scale, 1/sqrt(day)

  void validate() const;
};

/// Per-index exponent and scale when the intensity comes from a coupling.
struct MarginalParams {
  double D = 0.5;
  double sigma = 1.0;
};

/// Bivariate model: shock trains T^X = T^1 u T^2 and T^Y = T^1 u T^3 built
/// from three independent Poisson trains, and Brownian drivers with
/// correlation rho.
struct CouplingParams {
  MarginalParams x;
  MarginalParams y;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double lambda3 = 0.0;
  double rho = 0.0;

  double lambda_x() const { return lambda1 + lambda2; }
  double lambda_y() const { return lambda1 + lambda3; }
  ModelParams marginal_x() const { return {x.D, lambda_x(), x.sigma}; }
  ModelParams marginal_y() const { return {y.D, lambda_y(), y.sigma}; }

  void validate() const;
};

/// Sorted shock epochs. The list is complete on [t_min, t_max] and always
/// contains tau_0 (largest negative epoch) and tau_1 (smallest positive one),
/// even when those fall outside the window.
class ShockTrain {
 public:
  /// Window defaults to [epochs.front(), epochs.back()].
  explicit ShockTrain(std::vector<double> epochs);
  ShockTrain(std::vector<double> epochs, double t_min, double t_max);

  std::span<const double> epochs() const { return epochs_; }
  double t_min() const { return t_min_; }
  double t_max() const { return t_max_; }

  /// Position of tau_0 in epochs().
  std::size_t origin() const { return origin_; }
  double tau0() const { return epochs_[origin_]; }
  double tau1() const { return epochs_[origin_ + 1]; }

  /// i(t) = #{epochs in (0, t]} for t >= 0.
  std::size_t count_up_to(double t) const;

  /// Position in epochs() of the last epoch <= t.
  std::size_t last_epoch_at(double t) const;

  /// Times where the time change is defined: [lower, t_max] with lower the
  /// larger of t_min and the first epoch.
  double coverage_begin() const;
  double coverage_end() const { return t_max_; }
  bool covers(double t) const;

  friend bool operator==(const ShockTrain&, const ShockTrain&) = default;

 private:
  std::vector<double> epochs_;
  double t_min_;
  double t_max_;
  std::size_t origin_ = 0;
};

/// Simulated path on a grid. X and I are relative to the first grid point.
struct PathSample {
  std::vector<double> grid;
  std::vector<double> X;
  std::vector<double> I;
  std::vector<double> v;  ///< +infinity exactly at a shock epoch when D < 1/2
};

/// Evaluator for I on one train. Precomputes prefix sums of gap^{2D} so that
/// evaluation is O(log n) and increments avoid cancellation.
class TimeChange {
 public:
  TimeChange(const ModelParams& p, const ShockTrain& train);

  /// I_t with I_0 = 0. Defined on the train coverage, negative for t < 0.
  double value(double t) const;

  /// I_t - I_s for s <= t, computed without forming the two values.
  double increment(double s, double t) const;

  /// v_t^2 = dI/dt; +infinity at an epoch when D < 1/2.
  double rate(double t) const;

  const ShockTrain& train() const { return train_; }
  const ModelParams& params() const { return params_; }

 private:
  double gap_power(std::size_t k) const;  // (tau_k - tau_{k-1})^{2D} by position

  ModelParams params_;
  ShockTrain train_;
  std::vector<double> prefix_;  // prefix_[k] = sum_{j<=k} gap_power(j), positions
};

struct SdeConstants {
  double gamma;
  double alpha;
};

/// Homogeneous Poisson train of intensity lambda, stationary on the real
/// line: -tau_0 and tau_1 are independent Exp(lambda); remaining gaps are
/// i.i.d. Exp(lambda). Requires lambda > 0 and t_min < 0 <= t_max.
ShockTrain sample_shock_train(double lambda, double t_min, double t_max,
                              const Seed& seed);

/// (T^1 u T^2, T^1 u T^3) from three independent trains.
std::pair<ShockTrain, ShockTrain> sample_coupled_trains(
    const CouplingParams& cp, double t_min, double t_max, const Seed& seed);

double time_change(const ModelParams& p, const ShockTrain& train, double t);

double spot_volatility(const ModelParams& p, const ShockTrain& train, double t);

/// Drift constants of d(v^2) = -alpha (v^2)^gamma dt + inf di(t). D < 1/2.
SdeConstants sde_constants(const ModelParams& p);

/// Exact simulation: X increments are N(0, I_{t_{k+1}} - I_{t_k}) given the
/// train.
PathSample simulate_path(const ModelParams& p, const ShockTrain& train,
                         std::span<const double> grid, const Seed& seed);

struct BivariateSample {
  ShockTrain train_x;
  ShockTrain train_y;
  PathSample x;
  PathSample y;
};

/// Per grid cell the two drivers are standard normals with correlation rho,
/// each scaled by the square root of its own business-time increment.
BivariateSample simulate_bivariate(const CouplingParams& cp,
                                   std::span<const double> grid,
                                   const Seed& seed);

/// 0, step, 2 step, ..., n step.
std::vector<double> uniform_grid(std::size_t n, double step);

}  // namespace voljump
