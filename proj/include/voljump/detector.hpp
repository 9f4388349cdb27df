#pragma once

// Volatility-jump detection from backward averages of squared increments.
//
// For an end index N and window length k,
//   v_hat(N, k) = (1/k) sum_{i=1}^{k} (x_{N-i+1} - x_{N-i})^2,
// and the last shock is estimated at N - k_hat + 1 where k_hat maximises
// v_hat over k in {drop+1, ..., M}.

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "voljump/model.hpp"
#include "voljump/series.hpp"

namespace voljump {

struct DetectorConfig {
  std::size_t M = 2000;
  std::size_t drop = 20;
  std::size_t confirm_shifts = 4;
  std::size_t confirm_step = 20;
  double threshold = 0.0;  ///< 0 selects 80 * len / 7368
  double min_count = 0.0;  ///< histogram floor for cluster members; 0 selects threshold / 4
  std::size_t merge_window = 10;
  /// An end index votes in scan_history only when the variance after the
  /// estimated shock exceeds the variance before it by this many standard
  /// errors on the log scale; 0 lets every end index vote.
  double min_contrast = 5.0;

  void validate() const;

  double effective_threshold(std::size_t series_length) const;
  double effective_min_count(std::size_t series_length) const;
};

enum class ShockClass { Confirmed, Questionable, SparseMerged };

std::string_view to_string(ShockClass c);

struct DetectedShock {
  std::size_t index;
  std::string date;
  std::size_t count;
  ShockClass klass;
};

struct ShockReport {
  std::map<std::size_t, std::size_t> histogram;  ///< index -> occurrences
  std::vector<DetectedShock> shocks;             ///< sorted by index
  DetectorConfig config;
  double threshold = 0.0;
  std::size_t flat_windows = 0;
  std::size_t weak_windows = 0;  ///< end indices rejected by min_contrast
};

struct ShockEstimate {
  std::size_t k;
  std::size_t index;
  std::string date;
};

struct ConfirmationRecord {
  std::vector<std::optional<ShockEstimate>> estimates;  ///< at N, N-step, ...
  bool confirmed = false;
  bool flat = false;  ///< some window had no well-defined peak
};

double v_hat(std::span<const double> x, std::size_t N, std::size_t k);

/// v_hat(N, k) for k = 1..M (element k-1).
std::vector<double> v_hat_profile(std::span<const double> x, std::size_t N,
                                  std::size_t M);

/// Empty when the profile over the search range is flat.
std::optional<std::size_t> k_hat(std::span<const double> x, std::size_t N,
                                 const DetectorConfig& cfg);

/// log(v_after / v_before) / sqrt(2/k + 2/(M-k)) where v_after averages the
/// k most recent squared increments and v_before the remaining M-k.
double shock_contrast(std::span<const double> x, std::size_t N, std::size_t k,
                      std::size_t M);

std::optional<ShockEstimate> last_shock_estimate(const DetrendedSeries& x,
                                                 std::size_t N,
                                                 const DetectorConfig& cfg);

ConfirmationRecord confirm_shock(const DetrendedSeries& x, std::size_t N,
                                 const DetectorConfig& cfg);

/// Estimates the last shock for every end index N = M .. len-1, builds the
/// occurrence histogram and classifies its clusters.
ShockReport scan_history(const DetrendedSeries& x, const DetectorConfig& cfg);

/// Cluster classification of an existing histogram (counts per index).
std::vector<DetectedShock> classify_histogram(
    const std::vector<std::size_t>& counts,
    const std::vector<std::string>& dates, double threshold, double min_count,
    std::size_t merge_window);

/// Q_T(t) = (I_T - I_{T-t}) / t.
std::vector<double> q_profile(const ModelParams& p, const ShockTrain& train,
                              double T, std::span<const double> t_grid);

}  // namespace voljump
