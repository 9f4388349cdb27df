#pragma once

// Empirical estimators shared by real index data and simulated paths:
// detrending, moments of increments, scaling-exponent regression, and
// auto/cross-correlation of absolute returns.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace voljump {

/// Closing prices with ISO-8601 date labels.
struct PriceSeries {
  std::vector<std::string> dates;
  std::vector<double> prices;

  /// Equal lengths, positive finite prices, strictly increasing dates.
  void validate() const;
};

/// Detrended log values; dates[i] labels x[i].
struct DetrendedSeries {
  std::vector<std::string> dates;
  std::vector<double> x;

  std::size_t size() const { return x.size(); }
};

/// x_i = log s_i - (1/window) sum_{k=i-window}^{i-1} log s_k for i >= window.
DetrendedSeries detrend(const PriceSeries& s, std::size_t window = 250);

/// Wraps raw values (e.g. a simulated log-price) with business-day labels.
DetrendedSeries as_series(std::vector<double> x,
                          const std::string& first_date = "1984-04-02");

bool is_iso_date(const std::string& s);

/// Calendar days from a to b (ISO-8601 dates).
long days_between(const std::string& a, const std::string& b);

/// Weekdays starting at first_date (moved forward to a weekday if needed).
std::vector<std::string> business_dates(const std::string& first_date,
                                        std::size_t n);

/// |x_{i+h} - x_i| for i = 0 .. n-1-h.
std::vector<double> abs_returns(std::span<const double> x, std::size_t h = 1);

/// Mean of |x_{i+h} - x_i|^q over all overlapping increments.
double empirical_moment(std::span<const double> x, double q, std::size_t h);
double empirical_moment(const DetrendedSeries& x, double q, std::size_t h);

struct ScalingFit {
  double q = 0.0;
  double slope = 0.0;
  double std_error = 0.0;
  double intercept = 0.0;
};

/// OLS slope of log m_q(h) on log h over h_range, with its residual standard
/// error.
ScalingFit fit_scaling_exponent(std::span<const double> x, double q,
                                std::span<const std::size_t> h_range);
ScalingFit fit_scaling_exponent(const DetrendedSeries& x, double q,
                                std::span<const std::size_t> h_range);

/// Pearson correlation of a[i] and b[i + lag] over i = 0 .. min(|a|, |b|-lag)-1.
/// Requires at least min_overlap pairs.
double lagged_correlation(std::span<const double> a, std::span<const double> b,
                          std::size_t lag, std::size_t min_overlap = 30);

/// Correlation of |h-returns| with its copy shifted by t. t = 0 gives 1.
double empirical_autocorr(std::span<const double> x, std::size_t t,
                          std::size_t h = 1);
double empirical_autocorr(const DetrendedSeries& x, std::size_t t,
                          std::size_t h = 1);

/// Inner join of two series on their date labels.
std::pair<std::vector<double>, std::vector<double>> align_on_dates(
    const DetrendedSeries& a, const DetrendedSeries& b);

/// corr(|xf_{i+h} - xf_i|, |xd_{i+t+h} - xd_{i+t}|) after aligning on dates.
double empirical_crosscorr(const DetrendedSeries& xf, const DetrendedSeries& xd,
                           std::size_t t, std::size_t h = 1);

struct EstimateRow {
  double lag;
  double value;
  double std_error;
};

/// rho-hat over lags with the large-sample white-noise standard error
/// 1/sqrt(overlap).
std::vector<EstimateRow> autocorr_table(const DetrendedSeries& x,
                                        std::span<const std::size_t> lags,
                                        std::size_t h = 1);
std::vector<EstimateRow> crosscorr_table(const DetrendedSeries& xf,
                                         const DetrendedSeries& xd,
                                         std::span<const std::size_t> lags,
                                         std::size_t h = 1);

}  // namespace voljump
