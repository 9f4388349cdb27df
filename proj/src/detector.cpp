#include "voljump/detector.hpp"

#include <algorithm>
#include <cmath>

#include "voljump/error.hpp"
#include "voljump/parallel.hpp"

namespace voljump {

void DetectorConfig::validate() const {
  require(M >= 1, ErrorKind::InvalidParameter, "M must be positive");
  require(drop < M, ErrorKind::InvalidParameter, "drop must be smaller than M");
  require(confirm_shifts >= 1, ErrorKind::InvalidParameter,
          "confirm_shifts must be positive");
  require(std::isfinite(threshold) && (threshold == 0.0 || threshold >= 1.0),
          ErrorKind::InvalidParameter, "threshold must be >= 1 (or 0 for auto)");
  require(std::isfinite(min_count) && min_count >= 0.0,
          ErrorKind::InvalidParameter, "min_count must be non-negative");
  require(std::isfinite(min_contrast) && min_contrast >= 0.0,
          ErrorKind::InvalidParameter, "min_contrast must be non-negative");
}

double DetectorConfig::effective_threshold(std::size_t series_length) const {
  if (threshold > 0.0) return threshold;
  return std::max(1.0, 80.0 * static_cast<double>(series_length) / 7368.0);
}

double DetectorConfig::effective_min_count(std::size_t series_length) const {
  if (min_count > 0.0) return min_count;
  return std::max(1.0, effective_threshold(series_length) / 4.0);
}

std::string_view to_string(ShockClass c) {
  switch (c) {
    case ShockClass::Confirmed: return "confirmed";
    case ShockClass::Questionable: return "questionable";
    case ShockClass::SparseMerged: return "sparse-merged";
  }
  return "unknown";
}

double v_hat(std::span<const double> x, std::size_t N, std::size_t k) {
  require(k >= 1, ErrorKind::InvalidParameter, "window must be positive");
  require(N < x.size() && k <= N, ErrorKind::WindowUnderflow,
          "window of " + std::to_string(k) + " does not fit before index " +
              std::to_string(N));
  double sum = 0.0;
  for (std::size_t i = 1; i <= k; ++i) {
    const double d = x[N - i + 1] - x[N - i];
    sum += d * d;
  }
  return sum / static_cast<double>(k);
}

std::vector<double> v_hat_profile(std::span<const double> x, std::size_t N,
                                  std::size_t M) {
  require(M >= 1, ErrorKind::InvalidParameter, "window must be positive");
  require(N < x.size() && M <= N, ErrorKind::WindowUnderflow,
          "window of " + std::to_string(M) + " does not fit before index " +
              std::to_string(N));
  std::vector<double> out(M);
  double sum = 0.0;
  for (std::size_t k = 1; k <= M; ++k) {
    const double d = x[N - k + 1] - x[N - k];
    sum += d * d;
    out[k - 1] = sum / static_cast<double>(k);
  }
  return out;
}

std::optional<std::size_t> k_hat(std::span<const double> x, std::size_t N,
                                 const DetectorConfig& cfg) {
  cfg.validate();
  const auto profile = v_hat_profile(x, N, cfg.M);
  std::size_t best = cfg.drop;
  double lo = profile[cfg.drop];
  for (std::size_t j = cfg.drop + 1; j < cfg.M; ++j) {
    if (profile[j] > profile[best]) best = j;
    lo = std::min(lo, profile[j]);
  }
  const double hi = profile[best];
  if (!(hi - lo > 1e-15 * hi)) return std::nullopt;
  return best + 1;
}

double shock_contrast(std::span<const double> x, std::size_t N, std::size_t k,
                      std::size_t M) {
  require(k >= 1 && k < M, ErrorKind::InvalidParameter,
          "contrast needs 1 <= k < M");
  const double total = v_hat(x, N, M) * static_cast<double>(M);
  const double after = v_hat(x, N, k) * static_cast<double>(k);
  const double v_after = after / static_cast<double>(k);
  const double v_before = (total - after) / static_cast<double>(M - k);
  if (!(v_before > 0.0)) return v_after > 0.0 ? HUGE_VAL : 0.0;
  const double se = std::sqrt(2.0 / static_cast<double>(k) +
                              2.0 / static_cast<double>(M - k));
  return std::log(v_after / v_before) / se;
}

std::optional<ShockEstimate> last_shock_estimate(const DetrendedSeries& x,
                                                 std::size_t N,
                                                 const DetectorConfig& cfg) {
  const auto k = k_hat(x.x, N, cfg);
  if (!k) return std::nullopt;
  const std::size_t index = N - *k + 1;
  return ShockEstimate{*k, index, index < x.dates.size() ? x.dates[index] : ""};
}

ConfirmationRecord confirm_shock(const DetrendedSeries& x, std::size_t N,
                                 const DetectorConfig& cfg) {
  cfg.validate();
  const std::size_t back = (cfg.confirm_shifts - 1) * cfg.confirm_step;
  require(N >= back && N - back >= cfg.M, ErrorKind::WindowUnderflow,
          "not enough history for the confirmation shifts");
  ConfirmationRecord rec;
  std::size_t lo = SIZE_MAX, hi = 0;
  for (std::size_t j = 0; j < cfg.confirm_shifts; ++j) {
    auto est = last_shock_estimate(x, N - j * cfg.confirm_step, cfg);
    if (!est) {
      rec.flat = true;
    } else {
      lo = std::min(lo, est->index);
      hi = std::max(hi, est->index);
    }
    rec.estimates.push_back(std::move(est));
  }
  rec.confirmed = !rec.flat && hi - lo <= cfg.merge_window;
  return rec;
}

std::vector<DetectedShock> classify_histogram(
    const std::vector<std::size_t>& counts,
    const std::vector<std::string>& dates, double threshold, double min_count,
    std::size_t merge_window) {
  std::vector<DetectedShock> out;
  std::vector<std::size_t> members;
  auto flush = [&] {
    if (members.empty()) return;
    std::size_t total = 0;
    std::size_t peak = members.front();
    for (std::size_t i : members) {
      total += counts[i];
      if (counts[i] > counts[peak]) peak = i;
    }
    const double t = static_cast<double>(total);
    if (t >= threshold) {
      std::vector<std::size_t> strong;
      for (std::size_t i : members) {
        if (static_cast<double>(counts[i]) >= threshold / 2.0) strong.push_back(i);
      }
      if (strong.size() >= 2) {
        out.push_back({strong.front(), dates[strong.front()], total,
                       ShockClass::SparseMerged});
      } else {
        out.push_back({peak, dates[peak], total, ShockClass::Confirmed});
      }
    } else if (t >= threshold / 2.0) {
      out.push_back({peak, dates[peak], total, ShockClass::Questionable});
    }
    members.clear();
  };
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] == 0 || static_cast<double>(counts[i]) < min_count) continue;
    if (!members.empty() && i - members.back() > merge_window) flush();
    members.push_back(i);
  }
  flush();
  return out;
}

ShockReport scan_history(const DetrendedSeries& x, const DetectorConfig& cfg) {
  cfg.validate();
  const std::size_t n = x.size();
  require(n > cfg.M, ErrorKind::SeriesTooShort,
          "series must be longer than M = " + std::to_string(cfg.M));
  struct Vote {
    std::optional<std::size_t> k;
    bool weak = false;
  };
  const auto estimates = parallel_map<Vote>(n - cfg.M, [&](std::size_t j) {
    Vote v{k_hat(x.x, cfg.M + j, cfg)};
    if (v.k && cfg.min_contrast > 0.0 && *v.k < cfg.M) {
      v.weak = shock_contrast(x.x, cfg.M + j, *v.k, cfg.M) < cfg.min_contrast;
    }
    return v;
  });

  ShockReport report;
  report.config = cfg;
  report.threshold = cfg.effective_threshold(n);
  std::vector<std::size_t> counts(n, 0);
  for (std::size_t j = 0; j < estimates.size(); ++j) {
    if (!estimates[j].k) {
      ++report.flat_windows;
      continue;
    }
    if (estimates[j].weak) {
      ++report.weak_windows;
      continue;
    }
    ++counts[cfg.M + j - *estimates[j].k + 1];
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (counts[i]) report.histogram.emplace(i, counts[i]);
  }
  report.shocks = classify_histogram(counts, x.dates, report.threshold,
                                     cfg.effective_min_count(n), cfg.merge_window);
  return report;
}

std::vector<double> q_profile(const ModelParams& p, const ShockTrain& train,
                              double T, std::span<const double> t_grid) {
  const TimeChange clock(p, train);
  std::vector<double> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) {
    require(t > 0.0, ErrorKind::InvalidParameter, "Q_T needs t > 0");
    out.push_back(clock.increment(T - t, T) / t);
  }
  return out;
}

}  // namespace voljump
