#include "voljump/series.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <unordered_map>

#include "voljump/error.hpp"
#include "voljump/parallel.hpp"

namespace voljump {

namespace {

std::chrono::year_month_day parse_iso(const std::string& s) {
  int y = 0;
  unsigned m = 0, d = 0;
  char tail = 0;
  const bool ok = s.size() == 10 &&
                  std::sscanf(s.c_str(), "%4d-%2u-%2u%c", &y, &m, &d, &tail) == 3;
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m},
                                        std::chrono::day{d}};
  require(ok && ymd.ok(), ErrorKind::ParseError, "invalid ISO date '" + s + "'");
  return ymd;
}

std::string format_iso(std::chrono::year_month_day ymd) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

bool is_weekend(std::chrono::sys_days d) {
  const std::chrono::weekday wd{d};
  return wd == std::chrono::Saturday || wd == std::chrono::Sunday;
}

}  // namespace

bool is_iso_date(const std::string& s) {
  try {
    parse_iso(s);
    return true;
  } catch (const Error&) {
    return false;
  }
}

long days_between(const std::string& a, const std::string& b) {
  const std::chrono::sys_days da{parse_iso(a)};
  const std::chrono::sys_days db{parse_iso(b)};
  return static_cast<long>((db - da).count());
}

void PriceSeries::validate() const {
  require(dates.size() == prices.size(), ErrorKind::InvalidParameter,
          "dates and prices differ in length");
  for (std::size_t i = 0; i < prices.size(); ++i) {
    require(std::isfinite(prices[i]) && prices[i] > 0.0,
            ErrorKind::NonPositivePrice,
            "price at position " + std::to_string(i) + " is not positive");
    require(i == 0 || dates[i] > dates[i - 1], ErrorKind::NonMonotoneDates,
            "date '" + dates[i] + "' does not follow '" +
                (i ? dates[i - 1] : std::string()) + "'");
  }
}

DetrendedSeries detrend(const PriceSeries& s, std::size_t window) {
  require(window >= 1, ErrorKind::InvalidParameter, "window must be positive");
  require(s.prices.size() > window, ErrorKind::SeriesTooShort,
          "detrending needs more than " + std::to_string(window) + " prices");
  s.validate();
  const std::size_t n = s.prices.size();
  std::vector<double> logs(n);
  for (std::size_t i = 0; i < n; ++i) logs[i] = std::log(s.prices[i]);

  DetrendedSeries out;
  out.dates.assign(s.dates.begin() + static_cast<std::ptrdiff_t>(window), s.dates.end());
  out.x.reserve(n - window);
  // Running window sum with Kahan compensation so long series do not drift.
  double sum = 0.0, comp = 0.0;
  auto add = [&](double v) {
    const double y = v - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  };
  for (std::size_t k = 0; k < window; ++k) add(logs[k]);
  const double w = static_cast<double>(window);
  for (std::size_t i = window; i < n; ++i) {
    out.x.push_back(logs[i] - sum / w);
    add(logs[i]);
    add(-logs[i - window]);
  }
  return out;
}

std::vector<std::string> business_dates(const std::string& first_date,
                                        std::size_t n) {
  std::chrono::sys_days d{parse_iso(first_date)};
  std::vector<std::string> out;
  out.reserve(n);
  while (out.size() < n) {
    if (!is_weekend(d)) out.push_back(format_iso(std::chrono::year_month_day{d}));
    d += std::chrono::days{1};
  }
  return out;
}

DetrendedSeries as_series(std::vector<double> x, const std::string& first_date) {
  DetrendedSeries out;
  out.dates = business_dates(first_date, x.size());
  out.x = std::move(x);
  return out;
}

std::vector<double> abs_returns(std::span<const double> x, std::size_t h) {
  require(h >= 1, ErrorKind::InvalidParameter, "horizon must be positive");
  if (x.size() <= h) return {};
  std::vector<double> r(x.size() - h);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = std::abs(x[i + h] - x[i]);
  return r;
}

double empirical_moment(std::span<const double> x, double q, std::size_t h) {
  require(q >= 0.0, ErrorKind::InvalidParameter, "moment order must be >= 0");
  require(h >= 1 && h < x.size(), ErrorKind::EmptyWindow,
          "no increments of length " + std::to_string(h));
  if (q == 0.0) return 1.0;
  const std::size_t n = x.size() - h;
  double sum = 0.0;
  if (q == 2.0) {
    for (std::size_t i = 0; i < n; ++i) {
      const double d = x[i + h] - x[i];
      sum += d * d;
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) sum += std::pow(std::abs(x[i + h] - x[i]), q);
  }
  return sum / static_cast<double>(n);
}

double empirical_moment(const DetrendedSeries& x, double q, std::size_t h) {
  return empirical_moment(std::span<const double>(x.x), q, h);
}

ScalingFit fit_scaling_exponent(std::span<const double> x, double q,
                                std::span<const std::size_t> h_range) {
  require(h_range.size() >= 3, ErrorKind::InvalidParameter,
          "scaling fit needs at least three horizons");
  require(q > 0.0, ErrorKind::InvalidParameter, "moment order must be positive");
  const std::size_t n = h_range.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double m = empirical_moment(x, q, h_range[j]);
    require(m > 0.0, ErrorKind::DegenerateFit,
            "zero moment at h = " + std::to_string(h_range[j]));
    lx[j] = std::log(static_cast<double>(h_range[j]));
    ly[j] = std::log(m);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    mx += lx[j];
    my += ly[j];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    sxx += (lx[j] - mx) * (lx[j] - mx);
    sxy += (lx[j] - mx) * (ly[j] - my);
  }
  require(sxx > 0.0, ErrorKind::DegenerateFit, "horizons must be distinct");
  ScalingFit fit;
  fit.q = q;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double r = ly[j] - fit.intercept - fit.slope * lx[j];
    rss += r * r;
  }
  fit.std_error = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
  return fit;
}

ScalingFit fit_scaling_exponent(const DetrendedSeries& x, double q,
                                std::span<const std::size_t> h_range) {
  return fit_scaling_exponent(std::span<const double>(x.x), q, h_range);
}

double lagged_correlation(std::span<const double> a, std::span<const double> b,
                          std::size_t lag, std::size_t min_overlap) {
  const std::size_t n =
      b.size() > lag ? std::min(a.size(), b.size() - lag) : std::size_t{0};
  require(n >= min_overlap && n >= 2, ErrorKind::InsufficientOverlap,
          "only " + std::to_string(n) + " overlapping pairs at lag " +
              std::to_string(lag));
  const double* pa = a.data();
  const double* pb = b.data() + lag;
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += pa[i];
    mb += pb[i];
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double saa = 0.0, sbb = 0.0, sab = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = pa[i] - ma;
    const double db = pb[i] - mb;
    saa += da * da;
    sbb += db * db;
    sab += da * db;
  }
  require(saa > 0.0 && sbb > 0.0, ErrorKind::DegenerateFit,
          "correlation of a constant series");
  const double denom = saa == sbb ? saa : std::sqrt(saa * sbb);
  return std::clamp(sab / denom, -1.0, 1.0);
}

double empirical_autocorr(std::span<const double> x, std::size_t t, std::size_t h) {
  const auto r = abs_returns(x, h);
  if (t == 0) {
    require(r.size() >= 30, ErrorKind::InsufficientOverlap,
            "fewer than 30 returns");
    return 1.0;
  }
  return lagged_correlation(r, r, t);
}

double empirical_autocorr(const DetrendedSeries& x, std::size_t t, std::size_t h) {
  return empirical_autocorr(std::span<const double>(x.x), t, h);
}

std::pair<std::vector<double>, std::vector<double>> align_on_dates(
    const DetrendedSeries& a, const DetrendedSeries& b) {
  std::unordered_map<std::string, std::size_t> where;
  where.reserve(b.dates.size());
  for (std::size_t j = 0; j < b.dates.size(); ++j) where.emplace(b.dates[j], j);
  std::vector<double> xa, xb;
  for (std::size_t i = 0; i < a.dates.size(); ++i) {
    const auto it = where.find(a.dates[i]);
    if (it == where.end()) continue;
    xa.push_back(a.x[i]);
    xb.push_back(b.x[it->second]);
  }
  require(!xa.empty(), ErrorKind::MisalignedCalendars,
          "the two series share no dates");
  return {std::move(xa), std::move(xb)};
}

double empirical_crosscorr(const DetrendedSeries& xf, const DetrendedSeries& xd,
                           std::size_t t, std::size_t h) {
  const auto [a, b] = align_on_dates(xf, xd);
  const auto ra = abs_returns(a, h);
  const auto rb = abs_returns(b, h);
  if (t == 0 && ra == rb) {
    require(ra.size() >= 30, ErrorKind::InsufficientOverlap,
            "fewer than 30 returns");
    return 1.0;
  }
  return lagged_correlation(ra, rb, t);
}

std::vector<EstimateRow> autocorr_table(const DetrendedSeries& x,
                                        std::span<const std::size_t> lags,
                                        std::size_t h) {
  const auto r = abs_returns(x.x, h);
  return parallel_map<EstimateRow>(lags.size(), [&](std::size_t j) {
    const std::size_t t = lags[j];
    const double v = t == 0 ? empirical_autocorr(x, 0, h) : lagged_correlation(r, r, t);
    const double n = static_cast<double>(r.size() - t);
    return EstimateRow{static_cast<double>(t), v, 1.0 / std::sqrt(n)};
  });
}

std::vector<EstimateRow> crosscorr_table(const DetrendedSeries& xf,
                                         const DetrendedSeries& xd,
                                         std::span<const std::size_t> lags,
                                         std::size_t h) {
  const auto [a, b] = align_on_dates(xf, xd);
  const auto ra = abs_returns(a, h);
  const auto rb = abs_returns(b, h);
  return parallel_map<EstimateRow>(lags.size(), [&](std::size_t j) {
    const std::size_t t = lags[j];
    const double v = (t == 0 && ra == rb) ? 1.0 : lagged_correlation(ra, rb, t);
    const double n = static_cast<double>(ra.size() - t);
    return EstimateRow{static_cast<double>(t), v, 1.0 / std::sqrt(n)};
  });
}

}  // namespace voljump
