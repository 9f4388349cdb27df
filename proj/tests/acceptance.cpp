// Acceptance run: one line per criterion, nonzero exit if any fails.
//   voljump_acceptance [criterion ...]
// Criterion 11 needs VOLJUMP_DJIA_CSV and VOLJUMP_FTSE_CSV; without them it
// is reported as skipped.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "voljump/calibrator.hpp"
#include "voljump/detector.hpp"
#include "voljump/io.hpp"
#include "voljump/model.hpp"
#include "voljump/parallel.hpp"
#include "voljump/series.hpp"
#include "voljump/theory.hpp"

using namespace voljump;

namespace {

enum class Verdict { Pass, Fail, Skip };

struct Outcome {
  Verdict verdict = Verdict::Pass;
  std::string detail;
};

// Accumulates failure notes; the outcome fails if any check did.
class Checks {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) {
      failed_ = true;
      if (!notes_.empty()) notes_ += "; ";
      notes_ += what;
    }
  }
  void note(const std::string& s) {
    if (!info_.empty()) info_ += ", ";
    info_ += s;
  }
  Outcome outcome() const {
    return {failed_ ? Verdict::Fail : Verdict::Pass, failed_ ? notes_ + " | " + info_ : info_};
  }

 private:
  bool failed_ = false;
  std::string notes_;
  std::string info_;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_sd(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

// Linear-interpolation quantile of an unsorted sample.
double quantile(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  const double pos = p * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

double median(std::vector<double> v) { return quantile(std::move(v), 0.5); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// 1% critical value of the one-sample KS statistic.
double ks_critical(std::size_t n) { return 1.628 / std::sqrt(static_cast<double>(n)); }

double ks_normal(std::vector<double> z) {
  std::sort(z.begin(), z.end());
  const double n = static_cast<double>(z.size());
  double d = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double f = normal_cdf(z[i]);
    d = std::max({d, f - i / n, (i + 1) / n - f});
  }
  return d;
}

std::vector<double> simulated_log_price(const ModelParams& p, std::size_t n, double step,
                                        const Seed& seed) {
  const double horizon = static_cast<double>(n) * step;
  const auto train = sample_shock_train(p.lambda, -1.0, horizon, seed.child(0));
  return simulate_path(p, train, uniform_grid(n, step), seed.child(1)).X;
}

DetrendedSeries detrended(const std::vector<double>& log_price) {
  PriceSeries s;
  s.dates = business_dates("1900-01-01", log_price.size());
  for (double x : log_price) s.prices.push_back(std::exp(x));
  return detrend(s);
}

const ModelParams kDjia{0.14, 0.0014, 0.127};
const ModelParams kFtse{0.16, 0.0019, 0.11};
// X = FTSE, Y = DJIA.
const CouplingParams kTriple{{0.16, 0.11}, {0.14, 0.127}, 0.0014, 0.0005, 0.0, 0.0};

// 1. Black-Scholes reduction.
Outcome black_scholes() {
  Checks c;
  const ModelParams p{0.5, 0.01, 0.02};
  const std::size_t n = 1000000;
  const auto x = simulated_log_price(p, n, 1.0, {101, 0});
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = x[i + 1] - x[i];
  const double s2 = p.sigma * p.sigma;
  const double m = mean(r);
  double v = 0.0;
  for (double d : r) v += (d - m) * (d - m);
  v /= static_cast<double>(n - 1);
  const double se = s2 * std::sqrt(2.0 / static_cast<double>(n));
  c.expect(std::abs(v - s2) <= 3.0 * se, "variance off by more than 3 SE");
  c.note(fmt("var/sigma^2=%.5f", v / s2));
  for (double& d : r) d /= p.sigma;
  const double ks = ks_normal(r);
  c.expect(ks < ks_critical(n), "KS normality rejected at 1%");
  c.note(fmt("KS=%.2e crit=%.2e", ks, ks_critical(n)));
  const auto train = sample_shock_train(p.lambda, -1.0, 1000.0, {102, 0});
  double worst = 0.0;
  for (double t : {0.0, 0.5, 1.0, 17.25, 999.0}) {
    worst = std::max(worst, std::abs(time_change(p, train, t) - s2 * t));
  }
  c.expect(worst <= 1e-15, "I_t differs from sigma^2 t");
  c.note(fmt("max|I_t - s^2 t|=%.1e", worst));
  return c.outcome();
}

// 2. Multiscaling recovery.
Outcome multiscaling() {
  Checks c;
  const auto x = simulated_log_price(kDjia, 1000000, 1.0, {201, 0});
  const std::vector<std::size_t> hs{1, 2, 3, 4, 5};
  for (const auto& [q, tol] : {std::pair{1.0, 0.05}, {2.0, 0.05}, {4.0, 0.12}, {5.0, 0.12}}) {
    const double a = fit_scaling_exponent(x, q, hs).slope;
    const double th = scaling_exponent(kDjia.D, q);
    c.expect(std::abs(a - th) <= tol, fmt("A(%g) off by %.3f", q, a - th));
    c.note(fmt("A(%g)=%.3f vs %.3f", q, a, th));
  }
  return c.outcome();
}

// 3. Autocorrelation law, returns over h = 1/16 day.
Outcome autocorrelation_law() {
  Checks c;
  const std::size_t reps = 200;
  const double h = 1.0 / 16.0, length = 1e5;
  const std::vector<double> lags{1.0, 5.0, 20.0, 100.0, 400.0};
  const auto rows = parallel_map<std::vector<double>>(reps, [&](std::size_t r) {
    const auto x = simulated_log_price(kDjia, static_cast<std::size_t>(length / h), h,
                                       Seed{301, 0}.child(r));
    const auto a = abs_returns(x, 1);
    std::vector<double> out;
    for (double t : lags) out.push_back(lagged_correlation(a, a, std::llround(t / h)));
    return out;
  });
  for (std::size_t j = 0; j < lags.size(); ++j) {
    std::vector<double> col;
    for (const auto& row : rows) col.push_back(row[j]);
    const double lo = quantile(col, 0.005), hi = quantile(col, 0.995);
    const double th = autocorr_limit(kDjia, lags[j]);
    c.expect(th >= lo && th <= hi, fmt("t=%g outside band", lags[j]));
    c.note(fmt("t=%g: %.4f in [%.4f, ", lags[j], th, lo) + fmt("%.4f]", hi));
  }
  return c.outcome();
}

// 4. Cross-correlation law and signed-return null.
Outcome crosscorrelation_law() {
  Checks c;
  const std::size_t reps = 200;
  const double h = 1.0 / 16.0, length = 1e5;
  const auto n = static_cast<std::size_t>(length / h);
  const std::vector<double> lags{0.0, 10.0, 100.0, 400.0};
  const auto rows = parallel_map<std::vector<double>>(reps, [&](std::size_t r) {
    const auto s = simulate_bivariate(kTriple, uniform_grid(n, h), Seed{401, 0}.child(r));
    const auto a = abs_returns(s.x.X, 1);
    const auto b = abs_returns(s.y.X, 1);
    std::vector<double> out;
    for (double t : lags) out.push_back(lagged_correlation(a, b, std::llround(t / h)));
    return out;
  });
  for (std::size_t j = 0; j < lags.size(); ++j) {
    std::vector<double> col;
    for (const auto& row : rows) col.push_back(row[j]);
    const double lo = quantile(col, 0.005), hi = quantile(col, 0.995);
    const double th = cross_corr_limit(kTriple, lags[j]);
    c.expect(th >= lo && th <= hi, fmt("t=%g outside band", lags[j]));
    c.note(fmt("t=%g: %.4f in [%.4f, ", lags[j], th, lo) + fmt("%.4f]", hi));
  }
  // Signed daily returns with correlated drivers.
  CouplingParams cp = kTriple;
  cp.rho = 0.5;
  const std::vector<std::size_t> signed_lags{1, 10, 100};
  const auto covs = parallel_map<std::vector<double>>(50, [&](std::size_t r) {
    const auto s = simulate_bivariate(cp, uniform_grid(100000, 1.0), Seed{402, 0}.child(r));
    std::vector<double> dx, dy;
    for (std::size_t i = 1; i < s.x.X.size(); ++i) {
      dx.push_back(s.x.X[i] - s.x.X[i - 1]);
      dy.push_back(s.y.X[i] - s.y.X[i - 1]);
    }
    std::vector<double> out;
    for (std::size_t t : signed_lags) {
      const std::size_t m = dx.size() - t;
      double mx = 0.0, my = 0.0, sxy = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        mx += dx[i];
        my += dy[i + t];
      }
      mx /= m;
      my /= m;
      for (std::size_t i = 0; i < m; ++i) sxy += (dx[i] - mx) * (dy[i + t] - my);
      out.push_back(sxy / static_cast<double>(m - 1));
    }
    return out;
  });
  for (std::size_t j = 0; j < signed_lags.size(); ++j) {
    std::vector<double> col;
    for (const auto& row : covs) col.push_back(row[j]);
    const double m = mean(col), se = sample_sd(col) / std::sqrt(static_cast<double>(col.size()));
    const double th = simple_return_cross_cov(cp, static_cast<double>(signed_lags[j]));
    c.expect(std::abs(m - th) <= 3.0 * se, fmt("signed cov at t=%g not within 3 SE", signed_lags[j]));
    c.note(fmt("signed t=%g: %.2f SE", static_cast<double>(signed_lags[j]), (m - th) / se));
  }
  return c.outcome();
}

// Batch-means covariance of (f(sample), g(sample)) over `total` draws.
struct McCov {
  double value;
  double se;
};

struct Draw {
  double u;
  double w;
  double weight = 1.0;  ///< likelihood ratio when sampling from a proposal
};

McCov batch_covariance(std::size_t total, std::size_t batches, const Seed& seed,
                       const std::function<Draw(Engine&)>& draw) {
  const std::size_t per = total / batches;
  const auto covs = parallel_map<double>(batches, [&](std::size_t b) {
    Engine eng = make_engine(seed.child(b));
    double su = 0.0, sw = 0.0, suw = 0.0;
    for (std::size_t i = 0; i < per; ++i) {
      const auto d = draw(eng);
      su += d.weight * d.u;
      sw += d.weight * d.w;
      suw += d.weight * d.u * d.w;
    }
    const double k = static_cast<double>(per);
    return suw / k - (su / k) * (sw / k);
  });
  return {mean(covs), sample_sd(covs) / std::sqrt(static_cast<double>(batches))};
}

// Exp(rate) draw taken from the Gamma(1/2, rate) proposal, with its
// likelihood ratio sqrt(pi rate E). Powers E^a with a > -1/2 then have all
// moments finite under the proposal, so batch standard errors are reliable.
struct Tilted {
  double value;
  double weight;
};

Tilted tilted_exponential(Engine& eng, double rate) {
  if (rate <= 0.0) return {INFINITY, 1.0};
  std::gamma_distribution<double> g(0.5, 1.0 / rate);
  const double e = g(eng);
  return {e, std::sqrt(M_PI * rate * e)};
}

// 5. Quadrature against direct Monte Carlo over (E1, E2, E3). The Y shock
// age at time t is a fresh Exp(lambda_Y) gap when a Y shock falls in (0, t],
// else t plus the age at 0; the e^{-lambda_Y t} factor is not used.
Outcome quadrature_vs_mc() {
  Checks c;
  const std::size_t total = 10000000, batches = 100;
  const std::vector<CouplingParams> grid{
      kTriple,
      {{0.2, 1.0}, {0.3, 1.0}, 0.001, 0.0004, 0.0006, 0.0},
      {{0.35, 0.5}, {0.25, 2.0}, 0.01, 0.005, 0.02, 0.0},
  };
  std::uint64_t stream = 0;
  for (const auto& cp : grid) {
    const double ax = cp.x.D - 0.5, ay = cp.y.D - 0.5;
    for (double t : {0.0, 100.0, 400.0}) {
      const auto mc = batch_covariance(total, batches, {501, stream++}, [&](Engine& eng) {
        const auto E1 = tilted_exponential(eng, cp.lambda1);
        const auto E2 = tilted_exponential(eng, cp.lambda2);
        const auto E3 = tilted_exponential(eng, cp.lambda3);
        const auto G = tilted_exponential(eng, cp.lambda_y());
        const double age_y = G.value < t ? G.value : t + std::min(E1.value, E3.value);
        return Draw{std::pow(std::min(E1.value, E2.value), ax), std::pow(age_y, ay),
                    E1.weight * E2.weight * E3.weight * G.weight};
      });
      // Cov(|N|v^X, |N'|v^Y) = (2/pi) 2 sigma_x sigma_y sqrt(D_x D_y) Cov(ages).
      const double k = (2.0 / M_PI) * 2.0 * cp.x.sigma * cp.y.sigma * std::sqrt(cp.x.D * cp.y.D);
      const double th = cross_cov_limit(cp, t);
      const double z = (k * mc.value - th) / (k * mc.se);
      c.expect(std::abs(z) <= 3.0, fmt("cross_cov D=(%g,%g) t=%g", cp.x.D, cp.y.D, t));
      c.note(fmt("cov(%g,%g,t=%g)", cp.x.D, cp.y.D, t) + fmt(" %.2f SE", z));
    }
    const ModelParams p = cp.marginal_x();
    const double a = p.D - 0.5;
    for (double t : {1.0, 100.0, 400.0}) {
      const auto mc = batch_covariance(total, batches, {502, stream++}, [&](Engine& eng) {
        const auto A0 = tilted_exponential(eng, p.lambda);
        const auto G = tilted_exponential(eng, p.lambda);
        return Draw{std::pow(A0.value, a), std::pow(G.value < t ? G.value : t + A0.value, a),
                    A0.weight * G.weight};
      });
      // rho = Cov(v_0, v_t) / Var(|N| v), Var(|N| v) = 2D sigma^2 lambda^{1-2D} V(D).
      const double var = 2.0 * p.D * p.sigma * p.sigma * std::pow(p.lambda, 1.0 - 2.0 * p.D) *
                         absolute_return_variance_factor(p.D);
      const double k = (2.0 / M_PI) * 2.0 * p.D * p.sigma * p.sigma / var;
      const double th = autocorr_limit(p, t);
      const double z = (k * mc.value - th) / (k * mc.se);
      c.expect(std::abs(z) <= 3.0, fmt("autocorr D=%g lambda=%g t=%g", p.D, p.lambda, t));
      c.note(fmt("rho(%g,t=%g)", p.D, t) + fmt(" %.2f SE", z));
    }
  }
  return c.outcome();
}

// 6. Identical time changes collapse the cross-correlation.
Outcome reduction_identity() {
  Checks c;
  for (const ModelParams& p : {kDjia, kFtse, ModelParams{0.3, 0.01, 2.0}}) {
    const CouplingParams cp{{p.D, p.sigma}, {p.D, p.sigma}, p.lambda, 0.0, 0.0, 0.0};
    double sup = 0.0;
    for (int t = 0; t <= 400; ++t) {
      sup = std::max(sup, std::abs(cross_corr_limit(cp, t) - autocorr_limit(p, t)));
    }
    c.expect(sup <= 1e-8, fmt("D=%g sup error %.2e", p.D, sup));
    c.note(fmt("D=%g sup=%.1e", p.D, sup));
  }
  return c.outcome();
}

ShockTrain geometry_train(double T, double m, double alpha) {
  return ShockTrain({-1e6, T - m - alpha, T - m, T + 1e6});
}

// 7. Q_T geometry.
Outcome q_geometry() {
  Checks c;
  const double d = 1e-4;
  const std::vector<double> Ds{0.05, 0.15, 0.25, 0.35, 0.45};
  const std::vector<double> alphas{0.5, 1.0, 2.0, 5.0, 10.0};
  const std::vector<double> ratios{0.1, 0.3, 0.5, 0.7, 0.9, 1.1, 1.3, 2.0, 4.0};
  int wrong = 0, cases = 0;
  for (double D : Ds) {
    const ModelParams p{D, 1.0, 1.0};
    const double K = std::pow(1.0 / (2.0 * D), 1.0 / (1.0 - 2.0 * D));
    for (double alpha : alphas) {
      for (double r : ratios) {
        const double m = std::round(r * K * alpha / d) * d;
        const double T = m + alpha + 10.0;
        const auto q = q_profile(p, geometry_train(T, m, alpha), T,
                                 std::vector<double>{m - d, m, m + d});
        const bool peak = q[1] > q[0] && q[1] > q[2];
        ++cases;
        if (peak != (m < K * alpha)) ++wrong;
      }
      double prev = -INFINITY;
      bool monotone = true;
      for (int e = 1; e <= 10; ++e) {
        const double m = std::ldexp(1.0, -e);
        const double T = m + alpha + 10.0;
        const auto q = q_profile(p, geometry_train(T, m, alpha), T,
                                 std::vector<double>{m, alpha + m});
        monotone = monotone && q[0] - q[1] > prev;
        prev = q[0] - q[1];
      }
      c.expect(monotone, fmt("blow-up not monotone at D=%g alpha=%g", D, alpha));
    }
  }
  c.expect(wrong == 0, std::to_string(wrong) + " misclassified");
  c.note(std::to_string(cases) + " cases, " + std::to_string(wrong) + " misclassified");
  return c.outcome();
}

// 8. Detector recovery and null.
Outcome detector_recovery() {
  Checks c;
  const std::size_t n = 7250, window = 250;
  DetectorConfig cfg;
  cfg.M = 1000;
  int worst = 10, false_total = 0, null_clean = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    Engine eng = make_engine({801, s});
    std::uniform_real_distribution<double> jitter(-60.0, 60.0);
    std::vector<double> epochs{-400.5};
    for (int j = 0; j < 10; ++j) {
      epochs.push_back(window + 1025.0 + 570.0 * j + std::round(jitter(eng)) + 0.5);
    }
    epochs.push_back(1e5);
    const ShockTrain train(epochs, -1.0, static_cast<double>(n));
    const auto path = simulate_path(kDjia, train, uniform_grid(n - 1, 1.0), {802, s});
    const auto rep = scan_history(detrended(path.X), cfg);
    std::vector<double> truth;
    for (std::size_t j = 1; j + 1 < epochs.size(); ++j) {
      truth.push_back(std::ceil(epochs[j]) - static_cast<double>(window));
    }
    auto near_truth = [&](std::size_t idx) {
      return std::any_of(truth.begin(), truth.end(), [&](double t) {
        return std::abs(static_cast<double>(idx) - t) <= cfg.merge_window;
      });
    };
    int recovered = 0;
    for (double t : truth) {
      recovered += std::any_of(rep.shocks.begin(), rep.shocks.end(), [&](const DetectedShock& sh) {
        return sh.klass != ShockClass::Questionable &&
               std::abs(static_cast<double>(sh.index) - t) <= cfg.merge_window;
      });
    }
    for (const auto& sh : rep.shocks) {
      false_total += sh.klass != ShockClass::Questionable && !near_truth(sh.index);
    }
    worst = std::min(worst, recovered);

    Engine noise = make_engine({803, s});
    std::normal_distribution<double> z(0.0, 0.01);
    std::vector<double> w(7000, 0.0);
    for (std::size_t i = 1; i < w.size(); ++i) w[i] = w[i - 1] + z(noise);
    const auto null = scan_history(as_series(w), cfg);
    null_clean += std::none_of(null.shocks.begin(), null.shocks.end(), [](const DetectedShock& sh) {
      return sh.klass != ShockClass::Questionable;
    });
  }
  c.expect(worst >= 8, "a seed recovered fewer than 8 of 10");
  c.expect(false_total == 0, std::to_string(false_total) + " false confirmed shocks");
  c.expect(null_clean >= 19, "null produced confirmed shocks in more than 1 of 20 seeds");
  c.note("min recovered " + std::to_string(worst) + "/10, false " + std::to_string(false_total) +
         ", clean nulls " + std::to_string(null_clean) + "/20");
  return c.outcome();
}

// 9. E[v_hat(k) | train] = Q_T(k).
Outcome conditional_expectation() {
  Checks c;
  const double T = 1000.0;
  const ShockTrain train({-2000.5, 300.7, 880.3, 949.6, 1e6}, -1.0, T);
  std::vector<double> grid;
  for (int j = 0; j <= 100; ++j) grid.push_back(T - 100.0 + j);
  const std::vector<std::size_t> ks{1, 10, 100};
  const std::size_t reps = 20000;
  const auto rows = parallel_map<std::vector<double>>(reps, [&](std::size_t r) {
    const auto path = simulate_path(kDjia, train, grid, Seed{901, 0}.child(r));
    std::vector<double> out;
    for (std::size_t k : ks) out.push_back(v_hat(path.X, 100, k));
    return out;
  });
  for (std::size_t j = 0; j < ks.size(); ++j) {
    std::vector<double> col;
    for (const auto& row : rows) col.push_back(row[j]);
    const double m = mean(col), se = sample_sd(col) / std::sqrt(static_cast<double>(reps));
    const double q = q_profile(kDjia, train, T, std::vector<double>{static_cast<double>(ks[j])})[0];
    c.expect(std::abs(m - q) <= 3.0 * se, fmt("k=%g off", static_cast<double>(ks[j])));
    c.note(fmt("k=%g: %.2f SE", static_cast<double>(ks[j]), (m - q) / se));
  }
  return c.outcome();
}

// 10. Calibration self-consistency.
Outcome calibration() {
  Checks c;
  const std::size_t reps = 10, days = 200000, burn = 250;
  const auto uni = parallel_map<ModelParams>(reps, [&](std::size_t r) {
    const auto x = simulated_log_price(kDjia, days + burn - 1, 1.0, Seed{1001, 0}.child(r));
    return calibrate_univariate(detrended(x)).params;
  });
  std::vector<double> Ds, ls, ss;
  for (const auto& p : uni) {
    Ds.push_back(p.D);
    ls.push_back(p.lambda);
    ss.push_back(p.sigma);
  }
  const double mD = median(Ds), ml = median(ls), ms = median(ss);
  c.expect(std::abs(mD - kDjia.D) <= 0.03, "median D");
  c.expect(std::abs(ml / kDjia.lambda - 1.0) <= 0.4, "median lambda");
  c.expect(std::abs(ms / kDjia.sigma - 1.0) <= 0.1, "median sigma");
  c.note(fmt("median (D, lambda, sigma) = (%.4f, %.5f, %.4f)", mD, ml, ms));

  const CalibrationTargets targets;
  const auto l1 = parallel_map<double>(reps, [&](std::size_t r) {
    const auto s = simulate_bivariate(kTriple, uniform_grid(days + burn - 1, 1.0),
                                      Seed{1002, 0}.child(r));
    const auto xf = detrended(s.x.X);
    const auto xd = detrended(s.y.X);
    const auto fx = calibrate_univariate(xf, targets).params;
    const auto fy = calibrate_univariate(xd, targets).params;
    const auto rep = calibrate_coupling(xf, xd, fx, fy, targets.lag_grid);
    return rep.coupling->lambda1;
  });
  const double m1 = median(l1);
  c.expect(std::abs(m1 / kTriple.lambda1 - 1.0) <= 0.3, "median lambda1");
  c.note(fmt("median lambda1 = %.5f", m1));
  return c.outcome();
}

// Index of the first date on or after `date`.
std::optional<std::size_t> index_of(const DetrendedSeries& x, const std::string& date) {
  const auto it = std::lower_bound(x.dates.begin(), x.dates.end(), date);
  if (it == x.dates.end()) return std::nullopt;
  return static_cast<std::size_t>(it - x.dates.begin());
}

// 11. Real index data.
Outcome real_data() {
  const char* djia_path = std::getenv("VOLJUMP_DJIA_CSV");
  const char* ftse_path = std::getenv("VOLJUMP_FTSE_CSV");
  if (!djia_path || !ftse_path) {
    return {Verdict::Skip, "set VOLJUMP_DJIA_CSV and VOLJUMP_FTSE_CSV to run"};
  }
  Checks c;
  auto load = [](const char* path) {
    auto s = ingest(path);
    PriceSeries cut;
    for (std::size_t i = 0; i < s.prices.size(); ++i) {
      if (s.dates[i] >= "1984-04-02" && s.dates[i] <= "2013-07-06") {
        cut.dates.push_back(s.dates[i]);
        cut.prices.push_back(s.prices[i]);
      }
    }
    return detrend(cut);
  };
  const auto xd = load(djia_path);
  const auto xf = load(ftse_path);
  const CalibrationTargets targets;
  const auto fd = calibrate_univariate(xd, targets).params;
  const auto ff = calibrate_univariate(xf, targets).params;
  auto within = [&](const ModelParams& got, const ModelParams& want, const std::string& name) {
    c.expect(std::abs(got.D / want.D - 1.0) <= 0.2, name + " D");
    c.expect(std::abs(got.lambda / want.lambda - 1.0) <= 0.2, name + " lambda");
    c.expect(std::abs(got.sigma / want.sigma - 1.0) <= 0.2, name + " sigma");
    c.note(name + fmt(" (%.4f, %.5f, %.4f)", got.D, got.lambda, got.sigma));
  };
  within(fd, kDjia, "DJIA");
  within(ff, kFtse, "FTSE");

  DetectorConfig cfg;
  auto has_shock = [&](const DetrendedSeries& x, const ShockReport& rep, const std::string& date,
                       const std::string& name) {
    const auto idx = index_of(x, date);
    const bool found = idx && std::any_of(rep.shocks.begin(), rep.shocks.end(), [&](const auto& sh) {
      return std::abs(static_cast<double>(sh.index) - static_cast<double>(*idx)) <=
             static_cast<double>(cfg.merge_window);
    });
    c.expect(found, name + " shock near " + date + " missing");
  };
  const auto rd = scan_history(xd, cfg);
  for (const char* d : {"1987-09-15", "2001-09-06", "2008-09-15", "2011-08-05"}) {
    has_shock(xd, rd, d, "DJIA");
  }
  const auto rf = scan_history(xf, cfg);
  for (const char* d : {"1987-10-14", "2001-09-06", "2008-09-03", "2011-08-05"}) {
    has_shock(xf, rf, d, "FTSE");
  }
  const auto rep = calibrate_coupling(xf, xd, ff, fd, targets.lag_grid);
  c.expect(rep.coupling && rep.coupling->lambda3 == 0.0, "lambda3 not at the boundary");
  if (rep.coupling) {
    c.note(fmt("triple (%.5f, %.5f, %.5f)", rep.coupling->lambda1, rep.coupling->lambda2,
               rep.coupling->lambda3));
  }
  return c.outcome();
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  Outcome (*run)();
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "Black-Scholes reduction", 10.0, black_scholes},
      {2, "multiscaling recovery", 120.0, multiscaling},
      {3, "autocorrelation law", 300.0, autocorrelation_law},
      {4, "cross-correlation law", 600.0, crosscorrelation_law},
      {5, "quadrature vs Monte Carlo", 180.0, quadrature_vs_mc},
      {6, "reduction identity", 30.0, reduction_identity},
      {7, "Q_T geometry", 30.0, q_geometry},
      {8, "detector recovery", 120.0, detector_recovery},
      {9, "conditional expectation", 60.0, conditional_expectation},
      {10, "calibration self-consistency", 900.0, calibration},
      {11, "real index data", INFINITY, real_data},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& cr : all) {
    if (!wanted.empty() && !wanted.count(cr.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = cr.run();
    } catch (const std::exception& e) {
      out = {Verdict::Fail, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (out.verdict != Verdict::Skip && secs > cr.limit_seconds) {
      out.verdict = Verdict::Fail;
      out.detail += fmt(" | over time limit of %.0f s", cr.limit_seconds);
    }
    const char* tag = out.verdict == Verdict::Pass ? "PASS" : out.verdict == Verdict::Fail ? "FAIL" : "SKIP";
    std::printf("criterion %2d %-30s %s (%.1f s) %s\n", cr.id, cr.name, tag, secs,
                out.detail.c_str());
    std::fflush(stdout);
    failures += out.verdict == Verdict::Fail;
  }
  return failures == 0 ? 0 : 1;
}
