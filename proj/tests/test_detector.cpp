#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>

#include "voljump/detector.hpp"
#include "voljump/error.hpp"
#include "voljump/io.hpp"
#include "voljump/model.hpp"

using namespace voljump;

namespace {

const std::vector<double> kHand{0.0, 1.0, 0.0, 2.0};

DetectorConfig small_config(std::size_t M, std::size_t drop) {
  DetectorConfig cfg;
  cfg.M = M;
  cfg.drop = drop;
  return cfg;
}

// Gaussian increments with standard deviation `low` before `at`; from `at` on
// the variance gets an extra high^2 (i - at + 1)^(-0.72), so the first loud
// increment is x[at] - x[at-1] and the burst decays like a model shock.
DetrendedSeries burst_series(std::size_t n, std::size_t at, double low, double high,
                             std::uint64_t seed) {
  Engine eng = make_engine({seed, 0});
  std::normal_distribution<double> z;
  std::vector<double> x(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    double var = low * low;
    if (i >= at) var += high * high * std::pow(static_cast<double>(i - at + 1), -0.72);
    x[i] = x[i - 1] + std::sqrt(var) * z(eng);
  }
  return as_series(std::move(x));
}

// Train with the last shock m before T and the one before it alpha earlier.
ShockTrain geometry_train(double T, double m, double alpha) {
  return ShockTrain({-1e6, T - m - alpha, T - m, T + 1e6});
}

class ThreadsGuard {
 public:
  explicit ThreadsGuard(const char* value) {
    if (const char* old = std::getenv("VOLJUMP_THREADS")) saved_ = old;
    setenv("VOLJUMP_THREADS", value, 1);
  }
  ~ThreadsGuard() {
    if (saved_.empty()) unsetenv("VOLJUMP_THREADS");
    else setenv("VOLJUMP_THREADS", saved_.c_str(), 1);
  }

 private:
  std::string saved_;
};

}  // namespace

TEST(DetectorConfig, Validation) {
  EXPECT_NO_THROW(DetectorConfig{}.validate());
  EXPECT_THROW(small_config(10, 10).validate(), Error);
  DetectorConfig cfg;
  cfg.threshold = 0.5;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = {};
  EXPECT_DOUBLE_EQ(cfg.effective_threshold(7368), 80.0);
  EXPECT_DOUBLE_EQ(cfg.effective_threshold(3684), 40.0);
  EXPECT_DOUBLE_EQ(cfg.effective_min_count(7368), 20.0);
  cfg.threshold = 30.0;
  EXPECT_DOUBLE_EQ(cfg.effective_threshold(7368), 30.0);
}

TEST(VHat, HandArithmetic) {
  EXPECT_DOUBLE_EQ(v_hat(kHand, 3, 1), 4.0);
  EXPECT_DOUBLE_EQ(v_hat(kHand, 3, 2), 2.5);
  EXPECT_DOUBLE_EQ(v_hat(kHand, 3, 3), 2.0);
  EXPECT_THROW(v_hat(kHand, 3, 4), Error);
  EXPECT_THROW(v_hat(kHand, 3, 0), Error);
  const auto prof = v_hat_profile(kHand, 3, 3);
  EXPECT_EQ(prof, (std::vector<double>{4.0, 2.5, 2.0}));
}

TEST(VHat, ConstantSeriesIsZero) {
  const std::vector<double> x(50, 3.0);
  for (std::size_t k = 1; k <= 49; ++k) EXPECT_EQ(v_hat(x, 49, k), 0.0);
}

TEST(KHat, HandArithmetic) {
  EXPECT_EQ(k_hat(kHand, 3, small_config(3, 0)), std::optional<std::size_t>(1));
  EXPECT_EQ(k_hat(kHand, 3, small_config(3, 1)), std::optional<std::size_t>(2));
  EXPECT_THROW(k_hat(kHand, 2, small_config(3, 0)), Error);
}

TEST(KHat, TiesGoToMostRecent) {
  const std::vector<double> x{0.0, 1.0, 0.0, 1.0, 0.0, 1.0};
  // Every v_hat equals 1: flat.
  EXPECT_FALSE(k_hat(x, 5, small_config(5, 0)).has_value());
  const std::vector<double> y{0.0, 2.0, 0.0, 2.0, 2.0, 2.0};
  // v_hat: 0, 0, 4/3, 2, 2.4 -> max at k = 5.
  EXPECT_EQ(k_hat(y, 5, small_config(5, 0)), std::optional<std::size_t>(5));
  const std::vector<double> z{0.0, 0.0, 1.0, 1.0, 2.0, 2.0};
  // v_hat: 0, 0.5, 1/3, 0.5, 0.4 -> tie between k = 2 and k = 4.
  EXPECT_EQ(k_hat(z, 5, small_config(5, 0)), std::optional<std::size_t>(2));
  const std::vector<double> w{0.0, 1.0, 1.0, 2.0};
  // v_hat: 1, 0.5, 2/3 -> with drop 1, range {2, 3}.
  EXPECT_EQ(k_hat(w, 3, small_config(3, 1)), std::optional<std::size_t>(3));
}

TEST(KHat, InvariantUnderShiftAndScale) {
  const auto s = burst_series(3000, 2500, 0.01, 0.03, 1);
  const auto cfg = small_config(1000, 20);
  const auto base = k_hat(s.x, 2999, cfg);
  ASSERT_TRUE(base.has_value());
  auto shifted = s.x;
  for (double& v : shifted) v += 12.5;
  auto scaled = s.x;
  for (double& v : scaled) v *= -3.0;
  EXPECT_EQ(k_hat(shifted, 2999, cfg), base);
  EXPECT_EQ(k_hat(scaled, 2999, cfg), base);
  for (std::size_t k : {1u, 40u, 999u}) {
    EXPECT_NEAR(v_hat(shifted, 2999, k), v_hat(s.x, 2999, k), 1e-12);
  }
}

TEST(KHat, DropSkipsRecentPeak) {
  const auto s = burst_series(2000, 1995, 0.01, 0.05, 2);
  const auto k = k_hat(s.x, 1999, small_config(1000, 20));
  ASSERT_TRUE(k.has_value());
  EXPECT_GE(*k, 21u);
}

TEST(LastShockEstimate, IndexArithmetic) {
  DetrendedSeries s{{"d0", "d1", "d2", "d3"}, kHand};
  const auto est = last_shock_estimate(s, 3, small_config(3, 0));
  ASSERT_TRUE(est.has_value());
  EXPECT_EQ(est->k, 1u);
  EXPECT_EQ(est->index, 3u);
  EXPECT_EQ(est->date, "d3");
}

TEST(LastShockEstimate, FindsInjectedBurst) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto s = burst_series(3000, 2400, 0.01, 0.1, 10 + seed);
    const auto est = last_shock_estimate(s, 2999, small_config(1000, 20));
    ASSERT_TRUE(est.has_value());
    EXPECT_LE(std::abs(static_cast<double>(est->index) - 2400.0), 10.0) << seed;
  }
}

TEST(KHat, SimulatedSingleShockWithinFiveDays) {
  // Shock 98.5 days before the end, previous one 2400 days earlier, sampled
  // four times a day.
  const ModelParams p{0.14, 0.0014, 0.127};
  const double T = 1500.0, m = 98.5, step = 0.25;
  const std::size_t n = 6000;
  const ShockTrain train({-1000.0, T - m, 1e6}, -1.0, T);
  const auto grid = uniform_grid(n, step);
  const auto cfg = small_config(4000, 0);
  int hits = 0;
  for (std::uint64_t r = 0; r < 500; ++r) {
    const auto path = simulate_path(p, train, grid, Seed{40, 0}.child(r));
    const auto k = k_hat(path.X, n, cfg);
    if (k && std::abs(static_cast<double>(*k) * step - m) <= 5.0) ++hits;
  }
  EXPECT_GE(hits, 450);
}

TEST(ConfirmShock, SingleShockConfirmed) {
  const auto s = burst_series(3000, 2400, 0.01, 0.04, 3);
  const auto rec = confirm_shock(s, 2999, small_config(1000, 20));
  ASSERT_EQ(rec.estimates.size(), 4u);
  EXPECT_TRUE(rec.confirmed);
  EXPECT_FALSE(rec.flat);
  for (const auto& e : rec.estimates) {
    ASSERT_TRUE(e.has_value());
    EXPECT_LE(std::abs(static_cast<double>(e->index) - 2400.0), 10.0);
  }
}

TEST(ConfirmShock, ConstantSeriesIsFlat) {
  const auto s = as_series(std::vector<double>(2000, 1.0));
  const auto rec = confirm_shock(s, 1999, small_config(500, 20));
  EXPECT_FALSE(rec.confirmed);
  EXPECT_TRUE(rec.flat);
}

TEST(ConfirmShock, TwoShocksMaySplit) {
  // An older, larger burst and a newer, smaller one: early windows see the
  // older one, later windows the newer.
  Engine eng = make_engine({4, 0});
  std::normal_distribution<double> z;
  std::vector<double> x(3000, 0.0);
  for (std::size_t i = 1; i < x.size(); ++i) {
    double sd = 0.01;
    if (i >= 2200 && i < 2400) sd = 0.08;
    if (i >= 2900) sd = 0.03;
    x[i] = x[i - 1] + sd * z(eng);
  }
  const auto rec = confirm_shock(as_series(x), 2999, small_config(1000, 20));
  std::size_t near_old = 0;
  for (const auto& e : rec.estimates) {
    if (e && std::abs(static_cast<double>(e->index) - 2200.0) <= 10.0) ++near_old;
  }
  EXPECT_GE(near_old, 1u);
}

TEST(ConfirmShock, NeedsRoomForShifts) {
  const auto s = burst_series(1100, 900, 0.01, 0.04, 5);
  EXPECT_THROW(confirm_shock(s, 1050, small_config(1000, 20)), Error);
}

TEST(ClassifyHistogram, Classes) {
  std::vector<std::size_t> counts(200, 0);
  std::vector<std::string> dates(200);
  for (std::size_t i = 0; i < dates.size(); ++i) dates[i] = "d" + std::to_string(i);
  counts[20] = 100;  // confirmed
  counts[60] = 50;   // questionable
  counts[100] = 45;  // two sparse peaks merging
  counts[106] = 40;
  counts[150] = 10;  // below min_count: ignored
  const auto shocks = classify_histogram(counts, dates, 80.0, 20.0, 10);
  ASSERT_EQ(shocks.size(), 3u);
  EXPECT_EQ(shocks[0].index, 20u);
  EXPECT_EQ(shocks[0].klass, ShockClass::Confirmed);
  EXPECT_EQ(shocks[1].index, 60u);
  EXPECT_EQ(shocks[1].klass, ShockClass::Questionable);
  EXPECT_EQ(shocks[2].index, 100u);
  EXPECT_EQ(shocks[2].date, "d100");
  EXPECT_EQ(shocks[2].count, 85u);
  EXPECT_EQ(shocks[2].klass, ShockClass::SparseMerged);
  EXPECT_EQ(to_string(ShockClass::SparseMerged), "sparse-merged");
}

TEST(ScanHistory, ConfirmedShocksMeetThreshold) {
  const auto s = burst_series(5000, 3000, 0.01, 0.04, 6);
  const auto rep = scan_history(s, small_config(1000, 20));
  bool found = false;
  for (const auto& sh : rep.shocks) {
    if (sh.klass == ShockClass::Confirmed) EXPECT_GE(static_cast<double>(sh.count), rep.threshold);
    if (std::abs(static_cast<double>(sh.index) - 3000.0) <= 10.0 &&
        sh.klass != ShockClass::Questionable) {
      found = true;
    }
  }
  EXPECT_TRUE(found);
  for (std::size_t i = 1; i < rep.shocks.size(); ++i) {
    EXPECT_LT(rep.shocks[i - 1].index, rep.shocks[i].index);
  }
}

TEST(ScanHistory, IdenticalAcrossWorkerCounts) {
  const auto s = burst_series(4000, 2500, 0.01, 0.04, 7);
  std::string one, four;
  {
    ThreadsGuard g("1");
    one = shock_report_json(scan_history(s, small_config(1000, 20)));
  }
  {
    ThreadsGuard g("4");
    four = shock_report_json(scan_history(s, small_config(1000, 20)));
  }
  EXPECT_EQ(one, four);
  EXPECT_EQ(one, shock_report_json(scan_history(s, small_config(1000, 20))));
}

TEST(ScanHistory, RequiresLongerSeriesThanWindow) {
  const auto s = burst_series(500, 300, 0.01, 0.04, 8);
  EXPECT_THROW(scan_history(s, small_config(1000, 20)), Error);
}

TEST(QProfile, LocalMaximumIffBelowCriticalRatio) {
  // D = 0.25: K = 4. alpha = 1, m = 0.5 has a peak; m = 6 does not.
  const ModelParams p{0.25, 1.0, 1.0};
  const double T = 100.0, d = 1e-4;
  for (const auto& [m, peak] : {std::pair{0.5, true}, std::pair{6.0, false}}) {
    const auto q = q_profile(p, geometry_train(T, m, 1.0), T, std::vector<double>{m - d, m, m + d});
    EXPECT_EQ(q[1] > q[0] && q[1] > q[2], peak) << m;
  }
}

TEST(QProfile, PeakHeightDivergesAsShockApproaches) {
  const ModelParams p{0.25, 1.0, 1.0};
  const double T = 100.0, alpha = 1.0;
  double prev = -1e300;
  for (int e = 1; e <= 10; ++e) {
    const double m = std::ldexp(1.0, -e);
    const auto q = q_profile(p, geometry_train(T, m, alpha), T, std::vector<double>{m, alpha + m});
    EXPECT_GT(q[0] - q[1], prev);
    prev = q[0] - q[1];
  }
  EXPECT_GT(prev, 10.0);
}

TEST(QProfile, GlobalMaximumOverGapAtShock) {
  // With m < K alpha the maximum over (0, gamma) sits at m, gamma being the
  // interior minimum beyond m.
  for (double D : {0.1, 0.25, 0.4}) {
    const ModelParams p{D, 1.0, 1.0};
    const double K = std::pow(1.0 / (2.0 * D), 1.0 / (1.0 - 2.0 * D));
    const double alpha = 2.0, m = 0.5 * K * alpha, T = 100.0;
    const auto train = geometry_train(T, m, alpha);
    std::vector<double> ts;
    for (double t = 1e-4; t < m + alpha; t += 1e-4) ts.push_back(t);
    const auto q = q_profile(p, train, T, ts);
    std::size_t gamma = 0;
    for (std::size_t i = 1; i + 1 < q.size(); ++i) {
      if (ts[i] > m && q[i] <= q[i - 1] && q[i] <= q[i + 1]) {
        gamma = i;
        break;
      }
    }
    ASSERT_GT(gamma, 0u) << D;
    const auto best = std::max_element(q.begin(), q.begin() + gamma) - q.begin();
    EXPECT_NEAR(ts[best], m, 1e-4) << D;
  }
}

TEST(QProfile, DiscreteArgmaxConverges) {
  // Discrete profile on a uniform grid of n points over [0, T]; the median
  // distance between its argmax and m halves with each fourfold refinement.
  // m n has fractional part 1/3 on every grid, so the cell offset is the same.
  const ModelParams p{0.25, 1.0, 1.0};
  const double T = 1.0, m = (51.0 + 1.0 / 3.0) / 512.0;
  const ShockTrain train({-1.0, T - m, 10.0}, -1.0, T);
  std::vector<double> medians;
  for (std::size_t n : {512u, 2048u, 8192u}) {
    const auto grid = uniform_grid(n, T / n);
    std::vector<double> err;
    for (std::uint64_t r = 0; r < 200; ++r) {
      const auto path = simulate_path(p, train, grid, Seed{41, n}.child(r));
      const auto k = k_hat(path.X, n, small_config(n, 0));
      err.push_back(k ? std::abs(*k * T / n - m) : T);
    }
    std::nth_element(err.begin(), err.begin() + 100, err.end());
    medians.push_back(err[100]);
  }
  EXPECT_LE(medians[1], 0.5 * medians[0]);
  EXPECT_LE(medians[2], 0.5 * medians[1]);
}

TEST(QProfile, OutOfWindow) {
  const ModelParams p{0.25, 1.0, 1.0};
  const ShockTrain train({-1.0, 5.0, 20.0}, -1.0, 20.0);
  EXPECT_THROW(q_profile(p, train, 10.0, std::vector<double>{30.0}), Error);
}
