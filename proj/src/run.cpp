#include "voljump/run.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "voljump/error.hpp"
#include "voljump/io.hpp"

#ifndef VOLJUMP_VERSION
#define VOLJUMP_VERSION "0.0.0"
#endif

namespace voljump {

namespace {

class Outputs {
 public:
  explicit Outputs(std::string dir) : dir_(std::move(dir)) {}

  template <typename Writer>
  void csv(const std::string& name, Writer&& writer) {
    std::ostringstream buf;
    writer(buf);
    text(name, buf.str());
  }

  void text(const std::string& name, const std::string& body) {
    write_file((std::filesystem::path(dir_) / name).string(), body);
    names_.push_back(name);
  }

  const std::vector<std::string>& names() const { return names_; }
  const std::string& dir() const { return dir_; }

 private:
  std::string dir_;
  std::vector<std::string> names_;
};

DetrendedSeries load_detrended(const std::string& path, std::size_t window,
                               std::ostream& err) {
  require(!path.empty(), ErrorKind::ConfigError, "input.prices is not set");
  std::vector<std::string> warnings;
  const PriceSeries s = ingest(path, &warnings);
  for (const auto& w : warnings) err << "warning: " << w << '\n';
  return detrend(s, window);
}

std::vector<double> lag_range(int first, int last) { return integer_lags(first, last); }

std::vector<double> q_range(double step, double q_max) {
  std::vector<double> q;
  for (int i = 1; step * i <= q_max + 1e-12; ++i) q.push_back(step * i);
  return q;
}

std::vector<double> density_grid(const ModelParams& p, const TheorySection& t) {
  const double half = t.x_max > 0.0 ? t.x_max : 10.0 * std::sqrt(moment_rate(p));
  std::vector<double> xs(t.x_points);
  for (std::size_t i = 0; i < t.x_points; ++i) {
    xs[i] = -half + 2.0 * half * static_cast<double>(i) / static_cast<double>(t.x_points - 1);
  }
  return xs;
}

void write_prediction(Outputs& out, const PredictionBundle& b, const std::string& prefix) {
  out.csv(prefix + "scaling.csv",
          [&](std::ostream& o) { write_xy(o, b.q_grid, b.scaling, "q,value"); });
  out.csv(prefix + "autocorr.csv", [&](std::ostream& o) { write_curve(o, b.autocorr); });
  if (b.crosscorr) {
    out.csv(prefix + "crosscorr.csv", [&](std::ostream& o) { write_curve(o, *b.crosscorr); });
  }
  out.csv(prefix + "density.csv",
          [&](std::ostream& o) { write_xy(o, b.density_x, b.density, "x,f"); });
  out.csv(prefix + "histogram.csv", [&](std::ostream& o) {
    write_xy(o, b.return_histogram.centers, b.return_histogram.density, "x,f");
  });
}

void simulate(const RunConfig& c, Outputs& out) {
  const auto& s = c.simulate;
  const std::size_t n = s.days + s.burn_in;
  const auto grid = uniform_grid(n - 1, s.step);
  const Seed seed{c.seed, 0};
  const bool daily = s.step == 1.0;
  const auto dates = daily ? business_dates(s.first_date, n) : std::vector<std::string>{};
  auto prices = [&](const PathSample& path) {
    PriceSeries ps;
    ps.dates = dates;
    for (double x : path.X) ps.prices.push_back(s.start_price * std::exp(x));
    return ps;
  };
  if (!s.bivariate) {
    const auto train = sample_shock_train(c.model.lambda, -1.0, grid.back(), seed.child(0));
    const auto path = simulate_path(c.model, train, grid, seed.child(1));
    out.csv("path.csv", [&](std::ostream& o) { write_path(o, path); });
    out.csv("train.csv", [&](std::ostream& o) { write_train(o, train); });
    if (daily) out.csv("prices.csv", [&](std::ostream& o) { write_prices(o, prices(path)); });
    return;
  }
  const auto sample = simulate_bivariate(c.coupling, grid, seed);
  out.csv("path_x.csv", [&](std::ostream& o) { write_path(o, sample.x); });
  out.csv("path_y.csv", [&](std::ostream& o) { write_path(o, sample.y); });
  out.csv("train_x.csv", [&](std::ostream& o) { write_train(o, sample.train_x); });
  out.csv("train_y.csv", [&](std::ostream& o) { write_train(o, sample.train_y); });
  if (daily) {
    out.csv("prices_x.csv", [&](std::ostream& o) { write_prices(o, prices(sample.x)); });
    out.csv("prices_y.csv", [&](std::ostream& o) { write_prices(o, prices(sample.y)); });
  }
}

void detect(const RunConfig& c, Outputs& out, std::ostream& err) {
  const auto x = load_detrended(c.input.prices, c.input.detrend_window, err);
  const auto report = scan_history(x, c.detector);
  out.csv("shocks.csv", [&](std::ostream& o) { write_shocks(o, report); });
  out.csv("histogram.csv", [&](std::ostream& o) { write_histogram(o, report, x.dates); });
  out.text("shocks.json", shock_report_json(report));
}

void estimate(const RunConfig& c, Outputs& out, std::ostream& err) {
  const auto x = load_detrended(c.input.prices, c.input.detrend_window, err);
  std::vector<EstimateRow> scaling;
  for (double q : c.targets.q_grid) {
    const auto fit = fit_scaling_exponent(x, q, c.targets.h_range);
    scaling.push_back({q, fit.slope, fit.std_error});
  }
  out.csv("scaling.csv", [&](std::ostream& o) { write_estimates(o, scaling, "q"); });
  std::vector<std::size_t> lags;
  for (std::size_t t = 0; t <= c.estimate.lag_max; ++t) lags.push_back(t);
  const auto rows = autocorr_table(x, lags, c.estimate.h);
  out.csv("autocorr.csv", [&](std::ostream& o) { write_estimates(o, rows); });
}

void crosscorr(const RunConfig& c, Outputs& out, std::ostream& err) {
  require(!c.input.prices_y.empty(), ErrorKind::ConfigError, "input.prices_y is not set");
  const auto xf = load_detrended(c.input.prices, c.input.detrend_window, err);
  const auto xd = load_detrended(c.input.prices_y, c.input.detrend_window, err);
  std::vector<std::size_t> lags;
  for (std::size_t t = 0; t <= c.estimate.lag_max; ++t) lags.push_back(t);
  const auto rows = crosscorr_table(xf, xd, lags, c.estimate.h);
  out.csv("crosscorr.csv", [&](std::ostream& o) { write_estimates(o, rows); });
}

void calibrate(const RunConfig& c, Outputs& out, std::ostream& err) {
  SearchConfig search = c.search;
  search.quadrature = c.quadrature;
  const auto lags = lag_range(c.theory.lag_min, c.theory.lag_max);
  const auto qs = q_range(c.theory.q_step, c.theory.q_max);
  const auto xf = load_detrended(c.input.prices, c.input.detrend_window, err);
  const auto fx = calibrate_univariate(xf, c.targets, search);
  out.text("calibration.json", calibration_json(fx));
  if (c.input.prices_y.empty()) {
    write_prediction(out, predict_report(fx.params, std::nullopt, lags, qs, {c.seed, 0},
                                         c.quadrature),
                     "prediction_");
    return;
  }
  const auto xd = load_detrended(c.input.prices_y, c.input.detrend_window, err);
  const auto fy = calibrate_univariate(xd, c.targets, search);
  out.text("calibration_y.json", calibration_json(fy));
  const auto coupling =
      calibrate_coupling(xf, xd, fx.params, fy.params, c.targets.lag_grid, search);
  out.text("coupling.json", calibration_json(coupling));
  write_prediction(out, predict_report(fx.params, coupling.coupling, lags, qs,
                                       {c.seed, 0}, c.quadrature),
                   "prediction_");
  write_prediction(out, predict_report(fy.params, std::nullopt, lags, qs, {c.seed, 1},
                                       c.quadrature),
                   "prediction_y_");
}

void theory(const RunConfig& c, Outputs& out) {
  const auto& t = c.theory;
  const bool all = t.curve == "all";
  require(all || t.curve == "autocorr" || t.curve == "crosscorr" || t.curve == "crosscov" ||
              t.curve == "scaling" || t.curve == "density",
          ErrorKind::ConfigError, "unknown theory.curve '" + t.curve + "'");
  const auto lags = lag_range(t.lag_min, t.lag_max);
  if (all || t.curve == "autocorr") {
    const auto curve = autocorr_curve(c.model, lags, c.quadrature);
    out.csv("autocorr.csv", [&](std::ostream& o) { write_curve(o, curve); });
  }
  if (all || t.curve == "crosscorr") {
    const auto curve = crosscorr_curve(c.coupling, lags, c.quadrature);
    out.csv("crosscorr.csv", [&](std::ostream& o) { write_curve(o, curve); });
  }
  if (all || t.curve == "crosscov") {
    const auto curve = crosscov_curve(c.coupling, lags, c.quadrature);
    out.csv("crosscov.csv", [&](std::ostream& o) { write_curve(o, curve); });
  }
  if (all || t.curve == "scaling") {
    const auto qs = q_range(t.q_step, t.q_max);
    std::vector<double> a;
    for (double q : qs) a.push_back(scaling_exponent(c.model.D, q));
    out.csv("scaling.csv", [&](std::ostream& o) { write_xy(o, qs, a, "q,value"); });
  }
  if (all || t.curve == "density") {
    const auto xs = density_grid(c.model, t);
    std::vector<double> f;
    for (double x : xs) f.push_back(scaling_density(c.model, x, c.quadrature));
    out.csv("density.csv", [&](std::ostream& o) { write_xy(o, xs, f, "x,f"); });
  }
}

std::string manifest(const RunConfig& c, const std::vector<std::string>& outputs) {
  const auto lines = c.canonical();
  std::string joined;
  for (const auto& l : lines) joined += l + '\n';
  char hash[20];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(fnv1a(joined)));
  nlohmann::json j;
  j["command"] = to_string(c.command);
  j["config_hash"] = hash;
  j["seed"] = c.seed;
  j["version"] = version();
  j["outputs"] = outputs;
  j["config"] = lines;
  return j.dump(2) + "\n";
}

}  // namespace

std::string version() { return VOLJUMP_VERSION; }

RunResult run(const RunConfig& config, std::ostream& err) {
  RunResult result;
  try {
    std::error_code ec;
    std::filesystem::create_directories(config.out_dir, ec);
    require(!ec && std::filesystem::is_directory(config.out_dir), ErrorKind::ConfigError,
            "cannot create output directory '" + config.out_dir + "'");
    config.model.validate();
    config.coupling.validate();
    Outputs out(config.out_dir);
    switch (config.command) {
      case Command::Simulate: simulate(config, out); break;
      case Command::Detect: detect(config, out, err); break;
      case Command::Estimate: estimate(config, out, err); break;
      case Command::Calibrate: calibrate(config, out, err); break;
      case Command::Theory: theory(config, out); break;
      case Command::Crosscorr: crosscorr(config, out, err); break;
    }
    result.outputs = out.names();
    out.text("manifest.json", manifest(config, result.outputs));
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    result.exit_code = e.is_numerical() ? 2 : 1;
  } catch (const std::exception& e) {
    err << "error: numerical failure: " << e.what() << '\n';
    result.exit_code = 2;
  }
  return result;
}

}  // namespace voljump
