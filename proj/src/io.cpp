#include "voljump/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "voljump/error.hpp"

namespace voljump {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string where(const std::string& source, std::size_t line) {
  return source + ":" + std::to_string(line) + ": ";
}

nlohmann::json number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

PriceSeries parse_prices(std::istream& in, const std::string& source,
                         std::vector<std::string>* warnings) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!trim(line).empty()) break;
  }
  require(trim(line) == "date,close", ErrorKind::ParseError,
          where(source, lineno) + "expected header 'date,close'");
  PriceSeries s;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto comma = t.find(',');
    require(comma != std::string::npos && t.find(',', comma + 1) == std::string::npos,
            ErrorKind::ParseError, where(source, lineno) + "expected two fields");
    const std::string date = trim(t.substr(0, comma));
    const std::string price = trim(t.substr(comma + 1));
    require(is_iso_date(date), ErrorKind::ParseError,
            where(source, lineno) + "invalid date '" + date + "'");
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(price, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    require(used == price.size() && !price.empty(), ErrorKind::ParseError,
            where(source, lineno) + "invalid price '" + price + "'");
    require(std::isfinite(v) && v > 0.0, ErrorKind::NonPositivePrice,
            where(source, lineno) + "price must be positive, got '" + price + "'");
    if (!s.dates.empty()) {
      require(date > s.dates.back(), ErrorKind::NonMonotoneDates,
              where(source, lineno) + "date " + date + " does not follow " +
                  s.dates.back());
      const long gap = days_between(s.dates.back(), date);
      if (warnings && gap > 7) {
        warnings->push_back(where(source, lineno) + "gap of " + std::to_string(gap) +
                            " days before " + date);
      }
    }
    s.dates.push_back(date);
    s.prices.push_back(v);
  }
  return s;
}

PriceSeries ingest(const std::string& path, std::vector<std::string>* warnings) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::ConfigError, "cannot open '" + path + "'");
  return parse_prices(in, path, warnings);
}

void write_prices(std::ostream& out, const PriceSeries& s) {
  out << "date,close\n";
  for (std::size_t i = 0; i < s.prices.size(); ++i) {
    out << s.dates[i] << ',' << format_double(s.prices[i]) << '\n';
  }
}

void write_path(std::ostream& out, const PathSample& path) {
  out << "t,X,I,v\n";
  for (std::size_t i = 0; i < path.grid.size(); ++i) {
    out << format_double(path.grid[i]) << ',' << format_double(path.X[i]) << ','
        << format_double(path.I[i]) << ',' << format_double(path.v[i]) << '\n';
  }
}

void write_train(std::ostream& out, const ShockTrain& train) {
  out << "epoch\n";
  for (double e : train.epochs()) out << format_double(e) << '\n';
}

void write_curve(std::ostream& out, const CorrDecayCurve& curve) {
  write_xy(out, curve.lags, curve.values, "lag,value");
}

void write_estimates(std::ostream& out, std::span<const EstimateRow> rows,
                     const std::string& first_column) {
  out << first_column << ",value,stderr\n";
  for (const auto& r : rows) {
    out << format_double(r.lag) << ',' << format_double(r.value) << ','
        << format_double(r.std_error) << '\n';
  }
}

void write_xy(std::ostream& out, std::span<const double> x, std::span<const double> y,
              const std::string& header) {
  require(x.size() == y.size(), ErrorKind::InvalidParameter, "column lengths differ");
  out << header << '\n';
  for (std::size_t i = 0; i < x.size(); ++i) {
    out << format_double(x[i]) << ',' << format_double(y[i]) << '\n';
  }
}

void write_shocks(std::ostream& out, const ShockReport& report) {
  out << "date,count,class\n";
  for (const auto& s : report.shocks) {
    out << s.date << ',' << s.count << ',' << to_string(s.klass) << '\n';
  }
}

void write_histogram(std::ostream& out, const ShockReport& report,
                     const std::vector<std::string>& dates) {
  out << "index,date,count\n";
  for (const auto& [index, count] : report.histogram) {
    out << index << ',' << (index < dates.size() ? dates[index] : "") << ',' << count
        << '\n';
  }
}

std::string shock_report_json(const ShockReport& report) {
  nlohmann::json j;
  const auto& c = report.config;
  j["config"] = {{"M", c.M},
                 {"drop", c.drop},
                 {"confirm_shifts", c.confirm_shifts},
                 {"confirm_step", c.confirm_step},
                 {"threshold", c.threshold},
                 {"min_count", c.min_count},
                 {"merge_window", c.merge_window},
                 {"min_contrast", c.min_contrast}};
  j["threshold"] = report.threshold;
  j["flat_windows"] = report.flat_windows;
  j["weak_windows"] = report.weak_windows;
  j["shocks"] = nlohmann::json::array();
  for (const auto& s : report.shocks) {
    j["shocks"].push_back({{"index", s.index},
                           {"date", s.date},
                           {"count", s.count},
                           {"class", std::string(to_string(s.klass))}});
  }
  j["histogram"] = nlohmann::json::array();
  for (const auto& [index, count] : report.histogram) {
    j["histogram"].push_back({index, count});
  }
  return j.dump(2) + "\n";
}

std::string calibration_json(const CalibrationReport& report) {
  nlohmann::json j;
  j["params"] = {{"D", number(report.params.D)},
                 {"lambda", number(report.params.lambda)},
                 {"sigma", number(report.params.sigma)}};
  if (report.coupling) {
    const auto& cp = *report.coupling;
    j["coupling"] = {{"lambda1", number(cp.lambda1)},
                     {"lambda2", number(cp.lambda2)},
                     {"lambda3", number(cp.lambda3)},
                     {"D_x", number(cp.x.D)},
                     {"sigma_x", number(cp.x.sigma)},
                     {"D_y", number(cp.y.D)},
                     {"sigma_y", number(cp.y.sigma)}};
  }
  j["objective"] = number(report.objective);
  j["boundary"] = report.boundary;
  j["trace"] = nlohmann::json::array();
  for (const auto& t : report.trace) {
    j["trace"].push_back({{"D", number(t.D)},
                          {"lambda", number(t.lambda)},
                          {"objective", number(t.objective)}});
  }
  j["diagnostics"] = nlohmann::json::array();
  for (const auto& r : report.diagnostics) {
    j["diagnostics"].push_back({{"target", r.target},
                                {"abscissa", number(r.abscissa)},
                                {"empirical", number(r.empirical)},
                                {"theory", number(r.theory)}});
  }
  return j.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorKind::ConfigError,
          "cannot write '" + path + "'");
  out << text;
  require(static_cast<bool>(out), ErrorKind::ConfigError,
          "failed writing '" + path + "'");
}

}  // namespace voljump
