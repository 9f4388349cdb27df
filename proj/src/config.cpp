#include "voljump/config.hpp"

#include <functional>
#include <sstream>

#include "voljump/error.hpp"
#include "voljump/io.hpp"

namespace voljump {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const std::string& expected) {
  fail(ErrorKind::ConfigError,
       "invalid value '" + value + "' for " + key + " (expected " + expected + ")");
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    bad_value(key, v, "a number");
  }
  if (used != v.size()) bad_value(key, v, "a number");
  return out;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  unsigned long long out = 0;
  if (v.empty() || v[0] == '-') bad_value(key, v, "a non-negative integer");
  try {
    out = std::stoull(v, &used);
  } catch (const std::exception&) {
    bad_value(key, v, "a non-negative integer");
  }
  if (used != v.size()) bad_value(key, v, "a non-negative integer");
  return out;
}

int to_int(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  int out = 0;
  try {
    out = std::stoi(v, &used);
  } catch (const std::exception&) {
    bad_value(key, v, "an integer");
  }
  if (used != v.size()) bad_value(key, v, "an integer");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad_value(key, v, "true or false");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> to_double_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& item : split_list(v)) out.push_back(to_double(key, item));
  if (out.empty()) bad_value(key, v, "a comma-separated list");
  return out;
}

// Comma-separated integers; `a..b` expands to the inclusive range.
std::vector<std::size_t> to_size_list(const std::string& key, const std::string& v) {
  std::vector<std::size_t> out;
  for (const auto& item : split_list(v)) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(to_u64(key, item));
      continue;
    }
    const auto a = to_u64(key, trim(item.substr(0, dots)));
    const auto b = to_u64(key, trim(item.substr(dots + 2)));
    if (b < a) bad_value(key, v, "an increasing range");
    for (auto i = a; i <= b; ++i) out.push_back(i);
  }
  if (out.empty()) bad_value(key, v, "a comma-separated list");
  return out;
}

template <typename T>
std::string join(const std::vector<T>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    if constexpr (std::is_floating_point_v<T>) {
      out += format_double(xs[i]);
    } else {
      out += std::to_string(xs[i]);
    }
  }
  return out;
}

struct Binding {
  std::string section;
  std::string key;
  std::function<void(const std::string&)> set;
  std::function<std::string()> get;
};

std::vector<Binding> bindings(RunConfig& c) {
  std::vector<Binding> b;
  auto real = [&](const char* s, const char* k, double& ref) {
    const std::string name = std::string(s) + "." + k;
    b.push_back({s, k, [&ref, name](const std::string& v) { ref = to_double(name, v); },
                 [&ref] { return format_double(ref); }});
  };
  auto size = [&](const char* s, const char* k, std::size_t& ref) {
    const std::string name = std::string(s) + "." + k;
    b.push_back({s, k, [&ref, name](const std::string& v) { ref = to_u64(name, v); },
                 [&ref] { return std::to_string(ref); }});
  };
  auto integer = [&](const char* s, const char* k, int& ref) {
    const std::string name = std::string(s) + "." + k;
    b.push_back({s, k, [&ref, name](const std::string& v) { ref = to_int(name, v); },
                 [&ref] { return std::to_string(ref); }});
  };
  auto text = [&](const char* s, const char* k, std::string& ref) {
    b.push_back({s, k, [&ref](const std::string& v) { ref = v; }, [&ref] { return ref; }});
  };
  auto flag = [&](const char* s, const char* k, bool& ref) {
    const std::string name = std::string(s) + "." + k;
    b.push_back({s, k, [&ref, name](const std::string& v) { ref = to_bool(name, v); },
                 [&ref] { return std::string(ref ? "true" : "false"); }});
  };

  real("model", "D", c.model.D);
  real("model", "lambda", c.model.lambda);
  real("model", "sigma", c.model.sigma);

  real("coupling", "D_x", c.coupling.x.D);
  real("coupling", "sigma_x", c.coupling.x.sigma);
  real("coupling", "D_y", c.coupling.y.D);
  real("coupling", "sigma_y", c.coupling.y.sigma);
  real("coupling", "lambda1", c.coupling.lambda1);
  real("coupling", "lambda2", c.coupling.lambda2);
  real("coupling", "lambda3", c.coupling.lambda3);
  real("coupling", "rho", c.coupling.rho);

  size("simulate", "days", c.simulate.days);
  real("simulate", "step", c.simulate.step);
  flag("simulate", "bivariate", c.simulate.bivariate);
  text("simulate", "first_date", c.simulate.first_date);
  real("simulate", "start_price", c.simulate.start_price);
  size("simulate", "burn_in", c.simulate.burn_in);

  text("input", "prices", c.input.prices);
  text("input", "prices_y", c.input.prices_y);
  size("input", "detrend_window", c.input.detrend_window);

  size("detector", "M", c.detector.M);
  size("detector", "drop", c.detector.drop);
  size("detector", "confirm_shifts", c.detector.confirm_shifts);
  size("detector", "confirm_step", c.detector.confirm_step);
  real("detector", "threshold", c.detector.threshold);
  real("detector", "min_count", c.detector.min_count);
  size("detector", "merge_window", c.detector.merge_window);
  real("detector", "min_contrast", c.detector.min_contrast);

  auto& t = c.targets;
  b.push_back({"targets", "q_grid",
               [&t](const std::string& v) { t.q_grid = to_double_list("targets.q_grid", v); },
               [&t] { return join(t.q_grid); }});
  b.push_back({"targets", "lag_grid",
               [&t](const std::string& v) { t.lag_grid = to_size_list("targets.lag_grid", v); },
               [&t] { return join(t.lag_grid); }});
  b.push_back({"targets", "h_range",
               [&t](const std::string& v) { t.h_range = to_size_list("targets.h_range", v); },
               [&t] { return join(t.h_range); }});
  real("targets", "weight_scaling", t.weight_scaling);
  real("targets", "weight_autocorr", t.weight_autocorr);

  size("search", "grid_D", c.search.grid_D);
  size("search", "grid_lambda", c.search.grid_lambda);
  real("search", "D_min", c.search.D_min);
  real("search", "D_max", c.search.D_max);
  real("search", "lambda_min", c.search.lambda_min);
  real("search", "lambda_max", c.search.lambda_max);
  size("search", "max_iterations", c.search.max_iterations);
  real("search", "tolerance", c.search.tolerance);
  size("search", "coupling_grid", c.search.coupling_grid);

  real("quadrature", "abs_tol", c.quadrature.abs_tol);
  real("quadrature", "rel_tol", c.quadrature.rel_tol);
  size("quadrature", "max_subdivisions", c.quadrature.max_subdivisions);

  text("theory", "curve", c.theory.curve);
  integer("theory", "lag_min", c.theory.lag_min);
  integer("theory", "lag_max", c.theory.lag_max);
  real("theory", "x_max", c.theory.x_max);
  size("theory", "x_points", c.theory.x_points);
  real("theory", "q_max", c.theory.q_max);
  real("theory", "q_step", c.theory.q_step);

  size("estimate", "h", c.estimate.h);
  size("estimate", "lag_max", c.estimate.lag_max);
  return b;
}

}  // namespace

IniDocument parse_ini(const std::string& text, const std::string& source) {
  IniDocument doc;
  std::stringstream in(text);
  std::string line, section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string at = source + ":" + std::to_string(lineno) + ": ";
    if (line.front() == '[') {
      require(line.back() == ']' && line.size() > 2, ErrorKind::ConfigError,
              at + "malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      doc[section];
      continue;
    }
    const auto eq = line.find('=');
    require(eq != std::string::npos, ErrorKind::ConfigError, at + "expected key = value");
    require(!section.empty(), ErrorKind::ConfigError, at + "key outside any section");
    const std::string key = trim(line.substr(0, eq));
    require(!key.empty(), ErrorKind::ConfigError, at + "empty key");
    doc[section][key] = trim(line.substr(eq + 1));
  }
  return doc;
}

void apply_override(IniDocument& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  require(eq != std::string::npos, ErrorKind::ConfigError,
          "override '" + assignment + "' must look like section.key=value");
  const std::string lhs = trim(assignment.substr(0, eq));
  const auto dot = lhs.find('.');
  require(dot != std::string::npos && dot > 0 && dot + 1 < lhs.size(),
          ErrorKind::ConfigError,
          "override '" + assignment + "' must look like section.key=value");
  doc[lhs.substr(0, dot)][lhs.substr(dot + 1)] = trim(assignment.substr(eq + 1));
}

std::optional<Command> parse_command(const std::string& name) {
  if (name == "simulate") return Command::Simulate;
  if (name == "detect") return Command::Detect;
  if (name == "estimate") return Command::Estimate;
  if (name == "calibrate") return Command::Calibrate;
  if (name == "theory") return Command::Theory;
  if (name == "crosscorr") return Command::Crosscorr;
  return std::nullopt;
}

std::string to_string(Command c) {
  switch (c) {
    case Command::Simulate: return "simulate";
    case Command::Detect: return "detect";
    case Command::Estimate: return "estimate";
    case Command::Calibrate: return "calibrate";
    case Command::Theory: return "theory";
    case Command::Crosscorr: return "crosscorr";
  }
  return "unknown";
}

RunConfig make_run_config(Command command, const IniDocument& doc) {
  RunConfig c;
  c.command = command;
  auto table = bindings(c);
  for (const auto& [section, keys] : doc) {
    bool known_section = false;
    for (const auto& b : table) known_section = known_section || b.section == section;
    require(known_section, ErrorKind::ConfigError, "unknown section [" + section + "]");
    for (const auto& [key, value] : keys) {
      bool found = false;
      for (const auto& b : table) {
        if (b.section == section && b.key == key) {
          b.set(value);
          found = true;
          break;
        }
      }
      require(found, ErrorKind::ConfigError, "unknown key '" + key + "' in [" + section + "]");
    }
  }
  try {
    c.detector.validate();
    c.targets.validate();
    c.search.validate();
    c.quadrature.validate();
  } catch (const Error& e) {
    fail(ErrorKind::ConfigError, e.what());
  }
  require(c.simulate.step > 0.0 && c.simulate.days >= 1, ErrorKind::ConfigError,
          "simulate.days and simulate.step must be positive");
  require(c.theory.lag_min >= 0 && c.theory.lag_max >= c.theory.lag_min,
          ErrorKind::ConfigError, "theory lags must satisfy 0 <= lag_min <= lag_max");
  require(c.theory.q_step > 0.0 && c.theory.q_max > 0.0 && c.theory.x_points >= 2,
          ErrorKind::ConfigError, "theory grids must be positive");
  require(c.estimate.h >= 1, ErrorKind::ConfigError, "estimate.h must be positive");
  return c;
}

std::vector<std::string> RunConfig::canonical() const {
  RunConfig copy = *this;
  std::vector<std::string> out;
  out.push_back("command=" + to_string(command));
  for (const auto& b : bindings(copy)) out.push_back(b.section + "." + b.key + "=" + b.get());
  return out;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace voljump
