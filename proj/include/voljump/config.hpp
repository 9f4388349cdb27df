#pragma once

// Run configuration: INI-style `key = value` lines grouped in [sections],
// plus `section.key=value` overrides from the command line. Unknown sections
// and keys are rejected.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "voljump/calibrator.hpp"
#include "voljump/detector.hpp"
#include "voljump/model.hpp"
#include "voljump/quadrature.hpp"

namespace voljump {

using IniDocument = std::map<std::string, std::map<std::string, std::string>>;

/// Parses INI text; `#` and `;` start comments. Keys outside any section are
/// a config error.
IniDocument parse_ini(const std::string& text, const std::string& source = "config");

/// Applies `section.key=value`.
void apply_override(IniDocument& doc, const std::string& assignment);

enum class Command { Simulate, Detect, Estimate, Calibrate, Theory, Crosscorr };

std::optional<Command> parse_command(const std::string& name);
std::string to_string(Command c);

struct SimulateSection {
  std::size_t days = 7368;
  double step = 1.0;
  bool bivariate = false;
  std::string first_date = "1984-04-02";
  double start_price = 1000.0;
  std::size_t burn_in = 250;  ///< extra leading days so detrending can start
};

struct InputSection {
  std::string prices;    ///< first (or only) price file
  std::string prices_y;  ///< second price file for two-index commands
  std::size_t detrend_window = 250;
};

struct TheorySection {
  std::string curve = "autocorr";  ///< autocorr, crosscorr, crosscov, scaling, density, all
  int lag_min = 0;
  int lag_max = 400;
  double x_max = 0.0;  ///< 0 selects 10 sqrt(moment rate)
  std::size_t x_points = 201;
  double q_max = 6.0;
  double q_step = 0.25;
};

struct EstimateSection {
  std::size_t h = 1;
  std::size_t lag_max = 400;
};

struct RunConfig {
  Command command = Command::Theory;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  ModelParams model{0.14, 0.0014, 0.127};
  CouplingParams coupling{{0.16, 0.11}, {0.14, 0.127}, 0.0014, 0.0005, 0.0, 0.0};
  SimulateSection simulate;
  InputSection input;
  DetectorConfig detector;
  CalibrationTargets targets;
  SearchConfig search;
  QuadratureConfig quadrature;
  TheorySection theory;
  EstimateSection estimate;

  /// Canonical `section.key=value` lines for every setting; hashed into the
  /// manifest.
  std::vector<std::string> canonical() const;
};

/// Builds a RunConfig from an INI document. Missing keys keep their defaults.
RunConfig make_run_config(Command command, const IniDocument& doc);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& text);

}  // namespace voljump
