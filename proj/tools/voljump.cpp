#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "voljump/config.hpp"
#include "voljump/error.hpp"
#include "voljump/run.hpp"

namespace {

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  voljump::require(static_cast<bool>(in), voljump::ErrorKind::ConfigError,
                   "cannot open config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation, detection and calibration for volatility-jump models"};
  app.set_version_flag("--version", voljump::version());

  std::string command;
  std::string config_path;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  std::vector<std::string> overrides;
  std::string curve;

  app.add_option("command", command,
                 "simulate, detect, estimate, calibrate, theory or crosscorr")
      ->required();
  app.add_option("--config", config_path, "INI configuration file")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "root seed");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--set", overrides, "section.key=value override (repeatable)");
  app.add_option("--curve", curve, "theory curve: autocorr, crosscorr, crosscov, scaling, density, all");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const auto cmd = voljump::parse_command(command);
  if (!cmd) {
    std::cerr << "error: unknown command '" << command << "'\n";
    return 1;
  }

  voljump::RunConfig config;
  try {
    auto doc = config_path.empty() ? voljump::IniDocument{}
                                   : voljump::parse_ini(read_text(config_path), config_path);
    if (!curve.empty()) voljump::apply_override(doc, "theory.curve=" + curve);
    for (const auto& o : overrides) voljump::apply_override(doc, o);
    config = voljump::make_run_config(*cmd, doc);
  } catch (const voljump::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  config.seed = seed;
  config.out_dir = out_dir;

  const auto result = voljump::run(config, std::cerr);
  if (result.exit_code == 0) {
    for (const auto& name : result.outputs) std::cout << name << '\n';
  }
  return result.exit_code;
}
