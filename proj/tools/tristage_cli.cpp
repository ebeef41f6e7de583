// Command-line front end: load a scenario config, run it, emit the report.
//
// Exit codes: 0 run completed, 1 config rejected, 2 runtime failure,
// 3 run completed but a protocol property was violated.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "tristage/runner.hpp"

namespace {

int run_command(const std::string& config_path, const CLI::App& cmd, long trials, std::uint64_t seed,
                const std::string& transcript_mode, const std::string& out_path) {
  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "config error: cannot open " << config_path << "\n";
    return 1;
  }
  std::ostringstream buf;
  buf << in.rdbuf();

  tristage::ScenarioConfig cfg;
  try {
    cfg = tristage::parse_config(buf.str());
  } catch (const tristage::ConfigParseError& e) {
    std::cerr << "config error: " << config_path << ":\n" << e.what() << "\n";
    return 1;
  }

  if (cmd.count("--trials")) {
    if (trials < 1) {
      std::cerr << "config error: --trials must be >= 1\n";
      return 1;
    }
    cfg.trials = trials;
  }
  if (cmd.count("--seed")) cfg.seed = seed;

  tristage::ScenarioReport rep;
  try {
    rep = tristage::run_scenario(cfg);
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return 2;
  }

  const std::string text = rep.to_json(transcript_mode == "full").dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "runtime error: cannot write " << out_path << "\n";
      return 2;
    }
    out << text;
  }

  if (!rep.property_violations.empty()) {
    for (const auto& v : rep.property_violations) std::cerr << "property violation: " << v << "\n";
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Three-stage commuting-transform protocol simulator"};
  app.require_subcommand(1);

  std::string config_path, out_path, transcript_mode = "full";
  long trials = 0;
  std::uint64_t seed = 0;

  CLI::App* run = app.add_subcommand("run", "Run a scenario config and print its report");
  run->add_option("config", config_path, "Path to a scenario config (JSON)")->required();
  run->add_option("--trials", trials, "Override the config's trial count");
  run->add_option("--seed", seed, "Override the config's seed");
  run->add_option("--transcript", transcript_mode, "Report transcript detail")
      ->check(CLI::IsMember({"full", "digest"}))
      ->capture_default_str();
  run->add_option("--out", out_path, "Write the report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 1 : 0;
  }

  return run_command(config_path, *run, trials, seed, transcript_mode, out_path);
}
