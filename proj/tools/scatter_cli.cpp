#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "scatter/cli_report.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Scatteredness, duality, rank-code and saturation checks over F_{q^6}^4"};
  app.set_help_flag("--help", "print this help");  // frees -h; --h is the field parameter
  std::string command;
  app.add_option("command", command,
                 "verify-scattered | spectrum | system-count | verify-dual | code-profile | saturating | "
                 "equivalence | field-selftest")
      ->required();

  // Every flag maps onto a config key so --config and the command line share one parser.
  const std::map<std::string, std::string> flags{
      {"--h", "h"},           {"--s", "s"},         {"--order", "order"},   {"--rho", "rho"},
      {"--codim", "codim"},   {"--family", "family"}, {"--mode", "mode"},   {"--samples", "samples"},
      {"--seed", "seed"},     {"--tries", "tries"}, {"--workers", "workers"}, {"--budget", "budget"},
      {"--degree", "degree"}, {"--modulus", "modulus_hex"}, {"--input", "input"}, {"--coeffs", "coeffs"},
      {"--out", "out"},
  };
  std::map<std::string, std::string> values;
  for (const auto& [flag, key] : flags) app.add_option(flag, values[key], "sets " + key);
  std::string config_path;
  app.add_option("--config", config_path, "flat key=value file; command-line flags take precedence");
  bool quiet = false;
  app.add_flag("--quiet", quiet, "no progress on stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  scatter::RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = scatter::parse_config_file(config_path);
    for (const auto& [flag, key] : flags) {
      if (app.count(flag)) scatter::apply_setting(cfg, key, values[key]);
    }
  } catch (const scatter::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }
  cfg.command = command;
  cfg.progress = !quiet;

  const scatter::RunResult res = scatter::run(cfg);
  const std::string text = res.certificate.dump(2) + "\n";
  if (res.certificate.contains("error")) {
    std::cerr << "error: " << res.certificate["error"]["message"].get<std::string>() << '\n';
  }
  if (cfg.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(cfg.out);
    if (!out) {
      std::cerr << "cannot write " << cfg.out << '\n';
      return 2;
    }
    out << text;
  }
  return res.exit_code;
}
