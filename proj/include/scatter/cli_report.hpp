#pragma once

// Run configuration, command dispatch and JSON certificates for the command-line tool.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "scatter/fq_linalg.hpp"
#include "scatter/verdict.hpp"

namespace scatter {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kSchemaVersion = 1;
inline constexpr std::string_view kToolVersion = "1.0.0";

struct RunConfig {
  std::string command;
  int h = 1;
  std::optional<int> degree;
  std::optional<std::uint64_t> modulus;
  int s = 1;
  int order = 2;
  int rho = 2;
  int codim = 1;
  std::string family = "all";  // all | fixed
  Mode mode = Mode::exhaustive;
  std::uint64_t samples = 1000;
  std::optional<std::uint64_t> seed;
  int tries = 4;
  int workers = 1;
  std::uint64_t budget = kDefaultBudget;
  std::string input;   // rows file replacing U_s
  std::string coeffs;  // system-count: "a,b,c,d" in hex
  std::string out;
  bool progress = false;
};

/// Flat key=value lines; '#' starts a comment. Errors name the line and key.
RunConfig parse_config_text(std::string_view text, RunConfig base = {});
RunConfig parse_config_file(const std::string& path, RunConfig base = {});
/// Sets one key from its text value; shared by the config file and the command line.
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);
void validate(const RunConfig& cfg);

struct RunResult {
  nlohmann::json certificate;
  int exit_code = 0;  // 0 ok, 1 refuted, 2 configuration or work-limit error
};

/// Dispatches the command. Configuration and work-limit errors become exit code 2 with an
/// "error" entry; everything else in the certificate except "runtime" is deterministic.
RunResult run(const RunConfig& cfg);

nlohmann::json verdict_json(const Field& f, int r, const Verdict& v);
/// Certificate without the "runtime" block, as compared across runs.
nlohmann::json strip_runtime(nlohmann::json cert);

}  // namespace scatter
