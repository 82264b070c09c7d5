#pragma once

#include <cstdint>
#include <exception>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "config.h"

namespace tvcons::cli {

/// Command-line overrides applied on top of a config file.
struct Overrides {
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol_pd;
  std::optional<double> tol_err;
  std::optional<double> tol_are;
  std::optional<double> tol_conn;
  std::optional<double> tol_psd;
  std::optional<double> tol_spec;
  std::optional<long> scan_k0;
  bool timings = false;
};

void ApplyOverrides(const Overrides& overrides, ExperimentConfig* config);

enum ExitCode : int {
  kExitOk = 0,
  kExitNegative = 1,
  kExitConfig = 2,
  kExitNumerical = 3,
};

/// 2 for configuration and argument errors, 3 for everything numerical.
int ExitCodeFor(const std::exception& e);

struct Scenario {
  std::string_view name;
  std::string_view yaml;
};

/// The reference scenarios compiled into the binary from configs/*.yaml.
const std::vector<Scenario>& BuiltinScenarios();

/// Loads `path`, or an embedded scenario when path is "builtin:<name>".
ExperimentConfig LoadExperiment(const std::string& path);

int CmdDesign(const ExperimentConfig& config, bool timings, std::ostream& out);
int CmdCheck(const ExperimentConfig& config, bool timings, std::ostream& out);
int CmdSimulate(const ExperimentConfig& config, bool timings, std::ostream& out);

/// suite is example1, example2 or all.
int CmdPaper(std::string_view suite, const Overrides& overrides, std::ostream& out);

}  // namespace tvcons::cli
