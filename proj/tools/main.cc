#include <iostream>

#include <CLI11.hpp>

#include "commands.h"
#include "tvcons/errors.h"

int main(int argc, char** argv) {
  using namespace tvcons::cli;

  CLI::App app{"Consensus gain design, certificate checks and simulation for "
               "discrete-time multi-agent systems"};
  app.require_subcommand(1);

  std::string config_path;
  std::string suite = "all";
  Overrides ov;
  app.add_option("--out", ov.out, "Directory for reports and trace CSVs");
  app.add_option("--seed", ov.seed, "Replace the simulation seeds with this one");
  app.add_option("--tol-pd", ov.tol_pd, "Gramian PD threshold relative to the trace");
  app.add_option("--tol-err", ov.tol_err, "Consensus error tolerance");
  app.add_option("--tol-are", ov.tol_are, "Riccati iteration step tolerance");
  app.add_option("--tol-conn", ov.tol_conn, "|lambda_2| connectivity threshold");
  app.add_option("--tol-psd", ov.tol_psd, "Assumption (L) margin");
  app.add_option("--tol-spec", ov.tol_spec, "Unit-circle tolerance");
  app.add_option("--scan-k0", ov.scan_k0, "Window starts scanned for non-periodic schedules");
  app.add_flag("--timings", ov.timings, "Append wall-clock timings to reports");

  auto* design = app.add_subcommand("design", "Design the feedback gain and print its certificate");
  auto* check = app.add_subcommand("check", "Evaluate the assumptions and consensus certificates");
  auto* simulate = app.add_subcommand("simulate", "Simulate the closed-loop network");
  for (auto* sub : {design, check, simulate}) {
    sub->add_option("--config", config_path, "Experiment file, or builtin:<name>")->required();
  }
  auto* paper = app.add_subcommand("paper", "Run the built-in reproduction suite");
  paper->add_option("suite", suite, "example1 | example2 | all")
      ->check(CLI::IsMember({"example1", "example2", "all"}));
  auto* list = app.add_subcommand("list", "List the built-in scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*list) {
      for (const auto& s : BuiltinScenarios()) std::cout << s.name << "\n";
      return kExitOk;
    }
    if (*paper) return CmdPaper(suite, ov, std::cout);
    ExperimentConfig config = LoadExperiment(config_path);
    ApplyOverrides(ov, &config);
    if (*design) return CmdDesign(config, ov.timings, std::cout);
    if (*check) return CmdCheck(config, ov.timings, std::cout);
    return CmdSimulate(config, ov.timings, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: ";
    // Config errors already name the file.
    const auto* err = dynamic_cast<const tvcons::Error*>(&e);
    if (!config_path.empty() && !(err && err->kind() == tvcons::ErrorKind::kConfig)) {
      std::cerr << config_path << ": ";
    }
    std::cerr << e.what() << "\n";
    return ExitCodeFor(e);
  }
}
