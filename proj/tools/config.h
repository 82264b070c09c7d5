#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tvcons/analysis.h"
#include "tvcons/dynamics.h"
#include "tvcons/gain_design.h"
#include "tvcons/graphs.h"

namespace tvcons::cli {

struct ScheduleSpec {
  ScheduleKind kind = ScheduleKind::kPeriodic;
  int dwell = 1;
  int stride = 1;
  std::uint64_t seed = 0;
  std::vector<int> table;
};

struct AnalysisSpec {
  int connectivity_window = 4;  // T_c for uniform connectivity
  int observability_window = 3;  // T_o
  int epsilon_window = 4;        // T_c in the ε sum
  ObservabilityMode mode = ObservabilityMode::kWeak;
  long k0_scan = 200;
  long horizon = 200;            // steps scanned for non-periodic schedules
  double tol_pd = 1e-9;
  double tol_conn = 1e-9;
  double tol_psd = 1e-9;
};

struct SimulationSpec {
  long horizon = 2000;
  std::vector<std::uint64_t> seeds{1};
  std::optional<MatrixXd> x0;
  double tol_err = 1e-6;
  int window = 50;
  double cap = 1e8;
  bool log_states = false;
};

struct GramianExpectation {
  long k0 = 0;
  int window = 0;
  double coupling = 1.0;
  std::optional<MatrixXd> matrix;
  double tol = 1e-6;
  std::optional<int> rank;
};

/// Outcomes a scenario is expected to reproduce; compared by `paper`.
struct Expectations {
  std::optional<MatrixXd> F;
  double F_tol = 1e-3;
  std::optional<MatrixXd> X;
  double X_tol = 1e-3;
  std::optional<GramianExpectation> gramian;
  std::optional<double> hinf;       // |‖T_F‖∞ - hinf| ≤ hinf_tol
  double hinf_tol = 1e-3;
  std::optional<double> hinf_below;
  std::optional<bool> gain_bound;   // B'XB ≺ γ²I
  std::optional<bool> schur;
  std::optional<std::string> theorem1;
  std::optional<std::string> theorem2;
  std::optional<double> direct_product_at_least;
  std::optional<std::string> simulation;  // converged | diverged | not-converged
  std::optional<std::string> slower_than;  // scenario name
};

struct ExperimentConfig {
  std::string name;
  std::string description;
  MatrixXd A;
  MatrixXd B;
  GainMode mode = GainMode::kStable;
  double gamma = 0.0;
  double eps_gamma = 0.0;
  bool enforce_bounds = true;
  MatrixXd F;  // explicit mode only
  double tol_are = 1e-12;
  double tol_spec = 1e-8;
  double mu = 0.0;
  int agents = 0;
  std::vector<Laplacian> palette;
  ScheduleSpec schedule;
  std::optional<MatrixXd> basis;  // explicit V̂, rows are agents
  AnalysisSpec analysis;
  SimulationSpec simulation;
  Expectations expect;
  std::string out_dir;
};

/// Parses and validates a YAML experiment. Unknown keys, wrong types and
/// inconsistent shapes raise Error(kConfig) naming the offending key path.
ExperimentConfig ParseConfig(const std::string& text, const std::string& origin);
ExperimentConfig LoadConfig(const std::string& path);

AgentDynamics MakeDynamics(const ExperimentConfig& config);
LaplacianSchedule MakeSchedule(const ExperimentConfig& config);
ReductionBasis MakeBasis(const ExperimentConfig& config);

}  // namespace tvcons::cli
