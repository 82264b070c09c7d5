#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string_view>
#include <vector>

#include "tvcons/dynamics.h"
#include "tvcons/graphs.h"

namespace tvcons {

struct SimulationConfig {
  SimulationConfig(AgentDynamics dyn_in, MatrixXd gain, double mu_in,
                   LaplacianSchedule schedule_in)
      : dyn(std::move(dyn_in)),
        F(std::move(gain)),
        mu(mu_in),
        schedule(std::move(schedule_in)) {}

  AgentDynamics dyn;
  MatrixXd F;
  double mu;
  LaplacianSchedule schedule;
  long horizon = 2000;
  /// n×N, column i is agent i. When empty, entries are drawn i.i.d. uniform
  /// on [-1, 1] from `seed`.
  std::optional<MatrixXd> x0;
  std::uint64_t seed = 0;
  double tol_err = 1e-6;
  int window = 50;       // trailing steps that must sit below tol_err
  double cap = 1e8;      // divergence threshold on e(k)
  bool log_states = false;

  int agents() const { return schedule.agents(); }
};

/// Initial states for `config`: the explicit x0 or the seeded draw.
MatrixXd InitialStates(const SimulationConfig& config);

enum class SimVerdict { kConverged, kDiverged, kUndetermined };

std::string_view ToString(SimVerdict verdict);

struct SimulationTrace {
  std::vector<double> error;              // max_i ‖x_i - x̄‖
  std::vector<double> disagreement_norm;  // ‖x̂‖ = (Σ‖x_i - x̄‖²)^½
  std::vector<VectorXd> states;           // filled when log_states
  SimVerdict verdict = SimVerdict::kUndetermined;
  std::optional<long> first_passage;      // first k with e(k) < tol_err
  bool overflow = false;                  // some |x| exceeded 1e300
};

/// Iterates x(k+1) = [I⊗A - μL(k)⊗BF]x(k) for k < horizon. Stops early once
/// e(k) passes the divergence cap.
SimulationTrace Run(const SimulationConfig& config);

struct ReducedTrace {
  std::vector<double> norm;       // ‖x̂(k)‖
  std::vector<MatrixXd> states;   // n×(N-1) when log_states
};

/// Iterates x̂(k+1) = [Â - μB̂L̂(k)F̂]x̂(k) from x̂(0) = (V̂'⊗I)x(0).
ReducedTrace RunReduced(const SimulationConfig& config, const ReductionBasis& basis);

/// Protocol inputs u_i = -μF Σ_j a_ij (x_i - x_j) as an m×N matrix.
MatrixXd ProtocolInputs(const VectorXd& x, const MatrixXd& laplacian,
                        const MatrixXd& gain, double mu);

/// Global initial state whose disagreement part is a unit vector of the
/// smallest eigenvalue of O(k0, window). Throws kFullRank when O is
/// positive definite at the 1e-9·trace threshold.
VectorXd FindBadInitialState(const AgentDynamics& dyn, const MatrixXd& gain,
                             const LaplacianSchedule& schedule,
                             const ReductionBasis& basis, int window,
                             long k0 = 0, double tol_pd = 1e-9);

/// CSV with header k,e,disagreement_norm[,x_1_1,...]; x_i_j is component j of
/// agent i. 17 significant digits.
void WriteTraceCsv(std::ostream& out, const SimulationTrace& trace, int n);

}  // namespace tvcons
