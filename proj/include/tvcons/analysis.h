#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "tvcons/dynamics.h"
#include "tvcons/gain_design.h"
#include "tvcons/graphs.h"

namespace tvcons {

// ---------------------------------------------------------------------------
// H∞ norm of discrete-time state-space systems.

struct HinfOptions {
  int grid = 4096;      // frequency samples on [0, 2π)
  int peaks = 8;        // local maxima refined by golden-section search
  double rel_tol = 1e-6;
};

/// σ̄[C(e^{iθ}I - A)⁻¹B].
double GainAt(const MatrixXd& a, const MatrixXd& b, const MatrixXd& c, double theta);

/// sup over the unit circle of σ̄[C(zI - A)⁻¹B]. Throws kNotSchur when the
/// spectral radius of A is ≥ 1 - 1e-12.
double HinfNorm(const MatrixXd& a, const MatrixXd& b, const MatrixXd& c,
                const HinfOptions& opts = {});

/// ‖T_F‖∞ with T_F(z) = F(zI - A + BF)⁻¹B.
double ClosedLoopHinfNorm(const AgentDynamics& dyn, const MatrixXd& gain,
                          const HinfOptions& opts = {});

// ---------------------------------------------------------------------------
// Observability gramian of {L̂_m(k)F̂, Â}.

/// Σ_{k=k0}^{k0+T_o} (Â^{k-k0})' F̂' L̂_m(k)' L̂_m(k) F̂ Â^{k-k0}, with L̂_m(k)
/// scaled by `coupling` (1 for the plain gramian; μ weights the protocol
/// gain). Computed blockwise as Σ w²(L̂'L̂) ⊗ (FA^j)'(FA^j) and symmetrized.
MatrixXd ObservabilityGramian(const AgentDynamics& dyn, const MatrixXd& gain,
                              const LaplacianSchedule& schedule,
                              const ReductionBasis& basis, long k0, int window,
                              double coupling = 1.0);

enum class ObservabilityMode { kWeak, kStrong };

struct ObservabilitySample {
  long k0 = 0;
  double min_eigenvalue = 0.0;
  double trace = 0.0;
  int rank = 0;
};

struct ObservabilityReport {
  ObservabilityMode mode = ObservabilityMode::kWeak;
  int window = 0;
  std::vector<ObservabilitySample> samples;
  bool exhaustive = false;  // periodic schedule, one full period of k0 scanned
  bool weak_verdict = false;
  bool strong_verdict = false;
  double eps_o = 0.0;  // min sampled λ_min

  bool verdict() const {
    return mode == ObservabilityMode::kWeak ? weak_verdict : strong_verdict;
  }
  int max_rank() const;
};

struct ObservabilityOptions {
  double tol_pd = 1e-9;  // PD threshold relative to trace(O)
  double coupling = 1.0;
  long k0_scan = 200;    // k0 range for non-periodic schedules
};

ObservabilityReport CheckObservability(const AgentDynamics& dyn,
                                       const MatrixXd& gain,
                                       const LaplacianSchedule& schedule,
                                       const ReductionBasis& basis, int window,
                                       ObservabilityMode mode,
                                       const ObservabilityOptions& opts = {});

// ---------------------------------------------------------------------------
// Small-gain quantities.

struct EpsilonOptions {
  long k0_scan = 200;
  double reg = 1e-12;  // output-gramian eigenvalues below reg·max are dropped
};

/// Lower bound for ε in Σ‖L̂_m ŷ‖² ≥ ε Σ‖ŷ‖² over k = k0..k0+T_c, restricted
/// to unforced output trajectories ŷ(k) = F̂Â^{k-k0}x̂(k0).
struct EpsilonEstimate {
  double epsilon = 0.0;
  long argmin_k0 = 0;
  int window = 0;
  std::vector<double> per_k0;
  bool exhaustive = false;
  static constexpr std::string_view kTrajectoryClass = "unforced";
};

/// Throws kDegenerateDenominator when Σ (FA^j)'(FA^j) vanishes.
EpsilonEstimate EstimateEpsilon(const AgentDynamics& dyn, const MatrixXd& gain,
                                const LaplacianSchedule& schedule,
                                const ReductionBasis& basis, int window,
                                const EpsilonOptions& opts = {});

/// sqrt of the largest generalized eigenvalue of Σ Φ'Δ̂'Δ̂Φ against Σ Φ'Φ, with
/// Φ the unforced output map and Δ̂(k) = I - μL̂_m(k): the ℓ₂ gain of Δ̂ over
/// unforced outputs in one window, maximized over k0.
double EstimateWindowedDelta(const AgentDynamics& dyn, const MatrixXd& gain,
                             const LaplacianSchedule& schedule,
                             const ReductionBasis& basis, double mu, int window,
                             const EpsilonOptions& opts = {});

struct DeltaBound {
  double analytic = 1.0;   // √(1 - εμ(μ̄-μ))
  double pointwise = 1.0;  // max_k σ̄(I - μL̂_m(k))
  std::optional<double> windowed;

  double best() const;
};

/// Requires 0 < μ < μ̄ and 0 ≤ ε ≤ 1.
double AnalyticDelta(double mu, double mu_bar, double epsilon);

/// Scans one period (or k < k_scan for random schedules) for the pointwise
/// bound.
DeltaBound ComputeDeltaBound(const LaplacianSchedule& schedule,
                             const ReductionBasis& basis, double mu,
                             double mu_bar, double epsilon, long k_scan = 200);

// ---------------------------------------------------------------------------
// Consensus verdicts.

struct Theorem1Verdict {
  bool assumption_a = false;
  bool assumption_l = false;
  bool weakly_observable = false;
  bool consensus = false;
};

/// Requires a stable-mode design; throws kModeMismatch otherwise.
Theorem1Verdict EvaluateTheorem1(const GainDesign& design, bool assumption_a,
                                 const AssumptionLReport& assumption_l,
                                 const ObservabilityReport& observability);

enum class Theorem2Outcome { kYes, kNo, kConservativePass };

std::string_view ToString(Theorem2Outcome outcome);

struct Theorem2Verdict {
  bool assumption_a = false;
  bool assumption_l = false;
  double epsilon = 0.0;
  double gamma = 0.0;
  double delta = 1.0;        // analytic
  double gamma_delta = 0.0;
  double hinf_TF = 0.0;
  bool hinf_below_gamma = false;
  double direct_delta = 1.0;  // best of analytic, pointwise, windowed
  double direct_product = 0.0;  // ‖T_F‖∞ · direct_delta
  Theorem2Outcome outcome = Theorem2Outcome::kNo;
};

/// yes: A ∧ L ∧ ε > 0 ∧ γδ ≤ 1. conservative-pass: the γδ test fails but
/// A ∧ L hold and ‖T_F‖∞·direct_delta < 1. Requires an unstable-mode design;
/// throws kModeMismatch otherwise.
Theorem2Verdict EvaluateTheorem2(const GainDesign& design, bool assumption_a,
                                 const AssumptionLReport& assumption_l,
                                 const EpsilonEstimate& epsilon,
                                 const DeltaBound& delta);

struct SmallGainAnalysis {
  EpsilonEstimate epsilon;
  DeltaBound delta;
  Theorem2Verdict verdict;
};

/// Full small-gain pipeline: ε over `window`, pointwise and windowed δ, and
/// the analytic δ with ε clipped to 1 (a smaller ε keeps the inequality
/// valid). When Assumption (L) fails the analytic δ is left at 1.
SmallGainAnalysis AnalyzeSmallGain(const AgentDynamics& dyn, const GainDesign& design,
                                   const LaplacianSchedule& schedule,
                                   const ReductionBasis& basis, double mu, int window,
                                   bool assumption_a,
                                   const AssumptionLReport& assumption_l,
                                   const EpsilonOptions& opts = {});

}  // namespace tvcons
