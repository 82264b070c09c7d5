#pragma once

#include <optional>
#include <string_view>

#include "tvcons/dynamics.h"

namespace tvcons {

/// Certificate for the neutrally stable design F = B'XA with X = A'XA and
/// I - B'XB ⪰ 0.
struct StableGainCertificate {
  MatrixXd X;
  double rho = 1.0;
  MatrixXd F;
  MatrixXd Sa;               // S_a A S_a⁻¹ is block-diagonal orthogonal
  double schur_radius = 0.0;  // spectral radius of A - BF
  double slack = 0.0;         // λ_min(I - B'XB)
  double lyapunov_residual = 0.0;  // ‖A'XA - X‖_max
  double hinf_TF = 0.0;
};

struct StableDesignOptions {
  SpectralTolerances spectral;
  double tol_normalization = 1e-8;
  double hinf_rel_tol = 1e-6;
};

/// Builds a real S_a with S_a A S_a⁻¹ orthogonal, scales X = ρ S_a'S_a with
/// ρ = min(1, 1/λ_max(B'S_a'S_aB)) and returns F = B'XA.
///
/// Throws kNotSemiSimple when A has a defective eigenvalue (use
/// DesignUnstableGain instead) and kNormalizationFailure when the transformed
/// A is not orthogonal to tol_normalization.
StableGainCertificate DesignStableGain(const AgentDynamics& dyn,
                                       const StableDesignOptions& opts = {});

/// Certificate for F = [I + (1-γ⁻²)B'XB]⁻¹B'XA with X the stabilizing
/// solution of X = A'X[I + (1-γ⁻²)BB'X]⁻¹A + ε_γ I.
struct UnstableGainCertificate {
  double gamma = 0.0;
  double eps_gamma = 0.0;
  MatrixXd X;
  MatrixXd F;
  double hinf_TF = 0.0;
  double gain_margin = 0.0;   // λ_min(γ²I - B'XB)
  double schur_radius = 0.0;
  double are_residual = 0.0;  // ‖X - A'X[...]⁻¹A - ε_γ I‖_max
  long iterations = 0;
  bool monotone = true;       // X_{j+1} ⪰ X_j held along the iteration

  bool gain_bound_ok() const { return gain_margin > 0.0; }
  bool hinf_bound_ok() const { return hinf_TF < gamma; }
  bool stabilizing() const { return schur_radius < 1.0; }
  bool ok() const { return gain_bound_ok() && hinf_bound_ok() && stabilizing(); }
};

struct UnstableDesignOptions {
  long max_iter = 1'000'000;
  double tol_are = 1e-12;
  double max_condition = 1e12;
  double hinf_rel_tol = 1e-6;
  /// When false the certificate is returned with its bound flags even if
  /// B'XB ⊀ γ²I or ‖T_F‖ ≥ γ.
  bool enforce_bounds = true;
};

/// Fixed-point iteration from X₀ = ε_γ I, stopping once the step is below
/// max(tol_are, 16·eps·‖X‖_max) (the latter only matters for large X).
///
/// Throws kInvalidArgument for γ ≤ 1 or ε_γ ≤ 0, kAreDiverged when the
/// iteration does not settle within max_iter, kIllConditioned when a solve
/// exceeds max_condition, kNotSchur if A - BF is not Schur and, with
/// enforce_bounds, kGainBoundViolated / kHinfBoundViolated.
UnstableGainCertificate DesignUnstableGain(const AgentDynamics& dyn, double gamma,
                                           double eps_gamma,
                                           const UnstableDesignOptions& opts = {});

/// Residual of the γ-Riccati equation at X.
double RiccatiResidual(const AgentDynamics& dyn, const MatrixXd& X,
                       double gamma, double eps_gamma);

enum class GainMode { kStable, kUnstable, kExplicit };

std::string_view ToString(GainMode mode);

/// A gain together with whichever certificate produced it.
struct GainDesign {
  GainMode mode = GainMode::kExplicit;
  MatrixXd F;
  double hinf_TF = 0.0;
  std::optional<StableGainCertificate> stable;
  std::optional<UnstableGainCertificate> unstable;
};

GainDesign FromStable(StableGainCertificate cert);
GainDesign FromUnstable(UnstableGainCertificate cert);
/// Explicit user gain; ‖T_F‖ is computed when A - BF is Schur, else +inf.
GainDesign FromExplicit(const AgentDynamics& dyn, MatrixXd gain);

}  // namespace tvcons
