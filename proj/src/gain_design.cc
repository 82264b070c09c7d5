#include "tvcons/gain_design.h"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "tvcons/analysis.h"
#include "tvcons/errors.h"
#include "tvcons/linalg.h"

namespace tvcons {

using Eigen::MatrixXcd;

namespace {

// Real basis P with P⁻¹AP block-diagonal: ±1 on real eigenspaces and
// [[cos θ, sin θ], [-sin θ, cos θ]] ⊗ I on each complex pair.
MatrixXd RealEigenBasis(const MatrixXd& a, const SpectralTolerances& tol) {
  const int n = static_cast<int>(a.rows());
  std::vector<MatrixXd> blocks;
  int columns = 0;
  for (const auto& cl : ClusterEigenvalues(a, tol)) {
    const int k = cl.algebraic_multiplicity;
    const bool real = std::abs(cl.center.imag()) <= tol.cluster;
    if (!real && cl.center.imag() < 0.0) continue;  // conjugate of a kept pair
    if (real) {
      MatrixXd shifted = a;
      shifted.diagonal().array() -= cl.center.real();
      Eigen::JacobiSVD<MatrixXd> svd(shifted, Eigen::ComputeFullV);
      blocks.push_back(svd.matrixV().rightCols(k));
      columns += k;
    } else {
      MatrixXcd shifted = a.cast<std::complex<double>>();
      shifted.diagonal().array() -= cl.center;
      Eigen::JacobiSVD<MatrixXcd> svd(shifted, Eigen::ComputeFullV);
      const MatrixXcd w = svd.matrixV().rightCols(k);
      // √2 makes an orthonormal eigenvector pair map to orthonormal real
      // columns, so an already-orthogonal A gets S_a = I.
      MatrixXd pair(n, 2 * k);
      pair.leftCols(k) = std::sqrt(2.0) * w.real();
      pair.rightCols(k) = std::sqrt(2.0) * w.imag();
      blocks.push_back(std::move(pair));
      columns += 2 * k;
    }
  }
  if (columns != n) {
    std::ostringstream msg;
    msg << "eigenspace bases span " << columns << " columns, expected " << n;
    throw Error(ErrorKind::kNormalizationFailure, msg.str());
  }
  MatrixXd p(n, n);
  int c = 0;
  for (const auto& b : blocks) {
    p.middleCols(c, b.cols()) = b;
    c += static_cast<int>(b.cols());
  }
  return p;
}

}  // namespace

StableGainCertificate DesignStableGain(const AgentDynamics& dyn,
                                       const StableDesignOptions& opts) {
  const SpectralClassification spec = ValidateAssumptionA(dyn, opts.spectral);
  if (!spec.semi_simple) {
    throw Error(ErrorKind::kNotSemiSimple,
                "A has a defective unit-circle eigenvalue; no X > 0 with "
                "X = A'XA exists (use the Riccati design)");
  }
  const MatrixXd& a = dyn.A();
  const MatrixXd& b = dyn.B();
  const int n = dyn.n();

  const MatrixXd p = RealEigenBasis(a, opts.spectral);
  Eigen::FullPivLU<MatrixXd> lu(p);
  if (!lu.isInvertible()) {
    throw Error(ErrorKind::kNormalizationFailure, "eigenspace basis is singular");
  }
  StableGainCertificate cert;
  cert.Sa = lu.inverse();
  const MatrixXd normalized = cert.Sa * a * p;
  const double orth =
      linalg::MaxAbs(normalized.transpose() * normalized - MatrixXd::Identity(n, n));
  if (orth > opts.tol_normalization) {
    std::ostringstream msg;
    msg << "S_a A S_a⁻¹ deviates from orthogonal by " << orth;
    throw Error(ErrorKind::kNormalizationFailure, msg.str());
  }

  const MatrixXd base = linalg::Symmetrize(cert.Sa.transpose() * cert.Sa);
  cert.rho = std::min(1.0, 1.0 / linalg::MaxEigenvalueSym(b.transpose() * base * b));
  cert.X = cert.rho * base;
  cert.F = b.transpose() * cert.X * a;
  cert.lyapunov_residual = linalg::MaxAbs(a.transpose() * cert.X * a - cert.X);
  cert.slack = linalg::MinEigenvalueSym(MatrixXd::Identity(dyn.m(), dyn.m()) -
                                        b.transpose() * cert.X * b);
  cert.schur_radius = linalg::SpectralRadius(a - b * cert.F);
  HinfOptions hinf;
  hinf.rel_tol = opts.hinf_rel_tol;
  cert.hinf_TF = ClosedLoopHinfNorm(dyn, cert.F, hinf);
  return cert;
}

double RiccatiResidual(const AgentDynamics& dyn, const MatrixXd& X,
                       double gamma, double eps_gamma) {
  const int n = dyn.n();
  const double c = 1.0 - 1.0 / (gamma * gamma);
  const MatrixXd m =
      MatrixXd::Identity(n, n) + c * dyn.B() * dyn.B().transpose() * X;
  const MatrixXd rhs = dyn.A().transpose() * X * m.partialPivLu().solve(dyn.A()) +
                       eps_gamma * MatrixXd::Identity(n, n);
  return linalg::MaxAbs(X - rhs);
}

UnstableGainCertificate DesignUnstableGain(const AgentDynamics& dyn, double gamma,
                                           double eps_gamma,
                                           const UnstableDesignOptions& opts) {
  if (!(gamma > 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "γ must be strictly greater than 1");
  }
  if (!(eps_gamma > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "ε_γ must be positive");
  }
  ValidateAssumptionA(dyn);

  const MatrixXd& a = dyn.A();
  const MatrixXd& b = dyn.B();
  const int n = dyn.n();
  const int m = dyn.m();
  const double c = 1.0 - 1.0 / (gamma * gamma);
  const MatrixXd eye = MatrixXd::Identity(n, n);
  const MatrixXd bbt = b * b.transpose();

  UnstableGainCertificate cert;
  cert.gamma = gamma;
  cert.eps_gamma = eps_gamma;

  MatrixXd x = eps_gamma * eye;
  bool converged = false;
  // The step out of an iterate is its residual. Convergence oscillates when
  // A - BF has complex poles, so after the first step below tol_are keep
  // sweeping for a bounded while and retain the iterate with the smallest
  // outgoing step.
  MatrixXd best;
  double best_step = std::numeric_limits<double>::infinity();
  long polish_left = 0;
  for (long j = 0; j < opts.max_iter; ++j) {
    Eigen::PartialPivLU<MatrixXd> lu(eye + c * bbt * x);
    if (lu.rcond() * opts.max_condition < 1.0) {
      std::ostringstream msg;
      msg << "I + (1-γ⁻²)BB'X is ill-conditioned at iteration " << j;
      throw Error(ErrorKind::kIllConditioned, msg.str());
    }
    MatrixXd next = linalg::Symmetrize(a.transpose() * x * lu.solve(a)) + eps_gamma * eye;
    if (!next.allFinite() || linalg::MaxAbs(next) > 1e15) {
      std::ostringstream msg;
      msg << "iterate blew up at iteration " << j
          << "; ε_γ may be too large for γ = " << gamma;
      throw Error(ErrorKind::kAreDiverged, msg.str());
    }
    const MatrixXd step = next - x;
    if (linalg::MinEigenvalueSym(step) < -1e-12 * std::max(1.0, linalg::MaxAbs(x))) {
      cert.monotone = false;
    }
    const double size = linalg::MaxAbs(step);
    if (converged && size < best_step) {
      best = x;
      best_step = size;
    }
    const double floor = 16.0 * std::numeric_limits<double>::epsilon() *
                         std::max(1.0, linalg::MaxAbs(x));
    if (converged && (size <= std::max(1e-3 * opts.tol_are, floor) || --polish_left <= 0)) {
      break;
    }
    x = std::move(next);
    cert.iterations = j + 1;
    if (!converged && size <= std::max(opts.tol_are, floor)) {
      converged = true;
      polish_left = std::max(200L, cert.iterations);
    }
  }
  if (converged && best.size() > 0) x = std::move(best);
  if (!converged) {
    std::ostringstream msg;
    msg << "no convergence in " << opts.max_iter << " iterations (γ = " << gamma
        << ", ε_γ = " << eps_gamma << ")";
    throw Error(ErrorKind::kAreDiverged, msg.str());
  }

  cert.X = x;
  const MatrixXd btxb = b.transpose() * x * b;
  cert.F = (MatrixXd::Identity(m, m) + c * btxb).ldlt().solve(b.transpose() * x * a);
  cert.are_residual = RiccatiResidual(dyn, x, gamma, eps_gamma);
  cert.gain_margin =
      linalg::MinEigenvalueSym(gamma * gamma * MatrixXd::Identity(m, m) - btxb);
  cert.schur_radius = linalg::SpectralRadius(a - b * cert.F);
  if (!cert.stabilizing()) {
    std::ostringstream msg;
    msg << "A - BF has spectral radius " << cert.schur_radius;
    throw Error(ErrorKind::kNotSchur, msg.str());
  }
  HinfOptions hinf;
  hinf.rel_tol = opts.hinf_rel_tol;
  cert.hinf_TF = ClosedLoopHinfNorm(dyn, cert.F, hinf);

  if (opts.enforce_bounds) {
    if (!cert.gain_bound_ok()) {
      std::ostringstream msg;
      msg << "λ_min(γ²I - B'XB) = " << cert.gain_margin << " (B'XB ⊀ γ²I)";
      throw Error(ErrorKind::kGainBoundViolated, msg.str());
    }
    if (!cert.hinf_bound_ok()) {
      std::ostringstream msg;
      msg << "‖T_F‖∞ = " << cert.hinf_TF << " ≥ γ = " << gamma;
      throw Error(ErrorKind::kHinfBoundViolated, msg.str());
    }
  }
  return cert;
}

std::string_view ToString(GainMode mode) {
  switch (mode) {
    case GainMode::kStable: return "stable";
    case GainMode::kUnstable: return "unstable";
    case GainMode::kExplicit: return "explicit";
  }
  return "unknown";
}

GainDesign FromStable(StableGainCertificate cert) {
  GainDesign d;
  d.mode = GainMode::kStable;
  d.F = cert.F;
  d.hinf_TF = cert.hinf_TF;
  d.stable = std::move(cert);
  return d;
}

GainDesign FromUnstable(UnstableGainCertificate cert) {
  GainDesign d;
  d.mode = GainMode::kUnstable;
  d.F = cert.F;
  d.hinf_TF = cert.hinf_TF;
  d.unstable = std::move(cert);
  return d;
}

GainDesign FromExplicit(const AgentDynamics& dyn, MatrixXd gain) {
  if (gain.rows() != dyn.m() || gain.cols() != dyn.n()) {
    throw Error(ErrorKind::kDimensionMismatch, "gain F must be m×n");
  }
  GainDesign d;
  d.mode = GainMode::kExplicit;
  d.F = std::move(gain);
  d.hinf_TF = linalg::SpectralRadius(dyn.A() - dyn.B() * d.F) < 1.0 - 1e-12
                  ? ClosedLoopHinfNorm(dyn, d.F)
                  : std::numeric_limits<double>::infinity();
  return d;
}

}  // namespace tvcons
