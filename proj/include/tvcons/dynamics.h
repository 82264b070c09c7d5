#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace tvcons {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Homogeneous agent model x(k+1) = A x(k) + B u(k).
class AgentDynamics {
 public:
  /// Throws kDimensionMismatch unless A is square, B has A's row count and
  /// both are non-empty.
  AgentDynamics(MatrixXd a, MatrixXd b);

  const MatrixXd& A() const { return a_; }
  const MatrixXd& B() const { return b_; }
  int n() const { return static_cast<int>(a_.rows()); }
  int m() const { return static_cast<int>(b_.cols()); }

 private:
  MatrixXd a_;
  MatrixXd b_;
};

struct SpectralTolerances {
  double spec = 1e-8;      // | |λ| - 1 | bound
  double jordan = 1e-8;    // defectiveness threshold
  double cluster = 1e-4;   // eigenvalues closer than this are treated as repeated
  double rank = 1e-10;     // relative SVD cutoff for reachability
};

struct SpectralClassification {
  Eigen::VectorXcd eigenvalues;
  bool semi_simple = false;
  double mahler_measure = 1.0;
  int controllability_index = 0;
};

/// Product of max(1, |λ|) over the eigenvalues of A.
double MahlerMeasure(const MatrixXd& a);

/// Smallest d with rank [B AB ... A^{d-1}B] = n, or 0 when (A, B) is not
/// reachable.
int ControllabilityIndex(const MatrixXd& a, const MatrixXd& b,
                         double rank_tol = 1e-10);

/// A group of (numerically) equal eigenvalues.
struct EigenCluster {
  std::complex<double> center;
  int algebraic_multiplicity = 0;
  int geometric_multiplicity = 0;
  double spread = 0.0;
};

/// Groups the spectrum into clusters and measures each cluster's eigenspace
/// dimension from the SVD of A - λ̄I.
std::vector<EigenCluster> ClusterEigenvalues(const MatrixXd& a,
                                             const SpectralTolerances& tol = {});

bool IsSemiSimple(const MatrixXd& a, const SpectralTolerances& tol = {});

/// Checks that every eigenvalue is on the unit circle and (A, B) is
/// reachable. Throws kNotUnitCircle / kNotReachable with the offending value.
SpectralClassification ValidateAssumptionA(const AgentDynamics& dyn,
                                           const SpectralTolerances& tol = {});

/// Orthonormal V = [v1 V̂] with v1 = 1_N/√N.
class ReductionBasis {
 public:
  /// Householder reflector that maps e1 onto 1_N/√N. Requires N ≥ 2.
  static ReductionBasis Householder(int agents);

  /// Uses caller-supplied columns v2..vN. Throws kInvalidArgument unless the
  /// columns are orthonormal and orthogonal to 1_N within `tol`.
  static ReductionBasis FromColumns(const MatrixXd& vhat, double tol = 1e-10);

  int agents() const { return static_cast<int>(v_.rows()); }
  const MatrixXd& V() const { return v_; }
  /// Columns 2..N of V.
  const MatrixXd& Vhat() const { return vhat_; }
  VectorXd v1() const { return v_.col(0); }

 private:
  explicit ReductionBasis(MatrixXd v)
      : v_(std::move(v)), vhat_(v_.rightCols(v_.cols() - 1)) {}
  MatrixXd v_;
  MatrixXd vhat_;
};

/// Block copies Â = I⊗A, B̂ = I⊗B, F̂ = I⊗F over the N-1 disagreement
/// coordinates.
struct ReducedSystem {
  MatrixXd Ahat;
  MatrixXd Bhat;
  MatrixXd Fhat;
};

ReducedSystem MakeReducedSystem(const AgentDynamics& dyn, const MatrixXd& gain,
                                int agents);

/// Stacked state x = vec{x_1, ..., x_N} viewed as an n×N matrix whose column i
/// is agent i.
inline Eigen::Map<const MatrixXd> AgentColumns(const VectorXd& x, int n) {
  return {x.data(), n, x.size() / n};
}

/// Column i is Σ_j a_ij (y_i - y_j) with a_ij = -L_ij. Equal to Y L' when the
/// rows of L sum to zero, but exactly zero on agreeing columns.
MatrixXd NeighborDisagreement(const MatrixXd& y, const MatrixXd& laplacian);

/// One step of x(k+1) = [I⊗A - μ L⊗(BF)] x(k), evaluated blockwise as
/// A X - μ B·NeighborDisagreement(F X, L) on the n×N agent matrix.
VectorXd GlobalStep(const VectorXd& x, const MatrixXd& laplacian,
                    const AgentDynamics& dyn, const MatrixXd& gain, double mu);

/// The same step through the dense Nn×Nn matrix. Reference only.
MatrixXd GlobalTransitionMatrix(const MatrixXd& laplacian,
                                const AgentDynamics& dyn, const MatrixXd& gain,
                                double mu);

}  // namespace tvcons
