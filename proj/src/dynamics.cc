#include "tvcons/dynamics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "tvcons/errors.h"
#include "tvcons/linalg.h"

namespace tvcons {

using Eigen::MatrixXcd;

AgentDynamics::AgentDynamics(MatrixXd a, MatrixXd b)
    : a_(std::move(a)), b_(std::move(b)) {
  if (a_.rows() < 1 || a_.rows() != a_.cols()) {
    throw Error(ErrorKind::kDimensionMismatch, "A must be square and non-empty");
  }
  if (b_.rows() != a_.rows() || b_.cols() < 1) {
    throw Error(ErrorKind::kDimensionMismatch,
                "B must have as many rows as A and at least one column");
  }
}

double MahlerMeasure(const MatrixXd& a) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorKind::kDimensionMismatch, "Mahler measure needs square A");
  }
  double product = 1.0;
  for (const auto& lambda : a.eigenvalues()) {
    product *= std::max(1.0, std::abs(lambda));
  }
  return product;
}

int ControllabilityIndex(const MatrixXd& a, const MatrixXd& b, double rank_tol) {
  const int n = static_cast<int>(a.rows());
  for (int d = 1; d <= n; ++d) {
    if (linalg::NumericalRank(linalg::ReachabilityMatrix(a, b, d), rank_tol) == n) {
      return d;
    }
  }
  return 0;
}

std::vector<EigenCluster> ClusterEigenvalues(const MatrixXd& a,
                                             const SpectralTolerances& tol) {
  const Eigen::VectorXcd lambdas = a.eigenvalues();
  const int n = static_cast<int>(lambdas.size());

  // Single-linkage grouping; n is small so the quadratic scan is fine.
  std::vector<int> label(n, -1);
  int clusters = 0;
  for (int i = 0; i < n; ++i) {
    if (label[i] >= 0) continue;
    label[i] = clusters;
    std::vector<int> frontier{i};
    while (!frontier.empty()) {
      const int j = frontier.back();
      frontier.pop_back();
      for (int k = 0; k < n; ++k) {
        if (label[k] < 0 &&
            std::abs(lambdas(j) - lambdas(k)) <=
                tol.cluster * std::max(1.0, std::abs(lambdas(j)))) {
          label[k] = clusters;
          frontier.push_back(k);
        }
      }
    }
    ++clusters;
  }

  const double scale = std::max(1.0, linalg::LargestSingularValue(a));
  std::vector<EigenCluster> out(clusters);
  for (int c = 0; c < clusters; ++c) {
    std::vector<std::complex<double>> members;
    for (int i = 0; i < n; ++i) {
      if (label[i] == c) members.push_back(lambdas(i));
    }
    std::complex<double> center{0.0, 0.0};
    for (const auto& z : members) center += z;
    center /= static_cast<double>(members.size());
    double spread = 0.0;
    for (const auto& z : members) spread = std::max(spread, std::abs(z - center));

    MatrixXcd shifted = a.cast<std::complex<double>>();
    shifted.diagonal().array() -= center;
    Eigen::JacobiSVD<MatrixXcd> svd(shifted);
    const double cut = 10.0 * (spread + tol.jordan * scale);
    const int small = static_cast<int>((svd.singularValues().array() <= cut).count());

    EigenCluster& cl = out[c];
    cl.center = center;
    cl.algebraic_multiplicity = static_cast<int>(members.size());
    cl.geometric_multiplicity = std::min(small, cl.algebraic_multiplicity);
    cl.spread = spread;
  }
  return out;
}

bool IsSemiSimple(const MatrixXd& a, const SpectralTolerances& tol) {
  for (const auto& cl : ClusterEigenvalues(a, tol)) {
    if (cl.geometric_multiplicity != cl.algebraic_multiplicity) return false;
  }
  return true;
}

SpectralClassification ValidateAssumptionA(const AgentDynamics& dyn,
                                           const SpectralTolerances& tol) {
  SpectralClassification out;
  out.eigenvalues = dyn.A().eigenvalues();
  // A defective eigenvalue of multiplicity k is only computable to about
  // (eps·‖A‖)^{1/k}; the cluster mean is accurate to eps. Members may scatter
  // by that much as long as their center sits on the circle.
  const double scale = std::max(1.0, linalg::LargestSingularValue(dyn.A()));
  for (const auto& cl : ClusterEigenvalues(dyn.A(), tol)) {
    const double scatter =
        10.0 * std::pow(std::numeric_limits<double>::epsilon() * scale,
                        1.0 / cl.algebraic_multiplicity);
    const double center_off = std::abs(std::abs(cl.center) - 1.0);
    const double member_off = center_off + cl.spread;
    if (center_off > tol.spec ||
        (cl.algebraic_multiplicity > 1 && member_off > std::max(tol.spec, scatter)) ||
        (cl.algebraic_multiplicity == 1 && member_off > tol.spec)) {
      std::ostringstream msg;
      msg << "eigenvalue " << cl.center << " has modulus " << std::abs(cl.center)
          << ", off the unit circle by more than " << tol.spec;
      if (cl.algebraic_multiplicity > 1) {
        msg << " (cluster of " << cl.algebraic_multiplicity << ", spread " << cl.spread << ")";
      }
      throw Error(ErrorKind::kNotUnitCircle, msg.str());
    }
  }
  out.controllability_index = ControllabilityIndex(dyn.A(), dyn.B(), tol.rank);
  if (out.controllability_index == 0) {
    const int rank = linalg::NumericalRank(
        linalg::ReachabilityMatrix(dyn.A(), dyn.B(), dyn.n()), tol.rank);
    std::ostringstream msg;
    msg << "reachability matrix has rank " << rank << " < n = " << dyn.n();
    throw Error(ErrorKind::kNotReachable, msg.str());
  }
  out.semi_simple = IsSemiSimple(dyn.A(), tol);
  out.mahler_measure = MahlerMeasure(dyn.A());
  return out;
}

ReductionBasis ReductionBasis::Householder(int agents) {
  if (agents < 2) {
    throw Error(ErrorKind::kInvalidArgument, "reduction needs at least 2 agents");
  }
  const VectorXd v1 = VectorXd::Constant(agents, 1.0 / std::sqrt(double(agents)));
  VectorXd u = -v1;
  u(0) += 1.0;
  MatrixXd h = MatrixXd::Identity(agents, agents) - (2.0 / u.squaredNorm()) * u * u.transpose();
  // Pin the first column exactly; the reflector reproduces it to roundoff.
  h.col(0) = v1;
  return ReductionBasis(std::move(h));
}

ReductionBasis ReductionBasis::FromColumns(const MatrixXd& vhat, double tol) {
  const Eigen::Index agents = vhat.rows();
  if (agents < 2 || vhat.cols() != agents - 1) {
    throw Error(ErrorKind::kInvalidArgument, "V̂ must be N×(N-1) with N ≥ 2");
  }
  const VectorXd v1 = VectorXd::Constant(agents, 1.0 / std::sqrt(double(agents)));
  const double orth =
      linalg::MaxAbs(vhat.transpose() * vhat - MatrixXd::Identity(agents - 1, agents - 1));
  const double along_ones = linalg::MaxAbs(v1.transpose() * vhat);
  if (orth > tol || along_ones > tol) {
    std::ostringstream msg;
    msg << "V̂ columns are not an orthonormal complement of 1_N (orthonormality "
        << orth << ", component along 1_N " << along_ones << ")";
    throw Error(ErrorKind::kInvalidArgument, msg.str());
  }
  MatrixXd v(agents, agents);
  v.col(0) = v1;
  v.rightCols(agents - 1) = vhat;
  return ReductionBasis(std::move(v));
}

ReducedSystem MakeReducedSystem(const AgentDynamics& dyn, const MatrixXd& gain,
                                int agents) {
  if (gain.rows() != dyn.m() || gain.cols() != dyn.n()) {
    throw Error(ErrorKind::kDimensionMismatch, "gain F must be m×n");
  }
  return {linalg::BlockCopies(dyn.A(), agents - 1),
          linalg::BlockCopies(dyn.B(), agents - 1),
          linalg::BlockCopies(gain, agents - 1)};
}

namespace {
void CheckStepDimensions(Eigen::Index state_size, const MatrixXd& laplacian,
                         const AgentDynamics& dyn, const MatrixXd& gain) {
  if (laplacian.rows() != laplacian.cols() ||
      state_size != laplacian.rows() * dyn.n() || gain.rows() != dyn.m() ||
      gain.cols() != dyn.n()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "state, Laplacian and gain dimensions disagree");
  }
}
}  // namespace

VectorXd GlobalStep(const VectorXd& x, const MatrixXd& laplacian,
                    const AgentDynamics& dyn, const MatrixXd& gain, double mu) {
  CheckStepDimensions(x.size(), laplacian, dyn, gain);
  const auto agents = AgentColumns(x, dyn.n());
  VectorXd next(x.size());
  Eigen::Map<MatrixXd> out(next.data(), dyn.n(), laplacian.rows());
  out.noalias() = dyn.A() * agents;
  out.noalias() -= mu * dyn.B() * NeighborDisagreement(gain * agents, laplacian);
  return next;
}

MatrixXd NeighborDisagreement(const MatrixXd& y, const MatrixXd& laplacian) {
  const Eigen::Index agents = laplacian.rows();
  if (y.cols() != agents || laplacian.cols() != agents) {
    throw Error(ErrorKind::kDimensionMismatch, "signal and Laplacian sizes differ");
  }
  MatrixXd out = MatrixXd::Zero(y.rows(), agents);
  for (Eigen::Index i = 0; i < agents; ++i) {
    for (Eigen::Index j = 0; j < agents; ++j) {
      if (j != i && laplacian(i, j) != 0.0) {
        out.col(i) -= laplacian(i, j) * (y.col(i) - y.col(j));
      }
    }
  }
  return out;
}

MatrixXd GlobalTransitionMatrix(const MatrixXd& laplacian,
                                const AgentDynamics& dyn, const MatrixXd& gain,
                                double mu) {
  CheckStepDimensions(laplacian.rows() * dyn.n(), laplacian, dyn, gain);
  const auto agents = laplacian.rows();
  return linalg::Kron(MatrixXd::Identity(agents, agents), dyn.A()) -
         mu * linalg::Kron(laplacian, dyn.B() * gain);
}

}  // namespace tvcons
