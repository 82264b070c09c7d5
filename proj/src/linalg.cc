#include "tvcons/linalg.h"

#include <algorithm>
#include <cmath>

#include "tvcons/errors.h"

namespace tvcons {

std::string_view ToString(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kDimensionMismatch: return "DimensionMismatch";
    case ErrorKind::kNotUnitCircle: return "NotUnitCircle";
    case ErrorKind::kNotReachable: return "NotReachable";
    case ErrorKind::kNotSemiSimple: return "NotSemiSimple";
    case ErrorKind::kNormalizationFailure: return "NormalizationFailure";
    case ErrorKind::kAreDiverged: return "AREDiverged";
    case ErrorKind::kIllConditioned: return "IllConditioned";
    case ErrorKind::kGainBoundViolated: return "GainBoundViolated";
    case ErrorKind::kHinfBoundViolated: return "HinfBoundViolated";
    case ErrorKind::kNotSchur: return "NotSchur";
    case ErrorKind::kAssumptionLViolated: return "AssumptionLViolated";
    case ErrorKind::kDegenerateDenominator: return "DegenerateDenominator";
    case ErrorKind::kModeMismatch: return "ModeMismatch";
    case ErrorKind::kFullRank: return "FullRank";
    case ErrorKind::kConfig: return "ConfigError";
  }
  return "Unknown";
}

namespace linalg {

MatrixXd Kron(const MatrixXd& a, const MatrixXd& b) {
  MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

MatrixXd BlockCopies(const MatrixXd& m, int copies) {
  return Kron(MatrixXd::Identity(copies, copies), m);
}

double MaxAbs(const MatrixXd& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double SpectralRadius(const MatrixXd& a) {
  if (a.size() == 0) return 0.0;
  return a.eigenvalues().cwiseAbs().maxCoeff();
}

MatrixXd Symmetrize(const MatrixXd& m) { return 0.5 * (m + m.transpose()); }

double MinEigenvalueSym(const MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(Symmetrize(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double MaxEigenvalueSym(const MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(Symmetrize(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(es.eigenvalues().size() - 1);
}

int NumericalRank(const MatrixXd& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  const double cut = rel_tol * std::max(1.0, s(0));
  return static_cast<int>((s.array() > cut).count());
}

MatrixXd ReachabilityMatrix(const MatrixXd& a, const MatrixXd& b, int blocks) {
  MatrixXd out(b.rows(), b.cols() * blocks);
  MatrixXd term = b;
  for (int i = 0; i < blocks; ++i) {
    out.middleCols(i * b.cols(), b.cols()) = term;
    term = a * term;
  }
  return out;
}

MatrixXd ObservabilityMatrix(const MatrixXd& c, const MatrixXd& a, int blocks) {
  MatrixXd out(c.rows() * blocks, c.cols());
  MatrixXd term = c;
  for (int i = 0; i < blocks; ++i) {
    out.middleRows(i * c.rows(), c.rows()) = term;
    term = term * a;
  }
  return out;
}

double LargestSingularValue(const MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<MatrixXd> svd(m);
  return svd.singularValues()(0);
}

}  // namespace linalg
}  // namespace tvcons
