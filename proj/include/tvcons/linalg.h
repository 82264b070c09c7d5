#pragma once

#include <Eigen/Dense>

namespace tvcons::linalg {

using Eigen::MatrixXd;
using Eigen::VectorXd;

MatrixXd Kron(const MatrixXd& a, const MatrixXd& b);

/// Block-diagonal I_copies ⊗ m.
MatrixXd BlockCopies(const MatrixXd& m, int copies);

double MaxAbs(const MatrixXd& m);

double SpectralRadius(const MatrixXd& a);

/// (m + m') / 2.
MatrixXd Symmetrize(const MatrixXd& m);

double MinEigenvalueSym(const MatrixXd& m);
double MaxEigenvalueSym(const MatrixXd& m);

/// Rank with singular values counted above `rel_tol * max(1, sigma_max)`.
int NumericalRank(const MatrixXd& m, double rel_tol = 1e-10);

/// [B AB ... A^{blocks-1}B].
MatrixXd ReachabilityMatrix(const MatrixXd& a, const MatrixXd& b, int blocks);

/// Stacked [C; CA; ...; CA^{blocks-1}].
MatrixXd ObservabilityMatrix(const MatrixXd& c, const MatrixXd& a, int blocks);

double LargestSingularValue(const MatrixXd& m);

}  // namespace tvcons::linalg
