#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "tvcons/dynamics.h"
#include "tvcons/graphs.h"

namespace tvcons::testing {

// Oscillator agents: A is a π/4 rotation, B = [0; 1].
inline AgentDynamics Oscillator() {
  const double c = std::sqrt(0.5);
  MatrixXd a(2, 2);
  a << c, c, -c, c;
  MatrixXd b(2, 1);
  b << 0, 1;
  return {a, b};
}

// Triple integrator with B = [-1; 1; -1].
inline AgentDynamics TripleIntegrator() {
  MatrixXd a(3, 3);
  a << 1, 1, 0, 0, 1, 1, 0, 0, 1;
  MatrixXd b(3, 1);
  b << -1, 1, -1;
  return {a, b};
}

// Four single-edge graphs on a ring of four agents: edge (i, i+1 mod 4).
inline std::vector<Laplacian> RingEdges() {
  std::vector<Laplacian> out;
  for (int i = 0; i < 4; ++i) {
    out.push_back(Laplacian::FromUndirectedEdges(4, {{i, (i + 1) % 4, 1.0}}));
  }
  return out;
}

// Orthonormal complement of 1/2 with ±1/2 entries; rows are agents.
inline ReductionBasis HadamardBasis() {
  MatrixXd v(4, 3);
  v << 0.5, 0.5, -0.5,
      -0.5, -0.5, -0.5,
      -0.5, 0.5, 0.5,
       0.5, -0.5, 0.5;
  return ReductionBasis::FromColumns(v);
}

inline MatrixXd ReferencePeriodFourGramian() {
  MatrixXd p(6, 6);
  p << 1, 0, 0, -1, 0, 0,
       0, 1, -1, 0, 0, 0,
       0, -1, 2, 0, 1, 0,
      -1, 0, 0, 2, 0, -1,
       0, 0, 1, 0, 1, 0,
       0, 0, 0, -1, 0, 1;
  return 0.5 * p;
}

inline MatrixXd ReferenceDwellTwoGramian() {
  MatrixXd p(6, 6);
  p << 2, -2, -2, 2, 0, 0,
      -2, 6, 2, -6, 0, 0,
      -1, 1, 8, 0, 1, -1,
       1, -3, 0, 8, -1, 3,
       1, -1, 0, 0, 7, 1,
      -1, 3, 0, 0, 1, 5;
  return 0.25 * p;
}

inline MatrixXd ReferenceRiccatiX() {
  MatrixXd x(3, 3);
  x << 0.0002, 0.0021, 0.0103,
       0.0021, 0.0304, 0.1962,
       0.0103, 0.1962, 1.7599;
  return x;
}

inline MatrixXd ReferenceRiccatiF() {
  MatrixXd f(1, 3);
  f << -0.0068, -0.1415, -1.3985;
  return f;
}

inline LaplacianSchedule PeriodFour() { return LaplacianSchedule::Periodic(RingEdges()); }
inline LaplacianSchedule DwellTwo() { return LaplacianSchedule::DwellSwitched(RingEdges(), 2); }
inline LaplacianSchedule StrideTwo() { return LaplacianSchedule::Sparse(RingEdges(), 2); }
inline LaplacianSchedule StrideThree() { return LaplacianSchedule::Sparse(RingEdges(), 3); }
inline LaplacianSchedule RandomRing(std::uint64_t seed) {
  return LaplacianSchedule::RandomUniform(RingEdges(), seed);
}

// Test-side Kronecker product, kept separate from the library's.
inline MatrixXd KronRef(const MatrixXd& a, const MatrixXd& b) {
  MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// Dense reference gramian: Σ (Â^j)'F̂'L̂'L̂F̂Â^j with explicit Kronecker
// factors.
inline MatrixXd DenseGramian(const AgentDynamics& dyn, const MatrixXd& gain,
                             const LaplacianSchedule& schedule,
                             const MatrixXd& vhat, long k0, int window,
                             double coupling) {
  const Eigen::Index copies = vhat.cols();
  const MatrixXd eye = MatrixXd::Identity(copies, copies);
  const MatrixXd ahat = KronRef(eye, dyn.A());
  const MatrixXd fhat = KronRef(eye, gain);
  const Eigen::Index dim = ahat.rows();
  MatrixXd sum = MatrixXd::Zero(dim, dim);
  MatrixXd power = MatrixXd::Identity(dim, dim);
  for (long k = k0; k <= k0 + window; ++k) {
    const MatrixXd lhat = coupling * vhat.transpose() * schedule.At(k) * vhat;
    const MatrixXd out = KronRef(lhat, MatrixXd::Identity(gain.rows(), gain.rows())) *
                         fhat * power;
    sum += out.transpose() * out;
    power = ahat * power;
  }
  return sum;
}

}  // namespace tvcons::testing
