#include "tvcons/sim.h"

#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "tvcons/analysis.h"
#include "tvcons/errors.h"
#include "tvcons/linalg.h"

namespace tvcons {

namespace {

constexpr double kOverflow = 1e300;

void Validate(const SimulationConfig& c) {
  if (!(c.mu > 0.0)) throw Error(ErrorKind::kInvalidArgument, "μ must be positive");
  if (c.horizon < 1) throw Error(ErrorKind::kInvalidArgument, "horizon must be ≥ 1");
  if (c.window < 1) throw Error(ErrorKind::kInvalidArgument, "window must be ≥ 1");
  if (c.F.rows() != c.dyn.m() || c.F.cols() != c.dyn.n()) {
    throw Error(ErrorKind::kDimensionMismatch, "gain F must be m×n");
  }
  if (c.x0 && (c.x0->rows() != c.dyn.n() || c.x0->cols() != c.agents())) {
    throw Error(ErrorKind::kDimensionMismatch, "x0 must be n×N");
  }
}

struct Errors {
  double max_dev;
  double norm;
};

Errors Measure(const VectorXd& x, int n) {
  const auto cols = AgentColumns(x, n);
  const VectorXd mean = cols.rowwise().mean();
  const Eigen::VectorXd dev = (cols.colwise() - mean).colwise().norm().transpose();
  return {dev.size() ? dev.maxCoeff() : 0.0, dev.norm()};
}

}  // namespace

MatrixXd InitialStates(const SimulationConfig& config) {
  if (config.x0) return *config.x0;
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  MatrixXd x(config.dyn.n(), config.agents());
  for (int i = 0; i < x.cols(); ++i) {
    for (int j = 0; j < x.rows(); ++j) x(j, i) = dist(rng);
  }
  return x;
}

std::string_view ToString(SimVerdict verdict) {
  switch (verdict) {
    case SimVerdict::kConverged: return "converged";
    case SimVerdict::kDiverged: return "diverged";
    case SimVerdict::kUndetermined: return "undetermined";
  }
  return "unknown";
}

SimulationTrace Run(const SimulationConfig& config) {
  Validate(config);
  const int n = config.dyn.n();
  const MatrixXd x0 = InitialStates(config);
  VectorXd x = Eigen::Map<const VectorXd>(x0.data(), x0.size());

  SimulationTrace trace;
  trace.error.reserve(config.horizon + 1);
  trace.disagreement_norm.reserve(config.horizon + 1);
  for (long k = 0;; ++k) {
    if (!x.allFinite() || linalg::MaxAbs(x) > kOverflow) {
      trace.overflow = true;
      trace.verdict = SimVerdict::kDiverged;
      return trace;
    }
    const Errors e = Measure(x, n);
    trace.error.push_back(e.max_dev);
    trace.disagreement_norm.push_back(e.norm);
    if (config.log_states) trace.states.push_back(x);
    if (!trace.first_passage && e.max_dev < config.tol_err) trace.first_passage = k;
    if (e.max_dev > config.cap) {
      trace.verdict = SimVerdict::kDiverged;
      return trace;
    }
    if (k == config.horizon) break;
    x = GlobalStep(x, config.schedule.At(k), config.dyn, config.F, config.mu);
  }

  const long w = std::min<long>(config.window, static_cast<long>(trace.error.size()));
  bool settled = true;
  for (long i = static_cast<long>(trace.error.size()) - w;
       i < static_cast<long>(trace.error.size()); ++i) {
    if (!(trace.error[i] < config.tol_err)) settled = false;
  }
  trace.verdict = settled ? SimVerdict::kConverged : SimVerdict::kUndetermined;
  return trace;
}

ReducedTrace RunReduced(const SimulationConfig& config, const ReductionBasis& basis) {
  Validate(config);
  if (basis.agents() != config.agents()) {
    throw Error(ErrorKind::kDimensionMismatch, "basis and schedule sizes differ");
  }
  const MatrixXd& a = config.dyn.A();
  const MatrixXd bf = config.dyn.B() * config.F;
  MatrixXd xhat = InitialStates(config) * basis.Vhat();

  ReducedTrace trace;
  for (long k = 0;; ++k) {
    if (!xhat.allFinite() || linalg::MaxAbs(xhat) > kOverflow) {
      throw Error(ErrorKind::kInvalidArgument, "reduced state overflowed");
    }
    trace.norm.push_back(xhat.norm());
    if (config.log_states) trace.states.push_back(xhat);
    if (k == config.horizon || trace.norm.back() > config.cap) break;
    const MatrixXd lhat = ReduceLaplacian(config.schedule.At(k), basis).Lhat;
    xhat = a * xhat - config.mu * bf * xhat * lhat.transpose();
  }
  return trace;
}

MatrixXd ProtocolInputs(const VectorXd& x, const MatrixXd& laplacian,
                        const MatrixXd& gain, double mu) {
  const auto cols = AgentColumns(x, static_cast<int>(gain.cols()));
  if (laplacian.rows() != cols.cols()) {
    throw Error(ErrorKind::kDimensionMismatch, "state and Laplacian sizes differ");
  }
  return -mu * NeighborDisagreement(gain * cols, laplacian);
}

VectorXd FindBadInitialState(const AgentDynamics& dyn, const MatrixXd& gain,
                             const LaplacianSchedule& schedule,
                             const ReductionBasis& basis, int window, long k0,
                             double tol_pd) {
  const MatrixXd o = ObservabilityGramian(dyn, gain, schedule, basis, k0, window);
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(o);
  const double smallest = es.eigenvalues()(0);
  if (smallest > tol_pd * o.trace()) {
    std::ostringstream msg;
    msg << "O(" << k0 << ", " << window << ") is positive definite (λ_min = "
        << smallest << ")";
    throw Error(ErrorKind::kFullRank, msg.str());
  }
  const VectorXd xhat = es.eigenvectors().col(0);
  const Eigen::Map<const MatrixXd> blocks(xhat.data(), dyn.n(), basis.agents() - 1);
  const MatrixXd x = blocks * basis.Vhat().transpose();
  return Eigen::Map<const VectorXd>(x.data(), x.size());
}

void WriteTraceCsv(std::ostream& out, const SimulationTrace& trace, int n) {
  const bool states = !trace.states.empty();
  out << "k,e,disagreement_norm";
  if (states) {
    const long agents = trace.states.front().size() / n;
    for (long i = 1; i <= agents; ++i) {
      for (int j = 1; j <= n; ++j) out << ",x_" << i << '_' << j;
    }
  }
  out << '\n';
  char buf[32];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << ',' << buf;
  };
  for (std::size_t k = 0; k < trace.error.size(); ++k) {
    out << k;
    put(trace.error[k]);
    put(trace.disagreement_norm[k]);
    if (states) {
      for (Eigen::Index i = 0; i < trace.states[k].size(); ++i) put(trace.states[k](i));
    }
    out << '\n';
  }
}

}  // namespace tvcons
