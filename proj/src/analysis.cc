#include "tvcons/analysis.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

#include "tvcons/errors.h"
#include "tvcons/linalg.h"

namespace tvcons {

using Eigen::MatrixXcd;

double GainAt(const MatrixXd& a, const MatrixXd& b, const MatrixXd& c, double theta) {
  const std::complex<double> z = std::polar(1.0, theta);
  MatrixXcd pencil = -a.cast<std::complex<double>>();
  pencil.diagonal().array() += z;
  const MatrixXcd g =
      c.cast<std::complex<double>>() *
      pencil.partialPivLu().solve(b.cast<std::complex<double>>());
  if (g.size() == 1) return std::abs(g(0, 0));
  Eigen::JacobiSVD<MatrixXcd> svd(g);
  return svd.singularValues()(0);
}

double HinfNorm(const MatrixXd& a, const MatrixXd& b, const MatrixXd& c,
                const HinfOptions& opts) {
  if (a.rows() != a.cols() || b.rows() != a.rows() || c.cols() != a.cols()) {
    throw Error(ErrorKind::kDimensionMismatch, "(A, B, C) dimensions disagree");
  }
  const double radius = linalg::SpectralRadius(a);
  if (radius >= 1.0 - 1e-12) {
    std::ostringstream msg;
    msg << "spectral radius " << radius << " is not inside the unit circle";
    throw Error(ErrorKind::kNotSchur, msg.str());
  }
  if (linalg::MaxAbs(b) == 0.0 || linalg::MaxAbs(c) == 0.0) return 0.0;

  const int grid = std::max(opts.grid, 16);
  const double step = 2.0 * std::numbers::pi / grid;
  std::vector<double> values(grid);
  for (int j = 0; j < grid; ++j) values[j] = GainAt(a, b, c, j * step);

  std::vector<int> maxima;
  for (int j = 0; j < grid; ++j) {
    const double left = values[(j + grid - 1) % grid];
    const double right = values[(j + 1) % grid];
    if (values[j] >= left && values[j] >= right) maxima.push_back(j);
  }
  std::sort(maxima.begin(), maxima.end(),
            [&](int l, int r) { return values[l] > values[r]; });
  if (static_cast<int>(maxima.size()) > opts.peaks) maxima.resize(opts.peaks);

  double best = *std::max_element(values.begin(), values.end());
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int j : maxima) {
    double lo = (j - 1) * step;
    double hi = (j + 1) * step;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = GainAt(a, b, c, x1);
    double f2 = GainAt(a, b, c, x2);
    for (int it = 0; it < 200; ++it) {
      const double top = std::max(f1, f2);
      if (hi - lo < 1e-12 ||
          (std::abs(f1 - f2) <= 0.01 * opts.rel_tol * std::max(top, 1e-300) &&
           hi - lo < 1e-6)) {
        break;
      }
      if (f1 < f2) {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + inv_phi * (hi - lo);
        f2 = GainAt(a, b, c, x2);
      } else {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - inv_phi * (hi - lo);
        f1 = GainAt(a, b, c, x1);
      }
    }
    best = std::max({best, f1, f2});
  }
  return best;
}

double ClosedLoopHinfNorm(const AgentDynamics& dyn, const MatrixXd& gain,
                          const HinfOptions& opts) {
  return HinfNorm(dyn.A() - dyn.B() * gain, dyn.B(), gain, opts);
}

namespace {

void CheckGain(const AgentDynamics& dyn, const MatrixXd& gain,
               const LaplacianSchedule& schedule, const ReductionBasis& basis) {
  if (gain.rows() != dyn.m() || gain.cols() != dyn.n()) {
    throw Error(ErrorKind::kDimensionMismatch, "gain F must be m×n");
  }
  if (schedule.agents() != basis.agents()) {
    throw Error(ErrorKind::kDimensionMismatch, "schedule and basis sizes differ");
  }
}

// Window terms share the structure (L̂'L̂) ⊗ (FA^j)'(FA^j); callers pick the
// left factor.
template <typename LeftFactor>
MatrixXd WindowSum(const AgentDynamics& dyn, const MatrixXd& gain,
                   const LaplacianSchedule& schedule, const ReductionBasis& basis,
                   long k0, int window, LeftFactor&& left) {
  const int copies = basis.agents() - 1;
  MatrixXd sum = MatrixXd::Zero(copies * dyn.n(), copies * dyn.n());
  MatrixXd phi = gain;
  for (long k = k0; k <= k0 + window; ++k) {
    const MatrixXd lhat = basis.Vhat().transpose() * schedule.At(k) * basis.Vhat();
    const MatrixXd g = phi.transpose() * phi;
    const MatrixXd l = left(lhat);
    for (int i = 0; i < copies; ++i) {
      for (int j = 0; j < copies; ++j) {
        if (l(i, j) != 0.0) {
          sum.block(i * dyn.n(), j * dyn.n(), dyn.n(), dyn.n()) += l(i, j) * g;
        }
      }
    }
    phi = phi * dyn.A();
  }
  return linalg::Symmetrize(sum);
}

MatrixXd OutputGramian(const AgentDynamics& dyn, const MatrixXd& gain, int window) {
  MatrixXd sum = MatrixXd::Zero(dyn.n(), dyn.n());
  MatrixXd phi = gain;
  for (int j = 0; j <= window; ++j) {
    sum += phi.transpose() * phi;
    phi = phi * dyn.A();
  }
  return linalg::Symmetrize(sum);
}

// Whitening map W = I ⊗ U_r Λ_r^{-1/2} on the range of I ⊗ (output gramian).
MatrixXd RangeWhitening(const MatrixXd& output_gramian, int copies, double reg) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(output_gramian);
  const Eigen::VectorXd& lambda = es.eigenvalues();
  const double top = lambda(lambda.size() - 1);
  if (!(top > std::numeric_limits<double>::min())) {
    throw Error(ErrorKind::kDegenerateDenominator,
                "output gramian Σ(FA^j)'(FA^j) vanishes over the window");
  }
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda(i) > reg * top) keep.push_back(i);
  }
  MatrixXd w(output_gramian.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    w.col(c) = es.eigenvectors().col(keep[c]) / std::sqrt(lambda(keep[c]));
  }
  return linalg::BlockCopies(w, copies);
}

std::vector<long> StartIndices(const LaplacianSchedule& schedule, long scan,
                               bool* exhaustive) {
  long count = scan;
  *exhaustive = false;
  if (auto period = schedule.Period()) {
    count = *period;
    *exhaustive = true;
  }
  std::vector<long> out(std::max(count, 1L));
  for (long i = 0; i < static_cast<long>(out.size()); ++i) out[i] = i;
  return out;
}

}  // namespace

MatrixXd ObservabilityGramian(const AgentDynamics& dyn, const MatrixXd& gain,
                              const LaplacianSchedule& schedule,
                              const ReductionBasis& basis, long k0, int window,
                              double coupling) {
  CheckGain(dyn, gain, schedule, basis);
  if (window < 0) throw Error(ErrorKind::kInvalidArgument, "T_o must be ≥ 0");
  const double w2 = coupling * coupling;
  return WindowSum(dyn, gain, schedule, basis, k0, window,
                   [w2](const MatrixXd& lhat) -> MatrixXd {
                     return w2 * lhat.transpose() * lhat;
                   });
}

int ObservabilityReport::max_rank() const {
  int r = 0;
  for (const auto& s : samples) r = std::max(r, s.rank);
  return r;
}

ObservabilityReport CheckObservability(const AgentDynamics& dyn,
                                       const MatrixXd& gain,
                                       const LaplacianSchedule& schedule,
                                       const ReductionBasis& basis, int window,
                                       ObservabilityMode mode,
                                       const ObservabilityOptions& opts) {
  ObservabilityReport r;
  r.mode = mode;
  r.window = window;
  r.weak_verdict = true;
  r.eps_o = std::numeric_limits<double>::infinity();
  for (long k0 : StartIndices(schedule, opts.k0_scan, &r.exhaustive)) {
    const MatrixXd o =
        ObservabilityGramian(dyn, gain, schedule, basis, k0, window, opts.coupling);
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(o, Eigen::EigenvaluesOnly);
    ObservabilitySample s;
    s.k0 = k0;
    s.min_eigenvalue = es.eigenvalues()(0);
    s.trace = o.trace();
    const double cut = opts.tol_pd * s.trace;
    s.rank = s.trace > 0.0 ? static_cast<int>((es.eigenvalues().array() > cut).count()) : 0;
    if (!(s.trace > 0.0 && s.min_eigenvalue > cut)) r.weak_verdict = false;
    r.eps_o = std::min(r.eps_o, s.min_eigenvalue);
    r.samples.push_back(s);
  }
  r.strong_verdict = r.weak_verdict && r.eps_o > opts.tol_pd;
  return r;
}

EpsilonEstimate EstimateEpsilon(const AgentDynamics& dyn, const MatrixXd& gain,
                                const LaplacianSchedule& schedule,
                                const ReductionBasis& basis, int window,
                                const EpsilonOptions& opts) {
  CheckGain(dyn, gain, schedule, basis);
  if (window < 1) throw Error(ErrorKind::kInvalidArgument, "T_c must be ≥ 1");
  const MatrixXd w =
      RangeWhitening(OutputGramian(dyn, gain, window), basis.agents() - 1, opts.reg);
  EpsilonEstimate est;
  est.window = window;
  est.epsilon = std::numeric_limits<double>::infinity();
  for (long k0 : StartIndices(schedule, opts.k0_scan, &est.exhaustive)) {
    const MatrixXd num = WindowSum(dyn, gain, schedule, basis, k0, window,
                                   [](const MatrixXd& lhat) -> MatrixXd {
                                     return lhat.transpose() * lhat;
                                   });
    const double value = std::max(0.0, linalg::MinEigenvalueSym(w.transpose() * num * w));
    est.per_k0.push_back(value);
    if (value < est.epsilon) {
      est.epsilon = value;
      est.argmin_k0 = k0;
    }
  }
  return est;
}

double EstimateWindowedDelta(const AgentDynamics& dyn, const MatrixXd& gain,
                             const LaplacianSchedule& schedule,
                             const ReductionBasis& basis, double mu, int window,
                             const EpsilonOptions& opts) {
  CheckGain(dyn, gain, schedule, basis);
  if (window < 1) throw Error(ErrorKind::kInvalidArgument, "T_c must be ≥ 1");
  const MatrixXd w =
      RangeWhitening(OutputGramian(dyn, gain, window), basis.agents() - 1, opts.reg);
  const int copies = basis.agents() - 1;
  bool exhaustive = false;
  double worst = 0.0;
  for (long k0 : StartIndices(schedule, opts.k0_scan, &exhaustive)) {
    const MatrixXd num = WindowSum(dyn, gain, schedule, basis, k0, window,
                                   [&](const MatrixXd& lhat) -> MatrixXd {
                                     const MatrixXd d =
                                         MatrixXd::Identity(copies, copies) - mu * lhat;
                                     return d.transpose() * d;
                                   });
    worst = std::max(worst, linalg::MaxEigenvalueSym(w.transpose() * num * w));
  }
  return std::sqrt(worst);
}

double DeltaBound::best() const {
  double b = std::min(analytic, pointwise);
  if (windowed) b = std::min(b, *windowed);
  return b;
}

double AnalyticDelta(double mu, double mu_bar, double epsilon) {
  if (!(mu > 0.0 && mu < mu_bar)) {
    throw Error(ErrorKind::kInvalidArgument, "δ requires 0 < μ < μ̄");
  }
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "δ requires 0 ≤ ε ≤ 1");
  }
  if (epsilon == 0.0) return 1.0;
  return std::sqrt(std::max(0.0, 1.0 - epsilon * mu * (mu_bar - mu)));
}

DeltaBound ComputeDeltaBound(const LaplacianSchedule& schedule,
                             const ReductionBasis& basis, double mu,
                             double mu_bar, double epsilon, long k_scan) {
  DeltaBound d;
  d.analytic = AnalyticDelta(mu, mu_bar, epsilon);
  bool exhaustive = false;
  const int copies = basis.agents() - 1;
  d.pointwise = 0.0;
  for (long k : StartIndices(schedule, k_scan, &exhaustive)) {
    const MatrixXd lhat = ReduceLaplacian(schedule.At(k), basis).Lhat;
    d.pointwise = std::max(
        d.pointwise,
        linalg::LargestSingularValue(MatrixXd::Identity(copies, copies) - mu * lhat));
  }
  return d;
}

Theorem1Verdict EvaluateTheorem1(const GainDesign& design, bool assumption_a,
                                 const AssumptionLReport& assumption_l,
                                 const ObservabilityReport& observability) {
  if (design.mode != GainMode::kStable) {
    throw Error(ErrorKind::kModeMismatch,
                "the weak-observability test applies to the stable (Lyapunov) design");
  }
  Theorem1Verdict v;
  v.assumption_a = assumption_a;
  v.assumption_l = assumption_l.holds;
  v.weakly_observable = observability.weak_verdict;
  v.consensus = v.assumption_a && v.assumption_l && v.weakly_observable;
  return v;
}

std::string_view ToString(Theorem2Outcome outcome) {
  switch (outcome) {
    case Theorem2Outcome::kYes: return "yes";
    case Theorem2Outcome::kNo: return "no";
    case Theorem2Outcome::kConservativePass: return "conservative-pass";
  }
  return "unknown";
}

Theorem2Verdict EvaluateTheorem2(const GainDesign& design, bool assumption_a,
                                 const AssumptionLReport& assumption_l,
                                 const EpsilonEstimate& epsilon,
                                 const DeltaBound& delta) {
  if (design.mode != GainMode::kUnstable || !design.unstable) {
    throw Error(ErrorKind::kModeMismatch,
                "the small-gain test applies to the Riccati (γ) design");
  }
  Theorem2Verdict v;
  v.assumption_a = assumption_a;
  v.assumption_l = assumption_l.holds;
  v.epsilon = epsilon.epsilon;
  v.gamma = design.unstable->gamma;
  v.delta = delta.analytic;
  v.gamma_delta = v.gamma * v.delta;
  v.hinf_TF = design.hinf_TF;
  v.hinf_below_gamma = design.unstable->hinf_bound_ok();
  v.direct_delta = delta.best();
  v.direct_product = v.hinf_TF * v.direct_delta;
  const bool assumptions = v.assumption_a && v.assumption_l;
  if (assumptions && v.epsilon > 0.0 && v.gamma_delta <= 1.0) {
    v.outcome = Theorem2Outcome::kYes;
  } else if (assumptions && v.direct_product < 1.0) {
    v.outcome = Theorem2Outcome::kConservativePass;
  } else {
    v.outcome = Theorem2Outcome::kNo;
  }
  return v;
}

SmallGainAnalysis AnalyzeSmallGain(const AgentDynamics& dyn, const GainDesign& design,
                                   const LaplacianSchedule& schedule,
                                   const ReductionBasis& basis, double mu, int window,
                                   bool assumption_a,
                                   const AssumptionLReport& assumption_l,
                                   const EpsilonOptions& opts) {
  SmallGainAnalysis out;
  out.epsilon = EstimateEpsilon(dyn, design.F, schedule, basis, window, opts);
  const double eps = std::min(1.0, out.epsilon.epsilon);
  if (assumption_l.holds) {
    out.delta = ComputeDeltaBound(schedule, basis, mu, assumption_l.mu_bar, eps, opts.k0_scan);
  } else {
    // Pointwise part only; pass a μ̄ that makes the analytic factor inert.
    out.delta = ComputeDeltaBound(schedule, basis, mu, 2.0 * mu, 0.0, opts.k0_scan);
  }
  out.delta.windowed = EstimateWindowedDelta(dyn, design.F, schedule, basis, mu, window, opts);
  out.verdict = EvaluateTheorem2(design, assumption_a, assumption_l, out.epsilon, out.delta);
  return out;
}

}  // namespace tvcons
