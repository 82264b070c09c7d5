#include "tvcons/analysis.h"

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "fixtures.h"
#include "tvcons/errors.h"
#include "tvcons/linalg.h"

namespace tvcons {
namespace {

using testing::Oscillator;
using testing::TripleIntegrator;

MatrixXd StableGain() { return DesignStableGain(Oscillator()).F; }

UnstableGainCertificate TripleCert() {
  UnstableDesignOptions opts;
  opts.enforce_bounds = false;
  return DesignUnstableGain(TripleIntegrator(), 1.1, 1e-5, opts);
}

TEST(Hinf, ScalarFirstOrder) {
  // 1/(z - 0.5) peaks at z = 1 with value 2.
  const MatrixXd a = MatrixXd::Constant(1, 1, 0.5);
  const MatrixXd one = MatrixXd::Ones(1, 1);
  EXPECT_NEAR(GainAt(a, one, one, 0.0), 2.0, 1e-14);
  EXPECT_NEAR(GainAt(a, one, one, std::numbers::pi), 1.0 / 1.5, 1e-14);
  EXPECT_NEAR(HinfNorm(a, one, one), 2.0, 1e-12);
  EXPECT_NEAR(HinfNorm(-a, one, one), 2.0, 1e-12);
}

TEST(Hinf, LightlyDampedPeakBetweenGridPoints) {
  // Poles r·e^{±iφ} with φ off the grid; peak value from the explicit formula
  // |1/((z - p)(z - p̄))| maximized by a dense oracle sweep.
  const double r = 0.98, phi = 0.123456;
  MatrixXd a(2, 2);
  a << r * std::cos(phi), r * std::sin(phi), -r * std::sin(phi), r * std::cos(phi);
  MatrixXd b(2, 1), c(1, 2);
  b << 0, 1;
  c << 1, 0;
  double oracle = 0.0;
  const std::complex<double> p = std::polar(r, phi);
  for (int j = 0; j <= 2'000'000; ++j) {
    const double t = phi - 0.05 + 0.1 * j / 2e6;
    const std::complex<double> z = std::polar(1.0, t);
    oracle = std::max(oracle, std::abs(r * std::sin(phi) / ((z - p) * (z - std::conj(p)))));
  }
  EXPECT_NEAR(HinfNorm(a, b, c), oracle, 1e-6 * oracle);
}

TEST(Hinf, RejectsNonSchur) {
  try {
    HinfNorm(Oscillator().A(), Oscillator().B(), StableGain());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNotSchur);
  }
}

TEST(Hinf, ClosedLoopValues) {
  EXPECT_NEAR(ClosedLoopHinfNorm(Oscillator(), StableGain()), 1.0, 1e-3);
  EXPECT_NEAR(ClosedLoopHinfNorm(TripleIntegrator(), TripleCert().F), 1.49399, 1e-4);
}

TEST(Gramian, ReferencePeriodFourMatrix) {
  const MatrixXd o = ObservabilityGramian(Oscillator(), StableGain(), testing::PeriodFour(),
                                          testing::HadamardBasis(), 0, 3, 0.5);
  EXPECT_LT((o - testing::ReferencePeriodFourGramian()).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_EQ(linalg::NumericalRank(o, 1e-9), 4);
  // κ = 1, 2 give the same matrix because A⁴ = -I.
  for (long k0 : {4L, 8L}) {
    const MatrixXd ok = ObservabilityGramian(Oscillator(), StableGain(), testing::PeriodFour(),
                                             testing::HadamardBasis(), k0, 3, 0.5);
    EXPECT_LT((ok - o).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Gramian, MatchesDenseKroneckerReference) {
  const auto basis = ReductionBasis::Householder(4);
  const auto schedule = testing::RandomRing(5);
  const auto cert = TripleCert();
  for (long k0 : {0L, 3L, 17L}) {
    for (int w : {0, 4, 9}) {
      const MatrixXd fast = ObservabilityGramian(TripleIntegrator(), cert.F, schedule, basis,
                                                 k0, w, 0.7);
      const MatrixXd dense = testing::DenseGramian(TripleIntegrator(), cert.F, schedule,
                                                   basis.Vhat(), k0, w, 0.7);
      EXPECT_LT((fast - dense).cwiseAbs().maxCoeff(), 1e-10 * (1.0 + dense.cwiseAbs().maxCoeff()));
    }
  }
}

TEST(Gramian, SymmetricPsdAndAdditive) {
  const auto basis = ReductionBasis::Householder(4);
  const auto dyn = TripleIntegrator();
  const MatrixXd f = TripleCert().F;
  const auto schedule = testing::RandomRing(9);
  MatrixXd ahat = linalg::BlockCopies(dyn.A(), 3);
  for (long k0 : {0L, 5L, 21L}) {
    const int t1 = 3, t2 = 6;
    const MatrixXd whole = ObservabilityGramian(dyn, f, schedule, basis, k0, t1 + t2 + 1);
    EXPECT_LE((whole - whole.transpose()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_GE(linalg::MinEigenvalueSym(whole), -1e-10);
    const MatrixXd head = ObservabilityGramian(dyn, f, schedule, basis, k0, t1);
    const MatrixXd tail = ObservabilityGramian(dyn, f, schedule, basis, k0 + t1 + 1, t2);
    MatrixXd shift = MatrixXd::Identity(9, 9);
    for (int j = 0; j <= t1; ++j) shift = ahat * shift;
    const MatrixXd sum = head + shift.transpose() * tail * shift;
    EXPECT_LT((whole - sum).cwiseAbs().maxCoeff(), 1e-8 * (1.0 + whole.cwiseAbs().maxCoeff()));
  }
}

TEST(Observability, ExampleOneSchedules) {
  const auto basis = ReductionBasis::Householder(4);
  const auto p4 = CheckObservability(Oscillator(), StableGain(), testing::PeriodFour(), basis,
                                     3, ObservabilityMode::kWeak);
  EXPECT_TRUE(p4.exhaustive);
  EXPECT_EQ(p4.samples.size(), 4u);
  EXPECT_FALSE(p4.verdict());
  EXPECT_EQ(p4.max_rank(), 4);
  // No window length rescues the period-4 schedule.
  EXPECT_FALSE(CheckObservability(Oscillator(), StableGain(), testing::PeriodFour(), basis, 31,
                                  ObservabilityMode::kWeak).verdict());
  const auto d2 = CheckObservability(Oscillator(), StableGain(), testing::DwellTwo(), basis, 7,
                                     ObservabilityMode::kWeak);
  EXPECT_TRUE(d2.verdict());
  EXPECT_EQ(d2.max_rank(), 6);
  const auto rnd = CheckObservability(Oscillator(), StableGain(), testing::RandomRing(1), basis,
                                      31, ObservabilityMode::kWeak);
  EXPECT_FALSE(rnd.exhaustive);
  EXPECT_EQ(rnd.samples.size(), 200u);
  EXPECT_TRUE(rnd.verdict());
}

TEST(Observability, StrongModeUsesAbsoluteFloor) {
  const auto basis = ReductionBasis::Householder(4);
  const auto cert = TripleCert();
  ObservabilityOptions opts;
  const auto r = CheckObservability(TripleIntegrator(), cert.F, testing::PeriodFour(), basis, 31,
                                    ObservabilityMode::kStrong, opts);
  EXPECT_TRUE(r.weak_verdict);
  EXPECT_EQ(r.strong_verdict, r.eps_o > opts.tol_pd);
  EXPECT_TRUE(r.verdict());
}

// Oracle: the same ratio as a dense generalized eigenproblem.
double DenseEpsilon(const AgentDynamics& dyn, const MatrixXd& f,
                    const LaplacianSchedule& schedule, const MatrixXd& vhat, long k0, int w) {
  const MatrixXd num = testing::DenseGramian(dyn, f, schedule, vhat, k0, w, 1.0);
  MatrixXd den_blocks = MatrixXd::Zero(dyn.n(), dyn.n());
  MatrixXd phi = f;
  for (int j = 0; j <= w; ++j) {
    den_blocks += phi.transpose() * phi;
    phi = phi * dyn.A();
  }
  const MatrixXd den = testing::KronRef(MatrixXd::Identity(vhat.cols(), vhat.cols()), den_blocks);
  Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> es(num, den, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

TEST(Epsilon, MatchesGeneralizedEigenOracle) {
  const auto cert = TripleCert();
  const auto basis = ReductionBasis::Householder(4);
  for (int w : {9, 31}) {
    const auto est = EstimateEpsilon(TripleIntegrator(), cert.F, testing::PeriodFour(), basis, w);
    EXPECT_TRUE(est.exhaustive);
    double oracle = 1e300;
    for (long k0 = 0; k0 < 4; ++k0) {
      oracle = std::min(oracle, DenseEpsilon(TripleIntegrator(), cert.F, testing::PeriodFour(),
                                             basis.Vhat(), k0, w));
    }
    EXPECT_NEAR(est.epsilon, oracle, 1e-8);
  }
  const auto e31 = EstimateEpsilon(TripleIntegrator(), cert.F, testing::PeriodFour(), basis, 31);
  EXPECT_NEAR(e31.epsilon, 0.802, 2e-3);
  // Basis independence.
  const auto e31h = EstimateEpsilon(TripleIntegrator(), cert.F, testing::PeriodFour(),
                                    testing::HadamardBasis(), 31);
  EXPECT_NEAR(e31.epsilon, e31h.epsilon, 1e-9);
}

TEST(Epsilon, DegenerateOutput) {
  try {
    EstimateEpsilon(Oscillator(), MatrixXd::Zero(1, 2), testing::PeriodFour(),
                    ReductionBasis::Householder(4), 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDegenerateDenominator);
  }
}

TEST(Delta, AnalyticFormula) {
  EXPECT_EQ(AnalyticDelta(0.5, 1.0, 0.0), 1.0);
  EXPECT_NEAR(AnalyticDelta(0.5, 1.0, 1.0), std::sqrt(1.0 - 0.25), 1e-15);
  EXPECT_NEAR(AnalyticDelta(0.3, 0.6, 1.0), std::sqrt(1.0 - 0.09), 1e-15);
  EXPECT_THROW(AnalyticDelta(1.0, 1.0, 0.5), Error);
  EXPECT_THROW(AnalyticDelta(0.5, 1.0, 1.5), Error);
}

TEST(Delta, PointwiseIsOneForSingularReducedLaplacians) {
  const auto d = ComputeDeltaBound(testing::PeriodFour(), ReductionBasis::Householder(4), 0.5,
                                   1.0, 0.2);
  EXPECT_NEAR(d.pointwise, 1.0, 1e-12);
  EXPECT_NEAR(d.analytic, std::sqrt(1.0 - 0.2 * 0.25), 1e-15);
  EXPECT_NEAR(d.best(), d.analytic, 0.0);
}

TEST(Delta, WindowedEqualsAnalyticOnSingleEdgePalette) {
  // Single-edge L̂ satisfy L̂² = 2L̂, so (I - ½L̂)'(I - ½L̂) = I - ¼L̂'L̂ and the
  // windowed ratio collapses to the analytic expression.
  const auto cert = TripleCert();
  const auto basis = ReductionBasis::Householder(4);
  const auto eps = EstimateEpsilon(TripleIntegrator(), cert.F, testing::PeriodFour(), basis, 31);
  const double windowed = EstimateWindowedDelta(TripleIntegrator(), cert.F,
                                                testing::PeriodFour(), basis, 0.5, 31);
  EXPECT_NEAR(windowed, AnalyticDelta(0.5, 1.0, eps.epsilon), 1e-8);
}

TEST(Verdicts, TheoremOne) {
  const auto dyn = Oscillator();
  const auto design = FromStable(DesignStableGain(dyn));
  const auto basis = ReductionBasis::Householder(4);
  const auto al = CheckAssumptionL(testing::PeriodFour(), 100, 0.5);
  const auto obs = CheckObservability(dyn, design.F, testing::PeriodFour(), basis, 3,
                                      ObservabilityMode::kWeak);
  EXPECT_FALSE(EvaluateTheorem1(design, true, al, obs).consensus);
  const auto obs_d2 = CheckObservability(dyn, design.F, testing::DwellTwo(), basis, 7,
                                         ObservabilityMode::kWeak);
  EXPECT_TRUE(EvaluateTheorem1(design, true, al, obs_d2).consensus);
  const auto udesign = FromUnstable(TripleCert());
  try {
    EvaluateTheorem1(udesign, true, al, obs);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kModeMismatch);
  }
}

TEST(Verdicts, TheoremTwo) {
  const auto design = FromUnstable(TripleCert());
  const auto basis = ReductionBasis::Householder(4);
  auto verdict = [&](const LaplacianSchedule& s) {
    const auto al = CheckAssumptionL(s, 100, 0.5);
    const auto eps = EstimateEpsilon(TripleIntegrator(), design.F, s, basis, 31);
    auto delta = ComputeDeltaBound(s, basis, 0.5, al.mu_bar, std::min(1.0, eps.epsilon));
    delta.windowed = EstimateWindowedDelta(TripleIntegrator(), design.F, s, basis, 0.5, 31);
    return EvaluateTheorem2(design, true, al, eps, delta);
  };
  const auto p4 = verdict(testing::PeriodFour());
  EXPECT_EQ(p4.outcome, Theorem2Outcome::kYes);
  EXPECT_LT(p4.gamma_delta, 1.0);
  EXPECT_FALSE(p4.hinf_below_gamma);
  const auto s3 = verdict(testing::StrideThree());
  EXPECT_EQ(s3.outcome, Theorem2Outcome::kNo);
  EXPECT_GE(s3.direct_product, 1.0);
  EXPECT_EQ(ToString(Theorem2Outcome::kConservativePass), "conservative-pass");
  const auto sdesign = FromStable(DesignStableGain(Oscillator()));
  EXPECT_THROW(EvaluateTheorem2(sdesign, true, CheckAssumptionL(testing::PeriodFour(), 10, 0.5),
                                EpsilonEstimate{}, DeltaBound{}),
               Error);
}

}  // namespace
}  // namespace tvcons
