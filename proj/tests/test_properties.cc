#include <exception>
#include <string>

#include <gtest/gtest.h>

#include "properties.h"

namespace tvcons::testing {
namespace {

class PropertySuite : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    try {
      summary_ = RunPropertySuite(20261017, 50);
    } catch (const std::exception& e) {
      setup_error_ = e.what();
    }
  }
  void SetUp() override {
    ASSERT_TRUE(setup_error_.empty()) << setup_error_;
    ASSERT_EQ(summary_.instances, 50);
  }
  static PropertySummary summary_;
  static std::string setup_error_;
};

PropertySummary PropertySuite::summary_;
std::string PropertySuite::setup_error_;

TEST_F(PropertySuite, LyapunovResidual) { EXPECT_LE(summary_.worst_lyapunov, 1e-10); }

TEST_F(PropertySuite, RiccatiResidual) { EXPECT_LE(summary_.worst_are, 1e-12); }

TEST_F(PropertySuite, PositiveRealHermitianPart) { EXPECT_GE(summary_.worst_pr, -1e-8); }

TEST_F(PropertySuite, DissipationInequality) {
  EXPECT_GE(summary_.worst_dissipation, -1e-8);
}

TEST_F(PropertySuite, StableDesignHasUnitHinfNorm) {
  EXPECT_LE(summary_.worst_hinf_gap, 1e-3);
}

TEST_F(PropertySuite, GainAgentPairObservable) {
  EXPECT_EQ(summary_.min_observability_rank_gap, 0);
}

TEST_F(PropertySuite, ReducedSimulationAgrees) {
  EXPECT_LE(summary_.worst_reduced_rel, 1e-8);
}

TEST_F(PropertySuite, ConsensusSubspaceInvariant) { EXPECT_TRUE(summary_.subspace_exact); }

TEST_F(PropertySuite, BlockwiseStepMatchesDense) { EXPECT_LE(summary_.worst_step_diff, 1e-10); }

TEST_F(PropertySuite, GramianSymmetricPsdAdditive) {
  EXPECT_LE(summary_.worst_gramian_asym, 1e-12);
  EXPECT_GE(summary_.min_gramian_eig, -1e-10);
  EXPECT_LE(summary_.worst_additivity, 1e-8);
}

TEST_F(PropertySuite, HinfAgreesWithFinerSweep) {
  EXPECT_LE(summary_.worst_hinf_vs_fine, 1e-4);
}

}  // namespace
}  // namespace tvcons::testing
