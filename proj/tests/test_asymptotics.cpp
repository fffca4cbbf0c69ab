#include <blocksearch/asymptotics.hpp>

#include <gtest/gtest.h>

using namespace blocksearch;

namespace {

QuadNum q(long n, long d = 1) { return QuadNum(make_rational(n, d)); }

// u = 1, 3; v = _, 1/2, 4, 4, 2, 5, 5, 5 against x = y = 1.
RatioTrack synthetic() {
  RatioTrack t;
  t.i = 2;
  t.k1 = 4;
  t.u = {q(1), q(3), q(1), q(1), q(1), q(1), q(1), q(1)};
  t.v = {q(1), q(1, 2), q(4), q(4), q(2), q(5), q(5), q(5)};
  t.x.assign(t.u.size(), q(1));
  t.y.assign(t.u.size(), q(1));
  return t;
}

}  // namespace

TEST(ReferenceTrace, ReproducesStartAndRecursion) {
  for (int i = 2; i <= 4; ++i) {
    for (int k1 : {2 * i - 1, 2 * i}) {
      ReferenceTrace r = reference_trace(i, q(1), k1, 12);
      EXPECT_EQ(r.x[0], q(1));
      for (int n = 1; n < 12; ++n) {
        auto [x, y] = c_matrix(2 * i - 1).apply(r.x[n + 1], r.y[n + 1]);
        EXPECT_EQ(x, r.x[n]) << "i=" << i << " n=" << n;
        EXPECT_EQ(y, r.y[n]);
      }
    }
  }
}

TEST(ReferenceTrace, OddOpeningOnUnitIntervalHasUnitScale) {
  ReferenceTrace r = reference_trace(3, q(1), 5, 4);
  EXPECT_EQ(r.sigma, q(1));
}

TEST(ReferenceTrace, RejectsBadArguments) {
  EXPECT_THROW(reference_trace(2, q(1), 1, 4), std::domain_error);
  EXPECT_THROW(reference_trace(2, q(0), 3, 4), std::domain_error);
  EXPECT_THROW(reference_trace(2, q(1), 3, 0), std::domain_error);
}

TEST(RatioTrack, SyntheticSignature) {
  RatioTrack t = synthetic();
  EXPECT_EQ(t.mu(0, 1), q(1, 2));
  EXPECT_EQ(t.rho(0, 1), q(3));
  EXPECT_EQ(t.mu(1, 2), q(4, 3));
  EXPECT_EQ(t.lambda(2, 3), q(1));
  EXPECT_EQ(t.lambda(3, 4), q(1, 2));
  EXPECT_EQ(t.lambda(3, 5), q(5, 4));
  EXPECT_TRUE(check_cocycles(t).all_ok());
}

TEST(PhiConstruction, SyntheticEvenCase) {
  PhiSequence s = phi_construction(synthetic(), Parity::Even);
  ASSERT_EQ(s.phi.size(), 3u);
  EXPECT_EQ(s.phi[0].label(), "rho(0,1)");
  EXPECT_EQ(s.phi[1].label(), "mu(1,2)");
  EXPECT_EQ(s.phi[2].label(), "lambda(3,5)");
  EXPECT_EQ(s.phi[2].source, "lambda-merged");
  EXPECT_EQ(s.product(), q(3) * q(4, 3) * q(5, 4));
  EXPECT_TRUE(s.complete);
  EXPECT_TRUE(s.violations.empty());
  EXPECT_EQ(s.covered_to, 7);
}

TEST(PhiConstruction, OddCaseFlagsSubunitSeed) {
  PhiSequence s = phi_construction(synthetic(), Parity::Odd);
  ASSERT_FALSE(s.violations.empty());
}

TEST(PhiConstruction, MergeRunningOffTheEndIsIncomplete) {
  RatioTrack t = synthetic();
  t.u.resize(5);
  t.v.resize(5);
  t.x.resize(5);
  t.y.resize(5);
  PhiSequence s = phi_construction(t, Parity::Even);
  EXPECT_FALSE(s.complete);
  EXPECT_EQ(s.covered_to, 3);
}

TEST(LimitRatio, WatchPolicyMatchesReference) {
  for (int i = 2; i <= 4; ++i) {
    LimitRatioReport r = limit_ratio_check(policy::OddBlockW{i}, 10);
    EXPECT_FALSE(r.truncated_at);
    for (const auto& pt : r.ratios) {
      EXPECT_EQ(pt.delta_ratio, q(1)) << "i=" << i << " n=" << pt.n;
      EXPECT_EQ(pt.Delta_ratio, q(1));
    }
    EXPECT_TRUE(r.phi.phi.empty());
    EXPECT_TRUE(r.respects_bound);
    EXPECT_TRUE(r.cocycles.all_ok());
    EXPECT_TRUE(r.bounds.all_ok());
  }
}

TEST(LimitRatio, HPolicyRatiosSettleAtOne) {
  LimitRatioReport r = limit_ratio_check(policy::OddBlockH{3}, 9);
  EXPECT_TRUE(r.bounds.all_ok());
  EXPECT_TRUE(r.respects_bound);
  for (const auto& pt : r.ratios)
    if (pt.n >= 2) { EXPECT_EQ(pt.Delta_ratio, q(1)); }
}

TEST(LimitRatio, BasicAboveOmegaSquaredTakesRhoSeed) {
  const int i = 2;
  const QuadNum w = omega(i);
  // Irrational alpha1 just above omega^2 avoids exact ties.
  QuadNum a1 = w * w + QuadNum(make_rational(1, 1000)) * w;
  LimitRatioReport r = limit_ratio_check(policy::Basic{i, a1}, 8);
  ASSERT_FALSE(r.phi.phi.empty());
  EXPECT_EQ(r.phi.phi.front().source, "rho");
  // mu(0,1) = i Delta_1 / omega below one
  auto chain = chain_basic(a1, i, 1);
  EXPECT_LT(QuadNum(i) * chain[0].Delta / w, q(1));
  EXPECT_TRUE(r.cocycles.all_ok());
  EXPECT_TRUE(r.bounds.all_ok()) << r.bounds.failures();
  EXPECT_TRUE(r.respects_bound);
  EXPECT_GT(r.product_lower_bound, q(1));
}

TEST(LimitRatio, BasicBelowOmegaSquaredTakesMuSeed) {
  const int i = 2;
  const QuadNum w = omega(i);
  QuadNum a1 = w * w - QuadNum(make_rational(1, 1000)) * w;
  LimitRatioReport r = limit_ratio_check(policy::Basic{i, a1}, 8);
  ASSERT_FALSE(r.phi.phi.empty());
  EXPECT_EQ(r.phi.phi.front().label(), "mu(0,1)");
  EXPECT_TRUE(r.bounds.all_ok());
  EXPECT_TRUE(r.respects_bound);
}

TEST(LimitRatio, RationalAlphaTruncatesAtTie) {
  LimitRatioReport r = limit_ratio_check(policy::Basic{2, q(13, 100)}, 8);
  ASSERT_TRUE(r.truncated_at);
  EXPECT_LE(*r.truncated_at, 8);
  EXPECT_FALSE(r.truncation_reason.empty());
  // mu(0,1) from the definition: i Delta_1 / omega, about 1.011
  EXPECT_EQ(r.phi.phi.front().label(), "mu(0,1)");
  EXPECT_NEAR(r.phi.phi.front().value.to_double(), 1.0109, 1e-3);
}

TEST(LimitRatio, RejectsShortHorizonAndEvenBlock) {
  EXPECT_THROW(limit_ratio_check(policy::OddBlockW{2}, 4), std::domain_error);
  EXPECT_THROW(limit_ratio_check(policy::EvenBlock{2}, 8), std::domain_error);
}

TEST(LimitRatio, DeltaRatioTelescopesAtCheckpoints) {
  const QuadNum w = omega(3);
  for (long s : {-1L, 1L}) {
    QuadNum a1 = w * w + QuadNum(make_rational(s, 997)) * w * w;
    LimitRatioReport r = limit_ratio_check(policy::Basic{3, a1}, 10);
    ASSERT_FALSE(r.phi.checkpoints.empty());
    for (int n : r.phi.checkpoints)
      EXPECT_EQ(r.ratios[static_cast<std::size_t>(n - 1)].Delta_ratio, r.phi.product_through(n))
          << "n=" << n;
    EXPECT_TRUE(r.respects_bound);
  }
}
