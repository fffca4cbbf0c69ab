#include <blocksearch/position.hpp>

#include <gtest/gtest.h>

using namespace blocksearch;

namespace {
QuadNum q(long p, long d) { return QuadNum(make_rational(p, d)); }
}  // namespace

TEST(Position, ChiParity) {
  for (int k = 1; k <= 40; ++k) EXPECT_EQ(chi(k), k % 2 == 0 ? 1 : 0);
}

TEST(Position, LocateWorkedCases) {
  EXPECT_EQ(locate_position(q(7, 10), QuadNum(1), 2), std::vector<int>{4});
  EXPECT_EQ(locate_position(q(6, 10), QuadNum(1), 2), std::vector<int>{3});
  EXPECT_THROW(locate_position(q(2, 3), QuadNum(1), 2), BoundaryError);
  EXPECT_THROW(locate_position(q(1, 2), QuadNum(1), 2), BoundaryError);
  EXPECT_THROW(locate_position(q(2, 5), QuadNum(1), 2), std::domain_error);
  EXPECT_THROW(locate_position(QuadNum(1), QuadNum(1), 2), std::domain_error);
}

TEST(Position, FeasibleSetIsSingleOffBreakpoints) {
  for (int i = 1; i <= 7; ++i) {
    for (long p = 501; p < 1000; p += 7) {
      QuadNum delta = q(p, 1000);
      std::vector<int> ls;
      try {
        ls = locate_position(delta, QuadNum(1), i);
      } catch (const BoundaryError&) {
        continue;
      }
      EXPECT_EQ(ls.size(), 1u) << "i=" << i << " delta=" << delta;
    }
  }
}

TEST(Position, StepUpdateWorkedCases) {
  StepUpdate a = step_update(q(7, 10), QuadNum(1), 4, 2);
  EXPECT_EQ(a.alpha, q(3, 10));
  EXPECT_EQ(a.Delta, q(35, 100));
  EXPECT_EQ(a.delta, q(3, 10));

  StepUpdate b = step_update(q(62, 100), QuadNum(1), 3, 2);
  EXPECT_EQ(b.alpha, q(24, 100));
  EXPECT_EQ(b.Delta, q(38, 100));
  EXPECT_EQ(b.delta, q(24, 100));

  StepUpdate c = step_update(q(82, 100), QuadNum(1), 4, 2);
  EXPECT_EQ(c.alpha, q(18, 100));
  EXPECT_EQ(c.Delta, q(41, 100));
  EXPECT_EQ(c.delta, q(23, 100));
}

TEST(Position, StepUpdateReconstructsInput) {
  for (int i = 1; i <= 6; ++i) {
    for (long p = 503; p < 1000; p += 11) {
      QuadNum delta = q(p, 1000);
      std::vector<int> ls;
      try {
        ls = locate_position(delta, QuadNum(1), i);
      } catch (const BoundaryError&) {
        continue;
      }
      for (int l : ls) {
        StepUpdate u;
        try {
          u = step_update(delta, QuadNum(1), l, i);
        } catch (const BoundaryError&) {
          continue;
        }
        const QuadNum c(chi(l - 1));
        EXPECT_EQ(c * u.alpha + QuadNum(l / 2) * u.Delta, delta);
        EXPECT_EQ(u.alpha + QuadNum(i) * u.Delta, QuadNum(1));
        EXPECT_EQ(u.delta, max(u.alpha, u.Delta - u.alpha));
        EXPECT_LT(u.Delta, QuadNum(1));
        EXPECT_GT(u.delta + u.delta, u.Delta);
      }
    }
  }
}

TEST(Position, StepUpdateErrors) {
  EXPECT_THROW(step_update(q(7, 10), QuadNum(1), 3, 2), std::domain_error);
  EXPECT_THROW(step_update(q(7, 10), QuadNum(1), 5, 2), std::domain_error);
  EXPECT_THROW(step_update(q(4, 5), QuadNum(1), 4, 2), BoundaryError);
}

TEST(Position, ChainBasicOpening) {
  auto t = chain_basic(q(11, 100), 2, 1);
  EXPECT_EQ(t[0].delta, q(11, 100));
  EXPECT_EQ(t[0].Delta, q(39, 200));

  auto u = chain_basic(q(13, 100), 2, 2);
  EXPECT_EQ(u[1].delta, q(11, 200));
  EXPECT_EQ(u[1].Delta, q(13, 200));
  EXPECT_EQ(u[1].position, 4);

  EXPECT_THROW(chain_basic(q(1, 6), 2, 1), InfeasiblePartition);
  EXPECT_THROW(chain_basic(q(1, 10), 2, 1), BoundaryError);
  EXPECT_THROW(chain_basic(q(1, 2), 2, 1), std::domain_error);
}

TEST(Position, ChainBasicAtOmegaSquaredIsGeometric) {
  for (int i = 2; i <= 5; ++i) {
    const QuadNum w = omega(i);
    auto t = chain_basic(w * w, i, 8);
    for (std::size_t m = 0; m < t.size(); ++m) {
      EXPECT_EQ(t[m].alpha, w.pow(static_cast<long>(m) + 2)) << i << " " << m;
      EXPECT_EQ(t[m].beta, w.pow(static_cast<long>(m) + 3));
    }
  }
}

TEST(Position, ReplayRuleIsHonoured) {
  auto t = chain_basic(q(13, 100), 2, 2, PositionRule::replay({4}));
  EXPECT_EQ(t[1].position, 4);
  EXPECT_THROW(chain_basic(q(13, 100), 2, 2, PositionRule::replay({3})), std::domain_error);
}
