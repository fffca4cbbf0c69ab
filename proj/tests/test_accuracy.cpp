#include <blocksearch/accuracy.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace blocksearch;

namespace {
QuadNum q(long p, long d) { return QuadNum(make_rational(p, d)); }
QuadNum qi(const BigInt& p, const BigInt& d) { return QuadNum(make_rational(p, d)); }

std::vector<PolicySpec> named_policies() {
  return {policy::Fibonacci{6},  policy::Golden{},        policy::EvenBlock{1},
          policy::EvenBlock{2},  policy::EvenBlock{3},    policy::OddBlockG{2, 5},
          policy::OddBlockG{3, 4}, policy::OddBlockW{2},  policy::OddBlockW{3},
          policy::OddBlockH{2},  policy::OddBlockH{3},    policy::OddBlockH{5},
          policy::Basic{2, omega(2) * omega(2)},
          policy::Basic{2, QuadNum(make_rational(11, 100), make_rational(1, 100000), 12)},
          policy::TwoTestSpecial{}};
}
}  // namespace

TEST(StepAccuracy, WorkedValues) {
  EXPECT_EQ(step_accuracy(policy::Fibonacci{3}, 3), q(1, 5));
  EXPECT_EQ(step_accuracy(policy::OddBlockG{2, 3}, 3), q(1, 28));
  QuadNum w = omega(2);
  EXPECT_EQ(step_accuracy(policy::OddBlockH{2}, 1), w / QuadNum(2) + w * w);
  EXPECT_EQ(step_accuracy(policy::OddBlockH{2}, 4), w.pow(4));
  EXPECT_EQ(step_accuracy(policy::OddBlockW{3}, 5), omega(3).pow(5));
  EXPECT_EQ(step_accuracy(policy::TwoTestSpecial{}, 2), q(1, 7));
  EXPECT_THROW(step_accuracy(policy::Fibonacci{3}, 4), std::domain_error);
}

TEST(StepAccuracy, ClassicalFibonacci) {
  for (int n = 1; n <= 12; ++n)
    EXPECT_EQ(step_accuracy(policy::Fibonacci{n}, n),
              QuadNum(make_rational(BigInt(1), f_seq(1, n + 1).at(n + 1))));
}

TEST(StepAccuracy, OptimalOddBlockIsReciprocalOfF) {
  for (int i = 1; i <= 5; ++i)
    for (int n = 1; n <= 8; ++n)
      EXPECT_EQ(step_accuracy(policy::OddBlockG{i, n}, n),
                QuadNum(make_rational(BigInt(1), f_seq(i, n + 1).at(n + 1))));
}

TEST(StepAccuracy, ClosedFormsAgreeWithPlans) {
  for (const PolicySpec& p : named_policies()) {
    for (int n = 1; n <= 6; ++n) {
      if (!plan_step(p, n)) break;
      EXPECT_EQ(step_accuracy(p, n), plan_accuracy(p, n)) << describe(p) << " n=" << n;
    }
  }
}

TEST(StepAccuracy, EvenBlockAgainstE) {
  for (int i = 1; i <= 4; ++i) {
    SeqTable e = e_seq(i, 8);
    for (int n = 1; n <= 8; ++n) {
      QuadNum v = QuadNum(BigRational(e.at(n))) * step_accuracy(policy::EvenBlock{i}, n);
      EXPECT_LT(v, q(2 * (i + 1), 2 * i + 1));
    }
  }
}

TEST(TraceBasic, WorkedValues) {
  AccuracyTrace t = trace_basic(q(11, 100), 2, 1);
  EXPECT_EQ(t.at(1).delta, q(11, 100));
  EXPECT_EQ(t.at(1).Delta, q(39, 200));
  AccuracyTrace u = trace_basic(q(13, 100), 2, 2);
  EXPECT_EQ(u.at(2).delta, q(11, 200));
  EXPECT_EQ(u.at(2).Delta, q(13, 200));
  EXPECT_EQ(basic_delta_closed(q(13, 100), 2, 2), q(11, 200));
  EXPECT_EQ(basic_Delta_closed(q(13, 100), 2, 2), q(13, 200));
  EXPECT_EQ(basic_Delta_closed(q(11, 100), 2, 1), q(39, 200));
}

TEST(TraceBasic, HPointIsGeometric) {
  QuadNum w = omega(2);
  AccuracyTrace t = trace_basic(w * w, 2, 10);
  for (int m = 1; m <= 10; ++m) EXPECT_EQ(t.at(m).delta, w.pow(m + 1));
  // The H policy seen from its second step.
  for (int m = 1; m <= 6; ++m)
    EXPECT_EQ(t.at(m).delta, step_accuracy(policy::OddBlockH{2}, m + 1));
}

TEST(TraceBasic, ClosedFormsOnRandomAlpha) {
  std::mt19937_64 rng(17);
  for (int i = 2; i <= 3; ++i) {
    const SeqTable f = f_seq(i, 12), g = g_seq(i, 12);
    auto fr = [&](int a, int b) { return qi(f.at(a), f.at(b)); };
    auto gr = [&](int a, int b) { return qi(g.at(a), g.at(b)); };
    std::vector<std::pair<QuadNum, QuadNum>> boxes = {
        {fr(1, 3), gr(1, 3)}, {gr(1, 3), fr(3, 5)}, {fr(3, 5), gr(3, 5)},
        {gr(2, 4), fr(2, 4)}, {fr(2, 4), gr(0, 2)}, {fr(4, 6), gr(2, 4)}};
    for (auto& [lo, hi] : boxes) {
      for (int t = 0; t < 20; ++t) {
        BigInt k = static_cast<unsigned long>(rng() % 999999 + 1);
        QuadNum a = lo + (hi - lo) * qi(k, BigInt(1000000));
        int h = closed_form_horizon(a, i);
        ASSERT_GE(h, 1);
        AccuracyTrace tr = trace_basic(a, i, h);
        for (int m = 1; m <= h; ++m) {
          EXPECT_EQ(tr.at(m).delta, basic_delta_closed(a, i, m));
          EXPECT_EQ(tr.at(m).Delta, basic_Delta_closed(a, i, m));
          EXPECT_EQ(tr.at(m).alpha, tr.at(m).delta);
        }
      }
    }
  }
}

TEST(GeneralAccuracy, WPolicy) {
  GeneralAccuracy g = general_accuracy(policy::OddBlockW{2}, 12);
  QuadNum w = omega(2);
  EXPECT_EQ(g.sup, QuadNum(4) * w);
  EXPECT_EQ(g.attained_at, 1);
  EXPECT_TRUE(g.converged);
  EXPECT_NEAR(g.sup.to_double(), 1.4641016, 1e-7);
  EXPECT_NEAR(g.limit.to_double(), 1.36603, 1e-5);
}

TEST(GeneralAccuracy, HPolicy) {
  for (int i = 2; i <= 8; ++i) {
    GeneralAccuracy g = general_accuracy(policy::OddBlockH{i}, 12);
    EXPECT_EQ(g.sup, delta_star(i)) << i;
    EXPECT_EQ(g.attained_at, 3);
    EXPECT_TRUE(g.converged);
  }
  EXPECT_NEAR(delta_star(2).to_double(), 1.37306696, 1e-8);
}

TEST(GeneralAccuracy, BasicAtHPointMatchesH) {
  GeneralAccuracy g = general_accuracy(policy::Basic{2, omega(2) * omega(2)}, 12);
  EXPECT_EQ(g.sup, delta_star(2));
  EXPECT_EQ(g.attained_at, 2);
  EXPECT_TRUE(g.converged);
}

TEST(GeneralAccuracy, GoldenAndEvenBlock) {
  GeneralAccuracy g = general_accuracy(policy::Golden{}, 10);
  EXPECT_EQ(g.sup, QuadNum(2) * omega(1));
  EXPECT_TRUE(g.converged);
  GeneralAccuracy e = general_accuracy(policy::EvenBlock{2}, 10);
  EXPECT_FALSE(e.converged);
  EXPECT_EQ(e.attained_at, 10);
  EXPECT_EQ(e.limit, q(6, 5));
  GeneralAccuracy t = general_accuracy(policy::TwoTestSpecial{}, 10);
  EXPECT_EQ(t.sup, q(9, 7));
  EXPECT_EQ(t.attained_at, 1);
  EXPECT_THROW(general_accuracy(policy::Golden{}, 3), std::domain_error);
}

TEST(GeneralAccuracy, TwoBranchBracket) {
  for (int i = 2; i <= 10; ++i) {
    QuadNum L = f_omega_limit(i);
    EXPECT_EQ(L, q(1, 2) + q(3, 2) * QuadNum::sqrt_of(radicand_for(i)) / QuadNum(i + 4));
    for (int n = 0; n < 12; ++n) {
      QuadNum up = f_omega_product(i, 2 * n), up_next = f_omega_product(i, 2 * n + 2);
      QuadNum down = f_omega_product(i, 2 * n + 1), down_next = f_omega_product(i, 2 * n + 3);
      EXPECT_LT(up, up_next);
      EXPECT_GT(down, down_next);
      EXPECT_LT(up_next, L);
      EXPECT_GT(down_next, L);
    }
  }
}

TEST(Thresholds, KnownValues) {
  for (int i = 2; i <= 50; ++i) {
    Thresholds t = thresholds(i, 4);
    QuadNum w = omega(i);
    EXPECT_EQ(t.a(1), t.delta_star / QuadNum(BigRational(f_seq(i, 3).at(3))));
    EXPECT_EQ(t.a(2), w * w);
    EXPECT_GT(t.gamma, QuadNum(1));
  }
  Thresholds t2 = thresholds(2, 3);
  EXPECT_NEAR(t2.gamma.to_double(), 1.005154, 1e-6);
  // -alpha1 < B_1  <=>  alpha1 > 1/i - i gamma omega^2
  QuadNum w = omega(2);
  EXPECT_EQ(-t2.b(1), q(1, 2) - QuadNum(2) * t2.gamma * w * w);
  EXPECT_NEAR((-t2.b(1)).to_double(), 0.23067, 1e-5);
  EXPECT_THROW(thresholds(1, 3), std::domain_error);
}

TEST(Thresholds, AThresholdMeaning) {
  // F_{m+2} delta_m < delta iff (-1)^{m-1} alpha1 < (-1)^{m-1} A_m, checked on
  // sample alpha1 where the closed form is valid.
  const int i = 2;
  Thresholds t = thresholds(i, 3);
  SeqTable f = f_seq(i, 6);
  for (long k = 101; k < 166; k += 4) {
    QuadNum a = q(k, 1000);
    for (int m = 1; m <= 3; ++m) {
      QuadNum lhs = QuadNum(BigRational(f.at(m + 2))) * basic_delta_closed(a, i, m);
      bool below = lhs < t.delta_star;
      bool by_a = (m % 2 == 1) ? (a < t.a(m)) : (a > t.a(m));
      EXPECT_EQ(below, by_a) << "alpha1=" << a << " m=" << m;
    }
  }
}

TEST(Inequalities, AllHoldStrictly) {
  VerificationReport r = verify_inequalities(2, 100);
  EXPECT_TRUE(r.all_ok()) << r.failures() << " failures";
  for (const auto& item : r.items)
    EXPECT_TRUE(item.ok) << item.what << " i=" << item.n;
  EXPECT_THROW(verify_inequalities(1, 4), std::domain_error);
}

TEST(Subintervals, WorkedCases) {
  Subinterval s = subinterval_classify(q(11, 100), 2);
  EXPECT_EQ(s.lo, q(1, 10));
  EXPECT_EQ(s.hi, q(1, 8));
  EXPECT_EQ(s.dismissal, Dismissal::BThreshold);
  EXPECT_TRUE(subinterval_classify(omega(2) * omega(2), 2).is_h_point);
  EXPECT_THROW(subinterval_classify(q(2, 10), 2), std::domain_error);
  EXPECT_THROW(subinterval_classify(q(1, 10), 2), BoundaryError);
  EXPECT_THROW(subinterval_classify(q(1, 6), 2), BoundaryError);
  EXPECT_EQ(subinterval_classify(q(5, 100), 2).dismissal, Dismissal::BThreshold);
  EXPECT_EQ(subinterval_classify(q(13, 100), 2).dismissal, Dismissal::AThreshold);
  EXPECT_EQ(subinterval_classify(q(15, 100), 2).dismissal, Dismissal::MuThreshold);
}

TEST(Subintervals, CoverEverythingBelowG0G2) {
  for (int i = 2; i <= 4; ++i) {
    for (long k = 1; k < 1000; k += 3) {
      QuadNum a = q(k, 1000 * i * (i + 1));
      try {
        Subinterval s = subinterval_classify(a, i);
        if (!s.is_h_point) {
          EXPECT_LT(s.lo, a);
          EXPECT_LT(a, s.hi);
        }
      } catch (const BoundaryError&) {
      }
    }
  }
}
