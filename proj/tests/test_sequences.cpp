#include <blocksearch/sequences.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace blocksearch;

namespace {

std::vector<long> as_longs(const SeqTable& t) {
  std::vector<long> out;
  for (const auto& v : t.values) out.push_back(v.get_si());
  return out;
}

}  // namespace

TEST(Sequences, FTables) {
  EXPECT_EQ(as_longs(f_seq(2, 7)), (std::vector<long>{1, 1, 4, 10, 28, 76, 208, 568}));
  EXPECT_EQ(as_longs(f_seq(1, 5)), (std::vector<long>{1, 1, 2, 3, 5, 8}));
  EXPECT_EQ(as_longs(f_seq(3, 4)), (std::vector<long>{1, 1, 6, 21, 81}));
  EXPECT_THROW(f_seq(0, 3), std::domain_error);
}

TEST(Sequences, GTables) {
  SeqTable g = g_seq(2, 5);
  EXPECT_EQ(g.first_index(), -1);
  EXPECT_EQ(as_longs(g), (std::vector<long>{0, 1, 2, 6, 16, 44, 120}));
  EXPECT_EQ(as_longs(g_seq(1, 3)), (std::vector<long>{0, 1, 1, 2, 3}));
  EXPECT_EQ(as_longs(g_seq(3, 4)), (std::vector<long>{0, 1, 3, 12, 45, 171}));
  EXPECT_EQ(g_extended(g, -2), make_rational(1, 2));
  // With G_{-2} = 1/i the recurrence reaches m = 0.
  for (int i = 1; i <= 6; ++i) {
    SeqTable gi = g_seq(i, 2);
    EXPECT_EQ(BigRational(gi.at(0)), i * (g_extended(gi, -1) + g_extended(gi, -2)));
  }
  EXPECT_THROW(g.at(6), std::out_of_range);
}

TEST(Sequences, ETables) {
  EXPECT_EQ(as_longs(e_seq(2, 3)), (std::vector<long>{1, 5, 17, 53}));
  EXPECT_EQ(as_longs(e_seq(3, 2)), (std::vector<long>{1, 7, 31}));
  for (int i = 1; i <= 9; ++i) EXPECT_EQ(e_seq(i, 0).at(0), 1);
}

TEST(Sequences, ClosedFormsMatchRecurrence) {
  for (int i = 1; i <= 10; ++i) {
    SeqTable f = f_seq(i, 31), g = g_seq(i, 30);
    for (int n = 0; n <= 30; ++n) {
      EXPECT_EQ(f_closed_form(i, n), QuadNum(BigRational(f.at(n + 1)))) << i << "," << n;
      EXPECT_EQ(g_closed_form(i, n), QuadNum(BigRational(g.at(n)))) << i << "," << n;
    }
  }
}

TEST(Sequences, WorkedIdentityInstances) {
  SeqTable f = f_seq(2, 6), g = g_seq(2, 6);
  EXPECT_EQ(f.at(3) * f.at(1) - f.at(2) * f.at(2), -6);
  EXPECT_EQ(g.at(3) * g.at(2) - g.at(4) * g.at(1), 8);
  EXPECT_EQ(f.at(4), g.at(3) + 2 * g.at(2));
  EXPECT_TRUE(check_identity(Identity::FCassini, 2, 2, 2).all_ok());
  EXPECT_TRUE(check_identity(Identity::GIndexShift, 2, 3, 3, 2, 2).all_ok());
  EXPECT_TRUE(check_identity(Identity::FFromG, 2, 4, 4).all_ok());
}

TEST(Sequences, AllIdentitiesExhaustive) {
  for (int i = 1; i <= 10; ++i) {
    VerificationReport r = check_all_identities(i, 25);
    EXPECT_TRUE(r.all_ok()) << "i=" << i << " failures=" << r.failures();
    EXPECT_GT(r.items.size(), 100u);
  }
}

TEST(Sequences, IdentityRangeRejected) {
  EXPECT_THROW(check_identity(Identity::FShiftedCassini, 2, 1, 3), std::domain_error);
  EXPECT_THROW(check_identity(Identity::GIndexShift, 2, 2, 2, 0, 4), std::domain_error);
  EXPECT_THROW(check_identity(Identity::FCassini, 2, 3, 2), std::domain_error);
}

TEST(Sequences, IdentityNamesRoundTrip) {
  for (Identity id : {Identity::FCassini, Identity::FShiftedCassini, Identity::GIndexShift,
                      Identity::GDoubleShift, Identity::FFromG, Identity::FGDoubleShift}) {
    auto back = identity_from_name(identity_name(id));
    ASSERT_TRUE(back.has_value());
    EXPECT_EQ(*back, id);
  }
  EXPECT_FALSE(identity_from_name("nonsense").has_value());
}

TEST(Sequences, RatioSignPredicate) {
  std::mt19937 rng(5);
  std::uniform_int_distribution<long> pick(1, 40);
  for (int i = 1; i <= 5; ++i) {
    SeqTable g = g_seq(i, 16);
    for (int t = 0; t < 200; ++t) {
      int n = std::uniform_int_distribution<int>(1, 14)(rng);
      int m = std::uniform_int_distribution<int>(1, n)(rng);
      BigRational a = make_rational(pick(rng), pick(rng)), b = make_rational(pick(rng), pick(rng));
      BigRational c = make_rational(pick(rng), pick(rng)), d = make_rational(pick(rng), pick(rng));
      EXPECT_EQ(g_ratio_difference_sign(g, n, m, a, b, c, d),
                g_ratio_predicted_sign(m, a, b, c, d));
    }
  }
}

TEST(Sequences, MonotoneRatiosAndSandwich) {
  for (int i = 2; i <= 10; ++i) {
    VerificationReport r = check_monotone_ratios(i, 12);
    EXPECT_TRUE(r.all_ok()) << "i=" << i;
  }
  // Worked values at i = 2.
  QuadNum w = omega(2);
  EXPECT_LT(QuadNum(make_rational(1, 4)), QuadNum(make_rational(10, 28)));
  EXPECT_LT(QuadNum(make_rational(10, 28)), w);
  EXPECT_GT(QuadNum(make_rational(28, 76)), w);
  EXPECT_LT(make_rational(4, 28), make_rational(1, 6));
  EXPECT_LT(make_rational(1, 6), make_rational(1, 4));
}
