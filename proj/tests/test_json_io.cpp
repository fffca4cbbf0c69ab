#include <blocksearch/json_io.hpp>

#include <gtest/gtest.h>

using namespace blocksearch;

TEST(JsonIo, ExactNumbersCarryBothForms) {
  QuadNum w = omega(2);
  Json j = to_json(w);
  EXPECT_EQ(j.at("exact").get<std::string>(), w.to_string());
  EXPECT_NEAR(j.at("float").get<double>(), 0.3660254037844386, 1e-15);
  EXPECT_EQ(quad_from_json(j), w);
  EXPECT_EQ(quad_from_json(Json("13/100")), QuadNum(make_rational(13, 100)));
  EXPECT_EQ(quad_from_json(Json(0.13)), QuadNum(make_rational(13, 100)));
  EXPECT_EQ(quad_from_json(Json(3)), QuadNum(3));
  EXPECT_THROW(quad_from_json(Json::array()), std::invalid_argument);
}

TEST(JsonIo, PolicyRoundTrip) {
  const QuadNum w = omega(3);
  std::vector<PolicySpec> all{policy::Fibonacci{5},    policy::Golden{},
                              policy::EvenBlock{2},    policy::OddBlockG{3, 4},
                              policy::OddBlockW{2},    policy::OddBlockH{3},
                              policy::Basic{3, w * w}, policy::TwoTestSpecial{}};
  for (const auto& p : all) {
    Json j = policy_to_json(p);
    EXPECT_EQ(policy_to_json(policy_from_json(j)), j) << j.dump();
  }
}

TEST(JsonIo, PolicyParsing) {
  PolicySpec p = policy_from_json(Json::parse(R"({"type":"basic","i":2,"alpha1":0.13})"));
  ASSERT_TRUE(std::holds_alternative<policy::Basic>(p));
  EXPECT_EQ(std::get<policy::Basic>(p).alpha1, QuadNum(make_rational(13, 100)));
  EXPECT_THROW(policy_from_json(Json::parse(R"({"type":"spiral"})")), std::invalid_argument);
  EXPECT_THROW(policy_from_json(Json::parse(R"({"type":"fibonacci"})")), std::invalid_argument);
  EXPECT_THROW(policy_from_json(Json::parse(R"({"type":"odd-block-h","i":1})")), std::invalid_argument);
  EXPECT_THROW(policy_from_json(Json::parse(R"({"type":"basic","i":2,"alpha1":0.9})")),
               std::invalid_argument);
  EXPECT_THROW(policy_from_json(Json::parse(R"([1,2])")), std::invalid_argument);
}

TEST(JsonIo, LimitRatioReportShape) {
  LimitRatioReport r = limit_ratio_check(policy::Basic{2, QuadNum(make_rational(13, 100))}, 8);
  Json j = to_json(r);
  ASSERT_TRUE(j.contains("phi"));
  ASSERT_TRUE(j.contains("product_lower_bound"));
  ASSERT_TRUE(j.at("ratios").is_array());
  const Json& first = j.at("ratios").at(0);
  EXPECT_EQ(first.at("n"), 1);
  EXPECT_TRUE(first.contains("delta_ratio"));
  EXPECT_TRUE(first.contains("Delta_ratio"));
  EXPECT_TRUE(j.at("truncated_at").is_number_integer());
}

TEST(JsonIo, OracleAndWitness) {
  OracleResult o = worst_case_accuracy(policy::Fibonacci{3}, 3);
  Json j = to_json(o);
  EXPECT_EQ(j.at("value").at("exact"), "1/5");
  EXPECT_EQ(j.at("worst").at("trajectory").size(), o.worst.rounds.size() + 1);
  Json w = to_json(witness_function(policy::Fibonacci{3}, 3, o.worst));
  EXPECT_GE(w.at("breakpoints").size(), 4u);
}
