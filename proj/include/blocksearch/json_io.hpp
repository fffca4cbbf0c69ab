#pragma once

/**
 * @file json_io.hpp
 * @brief JSON views of the library types.  Exact numbers travel as
 * {"exact": "<canonical string>", "float": <double>}.
 */

#include <blocksearch/accuracy.hpp>
#include <blocksearch/asymptotics.hpp>
#include <blocksearch/oracle.hpp>
#include <blocksearch/policies.hpp>
#include <blocksearch/runtime.hpp>

#include <json.hpp>

#include <string>

namespace blocksearch {

using Json = nlohmann::json;

inline Json to_json(const QuadNum& x) { return {{"exact", x.to_string()}, {"float", x.to_double()}}; }

/// Accepts {"exact": ...}, an exact string, or a plain JSON number.
inline QuadNum quad_from_json(const Json& j) {
  if (j.is_object()) {
    if (!j.contains("exact")) throw std::invalid_argument("exact number object lacks \"exact\"");
    return quad_from_json(j.at("exact"));
  }
  if (j.is_string()) return QuadNum::parse(j.get<std::string>());
  if (j.is_number_integer()) return QuadNum(make_rational(j.get<long>(), 1));
  if (j.is_number()) return QuadNum(parse_rational(j.dump()));
  throw std::invalid_argument("expected an exact number, got " + j.dump());
}

// ---------------------------------------------------------------------------
// Policies

inline Json policy_to_json(const PolicySpec& p) {
  Json j{{"type", policy_type_name(p)}};
  std::visit(overloaded{
                 [&](const policy::Fibonacci& f) { j["horizon"] = f.horizon; },
                 [&](const policy::Golden&) {},
                 [&](const policy::EvenBlock& e) { j["i"] = e.i; },
                 [&](const policy::OddBlockG& g) {
                   j["i"] = g.i;
                   j["horizon"] = g.horizon;
                 },
                 [&](const policy::OddBlockW& w) { j["i"] = w.i; },
                 [&](const policy::OddBlockH& h) { j["i"] = h.i; },
                 [&](const policy::Basic& b) {
                   j["i"] = b.i;
                   j["alpha1"] = to_json(b.alpha1);
                 },
                 [&](const policy::TwoTestSpecial&) {},
             },
             p);
  return j;
}

inline PolicySpec policy_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string())
    throw std::invalid_argument("policy needs a \"type\" string");
  const std::string type = j.at("type").get<std::string>();
  auto int_field = [&](const char* name) {
    if (!j.contains(name) || !j.at(name).is_number_integer())
      throw std::invalid_argument("policy " + type + " needs integer \"" + name + "\"");
    return j.at(name).get<int>();
  };
  PolicySpec p;
  if (type == "fibonacci") p = policy::Fibonacci{int_field("horizon")};
  else if (type == "golden") p = policy::Golden{};
  else if (type == "even-block") p = policy::EvenBlock{int_field("i")};
  else if (type == "odd-block-g") p = policy::OddBlockG{int_field("i"), int_field("horizon")};
  else if (type == "odd-block-w") p = policy::OddBlockW{int_field("i")};
  else if (type == "odd-block-h") p = policy::OddBlockH{int_field("i")};
  else if (type == "basic") {
    if (!j.contains("alpha1")) throw std::invalid_argument("policy basic needs \"alpha1\"");
    p = policy::Basic{int_field("i"), quad_from_json(j.at("alpha1"))};
  } else if (type == "two-test-special") p = policy::TwoTestSpecial{};
  else throw std::invalid_argument("unknown policy type \"" + type + "\"");
  try {
    validate(p);
  } catch (const std::domain_error& e) {
    throw std::invalid_argument(e.what());
  }
  return p;
}

// ---------------------------------------------------------------------------
// Reports

inline Json to_json(const VerificationReport& r) {
  Json items = Json::array();
  for (const auto& it : r.items)
    items.push_back({{"what", it.what}, {"n", it.n}, {"m", it.m}, {"ok", it.ok}});
  return {{"name", r.name}, {"ok", r.all_ok()}, {"failures", r.failures()}, {"items", items}};
}

inline Json to_json(const GeneralAccuracy& g) {
  Json j{{"sup", to_json(g.sup)},       {"attained_at", g.attained_at},
         {"converged", g.converged},    {"limit", to_json(g.limit)},
         {"horizon", g.horizon},        {"tail_bound", nullptr}};
  if (g.tail_bound) j["tail_bound"] = to_json(*g.tail_bound);
  return j;
}

inline Json to_json(const LimitRatioReport& r) {
  Json phi = Json::array();
  for (const auto& e : r.phi.phi)
    phi.push_back({{"source", e.label()}, {"value", to_json(e.value)}});
  Json ratios = Json::array();
  for (const auto& pt : r.ratios)
    ratios.push_back({{"n", pt.n},
                      {"delta_ratio", to_json(pt.delta_ratio)},
                      {"Delta_ratio", to_json(pt.Delta_ratio)}});
  Json j{{"phi", phi},
         {"product_lower_bound", to_json(r.product_lower_bound)},
         {"ratios", ratios},
         {"respects_bound", r.respects_bound},
         {"checkpoints", r.phi.checkpoints},
         {"truncated_at", nullptr}};
  if (r.truncated_at) {
    j["truncated_at"] = *r.truncated_at;
    j["truncation_reason"] = r.truncation_reason;
  }
  return j;
}

inline Json interval_json(const QuadNum& lo, const QuadNum& hi) {
  return {{"lo", to_json(lo)}, {"hi", to_json(hi)}};
}

inline Json to_json(const OutcomeBranch& b) {
  Json traj = Json::array();
  for (const auto& [lo, hi] : b.trajectory()) traj.push_back(interval_json(lo, hi));
  return {{"outcomes", b.outcomes}, {"trajectory", traj}, {"accuracy", to_json(b.accuracy)}};
}

inline Json to_json(const OracleResult& r) {
  return {{"value", to_json(r.value)}, {"branches", r.branches}, {"worst", to_json(r.worst)}};
}

inline Json to_json(const Witness& w) {
  Json knots = Json::array();
  for (const auto& [x, y] : w.knots) knots.push_back({{"x", to_json(x)}, {"f", to_json(y)}});
  return {{"peak", to_json(w.peak)}, {"breakpoints", knots}};
}

inline Json to_json(const Value& v) {
  Json j{{"float", v.approx}};
  if (v.exact) j["exact"] = v.exact->to_string();
  return j;
}

inline Json to_json(const SearchState& s) {
  Json hist = Json::array();
  for (const auto& o : s.history)
    hist.push_back({{"point", to_json(o.point)}, {"value", to_json(o.value)}, {"step", o.step}});
  Json pending = Json::array();
  for (const auto& x : s.pending) pending.push_back(to_json(x));
  Json j{{"policy", policy_to_json(s.policy)},
         {"initial", interval_json(s.a, s.b)},
         {"interval", interval_json(s.lo(), s.hi())},
         {"retained", nullptr},
         {"step", s.step},
         {"local_step", s.geometry.local_step},
         {"resets", s.resets},
         {"bound", to_json(s.error_bound())},
         {"estimate", to_json(s.estimate())},
         {"pending", pending},
         {"history", hist},
         {"status", s.status == Status::Running ? "running" : "finished"}};
  if (s.geometry.retained) j["retained"] = to_json(*s.geometry.retained);
  if (s.max_steps) j["horizon"] = *s.max_steps;
  return j;
}

inline Json to_json(const SearchResult& r) {
  Json hist = Json::array();
  for (const auto& o : r.history)
    hist.push_back({{"point", to_json(o.point)}, {"value", to_json(o.value)}, {"step", o.step}});
  return {{"estimate", to_json(r.estimate)},
          {"interval", interval_json(r.lo, r.hi)},
          {"bound", to_json(r.error_bound)},
          {"steps", r.steps},
          {"resets", r.resets},
          {"history", hist}};
}

}  // namespace blocksearch
