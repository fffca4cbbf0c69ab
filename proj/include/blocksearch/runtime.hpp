#pragma once

/**
 * @file runtime.hpp
 * @brief Runs a policy against a real function.  Test points are exact;
 * function values are doubles, optionally with an exact twin so witness
 * functions replay without rounding.
 */

#include <blocksearch/errors.hpp>
#include <blocksearch/exactnum.hpp>
#include <blocksearch/policies.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace blocksearch {

struct Value {
  double approx = 0.0;
  std::optional<QuadNum> exact;

  static Value of(double v) { return {v, std::nullopt}; }
  static Value of(const QuadNum& v) { return {v.to_double(), v}; }
};

inline bool value_less(const Value& a, const Value& b) {
  if (a.exact && b.exact) return *a.exact < *b.exact;
  return a.approx < b.approx;
}
inline bool value_equal(const Value& a, const Value& b) {
  if (a.exact && b.exact) return *a.exact == *b.exact;
  return a.approx == b.approx;  // exact float equality only
}

struct Observation {
  QuadNum point;
  Value value;
  int step = 0;  ///< global step that produced this test
};

enum class Status { Running, Finished };

struct SearchState {
  PolicySpec policy;
  QuadNum a, b;                 ///< initial interval
  Geometry geometry;            ///< current interval and retained point
  std::optional<Value> retained_value;
  int step = 0;                 ///< global step counter, never reset
  std::optional<int> max_steps;
  int resets = 0;               ///< tie resets applied
  std::vector<Observation> history;
  std::vector<QuadNum> pending;
  int pending_steps = 0;
  Status status = Status::Running;

  QuadNum lo() const { return geometry.lo; }
  QuadNum hi() const { return geometry.hi; }
  /// Distance from the best point to the farther end of the interval.
  QuadNum error_bound() const { return geometry.accuracy(); }
  /// Best tested point; the left end when no tested point is inside.
  QuadNum estimate() const { return geometry.retained ? *geometry.retained : geometry.lo; }
};

namespace detail {

/// Fills `pending` with the next round's tests, or finishes the search.
inline void schedule(SearchState& s) {
  s.pending.clear();
  s.pending_steps = 0;
  if (s.status == Status::Finished) return;
  int remaining = s.max_steps ? *s.max_steps - s.step : 1 << 30;
  if (remaining <= 0) {
    s.status = Status::Finished;
    return;
  }
  std::vector<QuadNum> tests;
  int steps = steps_per_round(s.geometry, s.policy);
  if (steps > remaining) {
    std::optional<Partition> part = next_partition(s.geometry, s.policy);
    if (part) tests = part->points;
    steps = 1;
  } else {
    tests = next_tests(s.geometry, s.policy);
  }
  if (tests.empty()) {
    s.status = Status::Finished;
    return;
  }
  s.pending = std::move(tests);
  s.pending_steps = steps;
}

}  // namespace detail

inline SearchState start_search(const PolicySpec& p, const QuadNum& a, const QuadNum& b,
                                std::optional<int> max_steps = std::nullopt) {
  validate(p);
  if (!(a < b)) throw std::domain_error("interval needs a < b");
  if (max_steps && *max_steps < 0) throw std::domain_error("step budget must be >= 0");
  SearchState s;
  s.policy = p;
  s.a = a;
  s.b = b;
  s.geometry = Geometry{a, b, std::nullopt, 0};
  s.max_steps = max_steps;
  detail::schedule(s);
  return s;
}

/// Applies the values of the pending tests (in pending order) and moves to
/// the next round.  A finished state is returned unchanged.
inline SearchState eliminate(const SearchState& in, const std::vector<Value>& values) {
  if (in.status == Status::Finished) {
    if (!values.empty()) throw std::invalid_argument("search already finished");
    return in;
  }
  if (values.size() != in.pending.size())
    throw std::invalid_argument("expected " + std::to_string(in.pending.size()) +
                                " values, got " + std::to_string(values.size()));
  for (std::size_t k = 0; k < values.size(); ++k)
    if (!std::isfinite(values[k].approx))
      throw std::invalid_argument("non-finite value at point " + in.pending[k].to_string());

  SearchState s = in;
  const int step = s.step + s.pending_steps;
  std::vector<std::pair<QuadNum, Value>> pts;
  for (std::size_t k = 0; k < values.size(); ++k) {
    pts.emplace_back(s.pending[k], values[k]);
    s.history.push_back({s.pending[k], values[k], step});
  }
  if (s.geometry.retained) pts.emplace_back(*s.geometry.retained, *s.retained_value);
  std::sort(pts.begin(), pts.end(), [](const auto& x, const auto& y) { return x.first < y.first; });

  std::size_t best = 0;
  for (std::size_t k = 1; k < pts.size(); ++k)
    if (value_less(pts[best].second, pts[k].second)) best = k;
  std::vector<std::size_t> tied;
  for (std::size_t k = 0; k < pts.size(); ++k)
    if (value_equal(pts[k].second, pts[best].second)) tied.push_back(k);

  std::vector<QuadNum> xs;
  for (const auto& pt : pts) xs.push_back(pt.first);
  if (tied.size() == 1) {
    s.geometry = advance(s.geometry, xs, best, s.pending_steps);
    s.retained_value = pts[best].second;
  } else {
    if (tied.size() > 2 || tied[1] != tied[0] + 1)
      throw std::invalid_argument("values are not unimodal: non-adjacent equal maxima");
    // Equal maxima: the peak lies strictly between them and no tested point
    // is inside, so the policy restarts on that interval.
    s.geometry = Geometry{xs[tied[0]], xs[tied[1]], std::nullopt, 0};
    s.retained_value.reset();
    ++s.resets;
  }
  s.step = step;
  detail::schedule(s);
  return s;
}

struct StopRule {
  std::optional<int> steps;
  std::optional<double> tolerance;  ///< stop once error_bound <= tolerance
};

struct SearchResult {
  QuadNum estimate;
  QuadNum lo, hi;
  QuadNum error_bound;
  int steps = 0;
  int resets = 0;
  std::vector<Observation> history;
  std::vector<std::pair<QuadNum, QuadNum>> trajectory;  ///< interval after each round
};

using Evaluator = std::function<Value(const QuadNum&)>;

inline Evaluator from_double(std::function<double(double)> f) {
  return [f = std::move(f)](const QuadNum& x) { return Value::of(f(x.to_double())); };
}
inline Evaluator from_exact(std::function<QuadNum(const QuadNum&)> f) {
  return [f = std::move(f)](const QuadNum& x) { return Value::of(f(x)); };
}

class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const QuadNum& point, const std::string& why)
      : std::runtime_error("evaluation failed at " + point.to_string() + ": " + why),
        point_(point) {}
  const QuadNum& point() const { return point_; }

 private:
  QuadNum point_;
};

inline SearchResult run_search(const Evaluator& f, const PolicySpec& p, const QuadNum& a,
                               const QuadNum& b, const StopRule& stop) {
  if (!stop.steps && !stop.tolerance) throw std::domain_error("stop rule needs steps or tolerance");
  if (stop.tolerance && !(*stop.tolerance > 0)) throw std::domain_error("tolerance must be > 0");
  SearchState s = start_search(p, a, b, stop.steps);
  SearchResult r;
  r.trajectory.emplace_back(s.lo(), s.hi());
  while (s.status == Status::Running) {
    if (stop.tolerance && s.step > 0 && s.error_bound().to_double() <= *stop.tolerance) break;
    std::vector<Value> vals;
    for (const auto& x : s.pending) {
      Value v;
      try {
        v = f(x);
      } catch (const std::exception& e) {
        throw EvaluationError(x, e.what());
      }
      if (!std::isfinite(v.approx)) throw EvaluationError(x, "non-finite value");
      vals.push_back(v);
    }
    s = eliminate(s, vals);
    r.trajectory.emplace_back(s.lo(), s.hi());
  }
  r.estimate = s.estimate();
  r.lo = s.lo();
  r.hi = s.hi();
  r.error_bound = s.error_bound();
  r.steps = s.step;
  r.resets = s.resets;
  r.history = s.history;
  return r;
}

}  // namespace blocksearch
