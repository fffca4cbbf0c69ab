#pragma once

/**
 * @file oracle.hpp
 * @brief Brute-force adversary.  The adversary's move at each round is the
 * index of the test point holding the largest value; for block policies the
 * remaining interval depends only on that choice, so the sup over strictly
 * unimodal functions becomes a max over a finite branch tree.
 */

#include <blocksearch/errors.hpp>
#include <blocksearch/exactnum.hpp>
#include <blocksearch/policies.hpp>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <queue>
#include <string>
#include <vector>

namespace blocksearch {

inline constexpr std::uint64_t kDefaultBranchCap = 1'000'000;

/// One round of a branch: every point tested so far that is still inside the
/// interval (retained point included), in increasing order.
struct Round {
  Geometry before;
  std::vector<QuadNum> points;
  std::size_t argmax = 0;
  int steps = 1;
  Geometry after;
};

struct OutcomeBranch {
  std::vector<std::size_t> outcomes;
  std::vector<Round> rounds;
  QuadNum accuracy;

  /// Interval after each round, starting from the initial one.
  std::vector<std::pair<QuadNum, QuadNum>> trajectory() const {
    std::vector<std::pair<QuadNum, QuadNum>> out;
    if (rounds.empty()) return out;
    out.emplace_back(rounds.front().before.lo, rounds.front().before.hi);
    for (const auto& r : rounds) out.emplace_back(r.after.lo, r.after.hi);
    return out;
  }
};

namespace detail {

/// Points and step count for the next round, given the steps still allowed.
/// Empty points mean the policy has finished.
inline std::pair<std::vector<QuadNum>, int> round_points(const Geometry& g, const PolicySpec& p,
                                                         int remaining) {
  std::vector<QuadNum> tests;
  int steps = steps_per_round(g, p);
  if (steps > remaining) {
    // Paired opening cut short: only the lone first test is placed.
    std::optional<Partition> part = next_partition(g, p);
    if (!part) return {{}, 0};
    tests = part->points;
    steps = 1;
  } else {
    tests = next_tests(g, p);
  }
  if (tests.empty()) return {{}, 0};
  if (g.retained) tests.push_back(*g.retained);
  std::sort(tests.begin(), tests.end());
  return {tests, steps};
}

inline Geometry fresh_geometry(const PolicySpec& p) {
  (void)p;
  return Geometry{QuadNum(0), QuadNum(1), std::nullopt, 0};
}

}  // namespace detail

/// Visits every branch of n steps.  Throws BranchCapExceeded once more than
/// `cap` leaves have been produced.
inline std::uint64_t enumerate_branches(const PolicySpec& p, int n,
                                        const std::function<void(const OutcomeBranch&)>& visit,
                                        std::uint64_t cap = kDefaultBranchCap) {
  if (n < 1) throw std::domain_error("oracle needs n >= 1");
  validate(p);
  if (auto h = policy_horizon(p); h && n > *h)
    throw std::domain_error(describe(p) + " has no step " + std::to_string(n));
  std::uint64_t leaves = 0;
  OutcomeBranch cur;
  std::function<void(const Geometry&, int)> walk = [&](const Geometry& g, int done) {
    std::vector<QuadNum> pts;
    int steps = 0;
    if (done < n) std::tie(pts, steps) = detail::round_points(g, p, n - done);
    if (pts.empty()) {
      if (++leaves > cap)
        throw BranchCapExceeded("more than " + std::to_string(cap) + " branches for " +
                                describe(p) + " at n = " + std::to_string(n));
      cur.accuracy = g.accuracy();
      visit(cur);
      return;
    }
    for (std::size_t k = 0; k < pts.size(); ++k) {
      Geometry next = advance(g, pts, k, steps);
      cur.outcomes.push_back(k);
      cur.rounds.push_back({g, pts, k, steps, next});
      walk(next, done + steps);
      cur.outcomes.pop_back();
      cur.rounds.pop_back();
    }
  };
  walk(detail::fresh_geometry(p), 0);
  return leaves;
}

struct OracleResult {
  QuadNum value;
  OutcomeBranch worst;  ///< first branch attaining the max
  std::uint64_t branches = 0;
};

inline OracleResult worst_case_accuracy(const PolicySpec& p, int n,
                                        std::uint64_t cap = kDefaultBranchCap) {
  OracleResult r;
  bool have = false;
  r.branches = enumerate_branches(
      p, n,
      [&](const OutcomeBranch& b) {
        if (!have || r.value < b.accuracy) {
          r.value = b.accuracy;
          r.worst = b;
          have = true;
        }
      },
      cap);
  return r;
}

/// Rebuilds a branch from its outcome indices.
inline OutcomeBranch replay_outcomes(const PolicySpec& p, int n,
                                     const std::vector<std::size_t>& outcomes) {
  validate(p);
  OutcomeBranch b;
  Geometry g = detail::fresh_geometry(p);
  int done = 0;
  for (std::size_t k : outcomes) {
    if (done >= n) throw std::invalid_argument("inconsistent branch: too many outcomes");
    auto [pts, steps] = detail::round_points(g, p, n - done);
    if (pts.empty()) throw std::invalid_argument("inconsistent branch: policy finished early");
    if (k >= pts.size())
      throw std::invalid_argument("inconsistent branch: outcome " + std::to_string(k) +
                                  " with only " + std::to_string(pts.size()) + " points");
    Geometry next = advance(g, pts, k, steps);
    b.outcomes.push_back(k);
    b.rounds.push_back({g, pts, k, steps, next});
    g = next;
    done += steps;
  }
  if (done < n && !detail::round_points(g, p, n - done).first.empty())
    throw std::invalid_argument("inconsistent branch: too few outcomes");
  b.accuracy = g.accuracy();
  return b;
}

// ---------------------------------------------------------------------------
// Witness functions

/// Piecewise-linear strictly unimodal function given by its knots.
struct Witness {
  QuadNum peak;
  std::vector<std::pair<QuadNum, QuadNum>> knots;  ///< (x, f(x)), x increasing

  QuadNum operator()(const QuadNum& x) const {
    if (x < knots.front().first || knots.back().first < x)
      throw std::domain_error("witness evaluated outside its interval");
    for (std::size_t j = 1; j < knots.size(); ++j) {
      const auto& [x0, y0] = knots[j - 1];
      const auto& [x1, y1] = knots[j];
      if (x <= x1) return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
    }
    return knots.back().second;
  }

  double at(double x) const {
    for (std::size_t j = 1; j < knots.size(); ++j) {
      double x0 = knots[j - 1].first.to_double(), x1 = knots[j].first.to_double();
      double y0 = knots[j - 1].second.to_double(), y1 = knots[j].second.to_double();
      if (x <= x1) return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
    }
    return knots.back().second.to_double();
  }
};

/// Offset of the witness peak from the far end of the final cell, relative
/// to the cell length.
inline const BigRational kWitnessOffset = make_rational(1, 1'000'000'000'000L);

/// A unimodal function realizing the branch.  The peak sits just inside the
/// end of the final interval farther from the retained point, so the branch
/// error is attained up to the offset.
inline Witness witness_function(const PolicySpec& p, int n, const OutcomeBranch& branch) {
  OutcomeBranch b = replay_outcomes(p, n, branch.outcomes);
  if (b.rounds.empty()) throw std::invalid_argument("inconsistent branch: no rounds");
  const Geometry& last = b.rounds.back().after;
  const QuadNum r = *last.retained;
  const QuadNum off = last.length() * QuadNum(kWitnessOffset);
  const QuadNum peak = (last.hi - r >= r - last.lo) ? last.hi - off : last.lo + off;

  // Order constraints: value increases toward the peak on each side, and the
  // argmax of every round beats the other points of that round.
  std::vector<QuadNum> nodes;
  for (const auto& rd : b.rounds)
    for (const auto& x : rd.points) nodes.push_back(x);
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  auto id = [&](const QuadNum& x) {
    return static_cast<std::size_t>(std::lower_bound(nodes.begin(), nodes.end(), x) - nodes.begin());
  };
  const std::size_t N = nodes.size();
  std::vector<std::vector<std::size_t>> succ(N);
  std::vector<int> indeg(N, 0);
  auto edge = [&](std::size_t lo_val, std::size_t hi_val) {
    succ[lo_val].push_back(hi_val);
    ++indeg[hi_val];
  };
  for (std::size_t j = 0; j + 1 < N; ++j) {
    if (nodes[j + 1] < peak) edge(j, j + 1);
    if (peak < nodes[j]) edge(j + 1, j);
  }
  for (const auto& rd : b.rounds) {
    std::size_t w = id(rd.points[rd.argmax]);
    for (std::size_t k = 0; k < rd.points.size(); ++k)
      if (k != rd.argmax) edge(id(rd.points[k]), w);
  }
  std::queue<std::size_t> ready;
  for (std::size_t j = 0; j < N; ++j)
    if (indeg[j] == 0) ready.push(j);
  std::vector<long> rank(N, 0);
  long next_rank = 1;
  while (!ready.empty()) {
    std::size_t j = ready.front();
    ready.pop();
    rank[j] = next_rank++;
    for (std::size_t s : succ[j])
      if (--indeg[s] == 0) ready.push(s);
  }
  if (next_rank != static_cast<long>(N) + 1)
    throw std::invalid_argument("inconsistent branch: no unimodal function realizes it");

  Witness wf;
  wf.peak = peak;
  wf.knots.emplace_back(b.rounds.front().before.lo, QuadNum(0));
  bool peak_placed = false;
  for (std::size_t j = 0; j < N; ++j) {
    if (!peak_placed && peak < nodes[j]) {
      wf.knots.emplace_back(peak, QuadNum(next_rank));
      peak_placed = true;
    }
    wf.knots.emplace_back(nodes[j], QuadNum(rank[j]));
  }
  if (!peak_placed) wf.knots.emplace_back(peak, QuadNum(next_rank));
  wf.knots.emplace_back(b.rounds.front().before.hi, QuadNum(0));

  for (const auto& rd : b.rounds) {
    for (std::size_t k = 0; k < rd.points.size(); ++k)
      if (k != rd.argmax && !(wf(rd.points[k]) < wf(rd.points[rd.argmax])))
        throw std::logic_error("witness does not reproduce the branch");
  }
  return wf;
}

}  // namespace blocksearch
