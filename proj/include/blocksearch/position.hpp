#pragma once

/**
 * @file position.hpp
 * @brief Step geometry of odd-block basic search.
 *
 * After a step the remaining interval is normalized to [0, Delta] with the
 * retained test point at delta > Delta/2 (mirror if necessary).  The next
 * step places 2i-1 new tests so that, together with the retained point, the
 * 2i points are the dividing points of an [alpha, beta]-partition with
 * 2i+1 gaps alpha, beta, ..., alpha.  The retained point then sits at a
 * position l in {i+1, ..., 2i}, and
 *
 *   delta = chi(l-1) * alpha' + floor(l/2) * Delta'
 *   Delta = alpha' + i * Delta'
 *
 * where Delta' = alpha' + beta' is the next interval length.
 */

#include <blocksearch/errors.hpp>
#include <blocksearch/exactnum.hpp>

#include <string>
#include <vector>

namespace blocksearch {

/// 1 for even k, 0 for odd k.
constexpr int chi(int k) { return (k % 2 == 0) ? 1 : 0; }

struct StepUpdate {
  QuadNum alpha;   ///< first gap of the new partition
  QuadNum Delta;   ///< new interval length alpha + beta
  QuadNum delta;   ///< new accuracy max(alpha, beta)
  int position = 0;
};

/// Breakpoints of delta/Delta at which the set of feasible positions changes.
/// K(j) = j*Delta/(i+1) make a gap vanish on the beta side, j*Delta/i on the
/// alpha side.
inline std::vector<std::pair<std::string, QuadNum>> position_breakpoints(
    const QuadNum& Delta, int i) {
  std::vector<std::pair<std::string, QuadNum>> out;
  for (int j = 1; j <= i; ++j)
    out.emplace_back("K(" + std::to_string(j) + ")",
                     Delta * QuadNum(make_rational(j, i + 1)));
  for (int j = 1; j < i; ++j)
    out.emplace_back(std::to_string(j) + "*Delta/" + std::to_string(i),
                     Delta * QuadNum(make_rational(j, i)));
  return out;
}

/// Raw solution of the position equations; no feasibility check.
inline std::pair<QuadNum, QuadNum> solve_position(const QuadNum& delta,
                                                  const QuadNum& Delta,
                                                  int position, int i) {
  const int c = chi(position - 1);
  const int half = position / 2;
  const QuadNum denom(static_cast<long>(i) * c - half);
  QuadNum alpha = (QuadNum(i) * delta - QuadNum(half) * Delta) / denom;
  QuadNum next = (QuadNum(c) * Delta - delta) / denom;
  return {alpha, next};
}

/// Positions l in {i+1, ..., 2i} for which both gaps of the next partition
/// are strictly positive.
inline std::vector<int> locate_position(const QuadNum& delta,
                                        const QuadNum& Delta, int i) {
  if (i < 1) throw std::domain_error("block order i must be >= 1");
  if (Delta.sign() <= 0) throw std::domain_error("interval length must be > 0");
  const QuadNum half = Delta / QuadNum(2);
  if (delta == half)
    throw BoundaryError("retained point at the interval midpoint");
  if (!(half < delta && delta < Delta))
    throw std::domain_error("retained point must satisfy Delta/2 < delta < Delta");
  for (const auto& [name, value] : position_breakpoints(Delta, i)) {
    if (value == delta)
      throw BoundaryError("retained point lies on breakpoint " + name);
  }
  std::vector<int> feasible;
  for (int l = i + 1; l <= 2 * i; ++l) {
    auto [alpha, next] = solve_position(delta, Delta, l, i);
    if (alpha.sign() > 0 && alpha < next) feasible.push_back(l);
  }
  return feasible;
}

/// One step of the accuracy recursion with the retained point at `position`.
inline StepUpdate step_update(const QuadNum& delta, const QuadNum& Delta,
                              int position, int i) {
  if (position < i + 1 || position > 2 * i)
    throw std::domain_error("position " + std::to_string(position) +
                            " outside {i+1, ..., 2i}");
  auto [alpha, next] = solve_position(delta, Delta, position, i);
  if (!(alpha.sign() > 0 && alpha < next))
    throw std::domain_error("position " + std::to_string(position) +
                            " is infeasible for this retained point");
  // The new accuracy is alpha when alpha is the longer gap, which reduces to
  // a linear condition on delta/Delta.
  const QuadNum cut = Delta * QuadNum(make_rational(position, 2 * i + 1));
  if (cut == delta)
    throw BoundaryError("alpha equals beta: retained point at " +
                        std::to_string(position) + "/(2i+1) of the interval");
  const bool alpha_longer = (position % 2 == 0) ? (delta < cut) : (delta > cut);
  StepUpdate out;
  out.alpha = alpha;
  out.Delta = next;
  out.position = position;
  if (alpha_longer) {
    out.delta = alpha;
  } else {
    const int c = chi(position - 1);
    const int half = position / 2;
    out.delta = (QuadNum(c + half) * Delta - QuadNum(i + 1) * delta) /
                QuadNum(static_cast<long>(i) * c - half);
  }
  return out;
}

/// How a chained trace picks the retained point's position when several are
/// feasible.  With both gaps required positive the feasible set is a single
/// position, so the rule only matters for explicit replays.
struct PositionRule {
  /// Empty: take the feasible position giving the largest next accuracy.
  std::vector<int> explicit_positions;

  static PositionRule adversarial() { return {}; }
  static PositionRule replay(std::vector<int> positions) {
    return {std::move(positions)};
  }
};

/// One record of a chained basic-policy trace.
struct ChainStep {
  QuadNum alpha;
  QuadNum beta;
  QuadNum Delta;
  QuadNum delta;
  int position = 0;  ///< 0 for the opening step, which has no retained point
};

/// Chains the step geometry of a basic policy that opens on an interval of
/// length 1/i with 2i tests at an [alpha1, beta1]-partition (2i+1 gaps) and
/// continues with 2i-1 tests per step.
inline std::vector<ChainStep> chain_basic(const QuadNum& alpha1, int i,
                                          int steps,
                                          const PositionRule& rule = {}) {
  if (i < 1) throw std::domain_error("block order i must be >= 1");
  if (steps < 1) throw std::domain_error("need at least one step");
  const QuadNum length = QuadNum(make_rational(1, i));
  if (!(alpha1.sign() > 0 && alpha1 < length))
    throw std::domain_error("alpha1 must lie in (0, 1/i)");
  std::vector<ChainStep> out;
  ChainStep first;
  first.alpha = alpha1;
  first.Delta = (length - alpha1) / QuadNum(i);
  first.beta = first.Delta - alpha1;
  if (first.beta.sign() <= 0)
    throw InfeasiblePartition("alpha1 >= 1/(i(i+1)): the opening partition "
                              "has no room for its beta gaps");
  if (first.alpha == first.beta)
    throw BoundaryError("alpha1 = 1/(i(2i+1)): opening gaps are equal");
  first.delta = max(first.alpha, first.beta);
  out.push_back(first);
  for (int m = 2; m <= steps; ++m) {
    const ChainStep& prev = out.back();
    std::vector<int> feasible = locate_position(prev.delta, prev.Delta, i);
    int chosen = 0;
    const auto idx = static_cast<std::size_t>(m - 2);
    if (idx < rule.explicit_positions.size()) {
      chosen = rule.explicit_positions[idx];
    } else {
      if (feasible.empty())
        throw PolicyStateMismatch("no feasible position at step " +
                                  std::to_string(m));
      QuadNum best;
      for (int l : feasible) {
        StepUpdate u = step_update(prev.delta, prev.Delta, l, i);
        if (chosen == 0 || best <= u.delta) {
          best = u.delta;
          chosen = l;
        }
      }
    }
    StepUpdate u = step_update(prev.delta, prev.Delta, chosen, i);
    out.push_back({u.alpha, u.Delta - u.alpha, u.Delta, u.delta, chosen});
  }
  return out;
}

}  // namespace blocksearch
