#pragma once

/**
 * @file policies.hpp
 * @brief Block-search policies as exact test-point generators.
 *
 * Every policy here is basic: at each step its tests, together with the
 * point kept from the previous step, sit at the dividing points of an
 * [alpha, beta]-partition of the remaining interval (gaps alternate
 * alpha, beta, alpha, ... from the left end).  A policy is described by its
 * per-step plan: how many new tests, how many gaps, and the two gap lengths
 * normalized to an initial interval of length 1.
 */

#include <blocksearch/errors.hpp>
#include <blocksearch/exactnum.hpp>
#include <blocksearch/position.hpp>
#include <blocksearch/sequences.hpp>

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace blocksearch {

// ---------------------------------------------------------------------------
// c(k) and the backward recursion

/// c(k) = [[chi(k), floor((k+1)/2)], [chi(k+1), floor((k+2)/2)]].
struct CMatrix {
  std::array<std::array<long, 2>, 2> entry{};

  long determinant() const {
    return entry[0][0] * entry[1][1] - entry[0][1] * entry[1][0];
  }
  std::pair<BigInt, BigInt> apply(const BigInt& x, const BigInt& y) const {
    return {entry[0][0] * x + entry[0][1] * y, entry[1][0] * x + entry[1][1] * y};
  }
  std::pair<QuadNum, QuadNum> apply(const QuadNum& x, const QuadNum& y) const {
    return {QuadNum(entry[0][0]) * x + QuadNum(entry[0][1]) * y,
            QuadNum(entry[1][0]) * x + QuadNum(entry[1][1]) * y};
  }
  friend bool operator==(const CMatrix&, const CMatrix&) = default;
};

inline CMatrix c_matrix(int k) {
  if (k < 1) throw std::domain_error("c(k) needs k >= 1");
  CMatrix c;
  c.entry[0] = {chi(k), (k + 1) / 2};
  c.entry[1] = {chi(k + 1), (k + 2) / 2};
  return c;
}

/// (X_m, Y_m) for m = 0..n with (X_n, Y_n) = (1, 2) and
/// (X_m, Y_m) = c(k_{m+1}) (X_{m+1}, Y_{m+1}).
struct XYPlan {
  std::vector<int> k_schedule;  ///< k_1..k_n
  std::vector<BigInt> X;        ///< X_0..X_n
  std::vector<BigInt> Y;

  int steps() const { return static_cast<int>(k_schedule.size()); }
};

inline XYPlan xy_backward(const std::vector<int>& k_schedule) {
  if (k_schedule.empty()) throw std::domain_error("empty test schedule");
  if (k_schedule.front() < 2) throw std::domain_error("k_1 must be >= 2");
  for (int k : k_schedule)
    if (k < 1) throw std::domain_error("test counts must be positive");
  const std::size_t n = k_schedule.size();
  XYPlan plan{k_schedule, std::vector<BigInt>(n + 1), std::vector<BigInt>(n + 1)};
  plan.X[n] = 1;
  plan.Y[n] = 2;
  for (std::size_t m = n; m-- > 0;) {
    auto [x, y] = c_matrix(k_schedule[m]).apply(plan.X[m + 1], plan.Y[m + 1]);
    plan.X[m] = x;
    plan.Y[m] = y;
  }
  return plan;
}

/// The backward recursion for a constant odd block 2i-1 over n steps.  For
/// i = 1 this is classical Fibonacci search, whose first step places a single
/// test, so the k_1 >= 2 requirement is waived there.
inline XYPlan xy_odd_block(int i, int n) {
  if (i < 1 || n < 1) throw std::domain_error("need i >= 1 and n >= 1");
  std::vector<int> ks(static_cast<std::size_t>(n), 2 * i - 1);
  if (i >= 2) return xy_backward(ks);
  XYPlan plan{ks, std::vector<BigInt>(ks.size() + 1), std::vector<BigInt>(ks.size() + 1)};
  plan.X.back() = 1;
  plan.Y.back() = 2;
  const CMatrix c = c_matrix(1);
  for (std::size_t m = ks.size(); m-- > 0;) {
    auto [x, y] = c.apply(plan.X[m + 1], plan.Y[m + 1]);
    plan.X[m] = x;
    plan.Y[m] = y;
  }
  return plan;
}

// ---------------------------------------------------------------------------
// Policy descriptions

namespace policy {
/// Classical Fibonacci search with a declared number of tests.
struct Fibonacci { int horizon = 1; };
/// Classical golden-section search.
struct Golden {};
/// 2i tests per step on equal gaps.
struct EvenBlock { int i = 1; };
/// Optimal odd-block policy for a fixed number of steps.
struct OddBlockG { int i = 2; int horizon = 1; };
/// Odd-block search with gaps omega^m, omega^(m+1) from the first step.
struct OddBlockW { int i = 2; };
/// Like OddBlockW but with a shorter first gap; optimal in the general sense.
struct OddBlockH { int i = 2; };
/// Basic odd-block policy opening on [0, 1/i] with 2i tests at the
/// [alpha1, 1/i(1/i - alpha1) - alpha1]-partition.
struct Basic { int i = 2; QuadNum alpha1; };
/// Two tests per step, opening at 3/7 and 4/7.
struct TwoTestSpecial {};
}  // namespace policy

using PolicySpec =
    std::variant<policy::Fibonacci, policy::Golden, policy::EvenBlock,
                 policy::OddBlockG, policy::OddBlockW, policy::OddBlockH,
                 policy::Basic, policy::TwoTestSpecial>;

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

/// Block order i of the policy (1 for the classical one-test policies).
inline int policy_order(const PolicySpec& p) {
  return std::visit(
      overloaded{[](const policy::Fibonacci&) { return 1; },
                 [](const policy::Golden&) { return 1; },
                 [](const policy::TwoTestSpecial&) { return 1; },
                 [](const auto& q) { return q.i; }},
      p);
}

inline std::optional<int> policy_horizon(const PolicySpec& p) {
  if (auto* f = std::get_if<policy::Fibonacci>(&p)) return f->horizon;
  if (auto* g = std::get_if<policy::OddBlockG>(&p)) return g->horizon;
  return std::nullopt;
}

inline std::string policy_type_name(const PolicySpec& p) {
  return std::visit(
      overloaded{[](const policy::Fibonacci&) { return "fibonacci"; },
                 [](const policy::Golden&) { return "golden"; },
                 [](const policy::EvenBlock&) { return "even-block"; },
                 [](const policy::OddBlockG&) { return "odd-block-g"; },
                 [](const policy::OddBlockW&) { return "odd-block-w"; },
                 [](const policy::OddBlockH&) { return "odd-block-h"; },
                 [](const policy::Basic&) { return "basic"; },
                 [](const policy::TwoTestSpecial&) { return "two-test-special"; }},
      p);
}

/// True for policies whose tests come in even blocks (accuracy is measured
/// against E_n rather than F_{n+1}).
inline bool is_even_block(const PolicySpec& p) {
  return std::holds_alternative<policy::EvenBlock>(p) ||
         std::holds_alternative<policy::TwoTestSpecial>(p);
}

inline std::string describe(const PolicySpec& p) {
  std::string out = policy_type_name(p) + "(";
  std::visit(overloaded{[&](const policy::Fibonacci& f) {
                          out += "n=" + std::to_string(f.horizon);
                        },
                        [&](const policy::Golden&) {},
                        [&](const policy::TwoTestSpecial&) {},
                        [&](const policy::OddBlockG& g) {
                          out += "i=" + std::to_string(g.i) +
                                 ", n=" + std::to_string(g.horizon);
                        },
                        [&](const policy::Basic& b) {
                          out += "i=" + std::to_string(b.i) +
                                 ", alpha1=" + b.alpha1.to_string();
                        },
                        [&](const auto& q) { out += "i=" + std::to_string(q.i); }},
             p);
  return out + ")";
}

/// First gap of OddBlockH: {(1/i)floor((i+1)/2) + chi(i) omega} omega.
inline QuadNum h_first_alpha(int i) {
  const QuadNum w = omega(i);
  return (QuadNum(make_rational((i + 1) / 2, i)) + QuadNum(chi(i)) * w) * w;
}

inline void validate(const PolicySpec& p) {
  std::visit(
      overloaded{
          [](const policy::Fibonacci& f) {
            if (f.horizon < 1) throw std::domain_error("horizon must be >= 1");
          },
          [](const policy::Golden&) {}, [](const policy::TwoTestSpecial&) {},
          [](const policy::EvenBlock& e) {
            if (e.i < 1) throw std::domain_error("even-block needs i >= 1");
          },
          [](const policy::OddBlockG& g) {
            if (g.i < 1) throw std::domain_error("odd-block needs i >= 1");
            if (g.horizon < 1) throw std::domain_error("horizon must be >= 1");
          },
          [](const policy::OddBlockW& w) {
            if (w.i < 1) throw std::domain_error("odd-block needs i >= 1");
          },
          [](const policy::OddBlockH& h) {
            if (h.i < 2) throw std::domain_error("odd-block-h needs i >= 2");
          },
          [](const policy::Basic& b) {
            if (b.i < 1) throw std::domain_error("basic needs i >= 1");
            if (b.alpha1.radicand() != 0 && b.alpha1.radicand() != radicand_for(b.i))
              throw std::domain_error("alpha1 must live in Q(sqrt(i(i+4)))");
            if (!(b.alpha1.sign() > 0 && b.alpha1 < QuadNum(make_rational(1, b.i))))
              throw std::domain_error("basic policy needs 0 < alpha1 < 1/i");
          }},
      p);
}

// ---------------------------------------------------------------------------
// Step plans

/// Geometry of one step, with lengths normalized to an initial interval of
/// length 1.
struct StepPlan {
  int new_tests = 0;
  int gaps = 0;                   ///< number of partition gaps
  bool expects_retained = false;  ///< a point is kept from the previous step
  QuadNum alpha;
  QuadNum beta;

  QuadNum total() const {
    return QuadNum((gaps + 1) / 2) * alpha + QuadNum(gaps / 2) * beta;
  }
};

namespace detail {
inline StepPlan opening(int gaps, QuadNum alpha, QuadNum beta) {
  return {gaps - 1, gaps, false, std::move(alpha), std::move(beta)};
}
inline StepPlan continuing(int gaps, QuadNum alpha, QuadNum beta) {
  return {gaps - 2, gaps, true, std::move(alpha), std::move(beta)};
}
inline StepPlan g_step(int i, int horizon, int m) {
  const XYPlan xy = xy_odd_block(i, horizon);
  const auto k = static_cast<std::size_t>(m);
  QuadNum alpha(make_rational(xy.X[k], xy.X[0]));
  QuadNum beta(make_rational(xy.Y[k] - xy.X[k], xy.X[0]));
  return m == 1 ? opening(2 * i, alpha, beta) : continuing(2 * i + 1, alpha, beta);
}
inline StepPlan w_step(int i, int m) {
  const QuadNum w = omega(i);
  QuadNum alpha = w.pow(m);
  QuadNum beta = alpha * w;
  return m == 1 ? opening(2 * i, alpha, beta) : continuing(2 * i + 1, alpha, beta);
}
}  // namespace detail

/// Plan of step m >= 1 of the policy, or nullopt once a declared horizon has
/// been used up.
inline std::optional<StepPlan> plan_step(const PolicySpec& p, int m) {
  if (m < 1) throw std::domain_error("steps are numbered from 1");
  validate(p);
  return std::visit(
      overloaded{
          [&](const policy::Fibonacci& f) -> std::optional<StepPlan> {
            if (m > f.horizon) return std::nullopt;
            return detail::g_step(1, f.horizon, m);
          },
          [&](const policy::OddBlockG& g) -> std::optional<StepPlan> {
            if (m > g.horizon) return std::nullopt;
            return detail::g_step(g.i, g.horizon, m);
          },
          [&](const policy::Golden&) -> std::optional<StepPlan> {
            return detail::w_step(1, m);
          },
          [&](const policy::OddBlockW& w) -> std::optional<StepPlan> {
            return detail::w_step(w.i, m);
          },
          [&](const policy::OddBlockH& h) -> std::optional<StepPlan> {
            if (m >= 2) return detail::w_step(h.i, m);
            QuadNum alpha = h_first_alpha(h.i);
            return detail::opening(2 * h.i, alpha,
                                   QuadNum(make_rational(1, h.i)) - alpha);
          },
          [&](const policy::EvenBlock& e) -> std::optional<StepPlan> {
            const int i = e.i;
            if (m == 1) {
              QuadNum gap(make_rational(1, 2 * i + 1));
              return detail::opening(2 * i + 1, gap, gap);
            }
            BigInt den = BigInt(2 * i + 1);
            for (int k = 1; k < m; ++k) den *= (i + 1);
            QuadNum gap(make_rational(BigInt(1), den));
            return detail::continuing(2 * i + 2, gap, gap);
          },
          [&](const policy::TwoTestSpecial&) -> std::optional<StepPlan> {
            if (m == 1)
              return detail::opening(3, QuadNum(make_rational(3, 7)),
                                     QuadNum(make_rational(1, 7)));
            BigInt den = 7;
            for (int k = 2; k < m; ++k) den *= 2;
            QuadNum gap(make_rational(BigInt(1), den));
            return detail::continuing(4, gap, gap);
          },
          [&](const policy::Basic& b) -> std::optional<StepPlan> {
            // Normalize the opening interval [0, 1/i] to length 1.
            const QuadNum scale(b.i);
            std::vector<ChainStep> chain = chain_basic(b.alpha1, b.i, m);
            const ChainStep& s = chain.back();
            if (m == 1)
              return detail::opening(2 * b.i + 1, s.alpha * scale, s.beta * scale);
            return detail::continuing(2 * b.i + 1, s.alpha * scale, s.beta * scale);
          }},
      p);
}

// ---------------------------------------------------------------------------
// First step

struct FirstStep {
  QuadNum alpha;
  QuadNum beta;
  std::vector<QuadNum> points;  ///< opening tests on [0, 1]
};

struct Partition {
  QuadNum lo;
  QuadNum hi;
  QuadNum alpha;
  QuadNum beta;
  std::vector<QuadNum> points;  ///< dividing points, strictly increasing
};

/// Dividing points of the [alpha, beta]-partition of [lo, hi] into `gaps`
/// gaps.  The gaps must tile the interval exactly.
inline Partition partition_points(const QuadNum& lo, const QuadNum& hi,
                                  const QuadNum& alpha, const QuadNum& beta,
                                  int gaps) {
  if (!(alpha.sign() > 0 && beta.sign() > 0))
    throw InfeasiblePartition("partition gaps must be positive");
  if (gaps < 2) throw InfeasiblePartition("a partition needs at least two gaps");
  const QuadNum total = QuadNum((gaps + 1) / 2) * alpha + QuadNum(gaps / 2) * beta;
  if (total != hi - lo)
    throw InfeasiblePartition("gaps sum to " + total.to_string() +
                              " but the interval has length " +
                              (hi - lo).to_string());
  Partition part{lo, hi, alpha, beta, {}};
  QuadNum at = lo;
  for (int g = 1; g < gaps; ++g) {
    at += (g % 2 == 1) ? alpha : beta;
    part.points.push_back(at);
  }
  return part;
}

/// First-step parameters.  alpha is in the policy's own units: the opening
/// interval [0, 1/i] for Basic policies, [0, 1] otherwise.
inline FirstStep first_alpha(const PolicySpec& p) {
  std::optional<StepPlan> plan = plan_step(p, 1);
  FirstStep out;
  Partition part = partition_points(QuadNum(0), QuadNum(1), plan->alpha,
                                    plan->beta, plan->gaps);
  out.points = part.points;
  out.alpha = plan->alpha;
  out.beta = plan->beta;
  if (auto* b = std::get_if<policy::Basic>(&p)) {
    out.alpha = b->alpha1;
    out.beta = plan->beta / QuadNum(b->i);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exact search geometry

/// Exact state of a search in progress: the remaining interval, the point
/// kept from the previous step, and the step counter local to the policy
/// (reset when a tie leaves no interior point).
struct Geometry {
  QuadNum lo;
  QuadNum hi;
  std::optional<QuadNum> retained;
  int local_step = 0;

  QuadNum length() const { return hi - lo; }
  /// Distance from the best point to the farther end, or the interval length
  /// when no tested point is inside.
  QuadNum accuracy() const {
    if (!retained) return length();
    return max(*retained - lo, hi - *retained);
  }
};

/// All test points of the next step (new and retained), strictly increasing.
/// Returns an empty partition when the policy has finished.
inline std::optional<Partition> next_partition(const Geometry& g,
                                               const PolicySpec& p) {
  std::optional<StepPlan> plan = plan_step(p, g.local_step + 1);
  if (!plan) return std::nullopt;
  if (plan->expects_retained != g.retained.has_value())
    throw PolicyStateMismatch(plan->expects_retained
                                  ? "policy expects a retained point"
                                  : "policy expects a fresh interval");
  if (g.retained && !(g.lo < *g.retained && *g.retained < g.hi))
    throw PolicyStateMismatch("retained point outside the interval");
  const QuadNum scale = g.length() / plan->total();
  Partition part = partition_points(g.lo, g.hi, plan->alpha * scale,
                                    plan->beta * scale, plan->gaps);
  if (!g.retained) return part;
  auto holds = [&](const Partition& q) {
    for (const auto& x : q.points)
      if (x == *g.retained) return true;
    return false;
  };
  if (holds(part)) return part;
  // Mirror image: gaps laid out from the right end.
  Partition mirrored = part;
  mirrored.points.clear();
  for (auto it = part.points.rbegin(); it != part.points.rend(); ++it)
    mirrored.points.push_back(g.lo + g.hi - *it);
  if (holds(mirrored)) return mirrored;
  throw PolicyStateMismatch("retained point " + g.retained->to_string() +
                            " is not a dividing point of step " +
                            std::to_string(g.local_step + 1));
}

/// New test points for the next step, in increasing order.  One-test
/// policies continue by the symmetry rule lo + hi - retained.
inline std::vector<QuadNum> next_tests(const Geometry& g, const PolicySpec& p) {
  std::optional<Partition> part = next_partition(g, p);
  if (!part) return {};
  if (!g.retained && part->points.size() == 1) {
    // A lone first test decides nothing; place its mirror with it.
    if (!plan_step(p, g.local_step + 2)) return part->points;
    QuadNum x = part->points.front();
    QuadNum mirror = g.lo + g.hi - x;
    if (mirror == x) throw PolicyStateMismatch("first test at the midpoint");
    return mirror < x ? std::vector<QuadNum>{mirror, x}
                      : std::vector<QuadNum>{x, mirror};
  }
  if (g.retained && part->points.size() == 2) {
    QuadNum mirror = g.lo + g.hi - *g.retained;
    if (mirror == *g.retained)
      throw PolicyStateMismatch("symmetry rule reproduces the retained point");
    return {mirror};
  }
  std::vector<QuadNum> out;
  for (const auto& x : part->points)
    if (!g.retained || x != *g.retained) out.push_back(x);
  return out;
}

/// Policy steps used by one round of next_tests from this state.
inline int steps_per_round(const Geometry& g, const PolicySpec& p) {
  if (g.retained) return 1;
  std::optional<StepPlan> plan = plan_step(p, g.local_step + 1);
  if (plan && plan->new_tests == 1 && plan_step(p, g.local_step + 2)) return 2;
  return 1;
}

/// Geometry after the test at `argmax` (index into the increasing list of
/// all current test points) has the largest value.
inline Geometry advance(const Geometry& g, const std::vector<QuadNum>& points,
                        std::size_t argmax, int steps = 1) {
  if (argmax >= points.size()) throw std::out_of_range("argmax index");
  Geometry next;
  next.lo = argmax == 0 ? g.lo : points[argmax - 1];
  next.hi = argmax + 1 == points.size() ? g.hi : points[argmax + 1];
  next.retained = points[argmax];
  next.local_step = g.local_step + steps;
  return next;
}

}  // namespace blocksearch
