#pragma once

/**
 * @file accuracy.hpp
 * @brief Exact step accuracies, general accuracy, thresholds and the
 * inequality suite behind the optimality of the H policy.
 *
 * Units: Basic(i, alpha1) policies are measured on their own opening
 * interval [0, 1/i]; every other policy on [0, 1].
 */

#include <blocksearch/errors.hpp>
#include <blocksearch/exactnum.hpp>
#include <blocksearch/policies.hpp>
#include <blocksearch/position.hpp>
#include <blocksearch/sequences.hpp>

#include <optional>
#include <string>
#include <vector>

namespace blocksearch {

// ---------------------------------------------------------------------------
// Basic-policy traces

struct AccuracyTrace {
  int i = 2;
  QuadNum alpha1;
  std::vector<ChainStep> steps;  ///< steps[m-1] is step m

  const ChainStep& at(int m) const { return steps.at(static_cast<std::size_t>(m - 1)); }
  int size() const { return static_cast<int>(steps.size()); }
};

inline AccuracyTrace trace_basic(const QuadNum& alpha1, int i, int n,
                                 const PositionRule& rule = {}) {
  return {i, alpha1, chain_basic(alpha1, i, n, rule)};
}

/// delta_m = (-1)^m (G_{m-2} - G_m alpha1) / i^m, with G_{-2} = 1/i.
inline QuadNum basic_delta_closed(const QuadNum& alpha1, int i, int m) {
  if (m < 0) throw std::domain_error("closed form needs m >= 0");
  const SeqTable g = g_seq(i, std::max(m, 0));
  QuadNum gm2(g_extended(g, m - 2));
  QuadNum gm(BigRational(g.at(m)));
  QuadNum value = (gm2 - gm * alpha1) / QuadNum(BigRational(neg_pow(i, m)));
  return value;
}

/// Delta_m = delta_{m-1} / i.
inline QuadNum basic_Delta_closed(const QuadNum& alpha1, int i, int m) {
  if (m < 1) throw std::domain_error("closed form needs m >= 1");
  return basic_delta_closed(alpha1, i, m - 1) / QuadNum(i);
}

/// Largest m for which the closed forms are guaranteed: alpha1 in
/// (F_{2n-1}/F_{2n+1}, G_{2n-2}/G_{2n}) covers m <= 2n-1 and alpha1 in
/// (G_{2n-1}/G_{2n+1}, F_{2n}/F_{2n+2}) covers m <= 2n.  Returns 0 when alpha1
/// is in neither family; the scan stops at n_cap.
inline int closed_form_horizon(const QuadNum& alpha1, int i, int n_cap = 64) {
  const SeqTable f = f_seq(i, 2 * n_cap + 3);
  const SeqTable g = g_seq(i, 2 * n_cap + 2);
  auto fr = [&](int p, int q) { return QuadNum(make_rational(f.at(p), f.at(q))); };
  auto gr = [&](int p, int q) { return QuadNum(make_rational(g.at(p), g.at(q))); };
  int best = 0;
  for (int n = 1; n <= n_cap; ++n) {
    bool any = false;
    if (fr(2 * n - 1, 2 * n + 1) < alpha1 && alpha1 < gr(2 * n - 2, 2 * n)) {
      best = std::max(best, 2 * n - 1);
      any = true;
    }
    if (gr(2 * n - 1, 2 * n + 1) < alpha1 && alpha1 < fr(2 * n, 2 * n + 2)) {
      best = std::max(best, 2 * n);
      any = true;
    }
    if (!any) break;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Step accuracy

/// Length of the interval the policy starts from.
inline QuadNum initial_length(const PolicySpec& p) {
  if (auto* b = std::get_if<policy::Basic>(&p)) return QuadNum(make_rational(1, b->i));
  return QuadNum(1);
}

/// delta(P, n) from the step plan: every outcome leaves one alpha gap and one
/// beta gap around the best point, so the worst case is the longer gap.
inline QuadNum plan_accuracy(const PolicySpec& p, int n) {
  std::optional<StepPlan> s = plan_step(p, n);
  if (!s) throw std::domain_error(describe(p) + " has no step " + std::to_string(n));
  return max(s->alpha, s->beta) * initial_length(p);
}

/// Delta(P, n): the interval left after step n.
inline QuadNum plan_interval(const PolicySpec& p, int n) {
  std::optional<StepPlan> s = plan_step(p, n);
  if (!s) throw std::domain_error(describe(p) + " has no step " + std::to_string(n));
  return (s->alpha + s->beta) * initial_length(p);
}

/// delta(P, n) by the closed form of each policy family.
inline QuadNum step_accuracy(const PolicySpec& p, int n) {
  if (n < 1) throw std::domain_error("step_accuracy needs n >= 1");
  validate(p);
  return std::visit(
      overloaded{
          [&](const policy::Fibonacci& f) -> QuadNum {
            if (n > f.horizon) throw std::domain_error("step beyond the horizon");
            const XYPlan xy = xy_odd_block(1, f.horizon);
            if (n == f.horizon) return QuadNum(make_rational(BigInt(1), xy.X[0]));
            const auto k = static_cast<std::size_t>(n);
            return QuadNum(make_rational(std::max(xy.X[k], BigInt(xy.Y[k] - xy.X[k])), xy.X[0]));
          },
          [&](const policy::OddBlockG& g) -> QuadNum {
            if (n > g.horizon) throw std::domain_error("step beyond the horizon");
            const XYPlan xy = xy_odd_block(g.i, g.horizon);
            if (n == g.horizon) return QuadNum(make_rational(BigInt(1), xy.X[0]));
            const auto k = static_cast<std::size_t>(n);
            return QuadNum(make_rational(std::max(xy.X[k], BigInt(xy.Y[k] - xy.X[k])), xy.X[0]));
          },
          [&](const policy::Golden&) -> QuadNum { return omega(1).pow(n); },
          [&](const policy::OddBlockW& w) -> QuadNum { return omega(w.i).pow(n); },
          [&](const policy::OddBlockH& h) -> QuadNum {
            if (n == 1) return h_first_alpha(h.i);
            return omega(h.i).pow(n);
          },
          [&](const policy::EvenBlock& e) -> QuadNum {
            BigInt den = 2 * e.i + 1;
            for (int k = 1; k < n; ++k) den *= (e.i + 1);
            return QuadNum(make_rational(BigInt(1), den));
          },
          [&](const policy::TwoTestSpecial&) -> QuadNum {
            if (n == 1) return QuadNum(make_rational(3, 7));
            BigInt den = 7;
            for (int k = 2; k < n; ++k) den *= 2;
            return QuadNum(make_rational(BigInt(1), den));
          },
          [&](const policy::Basic& b) -> QuadNum {
            if (n <= closed_form_horizon(b.alpha1, b.i))
              return basic_delta_closed(b.alpha1, b.i, n);
            return trace_basic(b.alpha1, b.i, n).at(n).delta;
          }},
      p);
}

// ---------------------------------------------------------------------------
// General accuracy

/// Normalizing weight of step n: F_{n+1} for odd blocks, F_{n+2} for Basic
/// policies (one step ahead of the [0,1] policy they come from), E_n for even
/// blocks.
inline BigInt accuracy_weight(const PolicySpec& p, int n) {
  if (std::holds_alternative<policy::Basic>(p))
    return f_seq(policy_order(p), n + 2).at(n + 2);
  if (std::holds_alternative<policy::EvenBlock>(p)) return e_seq(policy_order(p), n).at(n);
  if (std::holds_alternative<policy::TwoTestSpecial>(p)) return e_seq(1, n).at(n);
  return f_seq(policy_order(p), n + 1).at(n + 1);
}

/// lim F_{n+1} omega^n = 1/2 + (3/2) sqrt(i/(i+4)) = (2(i+1) + 3i omega)/(i+4).
inline QuadNum f_omega_limit(int i) {
  return (QuadNum(2 * (i + 1)) + QuadNum(3 * i) * omega(i)) / QuadNum(i + 4);
}

/// F_{n+1} omega^n.
inline QuadNum f_omega_product(int i, int n) {
  return QuadNum(BigRational(f_seq(i, n + 1).at(n + 1))) * omega(i).pow(n);
}

struct GeneralAccuracy {
  QuadNum sup;             ///< max over 1 <= n <= horizon of weight_n * delta(P, n)
  int attained_at = 0;
  bool converged = false;  ///< the tail beyond the horizon provably stays below sup
  QuadNum limit;           ///< limit of weight_n * delta(P, n)
  std::optional<QuadNum> tail_bound;
  int horizon = 0;
};

namespace detail {
/// Policies whose accuracy is c * omega^n from some step on, with the
/// constant c and the first such step.
struct GeometricTail {
  QuadNum c;
  int from = 1;
  int shift = 0;  ///< weight index offset: F_{n+1+shift}
};
inline std::optional<GeometricTail> geometric_tail(const PolicySpec& p) {
  if (std::holds_alternative<policy::Golden>(p)) return GeometricTail{QuadNum(1), 1, 0};
  if (std::holds_alternative<policy::OddBlockW>(p)) return GeometricTail{QuadNum(1), 1, 0};
  if (std::holds_alternative<policy::OddBlockH>(p)) return GeometricTail{QuadNum(1), 2, 0};
  if (auto* b = std::get_if<policy::Basic>(&p)) {
    const QuadNum w = omega(b->i);
    // alpha1 = omega^2 is the H policy viewed from its second step:
    // delta_m = omega^{m+1}.
    if (b->alpha1.radicand() != 0 && b->alpha1 == w * w) return GeometricTail{QuadNum(1), 1, 1};
  }
  return std::nullopt;
}
}  // namespace detail

inline GeneralAccuracy general_accuracy(const PolicySpec& p, int horizon) {
  if (horizon < 4) throw std::domain_error("general_accuracy needs horizon >= 4");
  validate(p);
  const int i = policy_order(p);
  GeneralAccuracy out;
  int last = horizon;
  if (auto h = policy_horizon(p)) last = std::min(last, *h);
  out.horizon = last;
  for (int n = 1; n <= last; ++n) {
    QuadNum v = QuadNum(BigRational(accuracy_weight(p, n))) * step_accuracy(p, n);
    if (out.attained_at == 0 || out.sup < v) {
      out.sup = v;
      out.attained_at = n;
    }
  }
  if (std::holds_alternative<policy::EvenBlock>(p)) {
    out.limit = QuadNum(make_rational(2 * (i + 1), 2 * i + 1));
  } else if (std::holds_alternative<policy::TwoTestSpecial>(p)) {
    out.limit = QuadNum(make_rational(8, 7));
  } else {
    out.limit = f_omega_limit(i);
  }
  if (auto tail = detail::geometric_tail(p)) {
    // Beyond the horizon, F_{k+1} omega^k lies below the limit for even k and
    // decreases towards it for odd k, so the first odd k past the horizon
    // bounds everything that follows.
    int k = last + 1 + tail->shift;
    if (k % 2 == 0) ++k;
    QuadNum bound = tail->c * max(out.limit, f_omega_product(i, k));
    out.tail_bound = bound;
    out.converged = last >= tail->from && bound <= out.sup;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Thresholds

struct Thresholds {
  int i = 2;
  QuadNum delta_star;          ///< F_4 omega^3
  QuadNum limit_F;             ///< lim F_{n+1} omega^n
  QuadNum gamma;               ///< delta_star / limit_F
  std::vector<QuadNum> A;      ///< A[m-1] = A_m
  std::vector<QuadNum> B;      ///< B[m-1] = B_m

  const QuadNum& a(int m) const { return A.at(static_cast<std::size_t>(m - 1)); }
  const QuadNum& b(int m) const { return B.at(static_cast<std::size_t>(m - 1)); }
};

/// F_4 omega^3 = i^2 (2i+3) omega^3.
inline QuadNum delta_star(int i) {
  return QuadNum(BigRational(f_seq(i, 4).at(4))) * omega(i).pow(3);
}

/// A_m: F_{m+2} delta_m < delta_star iff (-1)^{m-1} alpha1 < (-1)^{m-1} A_m.
/// B_m: delta(P_1) < delta_star only if (-1)^m alpha1 < B_m.
inline Thresholds thresholds(int i, int m_max) {
  if (i < 2) throw std::domain_error("thresholds need i >= 2");
  if (m_max < 1) throw std::domain_error("thresholds need m_max >= 1");
  Thresholds t;
  t.i = i;
  t.delta_star = delta_star(i);
  t.limit_F = f_omega_limit(i);
  t.gamma = t.delta_star / t.limit_F;
  const SeqTable f = f_seq(i, m_max + 2);
  const SeqTable g = g_seq(i, m_max);
  const QuadNum w = omega(i);
  for (int m = 1; m <= m_max; ++m) {
    const QuadNum im(BigRational(m % 2 == 0 ? neg_pow(i, m) : BigInt(-neg_pow(i, m))));  // i^m
    const QuadNum sign_m1(m % 2 == 1 ? 1 : -1);  // (-1)^{m-1}
    QuadNum inner = im * t.delta_star / QuadNum(BigRational(f.at(m + 2))) +
                    sign_m1 * QuadNum(g_extended(g, m - 2));
    t.A.push_back(sign_m1 * inner / QuadNum(BigRational(g.at(m))));
    QuadNum binner = im * w.pow(m + 1) * t.gamma - sign_m1 * QuadNum(g_extended(g, m - 3));
    t.B.push_back(binner / QuadNum(g_extended(g, m - 1)));
  }
  return t;
}

// ---------------------------------------------------------------------------
// Inequality suite

/// Every strict inequality (and the closed-form identities for delta_star)
/// used to show that no basic policy beats H, decided exactly for each i.
inline VerificationReport verify_inequalities(int i_lo, int i_hi) {
  if (i_lo < 2 || i_hi < i_lo) throw std::domain_error("inequality range needs 2 <= i_lo <= i_hi");
  VerificationReport report;
  report.name = "optimality inequalities";
  for (int i = i_lo; i <= i_hi; ++i) {
    const SeqTable f = f_seq(i, 7);
    const SeqTable g = g_seq(i, 4);
    auto F = [&](int n) { return QuadNum(BigRational(f.at(n))); };
    auto G = [&](int n) { return QuadNum(BigRational(g.at(n))); };
    const QuadNum w = omega(i);
    const QuadNum I(i);
    const QuadNum inv_i(make_rational(1, i));
    const QuadNum one(1);
    const QuadNum d = delta_star(i);
    const QuadNum L = f_omega_limit(i);
    const QuadNum gamma = d / L;
    const QuadNum h1 = h_first_alpha(i);
    auto add = [&](const std::string& what, bool ok) { report.items.push_back({what, i, 0, ok}); };

    add("delta = i(2i+3)(1 - i w) w", d == I * QuadNum(2 * i + 3) * (one - I * w) * w);
    add("delta = i(2i+3)((i+1) w - 1)", d == I * QuadNum(2 * i + 3) * (QuadNum(i + 1) * w - one));
    add("delta = (2i+3)/2 ((i+1) sqrt(i(i+4)) - i(i+3))",
        d == QuadNum(make_rational(2 * i + 3, 2)) *
                 (QuadNum(i + 1) * QuadNum::sqrt_of(radicand_for(i)) - QuadNum(i * (i + 3))));
    add("delta < 2", d < QuadNum(2));
    add("limit = 1/2 + (3/2) sqrt(i/(i+4))",
        L == QuadNum(make_rational(1, 2)) +
                 QuadNum(make_rational(3, 2)) * QuadNum::sqrt_of(radicand_for(i)) /
                     QuadNum(i + 4));
    add("2i (floor((i+1)/2)/i + chi(i) w) < i(2i+3)(1 - i w)",
        QuadNum(2 * i) * (QuadNum(make_rational((i + 1) / 2, i)) + QuadNum(chi(i)) * w) <
            I * QuadNum(2 * i + 3) * (one - I * w));
    add("F_2 delta(H,1) < delta", F(2) * h1 < d);
    add("w < F_4/F_5", w < F(4) / F(5));
    add("delta(W) = 2i w > delta(H) = F_4 w^3", QuadNum(2 * i) * w > d);
    add("A_1 = delta/F_3", thresholds(i, 2).a(1) == d / F(3));
    add("A_2 = w^2", thresholds(i, 2).a(2) == w * w);
    add("1/i - gamma w > G_1/G_3", inv_i - gamma * w > G(1) / G(3));
    add("1/i - i gamma w^2 > 1/i - gamma w", inv_i - I * gamma * w * w > inv_i - gamma * w);
    add("1/i - w/gamma < F_2/F_4", inv_i - w / gamma < F(2) / F(4));
    add("delta < F_2 F_5 / F_6", d < F(2) * F(5) / F(6));
    add("w^3 G_4 < (i+1)/gamma", w.pow(3) * G(4) < QuadNum(i + 1) / gamma);
    add("(i+1) w < (i+1) F_6/F_7", QuadNum(i + 1) * w < QuadNum(i + 1) * F(6) / F(7));
    add("(i+1) F_6/F_7 < 1 + 1/(i(i+3))",
        QuadNum(i + 1) * F(6) / F(7) < one + QuadNum(make_rational(1, i * (i + 3))));
    add("gamma < (i+1)(1+w)/(i+2)", gamma < QuadNum(i + 1) * (one + w) / QuadNum(i + 2));
    add("gamma < i(2i+3) w/(2i+1)", gamma < I * QuadNum(2 * i + 3) * w / QuadNum(2 * i + 1));
    add("gamma < (i+1)(i+3)/(i^2+3i+1)",
        gamma < QuadNum(make_rational((i + 1) * (i + 3), i * i + 3 * i + 1)));
    add("gamma > 1", gamma > one);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Sub-interval classification of alpha1

enum class Dismissal {
  None,          ///< alpha1 = omega^2, the H policy itself
  BThreshold,    ///< interval step one: Delta_1 alone forces delta(P_1) >= delta
  AThreshold,    ///< F_4 delta_2 >= delta by the A_1, A_2 thresholds
  MuThreshold,   ///< the first-step interval ratio already exceeds gamma
  CaseOddSteps,  ///< (G_{2n}/G_{2n+2}, F_{2n}/F_{2n+2}): compare with B_{2n}
  CaseEvenSteps  ///< (F_{2n}/F_{2n+2}, G_{2n-2}/G_{2n}), n >= 2: compare with A_{2n-1}
};

inline const char* dismissal_name(Dismissal d) {
  switch (d) {
    case Dismissal::None: return "none";
    case Dismissal::BThreshold: return "B-threshold";
    case Dismissal::AThreshold: return "A-threshold";
    case Dismissal::MuThreshold: return "mu-threshold";
    case Dismissal::CaseOddSteps: return "case-analysis-B2n";
    case Dismissal::CaseEvenSteps: return "case-analysis-A2n-1";
  }
  return "?";
}

struct Subinterval {
  std::string family;  ///< e.g. "(F_{2n-1}/F_{2n+1}, G_{2n-1}/G_{2n+1})"
  int n = 0;
  QuadNum lo;
  QuadNum hi;
  bool is_h_point = false;
  Dismissal dismissal = Dismissal::None;

  std::string tag() const {
    if (is_h_point) return "H-point";
    return family + " n=" + std::to_string(n);
  }
};

/// Locates alpha1 among the sub-intervals of (0, G_0/G_2) that accumulate at
/// omega^2.  Endpoints raise BoundaryError; alpha1 >= G_0/G_2 is rejected.
inline Subinterval subinterval_classify(const QuadNum& alpha1, int i, int n_cap = 400) {
  if (i < 2) throw std::domain_error("classification needs i >= 2");
  if (alpha1.radicand() != 0 && alpha1.radicand() != radicand_for(i))
    throw std::domain_error("alpha1 must live in Q(sqrt(i(i+4)))");
  if (alpha1.sign() <= 0) throw std::domain_error("alpha1 must be positive");
  const SeqTable f = f_seq(i, 2 * n_cap + 3);
  const SeqTable g = g_seq(i, 2 * n_cap + 2);
  auto fr = [&](int p, int q) { return QuadNum(make_rational(f.at(p), f.at(q))); };
  auto gr = [&](int p, int q) { return QuadNum(make_rational(g.at(p), g.at(q))); };
  const QuadNum w = omega(i);
  const QuadNum w2 = w * w;
  const QuadNum top = gr(0, 2);
  if (alpha1 == top) throw BoundaryError("alpha1 = G_0/G_2");
  if (alpha1 > top)
    throw std::domain_error("alpha1 >= G_0/G_2 leaves no room for the first-step beta gaps");
  if (alpha1 == w2) return {"omega^2", 0, w2, w2, true, Dismissal::None};

  auto check = [&](const QuadNum& lo, const QuadNum& hi, const std::string& lo_name,
                   const std::string& hi_name) {
    if (alpha1 == lo) throw BoundaryError("alpha1 on endpoint " + lo_name);
    if (alpha1 == hi) throw BoundaryError("alpha1 on endpoint " + hi_name);
    return lo < alpha1 && alpha1 < hi;
  };
  auto name = [](const char* s, int p, int q) {
    return std::string(s) + "_" + std::to_string(p) + "/" + s + "_" + std::to_string(q);
  };

  if (check(QuadNum(0), fr(1, 3), "0", name("F", 1, 3)))
    return {"(0, F_1/F_3)", 1, QuadNum(0), fr(1, 3), false, Dismissal::BThreshold};
  for (int n = 1; n <= n_cap; ++n) {
    if (alpha1 < w2) {
      QuadNum a = fr(2 * n - 1, 2 * n + 1), b = gr(2 * n - 1, 2 * n + 1),
              c = fr(2 * n + 1, 2 * n + 3);
      if (check(a, b, name("F", 2 * n - 1, 2 * n + 1), name("G", 2 * n - 1, 2 * n + 1)))
        return {"(F_{2n-1}/F_{2n+1}, G_{2n-1}/G_{2n+1})", n, a, b, false,
                n == 1 ? Dismissal::BThreshold : Dismissal::AThreshold};
      if (check(b, c, name("G", 2 * n - 1, 2 * n + 1), name("F", 2 * n + 1, 2 * n + 3)))
        return {"(G_{2n-1}/G_{2n+1}, F_{2n+1}/F_{2n+3})", n, b, c, false, Dismissal::AThreshold};
    } else {
      QuadNum a = gr(2 * n, 2 * n + 2), b = fr(2 * n, 2 * n + 2), c = gr(2 * n - 2, 2 * n);
      if (check(a, b, name("G", 2 * n, 2 * n + 2), name("F", 2 * n, 2 * n + 2)))
        return {"(G_{2n}/G_{2n+2}, F_{2n}/F_{2n+2})", n, a, b, false, Dismissal::CaseOddSteps};
      if (check(b, c, name("F", 2 * n, 2 * n + 2), name("G", 2 * n - 2, 2 * n)))
        return {"(F_{2n}/F_{2n+2}, G_{2n-2}/G_{2n})", n, b, c, false,
                n == 1 ? Dismissal::MuThreshold : Dismissal::CaseEvenSteps};
    }
  }
  throw std::domain_error("alpha1 lies closer to omega^2 than the classification cap reaches");
}

}  // namespace blocksearch
