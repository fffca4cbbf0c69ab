#pragma once

/**
 * @file sequences.hpp
 * @brief Generalized Fibonacci sequences of block order i.
 *
 *   F_0 = F_1 = 1,   F_n = i(F_{n-1} + F_{n-2})   (n >= 2)
 *   G_{-1} = 0, G_0 = 1, G_n = i(G_{n-1} + G_{n-2}) (n >= 1)
 *   E_n = 2(i+1)^n - 1
 *
 * plus exhaustive checkers for the product identities and ratio
 * monotonicity facts these sequences satisfy.  Checks are exact over finite
 * index ranges.
 */

#include <blocksearch/exactnum.hpp>

#include <optional>
#include <string>
#include <vector>

namespace blocksearch {

enum class SeqKind { F, G, E };

inline const char* seq_kind_name(SeqKind kind) {
  switch (kind) {
    case SeqKind::F: return "F";
    case SeqKind::G: return "G";
    case SeqKind::E: return "E";
  }
  return "?";
}

/// Integer table for one sequence; `at(n)` takes the mathematical index.
struct SeqTable {
  int i = 1;
  SeqKind kind = SeqKind::F;
  int base = 0;  // index of values.front()
  std::vector<BigInt> values;

  int first_index() const { return base; }
  int last_index() const { return base + static_cast<int>(values.size()) - 1; }
  const BigInt& at(int n) const {
    if (n < first_index() || n > last_index())
      throw std::out_of_range(std::string(seq_kind_name(kind)) + " index " +
                              std::to_string(n) + " outside table");
    return values[static_cast<std::size_t>(n - base)];
  }
};

namespace detail {
inline void require_order(int i) {
  if (i < 1) throw std::domain_error("block order i must be >= 1");
}
}  // namespace detail

inline SeqTable f_seq(int i, int n_max) {
  detail::require_order(i);
  if (n_max < 1) throw std::domain_error("f_seq needs n_max >= 1");
  SeqTable t{i, SeqKind::F, 0, {}};
  t.values.reserve(static_cast<std::size_t>(n_max) + 1);
  t.values.emplace_back(1);
  t.values.emplace_back(1);
  for (int n = 2; n <= n_max; ++n) {
    auto k = static_cast<std::size_t>(n);
    t.values.push_back(BigInt(i) * (t.values[k - 1] + t.values[k - 2]));
  }
  return t;
}

inline SeqTable g_seq(int i, int n_max) {
  detail::require_order(i);
  if (n_max < 0) throw std::domain_error("g_seq needs n_max >= 0");
  SeqTable t{i, SeqKind::G, -1, {}};
  t.values.emplace_back(0);
  t.values.emplace_back(1);
  for (int n = 1; n <= n_max; ++n) {
    auto k = static_cast<std::size_t>(n + 1);
    t.values.push_back(BigInt(i) * (t.values[k - 1] + t.values[k - 2]));
  }
  return t;
}

inline SeqTable e_seq(int i, int n_max) {
  detail::require_order(i);
  if (n_max < 0) throw std::domain_error("e_seq needs n_max >= 0");
  SeqTable t{i, SeqKind::E, 0, {}};
  BigInt power = 1;
  for (int n = 0; n <= n_max; ++n) {
    t.values.push_back(2 * power - 1);
    power *= (i + 1);
  }
  return t;
}

/// G_m as a rational, extended by G_{-2} = 1/i.  The extension keeps the
/// recurrence valid at m = 0 and is only meant for the accuracy formulas;
/// the integer table never contains it.
inline BigRational g_extended(const SeqTable& g, int m) {
  if (m == -2) return make_rational(1, g.i);
  return BigRational(g.at(m));
}

/// (-i)^n for n >= 0.
inline BigInt neg_pow(int i, int n) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(i),
                static_cast<unsigned long>(n));
  return (n % 2 == 0) ? r : BigInt(-r);
}

/// Closed form of F_{n+1} evaluated in Q(sqrt(i(i+4))), n >= -1.
inline QuadNum f_closed_form(int i, int n) {
  const std::int64_t d = radicand_for(i);
  const QuadNum root = QuadNum::sqrt_of(d);
  const QuadNum s = root / QuadNum(i + 4);  // sqrt(i/(i+4))
  const QuadNum up = (QuadNum(i) + root) / QuadNum(2);
  const QuadNum down = (QuadNum(i) - root) / QuadNum(2);
  return ((QuadNum(1) + QuadNum(3) * s) * up.pow(n) +
          (QuadNum(1) - QuadNum(3) * s) * down.pow(n)) /
         QuadNum(2);
}

/// Closed form of G_n evaluated in Q(sqrt(i(i+4))), n >= -1.
inline QuadNum g_closed_form(int i, int n) {
  const std::int64_t d = radicand_for(i);
  const QuadNum root = QuadNum::sqrt_of(d);
  const QuadNum up = (QuadNum(i) + root) / QuadNum(2);
  const QuadNum down = (QuadNum(i) - root) / QuadNum(2);
  return (up.pow(n + 1) - down.pow(n + 1)) / root;
}

// ---------------------------------------------------------------------------
// Identity checks

enum class Identity {
  FCassini,          ///< F_{n+1}F_{n-1} - F_n^2 = (2i-1)(-i)^{n-1}, n >= 1
  FShiftedCassini,   ///< F_nF_{n-1} - F_{n+1}F_{n-2} = (2i-1)(-i)^{n-1}, n >= 2
  GIndexShift,       ///< G_nG_m - G_{n+1}G_{m-1} = (-i)^m G_{n-m}, n+1 >= m >= 0
  GDoubleShift,      ///< G_nG_m - G_{n+2}G_{m-2} = -(-i)^m G_{n-m+1}, n+1 >= m >= 1
  FFromG,            ///< F_n = G_{n-1} + iG_{n-2}, n >= 1
  FGDoubleShift,     ///< F_nG_m - F_{n+2}G_{m-2} = -(-i)^m F_{n-m+1}, n+1 >= m >= 1
};

inline const char* identity_name(Identity id) {
  switch (id) {
    case Identity::FCassini: return "f-cassini";
    case Identity::FShiftedCassini: return "f-shifted-cassini";
    case Identity::GIndexShift: return "g-index-shift";
    case Identity::GDoubleShift: return "g-double-shift";
    case Identity::FFromG: return "f-from-g";
    case Identity::FGDoubleShift: return "fg-double-shift";
  }
  return "?";
}

inline std::optional<Identity> identity_from_name(const std::string& name) {
  for (Identity id : {Identity::FCassini, Identity::FShiftedCassini,
                      Identity::GIndexShift, Identity::GDoubleShift,
                      Identity::FFromG, Identity::FGDoubleShift}) {
    if (name == identity_name(id)) return id;
  }
  return std::nullopt;
}

inline bool identity_has_second_index(Identity id) {
  return id == Identity::GIndexShift || id == Identity::GDoubleShift ||
         id == Identity::FGDoubleShift;
}

struct CheckItem {
  std::string what;
  int n = 0;
  int m = 0;
  bool ok = false;
};

struct VerificationReport {
  std::string name;
  std::vector<CheckItem> items;

  bool all_ok() const {
    for (const auto& item : items)
      if (!item.ok) return false;
    return !items.empty();
  }
  std::size_t failures() const {
    std::size_t count = 0;
    for (const auto& item : items) count += item.ok ? 0 : 1;
    return count;
  }
  void append(const VerificationReport& other) {
    items.insert(items.end(), other.items.begin(), other.items.end());
  }
};

/// Checks one identity at block order i for every n in [n_lo, n_hi] and,
/// for two-index identities, every m in [m_lo, m_hi].  Index pairs outside
/// the identity's validity range are rejected.
inline VerificationReport check_identity(Identity id, int i, int n_lo, int n_hi,
                                         int m_lo = 0, int m_hi = 0) {
  detail::require_order(i);
  if (n_lo > n_hi || m_lo > m_hi) throw std::domain_error("empty index range");
  const bool two = identity_has_second_index(id);
  if (!two) m_lo = m_hi = 0;

  auto reject = [&](const std::string& why) {
    throw std::domain_error(std::string(identity_name(id)) + ": " + why);
  };
  switch (id) {
    case Identity::FCassini:
      if (n_lo < 1) reject("needs n >= 1");
      break;
    case Identity::FShiftedCassini:
      if (n_lo < 2) reject("needs n >= 2");
      break;
    case Identity::FFromG:
      if (n_lo < 1) reject("needs n >= 1");
      break;
    case Identity::GIndexShift:
      if (m_lo < 0 || m_hi > n_lo + 1) reject("needs n + 1 >= m >= 0");
      break;
    case Identity::GDoubleShift:
    case Identity::FGDoubleShift:
      if (m_lo < 1 || m_hi > n_lo + 1) reject("needs n + 1 >= m >= 1");
      break;
  }

  const int top = n_hi + 4;
  const SeqTable f = f_seq(i, std::max(top, 1));
  const SeqTable g = g_seq(i, top);
  const BigInt two_i_minus_1 = 2 * i - 1;

  VerificationReport report;
  report.name = identity_name(id);
  for (int n = n_lo; n <= n_hi; ++n) {
    for (int m = m_lo; m <= m_hi; ++m) {
      bool ok = false;
      switch (id) {
        case Identity::FCassini:
          ok = f.at(n + 1) * f.at(n - 1) - f.at(n) * f.at(n) ==
               two_i_minus_1 * neg_pow(i, n - 1);
          break;
        case Identity::FShiftedCassini:
          ok = f.at(n) * f.at(n - 1) - f.at(n + 1) * f.at(n - 2) ==
               two_i_minus_1 * neg_pow(i, n - 1);
          break;
        case Identity::GIndexShift:
          ok = g.at(n) * g.at(m) - g.at(n + 1) * g.at(m - 1) ==
               neg_pow(i, m) * g.at(n - m);
          break;
        case Identity::GDoubleShift: {
          // G_{-1} is the lowest stored term; m = 1 reaches G_{-1} via m-2.
          BigRational lhs = BigRational(g.at(n) * g.at(m)) -
                            BigRational(g.at(n + 2)) * g_extended(g, m - 2);
          ok = lhs == BigRational(-neg_pow(i, m) * g.at(n - m + 1));
          break;
        }
        case Identity::FFromG:
          ok = f.at(n) == g.at(n - 1) + BigInt(i) * g.at(n - 2);
          break;
        case Identity::FGDoubleShift: {
          BigRational lhs = BigRational(f.at(n) * g.at(m)) -
                            BigRational(f.at(n + 2)) * g_extended(g, m - 2);
          ok = lhs == BigRational(-neg_pow(i, m) * f.at(n - m + 1));
          break;
        }
      }
      report.items.push_back({report.name + " i=" + std::to_string(i), n,
                              two ? m : 0, ok});
    }
  }
  return report;
}

/// Every identity at order i with first index up to n_max, second index
/// over its full validity range.
inline VerificationReport check_all_identities(int i, int n_max) {
  VerificationReport all;
  all.name = "identities";
  for (int n = 1; n <= n_max; ++n) {
    all.append(check_identity(Identity::FCassini, i, n, n));
    all.append(check_identity(Identity::FFromG, i, n, n));
    if (n >= 2) all.append(check_identity(Identity::FShiftedCassini, i, n, n));
  }
  for (int n = 0; n <= n_max; ++n) {
    all.append(check_identity(Identity::GIndexShift, i, n, n, 0, n + 1));
    all.append(check_identity(Identity::GDoubleShift, i, n, n, 1, n + 1));
    if (n >= 1)
      all.append(check_identity(Identity::FGDoubleShift, i, n, n, 1, n + 1));
  }
  return all;
}

/// Sign of the difference of two ratios of the form
/// (aG_m + bG_{m-1}) / (aG_{n+1} + bG_n) versus the same with (c, d).
inline int g_ratio_difference_sign(const SeqTable& g, int n, int m,
                                   const BigRational& a, const BigRational& b,
                                   const BigRational& c, const BigRational& d) {
  BigRational lhs = (a * BigRational(g.at(m)) + b * BigRational(g.at(m - 1))) /
                    (a * BigRational(g.at(n + 1)) + b * BigRational(g.at(n)));
  BigRational rhs = (c * BigRational(g.at(m)) + d * BigRational(g.at(m - 1))) /
                    (c * BigRational(g.at(n + 1)) + d * BigRational(g.at(n)));
  return sgn(BigRational(lhs - rhs));
}

/// The sign the ratio comparison must have: that of (-1)^m (ad - bc).
inline int g_ratio_predicted_sign(int m, const BigRational& a,
                                  const BigRational& b, const BigRational& c,
                                  const BigRational& d) {
  int s = sgn(BigRational(a * d - b * c));
  return (m % 2 == 0) ? s : -s;
}

// ---------------------------------------------------------------------------
// Ratio monotonicity

/// Strict monotonicity of the F and G ratio chains toward omega and omega^2,
/// and the F/G sandwich, for every covered n up to n_max.
inline VerificationReport check_monotone_ratios(int i, int n_max) {
  detail::require_order(i);
  if (n_max < 2) throw std::domain_error("check_monotone_ratios needs n_max >= 2");
  const SeqTable f = f_seq(i, 2 * n_max + 4);
  const SeqTable g = g_seq(i, 2 * n_max + 4);
  const QuadNum w = omega(i);
  const QuadNum w2 = w * w;
  auto fr = [&](int p, int q) { return make_rational(f.at(p), f.at(q)); };
  auto gr = [&](int p, int q) { return make_rational(g.at(p), g.at(q)); };

  VerificationReport report;
  report.name = "monotone-ratios i=" + std::to_string(i);
  auto add = [&](const std::string& what, int n, bool ok) {
    report.items.push_back({what, n, 0, ok});
  };

  for (int n = 1; n <= n_max; ++n) {
    // F_{2n-1}/F_{2n} increases to omega; F_{2n}/F_{2n+1} decreases to it.
    add("F odd/even below omega", n, QuadNum(fr(2 * n - 1, 2 * n)) < w);
    add("F even/odd above omega", n, QuadNum(fr(2 * n, 2 * n + 1)) > w);
    add("F odd/even increasing", n, fr(2 * n - 1, 2 * n) < fr(2 * n + 1, 2 * n + 2));
    add("F even/odd decreasing", n, fr(2 * n, 2 * n + 1) > fr(2 * n + 2, 2 * n + 3));
    // Two-step ratios toward omega^2.
    add("F odd two-step below omega^2", n, QuadNum(fr(2 * n - 1, 2 * n + 1)) < w2);
    add("F even two-step above omega^2", n, QuadNum(fr(2 * n, 2 * n + 2)) > w2);
    add("F odd two-step increasing", n,
        fr(2 * n - 1, 2 * n + 1) < fr(2 * n + 1, 2 * n + 3));
    add("F even two-step decreasing", n,
        fr(2 * n, 2 * n + 2) > fr(2 * n + 2, 2 * n + 4));
    // Same for G.
    add("G odd/even below omega", n, QuadNum(gr(2 * n - 1, 2 * n)) < w);
    add("G even/odd above omega", n, QuadNum(gr(2 * n, 2 * n + 1)) > w);
    add("G odd/even increasing", n, gr(2 * n - 1, 2 * n) < gr(2 * n + 1, 2 * n + 2));
    add("G even/odd decreasing", n, gr(2 * n, 2 * n + 1) > gr(2 * n + 2, 2 * n + 3));
    add("G odd two-step below omega^2", n, QuadNum(gr(2 * n - 1, 2 * n + 1)) < w2);
    add("G even two-step above omega^2", n, QuadNum(gr(2 * n, 2 * n + 2)) > w2);
    add("G odd two-step increasing", n,
        gr(2 * n - 1, 2 * n + 1) < gr(2 * n + 1, 2 * n + 3));
    add("G even two-step decreasing", n,
        gr(2 * n, 2 * n + 2) > gr(2 * n + 2, 2 * n + 4));
    // F/G sandwiches.
    add("F<G<F odd sandwich", n,
        fr(2 * n - 1, 2 * n + 1) < gr(2 * n - 1, 2 * n + 1) &&
            gr(2 * n - 1, 2 * n + 1) < fr(2 * n + 1, 2 * n + 3));
    add("F<G<F even sandwich", n,
        fr(2 * n, 2 * n + 2) < gr(2 * n - 2, 2 * n) &&
            gr(2 * n - 2, 2 * n) < fr(2 * n - 2, 2 * n));
  }
  return report;
}

}  // namespace blocksearch
