#pragma once

/**
 * @file asymptotics.hpp
 * @brief Ratio trackers against the reference trace x_n = sigma omega^n,
 * y_n = sigma omega^{n-1}/i, and the phi-sequence whose product bounds
 * Delta(P, n)/Delta(H, n) from below.
 *
 *   mu(m,n)     = (v_n/y_n) / (u_m/x_m)
 *   lambda(m,n) = (v_n/y_n) / (v_m/y_m)
 *   rho(m,n)    = (u_n/x_n) / (u_m/x_m)
 *
 * with u_n = delta(P, n), v_n = Delta(P, n), u_0 = v_0 = b - a.
 */

#include <blocksearch/accuracy.hpp>
#include <blocksearch/errors.hpp>
#include <blocksearch/exactnum.hpp>
#include <blocksearch/policies.hpp>

#include <optional>
#include <string>
#include <vector>

namespace blocksearch {

struct ReferenceTrace {
  int i = 2;
  int k1 = 3;
  QuadNum length;
  QuadNum sigma;
  std::vector<QuadNum> x;  ///< x_0..x_n
  std::vector<QuadNum> y;  ///< y_0..y_n
};

/// Reference solution of (x_n, y_n) = c(k_{n+1}) (x_{n+1}, y_{n+1}) with
/// k_1 given, k_n = 2i-1 afterwards and x_0 = length.
inline ReferenceTrace reference_trace(int i, const QuadNum& length, int k1, int n_max) {
  if (i < 1) throw std::domain_error("reference trace needs i >= 1");
  if (k1 < 2) throw std::domain_error("reference trace needs k_1 >= 2");
  if (n_max < 1) throw std::domain_error("reference trace needs n_max >= 1");
  if (length.sign() <= 0) throw std::domain_error("interval length must be positive");
  const QuadNum w = omega(i);
  ReferenceTrace r;
  r.i = i;
  r.k1 = k1;
  r.length = length;
  r.sigma = length / (QuadNum(chi(k1)) * w + QuadNum(make_rational((k1 + 1) / 2, i)));
  r.x.push_back(length);
  r.y.push_back(QuadNum(0));
  for (int n = 1; n <= n_max; ++n) {
    r.x.push_back(r.sigma * w.pow(n));
    r.y.push_back(r.sigma * w.pow(n - 1) / QuadNum(i));
  }
  auto [x0, y0] = c_matrix(k1).apply(r.x[1], r.y[1]);
  if (x0 != length) throw std::logic_error("reference trace does not reproduce x_0");
  r.y[0] = y0;
  return r;
}

// ---------------------------------------------------------------------------
// Ratio trackers

struct RatioTrack {
  int i = 2;
  int k1 = 3;
  std::vector<QuadNum> u, v;  ///< policy: delta and Delta, index 0..N
  std::vector<QuadNum> x, y;  ///< reference

  int last() const { return static_cast<int>(u.size()) - 1; }

  QuadNum mu(int m, int n) const { return (at(v, n) / at(y, n)) / (at(u, m) / at(x, m)); }
  QuadNum lambda(int m, int n) const { return (at(v, n) / at(y, n)) / (at(v, m) / at(y, m)); }
  QuadNum rho(int m, int n) const { return (at(u, n) / at(x, n)) / (at(u, m) / at(x, m)); }

 private:
  static const QuadNum& at(const std::vector<QuadNum>& s, int k) {
    if (k < 0 || k >= static_cast<int>(s.size()))
      throw std::out_of_range("ratio index " + std::to_string(k) + " outside the track");
    return s[static_cast<std::size_t>(k)];
  }
};

/// Pairs a policy trace (u_n, v_n) with its reference trace.
inline RatioTrack ratio_trackers(const std::vector<QuadNum>& u, const std::vector<QuadNum>& v,
                                 const ReferenceTrace& ref) {
  if (u.size() != v.size()) throw std::domain_error("policy trace columns differ in length");
  if (u.size() < 2) throw std::domain_error("policy trace needs at least one step");
  if (u.size() > ref.x.size()) throw std::domain_error("reference trace is shorter than the policy trace");
  if (u.front() != ref.length) throw std::domain_error("traces start from different intervals");
  RatioTrack t;
  t.i = ref.i;
  t.k1 = ref.k1;
  t.u = u;
  t.v = v;
  t.x.assign(ref.x.begin(), ref.x.begin() + static_cast<long>(u.size()));
  t.y.assign(ref.y.begin(), ref.y.begin() + static_cast<long>(u.size()));
  return t;
}

/// Cocycle identities on every index triple of the track.
inline VerificationReport check_cocycles(const RatioTrack& t) {
  VerificationReport r;
  r.name = "cocycle identities";
  const int N = t.last();
  for (int m = 0; m <= N; ++m)
    for (int l = 0; l <= N; ++l)
      for (int n = 0; n <= N; ++n) {
        bool ok = t.lambda(m, l) * t.lambda(l, n) == t.lambda(m, n) &&
                  t.rho(m, l) * t.rho(l, n) == t.rho(m, n) &&
                  t.mu(m, l) * t.lambda(l, n) == t.mu(m, n) &&
                  t.rho(m, l) * t.mu(l, n) == t.mu(m, n);
        r.items.push_back({"(" + std::to_string(m) + "," + std::to_string(l) + "," +
                               std::to_string(n) + ")",
                           m, n, ok});
      }
  return r;
}

/// One-step bounds and the implications that feed the phi construction.
inline VerificationReport check_ratio_bounds(const RatioTrack& t) {
  VerificationReport r;
  r.name = "ratio bounds";
  const int N = t.last();
  const QuadNum one(1);
  const QuadNum frac(make_rational(t.i, t.i + 1));
  if (t.k1 == 2 * t.i) {
    r.items.push_back({"mu(0,1) >= i/(i+1) for k_1 = 2i", 0, 1, t.mu(0, 1) >= frac});
  } else if (t.k1 == 2 * t.i - 1) {
    r.items.push_back({"mu(0,1) >= 1 for k_1 = 2i-1", 0, 1, t.mu(0, 1) >= one});
  }
  for (int n = 1; n + 1 <= N; ++n) {
    const QuadNum lam = t.lambda(n, n + 1);
    const QuadNum mu = t.mu(n, n + 1);
    r.items.push_back({"lambda(n,n+1) >= i/(i+1)", n, n + 1, lam >= frac});
    r.items.push_back({"mu(n,n+1) >= 1", n, n + 1, mu >= one});
    if (lam < one) {
      r.items.push_back({"lambda<1 => 1/mu(n+1,n) >= 1/lambda(n,n+1)", n, n + 1,
                         one / t.mu(n + 1, n) >= one / lam});
      if (n + 2 <= N)
        r.items.push_back({"lambda<1 => lambda(n,n+2) >= 1/lambda(n,n+1) > 1", n, n + 2,
                           t.lambda(n, n + 2) >= one / lam && one / lam > one});
    }
    if (mu < one)
      r.items.push_back({"mu<1 => rho(n,n+1) >= 1/mu(n,n+1)", n, n + 1,
                         t.rho(n, n + 1) >= one / mu});
  }
  if (t.mu(0, 1) < one)
    r.items.push_back({"mu<1 => rho(0,1) >= 1/mu(0,1)", 0, 1, t.rho(0, 1) >= one / t.mu(0, 1)});
  return r;
}

// ---------------------------------------------------------------------------
// Phi construction

struct PhiEntry {
  QuadNum value;
  std::string source;  ///< "mu", "rho", "lambda" or "lambda-merged"
  int m = 0;
  int n = 0;

  std::string label() const {
    return (source == "lambda-merged" ? std::string("lambda") : source) + "(" +
           std::to_string(m) + "," + std::to_string(n) + ")";
  }
};

struct PhiSequence {
  std::vector<PhiEntry> phi;
  int covered_to = 0;      ///< last track index consumed
  /// Indices n at which mu(0, n) telescopes into the entries ending at or
  /// before n; inside a merge or before the seed closes there is no bound.
  std::vector<int> checkpoints;
  bool complete = true;    ///< false when a merge ran past the end of the track
  std::vector<std::string> violations;

  QuadNum product() const {
    QuadNum p(1);
    for (const auto& e : phi) p *= e.value;
    return p;
  }
  /// Product of the entries that end at or before index n.
  QuadNum product_through(int n) const {
    QuadNum p(1);
    for (const auto& e : phi)
      if (e.n <= n) p *= e.value;
    return p;
  }
};

enum class Parity { Odd, Even };

inline PhiSequence phi_construction(const RatioTrack& t, Parity k1_parity) {
  const int N = t.last();
  if (N < 2) throw std::domain_error("phi construction needs a track of at least two steps");
  const QuadNum one(1);
  PhiSequence out;
  int next = 1;  // first lambda(n, n+1) still to examine
  auto seed = [&](int m) {
    QuadNum s = t.mu(m, m + 1);
    if (s > one) out.phi.push_back({s, "mu", m, m + 1});
    out.covered_to = m + 1;
    out.checkpoints.push_back(m + 1);
  };
  QuadNum mu01 = t.mu(0, 1);
  if (mu01 >= one) {
    seed(0);
  } else if (k1_parity == Parity::Odd) {
    out.violations.push_back("mu(0,1) < 1 although k_1 is odd");
    seed(0);
  } else {
    out.phi.push_back({t.rho(0, 1), "rho", 0, 1});
    if (t.rho(0, 1) <= one) out.violations.push_back("rho(0,1) <= 1 after mu(0,1) < 1");
    seed(1);
    next = 2;
  }
  for (int n = next; n + 1 <= N;) {
    QuadNum lam = t.lambda(n, n + 1);
    if (lam == one) {
      out.covered_to = n + 1;
      out.checkpoints.push_back(n + 1);
      ++n;
    } else if (lam > one) {
      out.phi.push_back({lam, "lambda", n, n + 1});
      out.covered_to = n + 1;
      out.checkpoints.push_back(n + 1);
      ++n;
    } else {
      if (n + 2 > N) {
        out.complete = false;
        break;
      }
      QuadNum merged = t.lambda(n, n + 2);
      out.phi.push_back({merged, "lambda-merged", n, n + 2});
      if (merged <= one) out.violations.push_back("merged lambda not above 1");
      out.covered_to = n + 2;
      out.checkpoints.push_back(n + 2);
      n += 2;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Limit ratio diagnostics

struct RatioPoint {
  int n = 0;
  QuadNum delta_ratio;  ///< delta(P, n) / delta(H, n)
  QuadNum Delta_ratio;  ///< Delta(P, n) / Delta(H, n)
};

struct LimitRatioReport {
  PhiSequence phi;
  QuadNum product_lower_bound;
  std::vector<RatioPoint> ratios;
  /// Delta-ratio >= prod phi >= 1 at every checkpoint of the phi sequence
  bool respects_bound = true;
  std::optional<int> truncated_at;  ///< first step that could not be computed
  std::string truncation_reason;
  VerificationReport cocycles;
  VerificationReport bounds;
};

/// Traces a policy against the optimal-at-infinity reference with the same
/// opening.  Basic policies use their own setting ([0, 1/i], k_1 = 2i);
/// odd-block policies start from [0, 1] with k_1 = 2i - 1.
inline LimitRatioReport limit_ratio_check(const PolicySpec& p, int n_max) {
  if (n_max < 8) throw std::domain_error("limit_ratio_check needs n_max >= 8");
  validate(p);
  const int i = policy_order(p);
  int k1 = 2 * i - 1;
  if (std::holds_alternative<policy::Basic>(p)) k1 = 2 * i;
  if (is_even_block(p) || i < 2)
    throw std::domain_error("limit ratios are defined for odd-block policies with i >= 2");
  const QuadNum len = initial_length(p);
  LimitRatioReport rep;
  std::vector<QuadNum> u{len}, v{len};
  for (int n = 1; n <= n_max; ++n) {
    try {
      if (!plan_step(p, n)) {
        rep.truncated_at = n;
        rep.truncation_reason = "policy horizon reached";
        break;
      }
      u.push_back(plan_accuracy(p, n));
      v.push_back(plan_interval(p, n));
    } catch (const BoundaryError& e) {
      rep.truncated_at = n;
      rep.truncation_reason = e.what();
      break;
    }
  }
  if (u.size() < 3) throw std::domain_error("trace too short for ratio diagnostics");
  ReferenceTrace ref = reference_trace(i, len, k1, static_cast<int>(u.size()) - 1);
  RatioTrack t = ratio_trackers(u, v, ref);
  rep.phi = phi_construction(t, k1 % 2 == 0 ? Parity::Even : Parity::Odd);
  rep.product_lower_bound = rep.phi.product();
  rep.cocycles = check_cocycles(t);
  rep.bounds = check_ratio_bounds(t);
  for (int n = 1; n <= t.last(); ++n) rep.ratios.push_back({n, t.rho(0, n), t.mu(0, n)});
  for (int n : rep.phi.checkpoints) {
    QuadNum bound = rep.phi.product_through(n);
    if (bound < QuadNum(1) || t.mu(0, n) < bound) rep.respects_bound = false;
  }
  return rep;
}

}  // namespace blocksearch
