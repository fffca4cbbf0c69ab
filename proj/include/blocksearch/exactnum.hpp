#pragma once

/**
 * @file exactnum.hpp
 * @brief Exact arithmetic in the real quadratic field Q(sqrt d).
 *
 * Every quantity the search analysis needs (the contraction ratio omega,
 * the optimal general accuracy, all thresholds) is of the form a + b*sqrt(d)
 * with rational a, b and d = i(i+4) for the active block order i.  Values are
 * stored with GMP rationals and compared exactly: the sign of a + b*sqrt(d)
 * is decided by comparing a^2 against b^2*d, never by rounding.
 *
 * A value with radicand 0 is a plain rational and combines with any radicand.
 * Two values with different positive radicands do not mix.
 */

#include <gmpxx.h>

#include <cctype>
#include <compare>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace blocksearch {

using BigInt = mpz_class;
using BigRational = mpq_class;

inline BigRational make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  BigRational q(num, den);
  q.canonicalize();
  return q;
}

inline BigRational make_rational(long num, long den = 1) {
  return make_rational(BigInt(num), BigInt(den));
}

/// Parses "p", "p/q" or a plain decimal such as "-0.125" into an exact
/// rational.
inline BigRational parse_rational(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
      s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
      s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  auto integer = [](std::string_view s) {
    if (s.empty()) throw std::invalid_argument("empty integer literal");
    std::size_t start = (s.front() == '-' || s.front() == '+') ? 1 : 0;
    if (start == s.size()) throw std::invalid_argument("bad integer literal");
    for (std::size_t k = start; k < s.size(); ++k) {
      if (!std::isdigit(static_cast<unsigned char>(s[k])))
        throw std::invalid_argument("bad integer literal: " + std::string(s));
    }
    std::string digits(s.front() == '+' ? s.substr(1) : s);
    return BigInt(digits, 10);
  };
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    return make_rational(integer(trim(text.substr(0, slash))),
                         integer(trim(text.substr(slash + 1))));
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    bool negative = !whole.empty() && whole.front() == '-';
    if (!whole.empty() && (whole.front() == '-' || whole.front() == '+'))
      whole.remove_prefix(1);
    std::string digits = std::string(whole) + std::string(frac);
    if (digits.empty()) throw std::invalid_argument("bad decimal literal");
    BigInt scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    BigRational q = make_rational(integer(digits), scale);
    return negative ? BigRational(-q) : q;
  }
  return BigRational(integer(text));
}

/// Canonical "p/q" text of a rational.
inline std::string rational_string(const BigRational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

/// True when n is a perfect square.
inline bool is_perfect_square(const BigInt& n) {
  return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

/// Floating approximation together with a rational enclosure of the exact
/// value: lo <= exact <= hi and |value - exact| <= error.
struct FloatApprox {
  double value = 0.0;
  double error = 0.0;
  BigRational lo;
  BigRational hi;
};

class QuadNum {
 public:
  QuadNum() = default;
  QuadNum(long value) : a_(value) {}  // NOLINT(google-explicit-constructor)
  QuadNum(BigRational a) : a_(std::move(a)) { a_.canonicalize(); }  // NOLINT
  QuadNum(BigRational a, BigRational b, std::int64_t d)
      : a_(std::move(a)), b_(std::move(b)), d_(d) {
    a_.canonicalize();
    b_.canonicalize();
    if (d_ < 0) throw std::domain_error("negative radicand");
    if (d_ == 0 && b_ != 0)
      throw std::domain_error("irrational part without a radicand");
    if (d_ > 0 && is_perfect_square(BigInt(static_cast<long>(d_))))
      throw std::domain_error("radicand " + std::to_string(d_) +
                              " is a perfect square");
  }

  /// sqrt(d) itself.
  static QuadNum sqrt_of(std::int64_t d) { return QuadNum(0, 1, d); }

  const BigRational& rational_part() const { return a_; }
  const BigRational& sqrt_coeff() const { return b_; }
  std::int64_t radicand() const { return d_; }
  bool is_rational() const { return b_ == 0; }
  bool is_zero() const { return a_ == 0 && b_ == 0; }

  /// -1, 0 or +1, decided exactly.
  int sign() const {
    int sa = sgn(a_);
    int sb = sgn(b_);
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    BigRational a2 = a_ * a_;
    BigRational b2d = b_ * b_ * BigRational(static_cast<long>(d_));
    int magnitude = cmp(a2, b2d);  // never 0: d is not a square
    return magnitude > 0 ? sa : sb;
  }

  QuadNum operator-() const { return QuadNum(-a_, -b_, d_, Raw{}); }

  QuadNum& operator+=(const QuadNum& o) {
    d_ = common(o);
    a_ += o.a_;
    b_ += o.b_;
    return *this;
  }
  QuadNum& operator-=(const QuadNum& o) {
    d_ = common(o);
    a_ -= o.a_;
    b_ -= o.b_;
    return *this;
  }
  QuadNum& operator*=(const QuadNum& o) {
    std::int64_t d = common(o);
    BigRational a = a_ * o.a_;
    if (d != 0) a += b_ * o.b_ * BigRational(static_cast<long>(d));
    BigRational b = a_ * o.b_ + o.a_ * b_;
    a_ = std::move(a);
    b_ = std::move(b);
    d_ = d;
    return *this;
  }
  QuadNum& operator/=(const QuadNum& o) {
    common(o);
    return *this *= o.inverse();
  }

  friend QuadNum operator+(QuadNum x, const QuadNum& y) { return x += y; }
  friend QuadNum operator-(QuadNum x, const QuadNum& y) { return x -= y; }
  friend QuadNum operator*(QuadNum x, const QuadNum& y) { return x *= y; }
  friend QuadNum operator/(QuadNum x, const QuadNum& y) { return x /= y; }

  QuadNum inverse() const {
    if (is_zero()) throw std::domain_error("division by zero in Q(sqrt d)");
    // (a - b sqrt d) / (a^2 - b^2 d)
    BigRational norm = a_ * a_;
    if (d_ != 0) norm -= b_ * b_ * BigRational(static_cast<long>(d_));
    return QuadNum(a_ / norm, -b_ / norm, d_, Raw{});
  }

  QuadNum pow(long n) const {
    if (n < 0) return inverse().pow(-n);
    QuadNum result(BigRational(1), BigRational(0), d_, Raw{});
    QuadNum base = *this;
    while (n > 0) {
      if (n & 1) result *= base;
      n >>= 1;
      if (n > 0) base *= base;
    }
    return result;
  }

  friend bool operator==(const QuadNum& x, const QuadNum& y) {
    x.common(y);
    return x.a_ == y.a_ && x.b_ == y.b_;
  }
  friend std::strong_ordering operator<=>(const QuadNum& x, const QuadNum& y) {
    int s = (x - y).sign();
    if (s < 0) return std::strong_ordering::less;
    if (s > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  /// Rational enclosure of sqrt(d) to `precision_bits` fractional bits,
  /// then of the value itself.
  FloatApprox to_float(int precision_bits = 64) const {
    if (precision_bits < 16)
      throw std::invalid_argument("precision_bits must be at least 16");
    FloatApprox out;
    if (is_rational()) {
      out.lo = out.hi = a_;
      out.value = a_.get_d();
      out.error = ulp_bound(out.value);
      if (BigRational(out.value) == a_) out.error = 0.0;
      return out;
    }
    BigInt scaled = BigInt(static_cast<long>(d_)) << (2 * precision_bits);
    BigInt root;
    mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
    BigInt denom = BigInt(1) << precision_bits;
    BigRational root_lo = make_rational(root, denom);
    BigRational root_hi = make_rational(root + 1, denom);
    BigRational e1 = a_ + b_ * root_lo;
    BigRational e2 = a_ + b_ * root_hi;
    out.lo = b_ > 0 ? e1 : e2;
    out.hi = b_ > 0 ? e2 : e1;
    BigRational mid = (out.lo + out.hi) / 2;
    out.value = mid.get_d();
    BigRational half_width = (out.hi - out.lo) / 2;
    out.error = half_width.get_d() * (1.0 + 1e-15) + ulp_bound(out.value);
    return out;
  }

  double to_double() const { return to_float(64).value; }

  /// Canonical "p/q + r/s*sqrt(d)"; rational values print as "p/q".
  std::string to_string() const {
    if (d_ == 0 || sgn(b_) == 0) return rational_string(a_);
    return rational_string(a_) + " + " + rational_string(b_) + "*sqrt(" +
           std::to_string(d_) + ")";
  }

  /// Inverse of to_string; also accepts plain rationals and decimals.
  static QuadNum parse(std::string_view text) {
    auto plus = text.find(" + ");
    if (plus == std::string_view::npos) return QuadNum(parse_rational(text));
    std::string_view head = text.substr(0, plus);
    std::string_view tail = text.substr(plus + 3);
    auto star = tail.find("*sqrt(");
    auto close = tail.rfind(')');
    if (star == std::string_view::npos || close == std::string_view::npos ||
        close < star)
      throw std::invalid_argument("bad quadratic literal: " +
                                  std::string(text));
    std::string radicand(tail.substr(star + 6, close - star - 6));
    return QuadNum(parse_rational(head), parse_rational(tail.substr(0, star)),
                   std::stoll(radicand));
  }

  friend std::ostream& operator<<(std::ostream& os, const QuadNum& x) {
    return os << x.to_string();
  }

 private:
  struct Raw {};
  QuadNum(BigRational a, BigRational b, std::int64_t d, Raw)
      : a_(std::move(a)), b_(std::move(b)), d_(d) {
    a_.canonicalize();
    b_.canonicalize();
  }

  std::int64_t common(const QuadNum& o) const {
    if (d_ == o.d_ || o.d_ == 0) return d_;
    if (d_ == 0) return o.d_;
    throw std::domain_error("radicand mismatch: sqrt(" + std::to_string(d_) +
                            ") vs sqrt(" + std::to_string(o.d_) + ")");
  }

  static double ulp_bound(double v) {
    double m = v < 0 ? -v : v;
    return m * 0x1p-52 + 0x1p-1074;
  }

  BigRational a_ = 0;
  BigRational b_ = 0;
  std::int64_t d_ = 0;
};

/// Radicand of the field that houses omega(i).
inline std::int64_t radicand_for(int i) {
  return static_cast<std::int64_t>(i) * (i + 4);
}

/// Positive root of i*(w + w^2) = 1, i.e. (sqrt(i(i+4)) - i) / (2i).
inline QuadNum omega(int i) {
  if (i < 1) throw std::domain_error("omega needs block order i >= 1");
  return QuadNum(make_rational(-1, 2), make_rational(1, 2L * i),
                 radicand_for(i));
}

inline QuadNum abs(const QuadNum& x) { return x.sign() < 0 ? -x : x; }
inline const QuadNum& max(const QuadNum& x, const QuadNum& y) {
  return x < y ? y : x;
}
inline const QuadNum& min(const QuadNum& x, const QuadNum& y) {
  return y < x ? y : x;
}

}  // namespace blocksearch
