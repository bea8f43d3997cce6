// Copyright 2026 The mpjacobi Authors
// SPDX-License-Identifier: Apache-2.0

// Error-free transformations and double-double arithmetic.
//
// A DoubleDouble holds the unevaluated sum hi + lo of two binary64 values
// with hi = RN(hi + lo). All operations renormalize their result. The
// effective unit roundoff is 2^-106.
//
// The kernels rely on a correctly rounded fused multiply-add. Building
// without hardware FMA is an error rather than a silent slowdown through a
// software fma emulation.

#pragma once

#include <cmath>
#include <limits>
#include <ostream>

#if !defined(__FMA__) && !defined(__aarch64__) && !defined(_M_ARM64)
#error "mpjacobi requires hardware fused multiply-add (compile with -mfma)"
#endif

namespace mpjacobi {

/// Result of an error-free transformation: value + error is exact.
struct SumAndError {
  double value;
  double error;
};

/// s = fl(a + b), e = (a + b) - s exactly (Knuth).
inline SumAndError two_sum(double a, double b) noexcept {
  const double s = a + b;
  if (!std::isfinite(s)) return {s, 0.0};
  const double bb = s - a;
  const double e = (a - (s - bb)) + (b - bb);
  return {s, e};
}

/// Same as two_sum under the precondition |a| >= |b| (or a == 0).
inline SumAndError fast_two_sum(double a, double b) noexcept {
  const double s = a + b;
  if (!std::isfinite(s)) return {s, 0.0};
  return {s, b - (s - a)};
}

/// p = fl(a * b), e = a * b - p exactly.
inline SumAndError two_prod(double a, double b) noexcept {
  const double p = a * b;
  if (!std::isfinite(p)) return {p, 0.0};
  return {p, std::fma(a, b, -p)};
}

class DoubleDouble {
 public:
  constexpr DoubleDouble() noexcept = default;
  constexpr DoubleDouble(double x) noexcept : hi_(x), lo_(0.0) {}  // NOLINT: implicit promotion is exact
  constexpr DoubleDouble(float x) noexcept : hi_(x), lo_(0.0) {}   // NOLINT
  constexpr DoubleDouble(int x) noexcept : hi_(x), lo_(0.0) {}     // NOLINT

  /// Builds a normalized value from an arbitrary pair.
  static DoubleDouble from_sum(double a, double b) noexcept {
    const auto r = two_sum(a, b);
    return raw(r.value, r.error);
  }

  /// Wraps a pair that already satisfies hi = RN(hi + lo).
  static constexpr DoubleDouble raw(double hi, double lo) noexcept {
    DoubleDouble d;
    d.hi_ = hi;
    d.lo_ = lo;
    return d;
  }

  constexpr double hi() const noexcept { return hi_; }
  constexpr double lo() const noexcept { return lo_; }

  /// Round to nearest binary64. hi already is RN(hi + lo).
  explicit constexpr operator double() const noexcept { return hi_; }
  explicit operator float() const noexcept;

  friend DoubleDouble operator-(DoubleDouble x) noexcept { return raw(-x.hi_, -x.lo_); }

  friend DoubleDouble operator+(DoubleDouble x, DoubleDouble y) noexcept;
  friend DoubleDouble operator-(DoubleDouble x, DoubleDouble y) noexcept { return x + (-y); }
  friend DoubleDouble operator*(DoubleDouble x, DoubleDouble y) noexcept;
  friend DoubleDouble operator/(DoubleDouble x, DoubleDouble y) noexcept;

  DoubleDouble& operator+=(DoubleDouble y) noexcept { return *this = *this + y; }
  DoubleDouble& operator-=(DoubleDouble y) noexcept { return *this = *this - y; }
  DoubleDouble& operator*=(DoubleDouble y) noexcept { return *this = *this * y; }
  DoubleDouble& operator/=(DoubleDouble y) noexcept { return *this = *this / y; }

  friend bool operator==(DoubleDouble x, DoubleDouble y) noexcept {
    return x.hi_ == y.hi_ && x.lo_ == y.lo_;
  }
  friend bool operator<(DoubleDouble x, DoubleDouble y) noexcept {
    return x.hi_ < y.hi_ || (x.hi_ == y.hi_ && x.lo_ < y.lo_);
  }
  friend bool operator>(DoubleDouble x, DoubleDouble y) noexcept { return y < x; }
  friend bool operator<=(DoubleDouble x, DoubleDouble y) noexcept { return !(y < x); }
  friend bool operator>=(DoubleDouble x, DoubleDouble y) noexcept { return !(x < y); }

 private:
  double hi_ = 0.0;
  double lo_ = 0.0;
};

inline DoubleDouble operator+(DoubleDouble x, DoubleDouble y) noexcept {
  // Accurate double-word addition (both tails carried through two_sum).
  auto s = two_sum(x.hi_, y.hi_);
  if (!std::isfinite(s.value)) return DoubleDouble::raw(s.value, 0.0);
  const auto t = two_sum(x.lo_, y.lo_);
  s.error += t.value;
  s = fast_two_sum(s.value, s.error);
  s.error += t.error;
  s = fast_two_sum(s.value, s.error);
  return DoubleDouble::raw(s.value, s.error);
}

inline DoubleDouble operator*(DoubleDouble x, DoubleDouble y) noexcept {
  auto c = two_prod(x.hi_, y.hi_);
  if (!std::isfinite(c.value)) return DoubleDouble::raw(c.value, 0.0);
  const double tl0 = x.lo_ * y.lo_;
  const double tl1 = std::fma(x.hi_, y.lo_, tl0);
  const double cl2 = std::fma(x.lo_, y.hi_, tl1);
  c = fast_two_sum(c.value, c.error + cl2);
  return DoubleDouble::raw(c.value, c.error);
}

inline DoubleDouble operator/(DoubleDouble x, DoubleDouble y) noexcept {
  const double q1 = x.hi_ / y.hi_;
  if (!std::isfinite(q1)) return DoubleDouble::raw(q1, 0.0);
  DoubleDouble r = x - y * DoubleDouble(q1);
  const double q2 = r.hi_ / y.hi_;
  r = r - y * DoubleDouble(q2);
  const double q3 = r.hi_ / y.hi_;
  const auto q = fast_two_sum(q1, q2);
  return DoubleDouble::raw(q.value, q.error) + DoubleDouble(q3);
}

inline DoubleDouble::operator float() const noexcept {
  // Round hi + lo to binary32 without double rounding. Only a hi that sits
  // exactly on a binary32 midpoint needs the tail to break the tie.
  const float f = static_cast<float>(hi_);
  if (lo_ == 0.0 || !std::isfinite(f)) return f;
  const double rem = hi_ - static_cast<double>(f);
  if (rem == 0.0) return f;
  const float toward =
      std::nextafter(f, rem > 0.0 ? std::numeric_limits<float>::infinity()
                                  : -std::numeric_limits<float>::infinity());
  const double half = (static_cast<double>(toward) - static_cast<double>(f)) / 2.0;
  if (rem != half) return f;
  return (lo_ > 0.0) == (rem > 0.0) ? toward : f;
}

inline DoubleDouble abs(DoubleDouble x) noexcept { return x.hi() < 0.0 ? -x : x; }

inline DoubleDouble sqrt(DoubleDouble x) noexcept {
  if (x.hi() <= 0.0) return DoubleDouble(std::sqrt(x.hi()));
  const double s = std::sqrt(x.hi());
  if (!std::isfinite(s)) return DoubleDouble(s);
  const auto p = two_prod(s, s);
  const double r = ((x.hi() - p.value) - p.error + x.lo()) / (2.0 * s);
  const auto t = fast_two_sum(s, r);
  return DoubleDouble::raw(t.value, t.error);
}

inline bool isfinite(DoubleDouble x) noexcept { return std::isfinite(x.hi()) && std::isfinite(x.lo()); }

/// Exact product of two binary64 values as a double-double.
inline DoubleDouble exact_product(double a, double b) noexcept {
  const auto p = two_prod(a, b);
  return DoubleDouble::raw(p.value, p.error);
}

/// Power of two scaling (exact barring over/underflow).
inline DoubleDouble ldexp(DoubleDouble x, int e) noexcept {
  return DoubleDouble::raw(std::ldexp(x.hi(), e), std::ldexp(x.lo(), e));
}

std::ostream& operator<<(std::ostream& os, DoubleDouble x);

}  // namespace mpjacobi
