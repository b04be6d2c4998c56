#pragma once

#include <cmath>
#include <limits>

namespace polyweight {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();
inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;

/// A signed quantity stored as (sign, log of absolute value).
/// sign == 0 means exact zero (log_abs is -inf by convention).
struct SignedLog {
  double log_abs = kNegInf;
  int sign = 0;

  static SignedLog zero() { return {kNegInf, 0}; }
  static SignedLog from_value(double v) {
    if (v == 0.0) return zero();
    return {std::log(std::fabs(v)), v > 0 ? 1 : -1};
  }
  double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }
  SignedLog operator*(const SignedLog& o) const {
    if (sign == 0 || o.sign == 0) return zero();
    return {log_abs + o.log_abs, sign * o.sign};
  }
  SignedLog negate() const { return {log_abs, -sign}; }
};

/// Streaming log-sum-exp of positive terms: each term enters as its natural
/// log. Contributions are factored against the running maximum so the sum
/// never overflows, whatever the dynamic range.
class LogAccumulator {
 public:
  void add_log(double lv) {
    if (lv == kNegInf) return;
    if (lv <= lmax_) {
      sum_ += std::exp(lv - lmax_);
    } else {
      sum_ = (lmax_ == kNegInf) ? 1.0 : sum_ * std::exp(lmax_ - lv) + 1.0;
      lmax_ = lv;
    }
  }
  double log_total() const {
    if (lmax_ == kNegInf) return kNegInf;
    return lmax_ + std::log(sum_);
  }
  bool empty() const { return lmax_ == kNegInf; }

 private:
  double lmax_ = kNegInf;
  double sum_ = 0.0;
};

/// log(exp(a) + exp(b)) without overflow.
inline double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  double hi = a > b ? a : b;
  double lo = a > b ? b : a;
  return hi + std::log1p(std::exp(lo - hi));
}

/// log(exp(a) - exp(b)) for a > b; returns -inf when they coincide.
inline double log_sub(double a, double b) {
  if (b == kNegInf) return a;
  if (a <= b) return kNegInf;
  return a + std::log1p(-std::exp(b - a));
}

/// Wraps an angle to [-pi, pi).
inline double wrap_angle(double t) {
  double w = t - kTwoPi * std::floor((t + kPi) / kTwoPi);
  if (w >= kPi) w -= kTwoPi;
  if (w < -kPi) w += kTwoPi;
  return w;
}

}  // namespace polyweight
