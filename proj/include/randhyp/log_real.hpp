#pragma once

// Signed real stored as sign and natural log of the magnitude, for
// quantities far outside the double exponent range.

#include <cmath>
#include <compare>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace randhyp {

class LogReal {
 public:
  LogReal() = default;

  static LogReal zero() { return {}; }

  static LogReal from_log(double log_magnitude, int sign = 1) {
    if (std::isnan(log_magnitude)) throw std::domain_error("LogReal: NaN log magnitude");
    LogReal r;
    if (sign == 0 || log_magnitude == -std::numeric_limits<double>::infinity()) return r;
    r.sign_ = sign > 0 ? 1 : -1;
    r.log_ = log_magnitude;
    return r;
  }

  static LogReal from_double(double x) {
    if (std::isnan(x)) throw std::domain_error("LogReal: NaN");
    if (x == 0.0) return {};
    return from_log(std::log(std::fabs(x)), x > 0 ? 1 : -1);
  }

  int sign() const { return sign_; }
  bool is_zero() const { return sign_ == 0; }
  /// ln|x|; -inf for zero.
  double log_magnitude() const {
    return sign_ == 0 ? -std::numeric_limits<double>::infinity() : log_;
  }
  bool representable() const { return sign_ == 0 || std::fabs(log_) < 700.0; }

  /// Nearest double; overflows to +-inf and underflows to 0 outside the range.
  double to_double() const { return sign_ == 0 ? 0.0 : sign_ * std::exp(log_); }

  LogReal abs() const { return from_log(log_magnitude(), sign_ == 0 ? 0 : 1); }

  LogReal pow(double p) const {
    if (sign_ < 0) throw std::domain_error("LogReal::pow of negative value");
    if (sign_ == 0) return p > 0 ? LogReal{} : throw std::domain_error("LogReal::pow of zero");
    return from_log(p * log_);
  }

  LogReal operator-() const {
    LogReal r = *this;
    r.sign_ = -r.sign_;
    return r;
  }

  friend LogReal operator*(const LogReal& a, const LogReal& b) {
    if (a.sign_ == 0 || b.sign_ == 0) return {};
    return from_log(a.log_ + b.log_, a.sign_ * b.sign_);
  }

  friend LogReal operator/(const LogReal& a, const LogReal& b) {
    if (b.sign_ == 0) throw std::domain_error("LogReal: division by zero");
    if (a.sign_ == 0) return {};
    return from_log(a.log_ - b.log_, a.sign_ * b.sign_);
  }

  friend LogReal operator+(const LogReal& a, const LogReal& b) {
    if (a.sign_ == 0) return b;
    if (b.sign_ == 0) return a;
    const LogReal& big = a.log_ >= b.log_ ? a : b;
    const LogReal& small = a.log_ >= b.log_ ? b : a;
    const double t = std::exp(small.log_ - big.log_);
    if (big.sign_ == small.sign_) return from_log(big.log_ + std::log1p(t), big.sign_);
    if (t == 1.0) return {};
    return from_log(big.log_ + std::log1p(-t), big.sign_);
  }

  friend LogReal operator-(const LogReal& a, const LogReal& b) { return a + (-b); }

  LogReal& operator*=(const LogReal& o) { return *this = *this * o; }
  LogReal& operator/=(const LogReal& o) { return *this = *this / o; }
  LogReal& operator+=(const LogReal& o) { return *this = *this + o; }

  friend std::partial_ordering operator<=>(const LogReal& a, const LogReal& b) {
    if (a.sign_ != b.sign_) return a.sign_ <=> b.sign_;
    if (a.sign_ == 0) return std::partial_ordering::equivalent;
    return a.sign_ > 0 ? a.log_ <=> b.log_ : b.log_ <=> a.log_;
  }
  friend bool operator==(const LogReal& a, const LogReal& b) {
    return (a <=> b) == std::partial_ordering::equivalent;
  }

  friend std::ostream& operator<<(std::ostream& os, const LogReal& x) {
    if (x.sign_ == 0) return os << "0";
    return os << (x.sign_ < 0 ? "-" : "") << "exp(" << x.log_ << ")";
  }

 private:
  int sign_ = 0;
  double log_ = 0.0;
};

}  // namespace randhyp
