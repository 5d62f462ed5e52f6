#pragma once

#include <cmath>
#include <numbers>

namespace randhyp {

/// ln(e^{a^2} erfc(a)). Direct below a = 8, asymptotic series above, where
/// erfc itself heads toward underflow.
inline double log_erfcx(double a) {
  if (a < 8.0) return std::log(std::erfc(a)) + a * a;
  const double inv2a2 = 1.0 / (2.0 * a * a);
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double next = -term * (2.0 * k - 1.0) * inv2a2;
    if (std::fabs(next) >= std::fabs(term)) break;
    term = next;
    sum += term;
    if (std::fabs(term) < 1e-17 * std::fabs(sum)) break;
  }
  return -std::log(a * std::sqrt(std::numbers::pi)) + std::log(sum);
}

inline double log_erfc(double a) {
  if (a < 8.0) return std::log(std::erfc(a));
  return log_erfcx(a) - a * a;
}

/// ln of (1/sqrt(pi)) * integral_a^inf e^{-t^2} dt = ln(erfc(a)/2).
inline double log_gaussian_tail(double a) { return log_erfc(a) - std::numbers::ln2; }

}  // namespace randhyp
