#pragma once

// Derivative-free 1-d minimization: golden section on a bracket, a dense
// scan to pick the bracket, and geometric bracketing on (0, inf).

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace randhyp {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
  bool contains(double x) const { return lo <= x && x <= hi; }
};

struct ScalarMinimum {
  double argument = 0.0;
  double value = 0.0;
  Interval bracket;
  int iterations = 0;
};

/// Golden-section search for a minimum of f on [lo, hi], stopped once the
/// bracket is narrower than tol.
template <class F>
ScalarMinimum golden_section_minimize(F&& f, double lo, double hi, double tol,
                                      int max_iterations = 500) {
  if (!(lo <= hi)) throw std::invalid_argument("golden_section_minimize: empty interval");
  constexpr double invphi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  int it = 0;
  while (b - a > tol && it < max_iterations) {
    ++it;
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  ScalarMinimum r;
  r.bracket = {a, b};
  r.iterations = it;
  if (fc <= fd) {
    r.argument = c;
    r.value = fc;
  } else {
    r.argument = d;
    r.value = fd;
  }
  return r;
}

/// Evaluate f at `points` equispaced nodes of [lo, hi], then refine by
/// golden section between the neighbours of the best node. Guards against
/// non-unimodal objectives at the cost of the scan.
template <class F>
ScalarMinimum scan_then_golden_minimize(F&& f, double lo, double hi, int points, double tol) {
  if (points < 3) throw std::invalid_argument("scan_then_golden_minimize: need >= 3 points");
  const double h = (hi - lo) / (points - 1);
  int best = 0;
  double fbest = std::numeric_limits<double>::infinity();
  for (int k = 0; k < points; ++k) {
    const double x = k == points - 1 ? hi : lo + k * h;
    const double v = f(x);
    if (v < fbest) {
      fbest = v;
      best = k;
    }
  }
  const double a = best == 0 ? lo : lo + (best - 1) * h;
  const double b = best == points - 1 ? hi : std::min(hi, lo + (best + 1) * h);
  ScalarMinimum r = golden_section_minimize(f, a, b, tol);
  if (fbest < r.value) {
    r.argument = best == points - 1 ? hi : lo + best * h;
    r.value = fbest;
  }
  r.iterations += points;
  return r;
}

/// For f on (0, inf) tending to +inf at both ends: starting at s0, step by
/// factors of 2 until a triple with a lower middle value is found.
template <class F>
Interval bracket_minimum_geometric(F&& f, double s0, int max_steps = 2000) {
  if (!(s0 > 0)) throw std::invalid_argument("bracket_minimum_geometric: start must be > 0");
  double lo = s0 / 2, mid = s0, hi = s0 * 2;
  double flo = f(lo), fmid = f(mid), fhi = f(hi);
  for (int k = 0; k < max_steps; ++k) {
    if (fmid <= flo && fmid <= fhi) return {lo, hi};
    if (flo < fmid) {
      hi = mid;
      fhi = fmid;
      mid = lo;
      fmid = flo;
      lo = mid / 2;
      flo = f(lo);
    } else {
      lo = mid;
      flo = fmid;
      mid = hi;
      fmid = fhi;
      hi = mid * 2;
      fhi = f(hi);
    }
  }
  throw std::runtime_error("bracket_minimum_geometric: no bracket found");
}

}  // namespace randhyp
