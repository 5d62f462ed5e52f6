#pragma once

// Explicit constants of the lower-bound pipeline, evaluated in log domain:
// f_tau / m_tau (probability that a Gaussian coefficient dominates),
// g_R / rho_R (sup-norm growth), tau of a regular pair, the per-pair lower
// bound for c_Sigma, and the expected |det| constant e_R by Monte Carlo.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <tuple>
#include <vector>

#include <Eigen/Eigenvalues>

#include "log_real.hpp"
#include "pairs.hpp"
#include "parallel.hpp"
#include "polycore.hpp"
#include "random.hpp"
#include "scalar_search.hpp"
#include "special.hpp"

namespace randhyp {

struct ExtremumResult {
  double argument = 0.0;
  LogReal value;
  Interval bracket;
  int iterations = 0;
};

namespace detail {

// ln f_tau at a = sqrt(tau + u), split as big + small so that the
// u-dependence survives when tau dwarfs 1. big is -tau on the asymptotic
// branch and 0 otherwise.
struct SplitLog {
  double big = 0.0;
  double small = 0.0;
  double total() const { return big + small; }
};

inline SplitLog log_f_tau_split(double tau, double u) {
  if (u <= 0.0) return {0.0, -std::numeric_limits<double>::infinity()};
  const double a2 = tau + u;
  const double a = std::sqrt(a2);
  const double head = std::log(u) - std::log(a2) - std::numbers::ln2;
  if (a < 8.0) return {0.0, head + log_erfc(a)};
  // log_erfc(a) = -a^2 - ln(a sqrt(pi)) + ln(series); keep -tau apart.
  return {-tau, head - u + log_erfcx(a)};
}

}  // namespace detail

inline void check_tau(double tau) {
  if (!(tau > 0) || !std::isfinite(tau)) throw std::domain_error("tau must be a positive finite real");
}

/// ln f_tau(sqrt(tau + u)), for u >= 0.
inline LogReal log_f_tau_offset(double tau, double u) {
  check_tau(tau);
  if (!(u >= 0)) throw std::domain_error("f_tau: offset must be >= 0");
  return LogReal::from_log(detail::log_f_tau_split(tau, u).total());
}

/// f_tau(a) = (1/sqrt(pi)) (1 - tau/a^2) int_a^inf e^{-t^2} dt, in log domain.
inline LogReal log_f_tau(double tau, double a) {
  check_tau(tau);
  if (!(a >= std::sqrt(tau))) throw std::domain_error("f_tau: need a >= sqrt(tau)");
  if (std::isinf(a)) return LogReal::zero();
  const double u = std::max(0.0, (a - std::sqrt(tau)) * (a + std::sqrt(tau)));
  return log_f_tau_offset(tau, u);
}

inline double f_tau(double tau, double a) { return log_f_tau(tau, a).to_double(); }

/// m_tau = sup f_tau over [sqrt(tau), inf), searched on [sqrt(tau), sqrt(tau+1)]
/// where the maximum is known to lie.
inline ExtremumResult m_tau(double tau) {
  check_tau(tau);
  const bool split = tau >= 64.0;
  auto neg = [&](double u) {
    auto s = detail::log_f_tau_split(tau, u);
    const double v = split ? s.small : s.total();
    return std::isinf(v) ? std::numeric_limits<double>::infinity() : -v;
  };
  ScalarMinimum m = scan_then_golden_minimize(neg, 0.0, 1.0, 1000, 1e-10);
  ExtremumResult r;
  r.argument = std::sqrt(tau + m.argument);
  r.bracket = {std::sqrt(tau + m.bracket.lo), std::sqrt(tau + m.bracket.hi)};
  r.bracket.lo = std::min(r.bracket.lo, r.argument);
  r.bracket.hi = std::max(r.bracket.hi, r.argument);
  r.value = LogReal::from_log(detail::log_f_tau_split(tau, m.argument).total());
  r.iterations = m.iterations;
  return r;
}

inline void check_radius(double R, std::size_t n) {
  if (!(R > 0) || !std::isfinite(R)) throw std::domain_error("R must be a positive finite real");
  if (n == 0) throw std::domain_error("dimension must be >= 1");
}

inline double log_g_R(double R, std::size_t n, double s) {
  return 2.0 * static_cast<double>(n) * (std::log(R + s) - std::log(s)) +
         std::numbers::pi * (R + s) * (R + s);
}

/// g_R(s) = ((R+s)/s)^{2n} e^{pi (R+s)^2}.
inline LogReal g_R(double R, std::size_t n, double s) {
  check_radius(R, n);
  if (!(s > 0)) throw std::domain_error("g_R: s must be > 0");
  return LogReal::from_log(log_g_R(R, n, s));
}

/// rho_R = inf over s > 0 of g_R(s).
inline ExtremumResult rho_R(double R, std::size_t n) {
  check_radius(R, n);
  auto f = [&](double s) { return log_g_R(R, n, s); };
  Interval br = bracket_minimum_geometric(f, R);
  ScalarMinimum m = golden_section_minimize(f, br.lo, br.hi, 1e-10);
  ExtremumResult r;
  r.argument = m.argument;
  r.value = LogReal::from_log(m.value);
  r.bracket = m.bracket;
  r.iterations = m.iterations;
  return r;
}

inline double log_ball_volume(std::size_t n, double R) {
  const double h = 0.5 * static_cast<double>(n);
  return h * std::log(std::numbers::pi) + static_cast<double>(n) * std::log(R) - std::lgamma(h + 1.0);
}

/// Euclidean volume of the n-ball of radius R.
inline double ball_volume(std::size_t n, double R) {
  check_radius(R, n);
  return std::exp(log_ball_volume(n, R));
}

/// 2 pi^{floor(n/2)} R^n / floor(n/2)!, the crude comparison volume used in
/// the closed-form c_Sigma bound. It dominates the true ball volume.
inline double ball_volume_power_bound(std::size_t n, double R) {
  check_radius(R, n);
  const double k = std::floor(0.5 * static_cast<double>(n));
  return std::exp(std::numbers::ln2 + k * std::log(std::numbers::pi) +
                  static_cast<double>(n) * std::log(R) - std::lgamma(k + 1.0));
}

struct FamilyInfimum {
  double value = 0.0;
  double parameter = 0.0;
  double delta = 0.0;
  double epsilon = 0.0;
  bool at_open_endpoint = false;
  int iterations = 0;
};

/// inf over the pair's family of 1/delta^2 + pi n / epsilon^2. On an open
/// endpoint the value is the limit there.
inline FamilyInfimum transversality_infimum(const RegularPair& pair) {
  const auto& fam = pair.family;
  if (fam.empty()) throw std::invalid_argument("transversality family is empty");
  const double pn = std::numbers::pi * static_cast<double>(pair.n);
  auto phi = [&](double t) {
    auto [d, e] = fam.at(t);
    if (!(d > 0) || !(e > 0)) return std::numeric_limits<double>::infinity();
    return 1.0 / (d * d) + pn / (e * e);
  };
  FamilyInfimum r;
  if (fam.single_point()) {
    r.parameter = fam.lo;
  } else {
    ScalarMinimum m = scan_then_golden_minimize(phi, fam.lo, fam.hi, 1001, 1e-10);
    r.parameter = m.argument;
    r.iterations = m.iterations;
    const double tol = 1e-9 * (fam.hi - fam.lo);
    r.at_open_endpoint = (fam.open_lo && r.parameter - fam.lo < tol) ||
                         (fam.open_hi && fam.hi - r.parameter < tol);
  }
  r.value = phi(r.parameter);
  std::tie(r.delta, r.epsilon) = fam.at(r.parameter);
  return r;
}

/// tau = 2 rho_R ||P||^2 inf_family(1/delta^2 + pi n / epsilon^2).
inline LogReal tau_pair(const RegularPair& pair) {
  const FamilyInfimum inf = transversality_infimum(pair);
  return LogReal::from_double(2.0) * rho_R(pair.R, pair.n).value *
         LogReal::from_double(fock_norm_sq(pair.polynomial)) * LogReal::from_double(inf.value);
}

/// m_tau / (2^n Vol B(R)): the lower bound for c_Sigma carried by one pair.
inline LogReal c_sigma_lower(const RegularPair& pair) {
  const LogReal tau = tau_pair(pair);
  if (!tau.representable()) throw std::domain_error("c_sigma_lower: tau exceeds double range");
  const LogReal m = m_tau(tau.to_double()).value;
  return m / LogReal::from_log(static_cast<double>(pair.n) * std::numbers::ln2 + log_ball_volume(pair.n, pair.R));
}

/// floor(n/2)! e^{-(sqrt(tau+1)+1)^2} / (2^{n+1} pi^{floor(n/2)} R^n (1+tau) sqrt(pi)),
/// the closed-form bound that c_sigma_lower must dominate.
inline LogReal c_sigma_closed_form_bound(std::size_t n, double R, double tau) {
  check_radius(R, n);
  check_tau(tau);
  const double k = std::floor(0.5 * static_cast<double>(n));
  const double s = std::sqrt(tau + 1.0) + 1.0;
  return LogReal::from_log(std::lgamma(k + 1.0) - s * s -
                           (static_cast<double>(n) + 1.0) * std::numbers::ln2 -
                           k * std::log(std::numbers::pi) - static_cast<double>(n) * std::log(R) -
                           std::log1p(tau) - 0.5 * std::log(std::numbers::pi));
}

/// ln(-ln c) for 0 < c < 1.
inline double loglog_neg(const LogReal& c) {
  if (c.sign() <= 0 || c.log_magnitude() >= 0) throw std::domain_error("loglog_neg: need 0 < c < 1");
  return std::log(-c.log_magnitude());
}

struct DeterminantConstantEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  double signature_fraction = 0.0;
  std::uint64_t samples = 0;
  bool by_convention = false;
};

/// E[|det A| 1{A has i positive and j negative eigenvalues}] for A symmetric
/// Gaussian with density proportional to exp(-tr A^2): diagonal entries
/// have variance 1/2 and off-diagonal entries variance 1/4.
inline DeterminantConstantEstimate e_R_constant(std::size_t i, std::size_t j, std::uint64_t samples,
                                                std::uint64_t seed, unsigned threads = 1) {
  if (samples == 0) throw std::invalid_argument("e_R_constant: samples must be > 0");
  DeterminantConstantEstimate r;
  r.samples = samples;
  const std::size_t m = i + j;
  if (m == 0) {
    r.mean = 1.0;
    r.signature_fraction = 1.0;
    r.by_convention = true;
    return r;
  }
  struct Partial {
    double sum = 0.0, sumsq = 0.0;
    std::uint64_t hits = 0;
  };
  constexpr std::size_t block = 1u << 15;
  const std::size_t nblocks = (samples + block - 1) / block;
  auto parts = parallel_map<Partial>(nblocks, threads, [&](std::size_t b) {
    Partial p;
    Eigen::MatrixXd A(m, m);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    const std::uint64_t end = std::min<std::uint64_t>(samples, (b + 1) * block);
    for (std::uint64_t s = b * block; s < end; ++s) {
      const std::uint64_t ss = derive_seed(seed, s);
      std::uint64_t key = 0;
      for (std::size_t r0 = 0; r0 < m; ++r0) {
        A(r0, r0) = standard_normal(ss, key++) * std::numbers::sqrt2 / 2.0;
        for (std::size_t c0 = r0 + 1; c0 < m; ++c0) A(r0, c0) = A(c0, r0) = 0.5 * standard_normal(ss, key++);
      }
      std::size_t pos = 0, negc = 0;
      double det = 1.0;
      if (m == 1) {
        det = A(0, 0);
        (det > 0 ? pos : negc) = 1;
      } else {
        es.compute(A, Eigen::EigenvaluesOnly);
        for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
          const double ev = es.eigenvalues()[k];
          det *= ev;
          if (ev > 0) ++pos;
          else if (ev < 0) ++negc;
        }
      }
      if (pos == i && negc == j) {
        const double v = std::fabs(det);
        p.sum += v;
        p.sumsq += v * v;
        ++p.hits;
      }
    }
    return p;
  }, 1);
  Partial tot;
  for (const auto& p : parts) {
    tot.sum += p.sum;
    tot.sumsq += p.sumsq;
    tot.hits += p.hits;
  }
  const double N = static_cast<double>(samples);
  r.mean = tot.sum / N;
  const double var = std::max(0.0, tot.sumsq / N - r.mean * r.mean);
  r.standard_error = samples > 1 ? std::sqrt(var / (N - 1.0)) : 0.0;
  r.signature_fraction = static_cast<double>(tot.hits) / N;
  return r;
}

}  // namespace randhyp
