#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "randhyp/constants.hpp"

using namespace randhyp;
using std::numbers::pi;

namespace {

// Composite Simpson for int_a^b e^{-t^2} dt.
double gauss_integral(double a, double b, int n = 20000) {
  const double h = (b - a) / n;
  double s = std::exp(-a * a) + std::exp(-b * b);
  for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * std::exp(-(a + k * h) * (a + k * h));
  return s * h / 3.0;
}

double chain_floor_log(double tau) {
  const double s = std::sqrt(tau + 1.0) + 1.0;
  return -0.5 * std::log(pi) - std::log(tau + 1.0) - s * s;
}

struct SizeTwoOracle {
  double plus_minus = 0.0, plus_plus = 0.0, minus_minus = 0.0;
};

// E[|det A| 1{signature}] for 2x2 symmetric A = [[a, b], [b, c]] with
// density exp(-(a^2 + c^2 + 2 b^2)) / (pi sqrt(pi/2)), midpoint rule on a
// 200^3 grid over [-5, 5]^3.
SizeTwoOracle size_two_quadrature() {
  const int N = 200;
  const double L = 5.0, h = 2 * L / N;
  const double Z = pi * std::sqrt(pi / 2.0);
  SizeTwoOracle o;
  for (int i = 0; i < N; ++i) {
    const double a = -L + (i + 0.5) * h;
    for (int j = 0; j < N; ++j) {
      const double b = -L + (j + 0.5) * h;
      for (int k = 0; k < N; ++k) {
        const double c = -L + (k + 0.5) * h;
        const double w = std::exp(-(a * a + c * c + 2 * b * b)) / Z * h * h * h;
        const double det = a * c - b * b;
        if (det < 0) o.plus_minus -= det * w;
        else if (a + c > 0) o.plus_plus += det * w;
        else o.minus_minus += det * w;
      }
    }
  }
  return o;
}

}  // namespace

TEST(LogRealAlgebra, RoundTripAndOrder) {
  for (double x : {-3.5, -1e-300, 1e-300, 2.0, 1e300})
    EXPECT_NEAR(LogReal::from_double(x).to_double(), x, 1e-12 * std::fabs(x));
  EXPECT_TRUE(LogReal::from_double(-2) < LogReal::zero());
  EXPECT_TRUE(LogReal::zero() < LogReal::from_log(-1e6));
  EXPECT_TRUE(LogReal::from_log(-1e6) < LogReal::from_log(5));
  EXPECT_TRUE(LogReal::from_log(5, -1) < LogReal::from_log(4, -1));
  EXPECT_FALSE(LogReal::from_log(800).representable());
}

TEST(LogRealAlgebra, MultiplicationIsAssociativeInLogDomain) {
  const LogReal a = LogReal::from_log(1e5), b = LogReal::from_log(-3.25, -1), c = LogReal::from_log(0.125);
  EXPECT_EQ(((a * b) * c).log_magnitude(), (a * (b * c)).log_magnitude());
  EXPECT_EQ(((a * b) * c).sign(), -1);
}

TEST(LogRealAlgebra, AdditionMatchesDoubles) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-50, 50);
  for (int k = 0; k < 200; ++k) {
    const double x = u(rng), y = u(rng);
    const double s = (LogReal::from_double(x) + LogReal::from_double(y)).to_double();
    EXPECT_NEAR(s, x + y, 1e-12 * (std::fabs(x) + std::fabs(y)));
  }
  EXPECT_TRUE((LogReal::from_double(3) - LogReal::from_double(3)).is_zero());
}

TEST(LogErfc, AsymptoticBranchMatchesDirect) {
  for (double a = 8.0; a < 26.0; a += 0.37) {
    EXPECT_NEAR(log_erfc(a), std::log(std::erfc(a)), 1e-13 * std::fabs(std::log(std::erfc(a)))) << a;
  }
  EXPECT_NEAR(log_erfc(8.0 - 1e-12), log_erfc(8.0), 1e-9);
}

TEST(FTau, VanishesAtLeftEndpoint) {
  for (double tau : {0.5, 1.0, 4.0}) EXPECT_EQ(f_tau(tau, std::sqrt(tau)), 0.0);
}

TEST(FTau, MatchesQuadrature) {
  const double oracle = 0.5 / std::sqrt(pi) * gauss_integral(std::sqrt(2.0), 12.0);
  EXPECT_NEAR(f_tau(1.0, std::sqrt(2.0)), oracle, 1e-13);
  EXPECT_NEAR(f_tau(1.0, std::sqrt(2.0)), 1.1375066e-2, 1e-9);
}

TEST(FTau, DecaysToZero) {
  EXPECT_LT(log_f_tau(1.0, 50.0).log_magnitude(), std::log(1e-100));
  EXPECT_GT(log_f_tau(1.0, 50.0).sign(), 0);
}

TEST(FTau, DomainErrors) {
  EXPECT_THROW(f_tau(1.0, 0.5), std::domain_error);
  EXPECT_THROW(f_tau(-1.0, 2.0), std::domain_error);
}

TEST(MTau, ExampleBounds) {
  EXPECT_GE(m_tau(1.0).value.to_double(), f_tau(1.0, std::sqrt(2.0)));
  for (double tau : {0.1, 1.0, 10.0, 100.0})
    EXPECT_GE(m_tau(tau).value.log_magnitude(), chain_floor_log(tau)) << tau;
}

TEST(MTau, HugeTau) {
  const auto r = m_tau(1e6);
  EXPECT_GE(r.argument, 1000.0);
  EXPECT_LE(r.argument, std::sqrt(1e6 + 1.0));
  EXPECT_TRUE(std::isfinite(r.value.log_magnitude()));
  EXPECT_LT(r.value.log_magnitude(), -1e6);
  EXPECT_GT(r.value.sign(), 0);
}

TEST(MTau, AgreesWithBruteForceMaximum) {
  for (double tau : {1e-3, 0.1, 1.0, 10.0, 50.0}) {
    double best = -1e300;
    for (int k = 1; k <= 200000; ++k) {
      const double a = std::sqrt(tau) + k * (std::sqrt(tau + 2.0) - std::sqrt(tau)) / 200000;
      best = std::max(best, f_tau(tau, a));
    }
    EXPECT_GE(m_tau(tau).value.to_double(), best * (1 - 1e-12)) << tau;
    EXPECT_NEAR(m_tau(tau).value.to_double(), best, 1e-7 * best) << tau;
  }
}

TEST(MTau, LogGridProperties) {
  for (int k = 0; k < 60; ++k) {
    const double tau = std::pow(10.0, -3.0 + 9.0 * k / 59.0);
    const auto r = m_tau(tau);
    EXPECT_GE(r.argument, std::sqrt(tau));
    EXPECT_LE(r.argument, std::sqrt(tau + 1.0));
    EXPECT_TRUE(r.bracket.contains(r.argument));
    const LogReal at_right = log_f_tau_offset(tau, 1.0);
    EXPECT_GE(r.value, at_right) << tau;
    EXPECT_GE(at_right.log_magnitude(), chain_floor_log(tau)) << tau;
  }
}

TEST(GR, Examples) {
  EXPECT_NEAR(g_R(1, 1, 1).log_magnitude(), std::log(4.0) + 4 * pi, 1e-12);
  EXPECT_GT(g_R(1, 1, 1e-8).log_magnitude(), 30.0);
  EXPECT_NEAR(g_R(1, 2, 1).log_magnitude(), 4 * std::log(2.0) + 4 * pi, 1e-12);
  EXPECT_THROW(g_R(1, 1, 0.0), std::domain_error);
}

TEST(RhoR, BoundedByValueAtR) {
  for (double R : {0.5, 1.0, 2.0, 5.0})
    for (std::size_t n = 1; n <= 3; ++n) {
      const double bound = static_cast<double>(n) * std::log(4.0) + 4 * pi * R * R;
      EXPECT_LE(rho_R(R, n).value.log_magnitude(), bound);
    }
  EXPECT_LE(rho_R(1, 1).value.to_double(), 4 * std::exp(4 * pi));
}

TEST(RhoR, IsInfimum) {
  std::mt19937_64 rng(9);
  std::lognormal_distribution<double> s(0.0, 2.0);
  for (int k = 0; k < 20; ++k) {
    const double v = s(rng);
    EXPECT_LE(rho_R(1.3, 2).value, g_R(1.3, 2, v));
  }
}

TEST(RhoR, SatisfiesStationarityEquation) {
  // d/ds ln g = 0  <=>  pi s (R + s)^2 = n R
  for (double R : {0.5, 1.0, 2.0, std::sqrt(5.0)})
    for (std::size_t n = 1; n <= 3; ++n) {
      const double s = rho_R(R, n).argument;
      EXPECT_NEAR(pi * s * (R + s) * (R + s), static_cast<double>(n) * R, 1e-6 * n * R);
    }
}

TEST(RhoR, ProductRadiusBound) {
  for (std::size_t n = 1; n <= 10; ++n) {
    const auto r = rho_R(std::sqrt(5.0), n);
    EXPECT_TRUE(std::isfinite(r.value.log_magnitude()));
    EXPECT_LE(r.value.log_magnitude(), static_cast<double>(n) * std::log(4.0) + 20 * pi);
  }
}

TEST(BallVolume, Examples) {
  EXPECT_DOUBLE_EQ(ball_volume(1, 1), 2.0);
  EXPECT_NEAR(ball_volume(2, 1), pi, 1e-14);
  EXPECT_NEAR(ball_volume(3, 2), 4.0 / 3.0 * pi * 8.0, 1e-12);
}

TEST(BallVolume, PowerBoundDominates) {
  for (std::size_t n = 1; n <= 12; ++n)
    for (double R : {0.3, 1.0, 2.2}) EXPECT_LE(ball_volume(n, R), ball_volume_power_bound(n, R) * (1 + 1e-14));
  EXPECT_NEAR(ball_volume(1, 3.0), ball_volume_power_bound(1, 3.0), 1e-14);
}

TEST(FamilyInfimum, SphereInfimumIsRightEndpointLimit) {
  for (std::size_t n = 1; n <= 6; ++n) {
    const auto inf = transversality_infimum(sphere_pair(n));
    EXPECT_TRUE(inf.at_open_endpoint);
    EXPECT_NEAR(inf.parameter, 1.0, 1e-9);
    EXPECT_NEAR(inf.value, 1.0 + pi * std::sqrt(static_cast<double>(n)) / 4.0, 1e-9);
  }
}

TEST(FamilyInfimum, RefiningTheScanNeverIncreasesTheValue) {
  const auto pair = sphere_pair(3);
  auto phi = [&](double t) {
    auto [d, e] = pair.family.at(t);
    return 1 / (d * d) + 3 * pi / (e * e);
  };
  double prev = 1e300;
  for (int pts : {3, 5, 9, 17, 33, 65}) {
    double best = 1e300;
    for (int k = 1; k < pts; ++k) best = std::min(best, phi(static_cast<double>(k) / (pts - 1)));
    EXPECT_LE(best, prev);
    prev = best;
  }
  EXPECT_LE(transversality_infimum(pair).value, prev + 1e-12);
}

TEST(TauPair, SphereChain) {
  for (std::size_t n = 1; n <= 6; ++n) {
    const auto pair = sphere_pair(n);
    const double lt = tau_pair(pair).log_magnitude();
    const double rn = std::sqrt(static_cast<double>(n));
    const double via_rho = rho_R(pair.R, n).value.log_magnitude() + std::log(10.0 * n * (1 + pi * rn / 4));
    EXPECT_LE(lt, via_rho) << n;
    EXPECT_LE(lt, 43.0 * n) << n;
  }
}

TEST(TauPair, ProductChain) {
  for (std::size_t n = 1; n <= 6; ++n)
    for (std::size_t i = 0; i < n; ++i) {
      const double lt = tau_pair(product_pair(n, i)).log_magnitude();
      const double mid = std::log(156.0 * n * n * n) + n * std::log(4.0) + 20 * pi;
      EXPECT_LE(lt, mid);
      EXPECT_LE(mid, 70.0 * n);
    }
}

TEST(CSigma, DominatesClosedFormBound) {
  for (std::size_t n = 1; n <= 4; ++n) {
    for (const auto& pair : {sphere_pair(n), product_pair(n, n - 1)}) {
      const double tau = tau_pair(pair).to_double();
      EXPECT_GE(c_sigma_lower(pair), c_sigma_closed_form_bound(n, pair.R, tau));
    }
  }
}

TEST(CSigma, DoubleExponentialScale) {
  for (std::size_t n = 1; n <= 6; ++n) {
    EXPECT_LE(loglog_neg(c_sigma_lower(sphere_pair(n))), 43.0 * n + std::log(2.0));
    for (std::size_t i = 0; i < n; ++i) EXPECT_LE(loglog_neg(c_sigma_lower(product_pair(n, i))), 70.0 * n + std::log(2.0));
  }
}

TEST(DeterminantConstant, SizeOneClosedForm) {
  const auto e = e_R_constant(1, 0, 200000, 77);
  EXPECT_NEAR(e.mean, 0.5 / std::sqrt(pi), 3 * e.standard_error);
  EXPECT_NEAR(e.signature_fraction, 0.5, 0.01);
}

TEST(DeterminantConstant, SignFlipSymmetry) {
  const auto a = e_R_constant(1, 0, 200000, 1), b = e_R_constant(0, 1, 200000, 2);
  EXPECT_NEAR(a.mean, b.mean, 3 * std::hypot(a.standard_error, b.standard_error));
}

TEST(DeterminantConstant, SizeTwoMatchesQuadrature) {
  const auto o = size_two_quadrature();
  const auto pm = e_R_constant(1, 1, 200000, 5);
  const auto pp = e_R_constant(2, 0, 200000, 6);
  const auto mm = e_R_constant(0, 2, 200000, 7);
  EXPECT_NEAR(pm.mean, o.plus_minus, 3 * pm.standard_error);
  EXPECT_NEAR(pp.mean, o.plus_plus, 3 * pp.standard_error);
  EXPECT_NEAR(mm.mean, o.minus_minus, 3 * mm.standard_error);
}

TEST(DeterminantConstant, EmptySizeConventionAndErrors) {
  const auto e = e_R_constant(0, 0, 10, 1);
  EXPECT_EQ(e.mean, 1.0);
  EXPECT_TRUE(e.by_convention);
  EXPECT_THROW(e_R_constant(1, 0, 0, 1), std::invalid_argument);
}

TEST(DeterminantConstant, WorkerCountIndependent) {
  const auto a = e_R_constant(1, 1, 100000, 42, 1), b = e_R_constant(1, 1, 100000, 42, 4);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.standard_error, b.standard_error);
}
