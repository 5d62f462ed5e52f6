// Acceptance run: one PASS/FAIL line per criterion, each timed against its
// budget. Exit status is the number of failed numbered criteria; the
// exploratory trend line is reported but not counted.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "randhyp/randhyp.hpp"

using namespace randhyp;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;
int exploratory_failures = 0;

void criterion(const std::string& id, const std::string& title, double budget_seconds,
               const std::function<Outcome()>& body, bool counted = true) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = secs < budget_seconds;
  const bool pass = o.pass && in_time;
  if (!pass) ++(counted ? failures : exploratory_failures);
  std::printf("%s criterion %-3s %-44s %8.2f s / %6.0f s  %s%s\n", pass ? "PASS" : "FAIL", id.c_str(), title.c_str(),
              secs, budget_seconds, o.detail.c_str(), in_time ? "" : "  [over budget]");
  std::fflush(stdout);
}

template <class... A>
std::string fmt(const char* f, A... a) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

double q_norm_closed_form(std::size_t n, std::size_t i) {
  const double k = static_cast<double>(i + 1);
  return 9.0 + 2.0 / (pi * pi) * static_cast<double>(n - i - 1) + 32.0 / (pi * pi) * k + 24.0 / std::pow(pi, 4) * k +
         16.0 / std::pow(pi, 4) * k * (k - 1.0) / 2.0;
}

struct SizeTwo {
  double plus_minus = 0, plus_plus = 0, minus_minus = 0;
};

// 2x2 symmetric [[a, b], [b, c]] with density exp(-(a^2 + c^2 + 2 b^2)) /
// (pi sqrt(pi / 2)), midpoint rule.
SizeTwo size_two_quadrature(int N = 300, double L = 5.5) {
  const double h = 2 * L / N, Z = pi * std::sqrt(pi / 2.0);
  SizeTwo o;
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

DeltaEpsilon product_point(std::size_t n, double shrink) {
  const double d = 1.0 / (2.0 * std::sqrt(static_cast<double>(n)));
  return {d, 2.0 * std::sqrt(1.0 - d) * (1.0 - shrink)};
}

}  // namespace

int main() {
  criterion("1", "Fock norms of the built-in polynomials", 1.0, [] {
    double worst = 0;
    for (std::size_t n = 1; n <= 10; ++n) {
      const double rn = std::sqrt(static_cast<double>(n));
      const double s = (rn + 1) * (rn + 1) + 2.0 * n / (pi * pi);
      worst = std::max(worst, std::fabs(fock_norm_sq(sphere_pair(n).polynomial) - s) / s);
      for (std::size_t i = 0; i < n; ++i) {
        const double q = q_norm_closed_form(n, i);
        worst = std::max(worst, std::fabs(fock_norm_sq(product_pair(n, i).polynomial) - q) / q);
      }
    }
    return Outcome{worst <= 1e-12, fmt("max relative error %.2e (tol 1e-12)", worst)};
  });

  criterion("2", "tau and c_lower chains, n <= 6", 1.0, [] {
    const auto rep = constants_report(6);
    bool ok = rep.bounds_satisfied();
    double slack = INFINITY;
    for (std::size_t n = 1; n <= 6; ++n) {
      const auto sp = sphere_pair(n);
      slack = std::min(slack, 43.0 * n - tau_pair(sp).log_magnitude());
      ok = ok && c_sigma_lower(sp) >= c_sigma_closed_form_bound(n, sp.R, tau_pair(sp).to_double());
      for (std::size_t i = 0; i < n; ++i) slack = std::min(slack, 70.0 * n - tau_pair(product_pair(n, i)).log_magnitude());
    }
    return Outcome{ok && slack >= 0,
                   fmt("%zu checks, min slack in ln tau %.2f", rep.bounds.size(), slack)};
  });

  criterion("3", "m_tau maximizer and lower chain", 1.0, [] {
    int bad = 0;
    for (int k = 0; k < 60; ++k) {
      const double tau = std::pow(10.0, -3.0 + 9.0 * k / 59.0);
      const auto r = m_tau(tau);
      const double s = std::sqrt(tau + 1.0) + 1.0;
      const double floor_log = -0.5 * std::log(pi) - std::log(tau + 1.0) - s * s;
      const LogReal at_right = log_f_tau_offset(tau, 1.0);
      if (r.argument < std::sqrt(tau) || r.argument > std::sqrt(tau + 1.0)) ++bad;
      if (!(r.value >= at_right) || at_right.log_magnitude() < floor_log) ++bad;
    }
    return Outcome{bad == 0, fmt("%d violations on 60 grid points", bad)};
  });

  criterion("4", "rho_R <= 4^n exp(4 pi R^2)", 1.0, [] {
    double slack = INFINITY;
    for (double R : {0.5, 1.0, 2.0, std::sqrt(5.0)})
      for (std::size_t n : {1u, 2u, 3u})
        slack = std::min(slack, n * std::log(4.0) + 4 * pi * R * R - rho_R(R, n).value.log_magnitude());
    return Outcome{slack >= 0, fmt("min log slack %.3f", slack)};
  });

  criterion("5", "Kostlan real roots, mean sqrt(d)", 30.0, [] {
    bool ok = true;
    std::string d;
    for (unsigned deg : {4u, 10u, 100u}) {
      ExperimentConfig c;
      c.d = deg;
      c.samples = 10000;
      c.seed = 2024 + deg;
      const auto rep = run_kostlan_roots(c);
      const auto& e = rep.statistic("roots").estimate;
      const double z = (e.mean - std::sqrt(double(deg))) / e.standard_error;
      ok = ok && std::fabs(z) <= 3.0;
      d += fmt("d=%u: %.4f (z=%+.2f) ", deg, e.mean, z);
    }
    return Outcome{ok, d};
  });

  criterion("6", "stability under admissible perturbations", 60.0, [] {
    struct Case {
      RegularPair pair;
      DeltaEpsilon t;
    };
    const std::vector<Case> cases{{sphere_pair(1), family_targets(sphere_pair(1), 1, 0.01).front()},
                                  {sphere_pair(2), family_targets(sphere_pair(2), 1, 0.01).front()},
                                  {product_pair(1, 0), product_point(1, 0.01)},
                                  {product_pair(2, 0), product_point(2, 0.01)},
                                  {product_pair(2, 1), product_point(2, 0.01)}};
    int changed = 0, total = 0;
    for (const auto& c : cases)
      for (int k = 0; k < 200; ++k) {
        const std::size_t res = c.pair.n == 1 ? 256 : 128;
        const auto g = random_admissible_perturbation(c.pair, c.t.delta, c.t.epsilon, 3, derive_seed(606, k), res);
        const auto r = stability_check(c.pair, c.t.delta, c.t.epsilon, g, res);
        changed += r.unchanged ? 0 : 1;
        ++total;
      }
    return Outcome{changed == 0, fmt("%d of %d perturbations changed the count", changed, total)};
  });

  criterion("7", "transversality certificates at resolution 512", 60.0, [] {
    int failed = 0, total = 0;
    std::string d;
    for (std::size_t n : {1u, 2u, 3u}) {
      const auto t0 = std::chrono::steady_clock::now();
      const auto sp = sphere_pair(n);
      for (const auto& w : verify_transversality_batch(sp, family_targets(sp, 50, 1e-3), 512)) {
        failed += w.verified ? 0 : 1;
        ++total;
      }
      for (std::size_t i = 0; i < n; ++i) {
        const auto t = product_point(n, 1e-3);
        failed += verify_transversality(product_pair(n, i), t.delta, t.epsilon, 512).verified ? 0 : 1;
        ++total;
      }
      d += fmt("n=%zu %.1fs ", n, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return Outcome{failed == 0, fmt("%d of %d not verified; ", failed, total) + d};
  });

  criterion("8", "rescaled barrier across degrees", 30.0, [] {
    const auto sp = sphere_pair(2), pp = product_pair(2, 0);
    const auto st = family_targets(sp, 1, 1e-3).front(), pt = product_point(2, 1e-3);
    int failed = 0;
    for (std::size_t d : {1u, 4u, 16u, 64u, 256u}) {
      failed += barrier_rescale_check(sp, d, st.delta, st.epsilon, 128).holds ? 0 : 1;
      failed += barrier_rescale_check(pp, d, pt.delta, pt.epsilon, 128).holds ? 0 : 1;
    }
    return Outcome{failed == 0, fmt("%d of 10 checks failed", failed)};
  });

  criterion("9", "sup-norm bounds for the Fock field", 120.0, [] {
    ExperimentConfig c;
    c.n = 1;
    c.R = 1.0;
    c.samples = 1000;
    c.seed = 9;
    const auto rep = run_sup_norm(c);
    return Outcome{rep.exit_code() == 0,
                   fmt("E sup f^2 = %.2f <= %.4g, E sup f'^2 = %.2f <= %.4g (D=%u)",
                       rep.statistic("sup_value_sq").estimate.mean, rep.bounds[0].bound.to_double(),
                       rep.statistic("sup_gradient_sq").estimate.mean, rep.bounds[1].bound.to_double(), rep.config.D)};
  });

  criterion("10", "local loop presence probability", 600.0, [] {
    ExperimentConfig c;
    c.pair = "sphere";
    c.samples = 10000;
    c.seed = 10;
    const auto rep = run_local_presence(c);
    const auto& w = rep.details.at("wilson");
    return Outcome{rep.exit_code() == 0,
                   fmt("p = %.4f, Wilson [%.4f, %.4f], excluded %zu, ln m_tau = %.4g",
                       rep.statistic("loop_present").estimate.mean, w.at("lower").get<double>(),
                       w.at("upper").get<double>(), rep.excluded, rep.bounds[1].bound.log_magnitude())};
  });

  criterion("11", "determinant constants", 60.0, [] {
    const auto one = e_R_constant(1, 0, 1000000, 11);
    const double z1 = (one.mean - 0.5 / std::sqrt(pi)) / one.standard_error;
    const auto o = size_two_quadrature();
    const auto pm = e_R_constant(1, 1, 1000000, 12), pp = e_R_constant(2, 0, 1000000, 13),
               mm = e_R_constant(0, 2, 1000000, 14);
    const double zpm = (pm.mean - o.plus_minus) / pm.standard_error;
    const double zpp = (pp.mean - o.plus_plus) / pp.standard_error;
    const double zmm = (mm.mean - o.minus_minus) / mm.standard_error;
    const bool ok = std::fabs(z1) <= 3 && std::fabs(zpm) <= 3 && std::fabs(zpp) <= 3 && std::fabs(zmm) <= 3;
    return Outcome{ok, fmt("size 1: %.5f (z=%+.2f); size 2: (+-) z=%+.2f, (++) z=%+.2f, (--) z=%+.2f", one.mean, z1, zpm,
                           zpp, zmm)};
  });

  criterion("12", "bit-identical reruns at 1, 4, 8 workers", 600.0, [] {
    std::vector<std::function<std::string(unsigned)>> runs{
        [](unsigned t) {
          ExperimentConfig c;
          c.d = 100;
          c.samples = 2000;
          c.threads = t;
          return report_fingerprint(run_kostlan_roots(c));
        },
        [](unsigned t) {
          ExperimentConfig c;
          c.d_list = {8, 12};
          c.samples = 40;
          c.threads = t;
          return report_fingerprint(run_kostlan_curves(c));
        },
        [](unsigned t) {
          ExperimentConfig c;
          c.n = 2;
          c.samples = 100;
          c.threads = t;
          return report_fingerprint(run_sup_norm(c));
        },
        [](unsigned t) {
          ExperimentConfig c;
          c.samples = 300;
          c.threads = t;
          return report_fingerprint(run_local_presence(c));
        },
        [](unsigned t) {
          const auto e = e_R_constant(1, 1, 200000, 3, t);
          return fmt("%a %a %a", e.mean, e.standard_error, e.signature_fraction);
        },
        [](unsigned t) {
          TransversalityOptions opt;
          opt.threads = t;
          const auto sp = sphere_pair(2);
          std::string s;
          for (const auto& w : verify_transversality_batch(sp, family_targets(sp, 10, 1e-3), 128, opt))
            s += nlohmann::json(w).dump();
          return s;
        }};
    int differing = 0;
    for (const auto& run : runs) {
      const std::string ref = run(1);
      if (run(4) != ref || run(8) != ref) ++differing;
    }
    return Outcome{differing == 0, fmt("%d of %zu experiments differ across worker counts", differing, runs.size())};
  });

  criterion("T", "Kostlan curve components per degree trend", 1800.0, [] {
    ExperimentConfig c;
    c.d_list = {8, 12, 16};
    c.samples = 500;
    c.seed = 8;
    const auto rep = run_kostlan_curves(c);
    const double spread = rep.details.at("trend").at("relative_spread").get<double>();
    std::string d;
    for (unsigned deg : c.d_list)
      d += fmt("d=%u: %.4f ", deg, rep.statistic("components_over_d@d=" + std::to_string(deg)).estimate.mean);
    return Outcome{spread < 0.25 && rep.exit_code() == 0,
                   d + fmt("spread %.3f (< 0.25), excluded %zu", spread, rep.excluded)};
  }, false);

  std::printf("%d numbered criteria failed; exploratory trend %s\n", failures,
              exploratory_failures ? "FAILED" : "passed");
  return failures;
}
