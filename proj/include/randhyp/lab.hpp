#pragma once

// Experiment harness: seeded Monte Carlo runs over the ensembles, with
// per-sample records, summaries that can be recomputed from the records,
// and bound comparisons carried in log space.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "constants.hpp"
#include "ensembles.hpp"
#include "log_real.hpp"
#include "pairs.hpp"
#include "parallel.hpp"
#include "roots.hpp"
#include "scalar_search.hpp"
#include "zeroset.hpp"

namespace randhyp {

inline void to_json(nlohmann::json& j, const LogReal& x) {
  j = {{"sign", x.sign()}, {"log", x.is_zero() ? nlohmann::json("-inf") : nlohmann::json(x.log_magnitude())}};
  if (x.representable()) j["value"] = x.to_double();
}

struct ExperimentConfig {
  std::string experiment;
  std::size_t n = 1;
  unsigned d = 1;
  std::vector<unsigned> d_list;
  unsigned D = 0;  // Fock truncation; 0 picks it by the tail rule
  double R = 1.0;
  std::string pair = "sphere";
  std::size_t index = 0;
  double radius_scale = 1.0;
  double volume = 2.0 * std::numbers::pi * std::numbers::pi;  // RP^2 volume convention
  std::uint64_t samples = 1000;
  std::uint64_t seed = 1;
  std::size_t resolution = 0;  // 0 picks a per-experiment default
  unsigned max_depth = 6;
  double lambda = 4.0;
  unsigned threads = 1;
  double max_excluded_fraction = 0.01;
  std::string output;
};

inline void to_json(nlohmann::json& j, const ExperimentConfig& c) {
  j = {{"experiment", c.experiment}, {"n", c.n},           {"d", c.d},
       {"d_list", c.d_list},         {"D", c.D},           {"R", c.R},
       {"pair", c.pair},             {"index", c.index},   {"radius_scale", c.radius_scale},
       {"volume", c.volume},         {"samples", c.samples}, {"seed", c.seed},
       {"resolution", c.resolution}, {"max_depth", c.max_depth}, {"lambda", c.lambda},
       {"threads", c.threads},       {"max_excluded_fraction", c.max_excluded_fraction},
       {"output", c.output}};
}

/// value `relation` bound, with relation "<=" or ">=".
struct BoundCheck {
  std::string name;
  LogReal value;
  LogReal bound;
  std::string relation = ">=";
  bool satisfied = false;

  void recompute() { satisfied = relation == ">=" ? value >= bound : value <= bound; }
};

inline BoundCheck make_check(std::string name, LogReal value, std::string relation, LogReal bound) {
  BoundCheck b{std::move(name), value, bound, std::move(relation), false};
  b.recompute();
  return b;
}

inline void to_json(nlohmann::json& j, const BoundCheck& b) {
  j = {{"name", b.name}, {"value", b.value}, {"relation", b.relation}, {"bound", b.bound}, {"satisfied", b.satisfied}};
}

/// Mean and standard error of one record column over the non-excluded rows,
/// optionally restricted to rows whose `group_column` equals `group_value`.
struct Statistic {
  std::string name;
  std::size_t column = 0;
  std::optional<std::size_t> group_column;
  double group_value = 0.0;
  MonteCarloEstimate estimate;
};

inline void to_json(nlohmann::json& j, const Statistic& s) {
  j = {{"name", s.name}, {"mean", s.estimate.mean}, {"standard_error", s.estimate.standard_error},
       {"samples", s.estimate.samples}};
}

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<std::string> columns;  // the last column is the exclusion flag
  std::vector<std::vector<double>> records;
  std::vector<Statistic> summary;
  std::vector<BoundCheck> bounds;
  std::size_t excluded = 0;
  nlohmann::json details = nlohmann::json::object();
  std::vector<std::string> notes;
  double elapsed_seconds = 0.0;

  bool bounds_satisfied() const {
    return std::all_of(bounds.begin(), bounds.end(), [](const BoundCheck& b) { return b.satisfied; });
  }
  bool excessive_exclusions() const {
    return !records.empty() &&
           static_cast<double>(excluded) > config.max_excluded_fraction * static_cast<double>(records.size());
  }
  const Statistic& statistic(const std::string& name) const {
    for (const auto& s : summary)
      if (s.name == name) return s;
    throw std::out_of_range("no statistic " + name);
  }

  void recompute_summary() {
    const std::size_t flag = columns.size() - 1;
    excluded = 0;
    for (const auto& r : records) excluded += r[flag] != 0.0 ? 1 : 0;
    for (auto& s : summary) {
      std::vector<double> v;
      for (const auto& r : records) {
        if (r[flag] != 0.0) continue;
        if (s.group_column && r[*s.group_column] != s.group_value) continue;
        v.push_back(r[s.column]);
      }
      s.estimate = summarize(v);
    }
  }
  void recompute_bounds() {
    for (auto& b : bounds) b.recompute();
  }

  /// 0 on success, 2 if a bound comparison failed, 3 on too many excluded
  /// samples.
  int exit_code() const {
    if (excessive_exclusions()) return 3;
    if (!bounds_satisfied()) return 2;
    return 0;
  }
};

inline void to_json(nlohmann::json& j, const ExperimentReport& r) {
  j = {{"config", r.config},       {"columns", r.columns},   {"records", r.records},
       {"summary", r.summary},     {"bounds", r.bounds},     {"excluded", r.excluded},
       {"excessive_exclusions", r.excessive_exclusions()}, {"details", r.details},
       {"notes", r.notes},         {"elapsed_seconds", r.elapsed_seconds}};
}

/// The report as JSON without wall-clock time and worker count; equal
/// fingerprints mean identical results.
inline std::string report_fingerprint(const ExperimentReport& r) {
  nlohmann::json j = r;
  j.erase("elapsed_seconds");
  j["config"].erase("threads");
  return j.dump();
}

inline void write_csv(std::ostream& os, const ExperimentReport& r) {
  for (std::size_t c = 0; c < r.columns.size(); ++c) os << (c ? "," : "") << r.columns[c];
  os << "\n";
  os.precision(17);
  for (const auto& row : r.records) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << row[c];
    os << "\n";
  }
}

namespace detail {

class Stopwatch {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count(); }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

}  // namespace detail

/// Real roots on RP^1 of Kostlan binary forms of degree d, against sqrt(d).
inline ExperimentReport run_kostlan_roots(ExperimentConfig cfg) {
  if (cfg.d == 0) throw std::invalid_argument("kostlan-roots: d must be >= 1");
  cfg.experiment = "kostlan-roots";
  cfg.n = 1;
  detail::Stopwatch clock;
  ExperimentReport rep;
  rep.config = cfg;
  rep.columns = {"index", "roots", "excluded"};
  rep.records = parallel_map<std::vector<double>>(cfg.samples, cfg.threads, [&](std::size_t s) {
    const auto c = kostlan_binary_coefficients(cfg.d, derive_seed(cfg.seed, s));
    return std::vector<double>{static_cast<double>(s), static_cast<double>(projective_root_count(c)), 0.0};
  });
  rep.summary = {{"roots", 1, std::nullopt, 0.0, {}}};
  rep.recompute_summary();
  const auto& e = rep.statistic("roots").estimate;
  const double target = std::sqrt(static_cast<double>(cfg.d));
  rep.bounds.push_back(make_check("|mean - sqrt(d)| <= 3 standard errors",
                                  LogReal::from_double(std::fabs(e.mean - target)), "<=",
                                  LogReal::from_double(3.0 * e.standard_error)));
  rep.details["sqrt_d"] = target;
  rep.elapsed_seconds = clock.seconds();
  return rep;
}

/// Components in RP^2 of Kostlan curves of each degree in d_list.
inline ExperimentReport run_kostlan_curves(ExperimentConfig cfg) {
  if (cfg.d_list.empty()) cfg.d_list = {cfg.d};
  cfg.experiment = "kostlan-curves";
  cfg.n = 2;
  detail::Stopwatch clock;
  ExperimentReport rep;
  rep.config = cfg;
  rep.columns = {"index", "d", "resolution", "components", "components_over_d", "excluded"};
  const std::size_t per = cfg.samples;
  const ZeroSetOptions opt{cfg.lambda};
  rep.records = parallel_map<std::vector<double>>(per * cfg.d_list.size(), cfg.threads, [&](std::size_t t) {
    const unsigned d = cfg.d_list[t / per];
    const std::size_t s = t % per;
    const auto res = std::max<std::size_t>(cfg.resolution, static_cast<std::size_t>(std::ceil(8.0 * std::sqrt(d))));
    // the sample seed mixes in d so each degree has its own stream
    const auto p = sample_kostlan(2, d, derive_seed(derive_seed(cfg.seed, d), s));
    const auto r = sphere_components(p, res, cfg.max_depth, opt);
    const double b0 = r.projective_count ? static_cast<double>(*r.projective_count) : 0.0;
    return std::vector<double>{static_cast<double>(s), static_cast<double>(d), static_cast<double>(r.resolution), b0,
                               b0 / d, r.confident ? 0.0 : 1.0};
  }, 4);
  for (unsigned d : cfg.d_list) {
    rep.summary.push_back({"components@d=" + std::to_string(d), 3, 1, static_cast<double>(d), {}});
    rep.summary.push_back({"components_over_d@d=" + std::to_string(d), 4, 1, static_cast<double>(d), {}});
  }
  rep.recompute_summary();

  const LogReal c_lower = c_sigma_lower(sphere_pair(2));
  const LogReal bound = c_lower * LogReal::from_double(cfg.volume);
  std::vector<double> ratios;
  for (unsigned d : cfg.d_list) {
    const double m = rep.statistic("components_over_d@d=" + std::to_string(d)).estimate.mean;
    ratios.push_back(m);
    rep.bounds.push_back(make_check("E(b0)/d >= c_lower(sphere pair, n=2) * volume at d=" + std::to_string(d),
                                    LogReal::from_double(m), ">=", bound));
  }
  const double lo = *std::min_element(ratios.begin(), ratios.end());
  const double hi = *std::max_element(ratios.begin(), ratios.end());
  double mean = 0.0;
  for (double r : ratios) mean += r / static_cast<double>(ratios.size());
  rep.details["c_lower"] = c_lower;
  rep.details["volume"] = cfg.volume;
  rep.details["trend"] = {{"d", cfg.d_list}, {"components_over_d", ratios},
                          {"relative_spread", mean > 0 ? (hi - lo) / mean : 0.0}, {"exploratory", true}};
  rep.notes.push_back("volume is an input convention for the RP^2 volume, echoed in config");
  rep.notes.push_back("the trend of E(b0)/d is exploratory; no limit is claimed");
  rep.elapsed_seconds = clock.seconds();
  return rep;
}

namespace detail {

struct SupPair {
  double value_sq = 0.0;
  double gradient_sq = 0.0;
};

// sup over [-R, R] of f^2 and f'^2: grid maxima refined by golden section
// around the best grid points.
inline SupPair sup_on_interval(const FockField& f, double R, std::size_t resolution) {
  std::vector<double> xs(resolution + 1), v(resolution + 1), dv(resolution + 1), g;
  for (std::size_t k = 0; k <= resolution; ++k) {
    xs[k] = -R + 2.0 * R * static_cast<double>(k) / static_cast<double>(resolution);
    const double x[1] = {xs[k]};
    v[k] = f.value_and_gradient(x, g);
    dv[k] = g[0];
  }
  const double h = 2.0 * R / static_cast<double>(resolution);
  auto refine = [&](const std::vector<double>& w, auto&& eval) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < w.size(); ++k)
      if (w[k] * w[k] > w[best] * w[best]) best = k;
    double m = w[best] * w[best];
    const double lo = std::max(-R, xs[best] - h), hi = std::min(R, xs[best] + h);
    const auto r = golden_section_minimize([&](double x) { return -eval(x); }, lo, hi, 1e-12 * (1.0 + R));
    return std::max(m, -r.value);
  };
  SupPair s;
  s.value_sq = refine(v, [&](double x) {
    const double p[1] = {x};
    const double y = f(p);
    return y * y;
  });
  s.gradient_sq = refine(dv, [&](double x) {
    const double p[1] = {x};
    std::vector<double> gg;
    f.value_and_gradient(p, gg);
    return gg[0] * gg[0];
  });
  return s;
}

// sup over the disk of radius R of f^2 and |df|^2: grid maxima, then a
// 16x finer grid over the two cells around each maximizer.
inline SupPair sup_on_disk(const FockField& f, double R, std::size_t resolution) {
  auto grid_max = [&](double cx, double cy, double half, std::size_t m, SupPair& s, double& bx, double& by,
                      double& gx, double& gy) {
    std::vector<double> xs(m + 1), ys(m + 1);
    for (std::size_t k = 0; k <= m; ++k) {
      xs[k] = cx - half + 2.0 * half * static_cast<double>(k) / static_cast<double>(m);
      ys[k] = cy - half + 2.0 * half * static_cast<double>(k) / static_cast<double>(m);
    }
    Eigen::MatrixXd F, Fx, Fy;
    f.evaluate_grid(xs, ys, F, Fx, Fy);
    for (std::size_t i = 0; i <= m; ++i)
      for (std::size_t j = 0; j <= m; ++j) {
        if (xs[i] * xs[i] + ys[j] * ys[j] > R * R) continue;
        const auto ei = static_cast<Eigen::Index>(i), ej = static_cast<Eigen::Index>(j);
        const double v = F(ei, ej) * F(ei, ej);
        const double g = Fx(ei, ej) * Fx(ei, ej) + Fy(ei, ej) * Fy(ei, ej);
        if (v > s.value_sq) {
          s.value_sq = v;
          bx = xs[i];
          by = ys[j];
        }
        if (g > s.gradient_sq) {
          s.gradient_sq = g;
          gx = xs[i];
          gy = ys[j];
        }
      }
  };
  SupPair s;
  double bx = 0, by = 0, gx = 0, gy = 0;
  grid_max(0.0, 0.0, R, resolution, s, bx, by, gx, gy);
  const double h = 2.0 * R / static_cast<double>(resolution);
  double tx, ty;
  grid_max(bx, by, h, 32, s, tx, ty, tx, ty);
  grid_max(gx, gy, h, 32, s, tx, ty, tx, ty);
  return s;
}

}  // namespace detail

/// E sup_{B(0,R)} f^2 and E sup |df|^2 for the truncated Fock field (n = 1
/// or 2), against rho_R / 2 and pi n rho_R / 2.
inline ExperimentReport run_sup_norm(ExperimentConfig cfg) {
  cfg.experiment = "sup-norm";
  if (cfg.n != 1 && cfg.n != 2) throw std::invalid_argument("sup-norm supports n = 1 and n = 2");
  check_radius(cfg.R, cfg.n);
  if (cfg.D == 0) cfg.D = fock_truncation_for_radius(cfg.R);
  if (cfg.resolution == 0) cfg.resolution = cfg.n == 1 ? 512 : 256;
  detail::Stopwatch clock;
  ExperimentReport rep;
  rep.config = cfg;
  rep.columns = {"index", "sup_value_sq", "sup_gradient_sq", "excluded"};
  rep.records = parallel_map<std::vector<double>>(cfg.samples, cfg.threads, [&](std::size_t s) {
    const auto f = sample_fock(cfg.n, cfg.D, derive_seed(cfg.seed, s));
    const auto sp = cfg.n == 1 ? detail::sup_on_interval(f, cfg.R, cfg.resolution)
                               : detail::sup_on_disk(f, cfg.R, cfg.resolution);
    return std::vector<double>{static_cast<double>(s), sp.value_sq, sp.gradient_sq, 0.0};
  });
  rep.summary = {{"sup_value_sq", 1, std::nullopt, 0.0, {}}, {"sup_gradient_sq", 2, std::nullopt, 0.0, {}}};
  rep.recompute_summary();
  const auto rho = rho_R(cfg.R, cfg.n);
  const LogReal half_rho = LogReal::from_double(0.5) * rho.value;
  rep.bounds.push_back(make_check("E sup f^2 <= rho_R / 2",
                                  LogReal::from_double(rep.statistic("sup_value_sq").estimate.mean), "<=", half_rho));
  rep.bounds.push_back(make_check("E sup |df|^2 <= pi n rho_R / 2",
                                  LogReal::from_double(rep.statistic("sup_gradient_sq").estimate.mean), "<=",
                                  half_rho * LogReal::from_double(std::numbers::pi * static_cast<double>(cfg.n))));
  rep.details["rho_R"] = rho.value;
  rep.details["rho_R_argument"] = rho.argument;
  rep.details["D"] = cfg.D;
  rep.notes.push_back("flat model with unit density; the ball B(x, R/sqrt(d)) is rescaled to B(0, R)");
  rep.elapsed_seconds = clock.seconds();
  return rep;
}

struct WilsonInterval {
  double lower = 0.0;
  double upper = 1.0;
};

inline WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 1.959963984540054) {
  if (trials == 0) return {};
  const double n = static_cast<double>(trials), p = static_cast<double>(successes) / n;
  const double den = 1.0 + z * z / n;
  const double center = (p + z * z / (2 * n)) / den;
  const double half = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / den;
  // the endpoints at 0 and n successes are exact, not rounded
  return {successes == 0 ? 0.0 : std::max(0.0, center - half), successes == trials ? 1.0 : std::min(1.0, center + half)};
}

inline RegularPair pair_from_config(const ExperimentConfig& cfg) {
  if (cfg.pair == "sphere") return sphere_pair(cfg.n);
  if (cfg.pair == "product") return product_pair(cfg.n, cfg.index);
  throw std::invalid_argument("unknown pair " + cfg.pair);
}

/// Probability that a Fock sample (n = 2) has a compact zero-set component
/// inside B(0, radius_scale * R_pair), against m_tau of the pair.
inline ExperimentReport run_local_presence(ExperimentConfig cfg) {
  cfg.experiment = "local-presence";
  cfg.n = 2;
  const RegularPair pair = pair_from_config(cfg);
  const double radius = cfg.radius_scale * pair.R;
  if (!(radius > 0)) throw std::invalid_argument("local-presence: radius must be > 0");
  cfg.R = radius;
  if (cfg.D == 0) cfg.D = fock_truncation_for_radius(radius);
  if (cfg.resolution == 0) cfg.resolution = 128;
  detail::Stopwatch clock;
  ExperimentReport rep;
  rep.config = cfg;
  rep.columns = {"index", "loop_present", "components", "excluded"};
  const ZeroSetOptions opt{cfg.lambda};
  const std::vector<double> center{0.0, 0.0};
  rep.records = parallel_map<std::vector<double>>(cfg.samples, cfg.threads, [&](std::size_t s) {
    const auto f = sample_fock(2, cfg.D, derive_seed(cfg.seed, s));
    const auto r = compact_component_in_ball(f, center, radius, cfg.resolution, cfg.max_depth, opt);
    return std::vector<double>{static_cast<double>(s), r.found ? 1.0 : 0.0, static_cast<double>(r.report.count),
                               r.report.confident ? 0.0 : 1.0};
  }, 16);
  rep.summary = {{"loop_present", 1, std::nullopt, 0.0, {}}};
  rep.recompute_summary();
  const auto& e = rep.statistic("loop_present").estimate;
  const auto hits = static_cast<std::uint64_t>(std::llround(e.mean * static_cast<double>(e.samples)));
  const auto w = wilson_interval(hits, e.samples);
  const LogReal tau = tau_pair(pair);
  const LogReal m = m_tau(tau.to_double()).value;
  rep.bounds.push_back(make_check("Wilson lower bound > 0", LogReal::from_double(w.lower), ">=",
                                  LogReal::from_double(std::nextafter(0.0, 1.0))));
  rep.bounds.push_back(make_check("probability >= m_tau(tau_pair)", LogReal::from_double(e.mean), ">=", m));
  rep.details["radius"] = radius;
  rep.details["D"] = cfg.D;
  rep.details["wilson"] = {{"lower", w.lower}, {"upper", w.upper}, {"successes", hits}, {"trials", e.samples}};
  rep.details["tau"] = tau;
  rep.details["m_tau"] = m;
  rep.notes.push_back("event: a zero-set component of the Fock sample inside the ball that meets no boundary cell");
  rep.elapsed_seconds = clock.seconds();
  return rep;
}

struct PackingBound {
  std::uint64_t count = 0;
  double ratio = 0.0;  // volume / (2^n Vol B(R / sqrt d))
};

/// ceil(volume / (2^n Vol B(R / sqrt d))); a ratio within 1e-9 of an integer
/// is rounded to it first.
inline PackingBound packing_count(std::size_t n, double R, std::uint64_t d, double volume) {
  if (!(volume > 0)) throw std::invalid_argument("packing_count: volume must be > 0");
  if (d == 0) throw std::invalid_argument("packing_count: d must be >= 1");
  check_radius(R, n);
  const double r = R / std::sqrt(static_cast<double>(d));
  PackingBound p;
  p.ratio = std::exp(std::log(volume) - static_cast<double>(n) * std::numbers::ln2 - log_ball_volume(n, r));
  const double near = std::round(p.ratio);
  const double x = std::fabs(p.ratio - near) <= 1e-9 * std::max(1.0, near) ? near : std::ceil(p.ratio);
  p.count = static_cast<std::uint64_t>(x);
  return p;
}

inline std::vector<unsigned> sphere_betti(std::size_t m) {
  std::vector<unsigned> v(m + 1, 0);
  if (m == 0) v[0] = 2;
  else v[0] = v[m] = 1;
  return v;
}

/// Betti numbers of S^a x S^b.
inline std::vector<unsigned> sphere_product_betti(std::size_t a, std::size_t b) {
  const auto x = sphere_betti(a), y = sphere_betti(b);
  std::vector<unsigned> out(a + b + 1, 0);
  for (std::size_t p = 0; p <= a; ++p)
    for (std::size_t q = 0; q <= b; ++q) out[p + q] += x[p] * y[q];
  return out;
}

/// Sum over the catalog {S^{n-1}} and {S^j x S^{n-1-j}, j <= (n-1)/2, n >= 2}
/// of c_lower(Sigma) b_i(Sigma).
inline ExperimentReport betti_lower_bound_report(std::size_t n, std::size_t i) {
  if (n == 0 || i >= n) throw std::invalid_argument("betti-bound: need 0 <= i <= n-1");
  detail::Stopwatch clock;
  ExperimentReport rep;
  rep.config.experiment = "betti-bound";
  rep.config.n = n;
  rep.config.index = i;
  rep.config.samples = 0;
  rep.columns = {"excluded"};
  struct Entry {
    std::string name;
    RegularPair pair;
    std::vector<unsigned> betti;
  };
  std::vector<Entry> catalog;
  catalog.push_back({"S^" + std::to_string(n - 1), sphere_pair(n), sphere_betti(n - 1)});
  if (n >= 2)
    for (std::size_t j = 0; 2 * j <= n - 1; ++j)
      catalog.push_back({"S^" + std::to_string(j) + " x S^" + std::to_string(n - 1 - j), product_pair(n, j),
                         sphere_product_betti(j, n - 1 - j)});

  LogReal aggregate = LogReal::zero();
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& e : catalog) {
    const LogReal c = c_sigma_lower(e.pair);
    const unsigned b = i < e.betti.size() ? e.betti[i] : 0;
    aggregate = aggregate + c * LogReal::from_double(b);
    terms.push_back({{"sigma", e.name}, {"betti", e.betti}, {"b_i", b}, {"c_lower", c}, {"loglog_c", loglog_neg(c)}});
  }
  const LogReal single = c_sigma_lower(product_pair(n, i));
  const double big = 70.0 * static_cast<double>(n);
  const LogReal closed = LogReal::from_log(big < 709.0 ? -2.0 * std::exp(big) : -INFINITY);
  rep.bounds.push_back(make_check("aggregate >= c_lower(S^i x S^{n-1-i} pair)", aggregate, ">=", single));
  rep.bounds.push_back(make_check("c_lower(S^i x S^{n-1-i} pair) >= exp(-2 e^{70 n})", single, ">=", closed));
  rep.details = {{"terms", terms}, {"aggregate", aggregate}, {"single_term", single}, {"closed_form", closed}};
  rep.notes.push_back("the volume factor of the manifold multiplies every term and is not included");
  rep.elapsed_seconds = clock.seconds();
  return rep;
}

/// Constants of the built-in pairs for n = 1..n_max, with the chain checks
/// ln tau <= 43 n (sphere) and <= 70 n (products).
inline ExperimentReport constants_report(std::size_t n_max) {
  if (n_max == 0) throw std::invalid_argument("constants-report: n_max must be >= 1");
  detail::Stopwatch clock;
  ExperimentReport rep;
  rep.config.experiment = "constants-report";
  rep.config.n = n_max;
  rep.config.samples = 0;
  rep.columns = {"excluded"};
  nlohmann::json pairs = nlohmann::json::array();
  auto add = [&](const RegularPair& p, double slope) {
    const auto inf = transversality_infimum(p);
    const auto rho = rho_R(p.R, p.n);
    const LogReal tau = tau_pair(p);
    const auto m = m_tau(tau.to_double());
    const LogReal c = c_sigma_lower(p);
    const double nn = static_cast<double>(p.n);
    const LogReal tau_cap = LogReal::from_log(slope * nn);
    const LogReal c_floor = LogReal::from_log(-2.0 * std::exp(slope * nn));
    const std::string tag = p.name + (p.index ? "(" + std::to_string(*p.index) + ")" : "") + " n=" + std::to_string(p.n);
    const std::string k = std::to_string(static_cast<int>(slope));
    rep.bounds.push_back(make_check("tau <= e^{" + k + " n}, " + tag, tau, "<=", tau_cap));
    rep.bounds.push_back(make_check("c_lower >= exp(-2 e^{" + k + " n}), " + tag, c, ">=", c_floor));
    nlohmann::json j = {{"pair", p.name},
                        {"n", p.n},
                        {"R", p.R},
                        {"log_rho", rho.value.log_magnitude()},
                        {"log_tau", tau.log_magnitude()},
                        {"m_tau_arg", m.argument},
                        {"log_m_tau", m.value.log_magnitude()},
                        {"loglog_neg_c", loglog_neg(c)},
                        {"paper_bound_ok", rep.bounds[rep.bounds.size() - 2].satisfied && rep.bounds.back().satisfied},
                        {"fock_norm_sq", fock_norm_sq(p.polynomial)},
                        {"family_infimum", inf.value},
                        {"family_delta", inf.delta},
                        {"family_epsilon", inf.epsilon},
                        {"infimum_at_open_endpoint", inf.at_open_endpoint}};
    if (p.index) j["i"] = *p.index;
    pairs.push_back(j);
  };
  for (std::size_t n = 1; n <= n_max; ++n) {
    add(sphere_pair(n), 43.0);
    for (std::size_t i = 0; i < n; ++i) add(product_pair(n, i), 70.0);
  }
  rep.details["pairs"] = pairs;
  rep.elapsed_seconds = clock.seconds();
  return rep;
}

}  // namespace randhyp
