// randhyp: command-line front end for the experiment harness.
//
//   randhyp constants-report --n-max 6
//   randhyp verify-pair --pair sphere --n 2
//   randhyp count-components --kostlan 8 --seed 3
//   randhyp kostlan-roots --d 10 --samples 10000 --seed 42
//   randhyp kostlan-curves --d-list 8,12,16 --samples 500
//   randhyp sup-norm --R 1 --n 1 --samples 2000
//   randhyp local-presence --pair sphere --samples 10000
//   randhyp betti-bound --n 2 --i 1
//
// Exit status: 0 success, 1 usage or input error, 2 a bound comparison
// failed, 3 too many samples excluded as ambiguous.

#include <fstream>
#include <iostream>
#include <string>

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif

#include "randhyp/randhyp.hpp"

using namespace randhyp;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  std::uint64_t samples = 1000;
  unsigned threads = 1;
  std::string out;
  std::string csv;
};

void emit_json(const nlohmann::json& j, const Globals& g) {
  if (g.out.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream f(g.out);
  if (!f) throw std::runtime_error("cannot write " + g.out);
  f << j.dump(2) << "\n";
}

int emit(ExperimentReport& rep, const Globals& g) {
  emit_json(rep, g);
  if (!g.csv.empty()) {
    std::ofstream f(g.csv);
    if (!f) throw std::runtime_error("cannot write " + g.csv);
    write_csv(f, rep);
  }
  for (const auto& s : rep.summary)
    std::cerr << s.name << ": " << s.estimate.mean << " +- " << s.estimate.standard_error << " (" << s.estimate.samples
              << " samples)\n";
  for (const auto& b : rep.bounds)
    std::cerr << (b.satisfied ? "[ok]   " : "[FAIL] ") << b.name << ": " << b.value << " " << b.relation << " "
              << b.bound << "\n";
  if (rep.excluded) std::cerr << "excluded as ambiguous: " << rep.excluded << "\n";
  if (rep.excessive_exclusions()) std::cerr << "too many ambiguous samples\n";
  return rep.exit_code();
}

ExperimentConfig base_config(const Globals& g) {
  ExperimentConfig c;
  c.seed = g.seed;
  c.samples = g.samples;
  c.threads = g.threads;
  c.output = g.out;
  return c;
}

std::size_t default_verify_resolution(std::size_t n) { return n == 1 ? 256 : n == 2 ? 64 : 16; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random hypersurface experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "master seed");
  app.add_option("--samples", g.samples, "Monte Carlo samples");
  app.add_option("--threads", g.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "write the JSON report here instead of stdout");
  app.add_option("--csv", g.csv, "write per-sample records as CSV");

  std::size_t n_max = 6;
  auto* constants = app.add_subcommand("constants-report", "constants of the built-in regular pairs");
  constants->add_option("--n-max", n_max)->check(CLI::PositiveNumber);

  std::string pair_name = "sphere";
  std::size_t n = 1, index = 0, resolution = 0;
  double delta = 0, epsilon = 0;
  auto* verify = app.add_subcommand("verify-pair", "certify transversality of a regular pair");
  verify->add_option("--pair", pair_name)->check(CLI::IsMember({"sphere", "product"}));
  verify->add_option("--n", n)->check(CLI::PositiveNumber);
  verify->add_option("--i,--index", index, "i for the product pair");
  verify->add_option("--delta", delta, "default: family midpoint");
  verify->add_option("--epsilon", epsilon, "default: family midpoint, shrunk by 1%");
  verify->add_option("--resolution", resolution);

  std::string input;
  unsigned kostlan_d = 0;
  unsigned max_depth = 6;
  auto* count = app.add_subcommand("count-components", "count zero-set components");
  std::vector<double> ball_center, box_lo, box_hi;
  double ball_radius = 0;
  bool on_sphere = false;
  count->add_option("--input", input, "polynomial JSON, optionally wrapped as {polynomial, domain}");
  count->add_option("--ball-center", ball_center)->delimiter(',');
  count->add_option("--ball-radius", ball_radius);
  count->add_option("--box-lo", box_lo)->delimiter(',');
  count->add_option("--box-hi", box_hi)->delimiter(',');
  count->add_flag("--sphere", on_sphere, "homogeneous input in 3 variables, counted on S^2 and RP^2");
  count->add_option("--kostlan", kostlan_d, "sample a Kostlan curve of this degree and count in RP^2");
  count->add_option("--pair", pair_name, "count the zero set of a built-in pair")->check(CLI::IsMember({"sphere", "product"}));
  count->add_option("--n", n);
  count->add_option("--i,--index", index);
  count->add_option("--resolution", resolution);
  count->add_option("--max-depth", max_depth);

  unsigned d = 10;
  auto* roots = app.add_subcommand("kostlan-roots", "real roots of Kostlan binary forms");
  roots->add_option("--d", d)->check(CLI::PositiveNumber);

  std::vector<unsigned> d_list{8, 12, 16};
  double volume = 2.0 * std::numbers::pi * std::numbers::pi;
  auto* curves = app.add_subcommand("kostlan-curves", "components of Kostlan curves in RP^2");
  curves->add_option("--d-list", d_list)->delimiter(',');
  curves->add_option("--volume", volume, "RP^2 volume convention");
  curves->add_option("--resolution", resolution, "minimum cells per cube-face edge");
  curves->add_option("--max-depth", max_depth);

  double R = 1.0;
  unsigned D = 0;
  auto* sup = app.add_subcommand("sup-norm", "sup norms of the truncated Fock field");
  sup->add_option("--R", R);
  sup->add_option("--n", n)->check(CLI::Range(1, 2));
  sup->add_option("--D", D, "truncation degree (default: tail rule)");
  sup->add_option("--resolution", resolution);

  double radius_scale = 1.0;
  auto* local = app.add_subcommand("local-presence", "probability of a compact component in a ball");
  local->add_option("--pair", pair_name)->check(CLI::IsMember({"sphere", "product"}));
  local->add_option("--i,--index", index);
  local->add_option("--radius-scale", radius_scale);
  local->add_option("--D", D);
  local->add_option("--resolution", resolution);
  local->add_option("--max-depth", max_depth);

  std::size_t betti_i = 0;
  auto* betti = app.add_subcommand("betti-bound", "lower bound for the expected Betti number");
  betti->add_option("--n", n)->check(CLI::PositiveNumber);
  betti->add_option("--i", betti_i);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*constants) {
      auto rep = constants_report(n_max);
      return emit(rep, g);
    }
    if (*verify) {
      ExperimentConfig c = base_config(g);
      c.pair = pair_name;
      c.n = n;
      c.index = index;
      const RegularPair pair = pair_from_config(c);
      if (delta <= 0 || epsilon <= 0) {
        const auto t = family_targets(pair, 1, 0.01).front();
        if (delta <= 0) delta = t.delta;
        if (epsilon <= 0) epsilon = t.epsilon;
      }
      if (resolution == 0) resolution = default_verify_resolution(n);
      TransversalityOptions opt;
      opt.threads = g.threads;
      const auto w = verify_transversality(pair, delta, epsilon, resolution, opt);
      emit_json({{"pair", pair.name}, {"n", pair.n}, {"index", pair.index ? nlohmann::json(*pair.index) : nlohmann::json()},
                 {"domain", domain_to_json(pair.domain)}, {"witness", w}},
                g);
      std::cerr << (w.verified ? "verified" : "not verified") << ", worst margin " << w.worst_margin << "\n";
      return w.verified ? 0 : 2;
    }
    if (*count) {
      ComponentReport r;
      if (kostlan_d > 0) {
        const auto p = sample_kostlan(2, kostlan_d, g.seed);
        if (resolution == 0) resolution = static_cast<std::size_t>(std::ceil(8.0 * std::sqrt(kostlan_d)));
        r = sphere_components(p, resolution, max_depth);
      } else if (!input.empty()) {
        std::ifstream f(input);
        if (!f) throw std::runtime_error("cannot read " + input);
        const auto j = nlohmann::json::parse(f);
        const auto p = (j.contains("polynomial") ? j.at("polynomial") : j).get<MultiPoly>();
        if (on_sphere || j.value("sphere", false)) {
          r = sphere_components(p, resolution ? resolution : 64, max_depth);
        } else {
          Domain dom;
          if (ball_radius > 0)
            dom = BallDomain{ball_center.empty() ? std::vector<double>(p.dimension(), 0.0) : ball_center, ball_radius};
          else if (!box_lo.empty())
            dom = BoxDomain{box_lo, box_hi};
          else if (j.contains("domain"))
            dom = domain_from_json(j.at("domain"));
          else
            throw std::invalid_argument("count-components: give --ball-radius, --box-lo/--box-hi or a domain in the input");
          validate_domain(dom);
          r = polynomial_components(p, dom, resolution ? resolution : 128, max_depth);
        }
      } else {
        ExperimentConfig c;
        c.pair = pair_name;
        c.n = n;
        c.index = index;
        const RegularPair pair = pair_from_config(c);
        r = polynomial_components(pair.polynomial, pair.domain, resolution ? resolution : 128, max_depth);
      }
      emit_json(r, g);
      return r.confident ? 0 : 3;
    }
    ExperimentConfig c = base_config(g);
    c.resolution = resolution;
    c.max_depth = max_depth;
    if (*roots) {
      c.d = d;
      auto rep = run_kostlan_roots(c);
      return emit(rep, g);
    }
    if (*curves) {
      c.d_list = d_list;
      c.volume = volume;
      auto rep = run_kostlan_curves(c);
      return emit(rep, g);
    }
    if (*sup) {
      c.n = n;
      c.R = R;
      c.D = D;
      auto rep = run_sup_norm(c);
      return emit(rep, g);
    }
    if (*local) {
      c.pair = pair_name;
      c.index = index;
      c.radius_scale = radius_scale;
      c.D = D;
      auto rep = run_local_presence(c);
      return emit(rep, g);
    }
    if (*betti) {
      auto rep = betti_lower_bound_report(n, betti_i);
      return emit(rep, g);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
