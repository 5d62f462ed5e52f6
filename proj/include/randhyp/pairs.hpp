#pragma once

// Regular pairs (U, P): an open ball or box U, a polynomial P whose zero set
// is a compact hypersurface inside U, and a curve of (delta, epsilon)
// values at which P is quantitatively transverse on U.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "polycore.hpp"

namespace randhyp {

struct BallDomain {
  std::vector<double> center;
  double radius = 1.0;
};

struct BoxDomain {
  std::vector<double> lo;
  std::vector<double> hi;
};

using Domain = std::variant<BallDomain, BoxDomain>;

inline BallDomain centered_ball(std::size_t n, double radius) {
  return BallDomain{std::vector<double>(n, 0.0), radius};
}

inline std::size_t domain_dimension(const Domain& d) {
  return std::visit(
      [](const auto& u) {
        if constexpr (std::is_same_v<std::decay_t<decltype(u)>, BallDomain>)
          return u.center.size();
        else
          return u.lo.size();
      },
      d);
}

inline void validate_domain(const Domain& d) {
  if (const auto* b = std::get_if<BallDomain>(&d)) {
    if (b->center.empty() || !(b->radius > 0)) throw std::invalid_argument("ball domain: bad center or radius");
  } else {
    const auto& x = std::get<BoxDomain>(d);
    if (x.lo.empty() || x.lo.size() != x.hi.size()) throw std::invalid_argument("box domain: bad corners");
    for (std::size_t j = 0; j < x.lo.size(); ++j)
      if (!(x.lo[j] < x.hi[j])) throw std::invalid_argument("box domain: empty side");
  }
}

/// Axis-aligned bounding box of the closure of U.
inline BoxDomain bounding_box(const Domain& d) {
  if (const auto* b = std::get_if<BallDomain>(&d)) {
    BoxDomain box;
    for (double c : b->center) {
      box.lo.push_back(c - b->radius);
      box.hi.push_back(c + b->radius);
    }
    return box;
  }
  return std::get<BoxDomain>(d);
}

/// sup of ||y|| over U.
inline double domain_sup_norm(const Domain& d) {
  if (const auto* b = std::get_if<BallDomain>(&d)) return euclidean_norm(b->center) + b->radius;
  const auto& x = std::get<BoxDomain>(d);
  double s = 0.0;
  for (std::size_t j = 0; j < x.lo.size(); ++j) {
    const double m = std::max(std::fabs(x.lo[j]), std::fabs(x.hi[j]));
    s += m * m;
  }
  return std::sqrt(s);
}

inline bool domain_contains(const Domain& d, std::span<const double> y) {
  if (const auto* b = std::get_if<BallDomain>(&d)) {
    double s = 0.0;
    for (std::size_t j = 0; j < y.size(); ++j) s += (y[j] - b->center[j]) * (y[j] - b->center[j]);
    return s < b->radius * b->radius;
  }
  const auto& x = std::get<BoxDomain>(d);
  for (std::size_t j = 0; j < y.size(); ++j)
    if (!(x.lo[j] < y[j] && y[j] < x.hi[j])) return false;
  return true;
}

/// (delta, epsilon) as a function of a scalar parameter on an interval.
/// A one-point family has lo == hi.
struct TransversalityFamily {
  std::string description;
  double lo = 0.0;
  double hi = 0.0;
  bool open_lo = false;
  bool open_hi = false;
  std::function<std::pair<double, double>(double)> curve;

  bool single_point() const { return lo == hi; }
  bool empty() const { return !curve || lo > hi || (lo == hi && (open_lo || open_hi)); }
  std::pair<double, double> at(double t) const { return curve(t); }
};

struct RegularPair {
  std::string name;
  std::size_t n = 1;
  MultiPoly polynomial{1};
  Domain domain;
  double R = 1.0;
  TransversalityFamily family;
  std::optional<std::size_t> index;
};

inline double pair_radius(const Domain& d) { return std::max(1.0, domain_sup_norm(d)); }

inline RegularPair make_pair(std::string name, MultiPoly p, Domain u, TransversalityFamily family) {
  validate_domain(u);
  if (domain_dimension(u) != p.dimension()) throw DimensionMismatch("make_pair: domain and polynomial dimensions differ");
  RegularPair r;
  r.name = std::move(name);
  r.n = p.dimension();
  r.polynomial = std::move(p);
  r.R = pair_radius(u);
  r.domain = std::move(u);
  r.family = std::move(family);
  return r;
}

/// sum_{j < m} x_j^2 in n variables, over the variables [first, first + m).
inline MultiPoly sum_of_squares(std::size_t n, std::size_t first, std::size_t m) {
  MultiPoly s(n);
  for (std::size_t j = first; j < first + m; ++j) {
    MultiIndex I(n);
    I[j] = 2;
    s.add_term(I, 1.0);
  }
  return s;
}

/// P = |x|^2 - sqrt(n) - 1 on the ball |x|^2 < sqrt(n) + 2, with the curve
/// delta in (0,1) -> (delta, 2 sqrt(sqrt(n) + 1 - delta)).
inline RegularPair sphere_pair(std::size_t n) {
  if (n == 0) throw std::invalid_argument("sphere_pair: n must be >= 1");
  const double rn = std::sqrt(static_cast<double>(n));
  MultiPoly p = sum_of_squares(n, 0, n) - (rn + 1.0);
  TransversalityFamily fam;
  fam.description = "delta -> (delta, 2 sqrt(sqrt(n) + 1 - delta)), delta in (0, 1)";
  fam.lo = 0.0;
  fam.hi = 1.0;
  fam.open_lo = fam.open_hi = true;
  fam.curve = [rn](double delta) { return std::pair{delta, 2.0 * std::sqrt(rn + 1.0 - delta)}; };
  RegularPair pair = make_pair("sphere", std::move(p), centered_ball(n, std::sqrt(rn + 2.0)), std::move(fam));
  return pair;
}

/// Q_i = (|x|^2 - 2)^2 + |y|^2 - 1 with x the first i+1 coordinates, on the
/// ball of radius sqrt(5); zero set isotopic to S^i x S^{n-1-i}.
inline RegularPair product_pair(std::size_t n, std::size_t i) {
  if (n == 0 || i >= n) throw std::invalid_argument("product_pair: need 0 <= i <= n-1");
  MultiPoly a = sum_of_squares(n, 0, i + 1) - 2.0;
  MultiPoly q = a * a + sum_of_squares(n, i + 1, n - i - 1) - 1.0;
  const double delta = 1.0 / (2.0 * std::sqrt(static_cast<double>(n)));
  const double eps = 2.0 * std::sqrt(1.0 - delta);
  TransversalityFamily fam;
  fam.description = "single point (1/(2 sqrt n), 2 sqrt(1 - 1/(2 sqrt n)))";
  fam.lo = fam.hi = delta;
  fam.curve = [eps](double d) { return std::pair{d, eps}; };
  RegularPair pair = make_pair("product", std::move(q), centered_ball(n, std::sqrt(5.0)), std::move(fam));
  pair.index = i;
  return pair;
}

inline nlohmann::json domain_to_json(const Domain& d) {
  if (const auto* b = std::get_if<BallDomain>(&d))
    return {{"kind", "ball"}, {"center", b->center}, {"radius", b->radius}};
  const auto& x = std::get<BoxDomain>(d);
  return {{"kind", "box"}, {"lo", x.lo}, {"hi", x.hi}};
}

inline Domain domain_from_json(const nlohmann::json& j) {
  const auto kind = j.at("kind").get<std::string>();
  Domain d;
  if (kind == "ball")
    d = BallDomain{j.at("center").get<std::vector<double>>(), j.at("radius").get<double>()};
  else if (kind == "box")
    d = BoxDomain{j.at("lo").get<std::vector<double>>(), j.at("hi").get<std::vector<double>>()};
  else
    throw std::invalid_argument("domain JSON: unknown kind " + kind);
  validate_domain(d);
  return d;
}

}  // namespace randhyp
