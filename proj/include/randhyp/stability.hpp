#pragma once

// Perturbation stability of a regular pair: a perturbation g with
// sup|g| < delta and sup|dg| < epsilon on U must leave the zero-set
// component count of P unchanged.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "pairs.hpp"
#include "polycore.hpp"
#include "random.hpp"
#include "transversality.hpp"
#include "zeroset.hpp"

namespace randhyp {

struct PerturbationBoundViolated : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct PerturbationBounds {
  double sup_value = 0.0;     // upper bound for sup_U |g|
  double sup_gradient = 0.0;  // upper bound for sup_U |dg|
};

/// Grid maxima of |g| and |dg| over U, padded by the cell half-diagonal
/// times a coefficient bound on the next derivative over the bounding box.
inline PerturbationBounds perturbation_bounds(const MultiPoly& g, const Domain& U, std::size_t resolution) {
  validate_domain(U);
  const std::size_t n = g.dimension();
  if (domain_dimension(U) != n) throw DimensionMismatch("perturbation_bounds: dimension");
  if (resolution < 2) throw std::invalid_argument("perturbation_bounds: resolution must be >= 2");
  const auto box = bounding_box(U);
  std::vector<double> amax(n), h(n);
  double r2 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    amax[j] = std::max(std::fabs(box.lo[j]), std::fabs(box.hi[j]));
    h[j] = (box.hi[j] - box.lo[j]) / static_cast<double>(resolution);
    r2 += 0.25 * h[j] * h[j];
  }
  const double r = std::sqrt(r2);

  double L1 = 0.0, L2 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const MultiPoly dj = g.derivative(j);
    const double b = detail::coefficient_bound(dj, amax);
    L1 += b * b;
    for (std::size_t k = 0; k < n; ++k) {
      const double c = detail::coefficient_bound(dj.derivative(k), amax);
      L2 += c * c;
    }
  }
  L1 = std::sqrt(L1);
  L2 = std::sqrt(L2);

  // grid points within r of U cover U up to distance r
  const CompiledPoly cg(g);
  std::vector<double> x(n), grad;
  std::vector<std::size_t> idx(n, 0);
  double m0 = 0.0, m1 = 0.0;
  const auto* ball = std::get_if<BallDomain>(&U);
  for (bool done = false; !done;) {
    for (std::size_t j = 0; j < n; ++j) x[j] = box.lo[j] + h[j] * static_cast<double>(idx[j]);
    bool near = true;
    if (ball) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += (x[j] - ball->center[j]) * (x[j] - ball->center[j]);
      near = std::sqrt(s) <= ball->radius + r;
    }
    if (near) {
      const double v = cg.value_and_gradient(x, grad);
      m0 = std::max(m0, std::fabs(v));
      m1 = std::max(m1, euclidean_norm(grad));
    }
    std::size_t j = 0;
    while (j < n && ++idx[j] > resolution) idx[j++] = 0;
    done = j == n;
  }
  return {m0 + r * L1, m1 + r * L2};
}

struct StabilityResult {
  bool unchanged = false;
  ComponentReport before;
  ComponentReport after;
  PerturbationBounds bounds;
};

/// Compares the component counts of P and P + g in U (n = 1 or 2). Throws
/// PerturbationBoundViolated unless the padded bounds show sup|g| < delta
/// and sup|dg| < epsilon.
inline StabilityResult stability_check(const RegularPair& pair, double delta, double epsilon, const MultiPoly& g,
                                       std::size_t resolution) {
  if (g.dimension() != pair.n) throw DimensionMismatch("stability_check: perturbation dimension");
  StabilityResult res;
  res.bounds = perturbation_bounds(g, pair.domain, resolution);
  if (!(res.bounds.sup_value < delta) || !(res.bounds.sup_gradient < epsilon))
    throw PerturbationBoundViolated("perturbation exceeds (delta, epsilon) on the domain");
  res.before = polynomial_components(pair.polynomial, pair.domain, resolution);
  res.after = polynomial_components(pair.polynomial + g, pair.domain, resolution);
  res.unchanged = res.before.confident && res.after.confident && res.before.count == res.after.count &&
                  res.before.touching_boundary == res.after.touching_boundary;
  return res;
}

/// Gaussian polynomial of degree <= degree, scaled so that its padded bounds
/// are `fill` times (delta, epsilon).
inline MultiPoly random_admissible_perturbation(const RegularPair& pair, double delta, double epsilon, unsigned degree,
                                                std::uint64_t seed, std::size_t resolution, double fill = 0.9) {
  if (!(fill > 0 && fill < 1)) throw std::invalid_argument("fill must lie in (0, 1)");
  MultiPoly g(pair.n);
  std::vector<MultiIndex> idx;
  MultiIndex I(pair.n);
  auto rec = [&](auto&& self, std::size_t j, unsigned left) -> void {
    if (j == pair.n) {
      g.add_term(I, standard_normal(seed, hash_multi_index(I)));
      return;
    }
    for (unsigned e = 0; e <= left; ++e) {
      I[j] = e;
      self(self, j + 1, left - e);
    }
    I[j] = 0;
  };
  rec(rec, 0, degree);
  const auto b = perturbation_bounds(g, pair.domain, resolution);
  const double s = fill * std::min(delta / b.sup_value, epsilon / b.sup_gradient);
  return g * s;
}

}  // namespace randhyp
