#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "randhyp/constants.hpp"
#include "randhyp/stability.hpp"
#include "randhyp/transversality.hpp"

using namespace randhyp;

namespace {

DeltaEpsilon sphere_point(std::size_t n, double delta) {
  return {delta, 2.0 * std::sqrt(std::sqrt(static_cast<double>(n)) + 1.0 - delta)};
}

DeltaEpsilon product_point(std::size_t n) {
  const double d = 1.0 / (2.0 * std::sqrt(static_cast<double>(n)));
  return {d, 2.0 * std::sqrt(1.0 - d)};
}

}  // namespace

TEST(SpherePair, RadiusAndFamily) {
  const auto p4 = sphere_pair(4);
  EXPECT_DOUBLE_EQ(p4.R, 2.0);
  for (std::size_t n = 1; n <= 6; ++n) {
    const auto p = sphere_pair(n);
    EXPECT_NEAR(p.R * p.R, std::sqrt(static_cast<double>(n)) + 2.0, 1e-12);
    EXPECT_FALSE(p.family.empty());
    const auto [d, e] = p.family.at(0.3);
    EXPECT_DOUBLE_EQ(d, 0.3);
    EXPECT_NEAR(e, sphere_point(n, 0.3).epsilon, 1e-15);
  }
  EXPECT_THROW(sphere_pair(0), std::invalid_argument);
}

TEST(SpherePair, OneDimensionalZeroSetIsTwoPoints) {
  const auto p = sphere_pair(1);
  const std::vector<double> x{std::sqrt(2.0)}, y{-std::sqrt(2.0)};
  EXPECT_NEAR(evaluate(p.polynomial, x), 0.0, 1e-14);
  EXPECT_NEAR(evaluate(p.polynomial, y), 0.0, 1e-14);
  const auto r = polynomial_components(p.polynomial, p.domain);
  EXPECT_EQ(r.count, 2u);
  EXPECT_EQ(r.touching_boundary, 0u);
}

TEST(SpherePair, PlanarZeroSetIsInteriorCircle) {
  const auto p = sphere_pair(2);
  const double r = std::sqrt(std::sqrt(2.0) + 1.0);
  EXPECT_NEAR(r, 1.554, 1e-3);
  EXPECT_NEAR(p.R, 1.848, 1e-3);
  for (double t : {0.0, 0.7, 2.0, 4.5}) {
    const std::vector<double> x{r * std::cos(t), r * std::sin(t)};
    EXPECT_NEAR(evaluate(p.polynomial, x), 0.0, 1e-13);
  }
  const auto c = polynomial_components(p.polynomial, p.domain, 64);
  EXPECT_EQ(c.count, 1u);
  EXPECT_TRUE(c.confident);
}

TEST(ProductPair, RadiusAndSinglePoint) {
  for (std::size_t n = 1; n <= 6; ++n)
    for (std::size_t i = 0; i < n; ++i) {
      const auto p = product_pair(n, i);
      EXPECT_NEAR(p.R * p.R, 5.0, 1e-12);
      EXPECT_TRUE(p.family.single_point());
      const auto [d, e] = p.family.at(p.family.lo);
      EXPECT_DOUBLE_EQ(d, product_point(n).delta);
      EXPECT_DOUBLE_EQ(e, product_point(n).epsilon);
      EXPECT_EQ(*p.index, i);
    }
  EXPECT_THROW(product_pair(2, 2), std::invalid_argument);
  EXPECT_THROW(product_pair(0, 0), std::invalid_argument);
}

TEST(ProductPair, TwoOvalsInThePlane) {
  const auto p = product_pair(2, 0);
  // (x^2 - 2)^2 + y^2 = 1 meets y = 0 at x^2 = 1 and x^2 = 3
  for (double x : {1.0, std::sqrt(3.0), -1.0, -std::sqrt(3.0)}) {
    const std::vector<double> v{x, 0.0};
    EXPECT_NEAR(evaluate(p.polynomial, v), 0.0, 1e-13);
  }
  const auto c = polynomial_components(p.polynomial, p.domain, 96);
  EXPECT_EQ(c.count, 2u);
  EXPECT_EQ(c.touching_boundary, 0u);
}

TEST(ProductPair, TorusInSpace) {
  const auto p = product_pair(3, 1);
  for (double th : {0.1, 1.3, 2.9})
    for (double ph : {0.0, 2.2, 5.0}) {
      const double r = std::sqrt(2.0 + std::cos(th));
      const std::vector<double> v{r * std::cos(ph), r * std::sin(ph), std::sin(th)};
      EXPECT_NEAR(evaluate(p.polynomial, v), 0.0, 1e-13);
    }
}

TEST(Domains, ValidationBoxesAndJson) {
  EXPECT_THROW(validate_domain(BallDomain{{0.0}, 0.0}), std::invalid_argument);
  EXPECT_THROW(validate_domain(BallDomain{{}, 1.0}), std::invalid_argument);
  EXPECT_THROW(validate_domain(BoxDomain{{0.0, 0.0}, {1.0, 0.0}}), std::invalid_argument);
  EXPECT_THROW(validate_domain(BoxDomain{{0.0}, {1.0, 2.0}}), std::invalid_argument);
  const Domain b = BallDomain{{1.0, -1.0}, 2.0};
  const auto box = bounding_box(b);
  EXPECT_EQ(box.lo, (std::vector<double>{-1.0, -3.0}));
  EXPECT_EQ(box.hi, (std::vector<double>{3.0, 1.0}));
  EXPECT_NEAR(domain_sup_norm(b), std::sqrt(2.0) + 2.0, 1e-15);
  EXPECT_EQ(pair_radius(BallDomain{{0.0}, 0.5}), 1.0);
  for (const Domain& d : {b, Domain{BoxDomain{{-1.0, 0.0}, {2.0, 0.25}}}}) {
    const Domain back = domain_from_json(domain_to_json(d));
    EXPECT_EQ(domain_to_json(back), domain_to_json(d));
  }
  EXPECT_THROW(make_pair("bad", MultiPoly(2), BallDomain{{0.0}, 1.0}, {}), DimensionMismatch);
}

TEST(VerifyTransversality, SphereFamilyPointVerifies) {
  const auto p = sphere_pair(2);
  const auto w = verify_transversality(p, 0.5, 2.0 * std::sqrt(std::sqrt(2.0) + 0.5) - 0.01, 128);
  EXPECT_TRUE(w.verified);
  EXPECT_TRUE(w.boundary_clause);
  EXPECT_TRUE(w.band_clause);
  EXPECT_GT(w.worst_margin, 0.0);
  EXPECT_EQ(w.grid_resolution, 128u);
}

TEST(VerifyTransversality, OversizedEpsilonFailsWithCounterexample) {
  const auto p = sphere_pair(2);
  const auto w = verify_transversality(p, 0.5, 10.0, 64);
  EXPECT_FALSE(w.verified);
  EXPECT_FALSE(w.band_clause);
  // the gradient on the band is at most 2 sqrt(sqrt 2 + 1.5) < 10, so the
  // slack max(|P| - delta, |dP| - epsilon) reaches -delta on the zero set
  EXPECT_LT(2.0 * std::sqrt(std::sqrt(2.0) + 1.5), 10.0);
  EXPECT_NEAR(w.worst_margin, -0.5, 0.05);
}

TEST(VerifyTransversality, OversizedDeltaFailsBoundaryClause) {
  // |P_S| on the boundary sphere equals 1
  const auto w = verify_transversality(sphere_pair(2), 1.5, 1.0, 64);
  EXPECT_FALSE(w.verified);
  EXPECT_FALSE(w.boundary_clause);
}

TEST(VerifyTransversality, ProductFamilyPointVerifies) {
  for (std::size_t i = 0; i < 2; ++i) {
    const auto p = product_pair(2, i);
    const auto t = product_point(2);
    const auto w = verify_transversality(p, t.delta, t.epsilon * 0.99, 128);
    EXPECT_TRUE(w.verified) << "i=" << i;
  }
}

TEST(VerifyTransversality, SphereFamilyGridWithMargin) {
  for (std::size_t n : {1u, 2u}) {
    const auto p = sphere_pair(n);
    std::vector<DeltaEpsilon> targets;
    for (int k = 1; k <= 50; ++k) {
      auto t = sphere_point(n, k / 51.0);
      t.epsilon *= 1.0 - 1e-3;
      targets.push_back(t);
    }
    const auto ws = verify_transversality_batch(p, targets, n == 1 ? 512 : 96);
    ASSERT_EQ(ws.size(), targets.size());
    for (std::size_t k = 0; k < ws.size(); ++k) EXPECT_TRUE(ws[k].verified) << "n=" << n << " k=" << k;
  }
}

TEST(VerifyTransversality, SpaceLowResolution) {
  const auto ws = verify_transversality_batch(sphere_pair(3), family_targets(sphere_pair(3), 5, 1e-3), 32);
  for (const auto& w : ws) EXPECT_TRUE(w.verified);
  const auto t = product_point(3);
  EXPECT_TRUE(verify_transversality(product_pair(3, 1), t.delta, t.epsilon * 0.99, 32).verified);
}

TEST(VerifyTransversality, BatchMatchesSingleCalls) {
  const auto p = sphere_pair(2);
  const auto targets = family_targets(p, 4, 1e-3);
  const auto ws = verify_transversality_batch(p, targets, 64);
  for (std::size_t k = 0; k < targets.size(); ++k) {
    const auto w = verify_transversality(p, targets[k].delta, targets[k].epsilon, 64);
    EXPECT_EQ(w.verified, ws[k].verified);
    EXPECT_DOUBLE_EQ(w.worst_margin, ws[k].worst_margin);
  }
}

TEST(VerifyTransversality, WorkerCountIndependent) {
  const auto p = sphere_pair(2);
  TransversalityOptions a, b;
  a.threads = 1;
  b.threads = 4;
  const auto w1 = verify_transversality(p, 0.5, 2.0, 96, a);
  const auto w4 = verify_transversality(p, 0.5, 2.0, 96, b);
  EXPECT_EQ(nlohmann::json(w1).dump(), nlohmann::json(w4).dump());
}

TEST(FamilyTargets, InteriorPointsAndSinglePoint) {
  const auto t = family_targets(sphere_pair(2), 3, 0.1);
  ASSERT_EQ(t.size(), 3u);
  EXPECT_DOUBLE_EQ(t[1].delta, 0.5);
  EXPECT_NEAR(t[1].epsilon, 0.9 * sphere_point(2, 0.5).epsilon, 1e-15);
  EXPECT_EQ(family_targets(product_pair(2, 0), 7, 0.0).size(), 1u);
}

TEST(BarrierRescale, ChainRuleIdentity) {
  const auto p = sphere_pair(2);
  const auto s = rescaled_barrier(p.polynomial, 16);
  const std::vector<double> y{0.1, -0.2}, x{0.4, -0.8};
  // sigma(y) = d^{n/2} P(sqrt(d) y): factor 16 on values, 64 on gradients
  EXPECT_NEAR(evaluate(s, y), 16.0 * evaluate(p.polynomial, x), 1e-12);
  const auto gs = gradient(s, y), gp = gradient(p.polynomial, x);
  for (int j = 0; j < 2; ++j) EXPECT_NEAR(gs[j], 64.0 * gp[j], 1e-12);
}

TEST(BarrierRescale, HoldsAcrossDegreesForBothPairs) {
  const auto sp = sphere_pair(2);
  const auto st = sphere_point(2, 0.5);
  const auto pp = product_pair(2, 0);
  const auto pt = product_point(2);
  for (std::size_t d : {1u, 4u, 16u, 64u, 256u}) {
    EXPECT_TRUE(barrier_rescale_check(sp, d, st.delta, st.epsilon * 0.99, 64).holds) << "sphere d=" << d;
    EXPECT_TRUE(barrier_rescale_check(pp, d, pt.delta, pt.epsilon * 0.99, 64).holds) << "product d=" << d;
  }
  EXPECT_THROW(barrier_rescale_check(sp, 0, 0.5, 1.0, 64), std::invalid_argument);
}

TEST(BarrierRescale, DegreeOneIsHalvedDefinition) {
  const auto p = sphere_pair(2);
  const auto b = barrier_rescale_check(p, 1, 0.5, 2.0, 64);
  const auto w = verify_transversality(p, 0.25, 1.0, 64);
  EXPECT_EQ(b.holds, w.verified);
  EXPECT_DOUBLE_EQ(b.witness.worst_margin, w.worst_margin);
}

TEST(Stability, ConstantShiftOfSphere) {
  const auto p = sphere_pair(2);
  const auto t = sphere_point(2, 0.5);
  MultiPoly g(2);
  g.add_term(MultiIndex(2), t.delta / 2);
  const auto r = stability_check(p, t.delta, t.epsilon, g, 96);
  EXPECT_TRUE(r.unchanged);
  EXPECT_EQ(r.after.count, 1u);
}

TEST(Stability, ConstantShiftOfTwoOvals) {
  const auto p = product_pair(2, 0);
  const auto t = product_point(2);
  MultiPoly g(2);
  g.add_term(MultiIndex(2), t.delta / 2);
  const auto r = stability_check(p, t.delta, t.epsilon, g, 96);
  EXPECT_TRUE(r.unchanged);
  EXPECT_EQ(r.after.count, 2u);
}

TEST(Stability, LowDegreePerturbationOfSphere) {
  const auto p = sphere_pair(2);
  const auto t = sphere_point(2, 0.5);
  MultiPoly g(2);
  g.add_term(MultiIndex{1, 0}, 1.0);
  g.add_term(MultiIndex{1, 1}, -0.5);
  g.add_term(MultiIndex{0, 0}, 0.3);
  const auto b = perturbation_bounds(g, p.domain, 96);
  const MultiPoly h = g * (0.5 * std::min(t.delta / b.sup_value, t.epsilon / b.sup_gradient));
  const auto r = stability_check(p, t.delta, t.epsilon, h, 96);
  EXPECT_TRUE(r.unchanged);
  EXPECT_EQ(r.after.count, 1u);
}

TEST(Stability, OutOfHypothesisPerturbationThrows) {
  const auto p = sphere_pair(2);
  MultiPoly g(2);
  g.add_term(MultiIndex(2), 0.6);
  EXPECT_THROW(stability_check(p, 0.5, 2.0, g, 64), PerturbationBoundViolated);
  MultiPoly steep(2);
  steep.add_term(MultiIndex{1, 0}, 3.0);
  EXPECT_THROW(stability_check(p, 100.0, 2.0, steep, 64), PerturbationBoundViolated);
  EXPECT_THROW(stability_check(p, 0.5, 2.0, MultiPoly(1), 64), DimensionMismatch);
}

TEST(Stability, PaddedBoundsDominateSampledSup) {
  const auto p = product_pair(2, 1);
  const auto g = random_admissible_perturbation(p, 0.3, 1.0, 3, 17, 64);
  const auto b = perturbation_bounds(g, p.domain, 64);
  EXPECT_NEAR(std::max(b.sup_value / 0.3, b.sup_gradient / 1.0), 0.9, 1e-12);
  const auto fine = perturbation_bounds(g, p.domain, 512);
  std::vector<double> x(2), grad;
  const double R = std::sqrt(5.0);
  for (int k = 0; k < 2000; ++k) {
    const double r = R * std::sqrt((k % 97) / 97.0), a = 0.37 * k;
    x = {r * std::cos(a), r * std::sin(a)};
    EXPECT_LE(std::fabs(evaluate(g, x)), b.sup_value);
    EXPECT_LE(euclidean_norm(gradient(g, x)), b.sup_gradient);
  }
  EXPECT_LE(fine.sup_value, b.sup_value * 1.01);
}

// Random admissible perturbations never change the count; the full 200 per
// pair run in the acceptance binary.
TEST(Stability, RandomAdmissiblePerturbations) {
  struct Case {
    RegularPair pair;
    DeltaEpsilon t;
    int trials;
  };
  const std::vector<Case> cases{{sphere_pair(1), sphere_point(1, 0.5), 200},
                                {product_pair(1, 0), product_point(1), 200},
                                {sphere_pair(2), sphere_point(2, 0.5), 20},
                                {product_pair(2, 0), product_point(2), 20},
                                {product_pair(2, 1), product_point(2), 20}};
  for (const auto& c : cases)
    for (int k = 0; k < c.trials; ++k) {
      const double eps = c.t.epsilon * 0.99;
      const auto g = random_admissible_perturbation(c.pair, c.t.delta, eps, 3, 1000 + k, 96);
      const auto r = stability_check(c.pair, c.t.delta, eps, g, 96);
      ASSERT_TRUE(r.unchanged) << c.pair.name << " n=" << c.pair.n << " trial " << k;
    }
}
