#pragma once

// Seeded Gaussian ensembles: Kostlan homogeneous polynomials on R^{n+1} and
// the truncated Bargmann-Fock field on R^n. Each coefficient is drawn from
// (seed, hash of its multi-index), so a sample is a pure function of its
// spec.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "parallel.hpp"
#include "polycore.hpp"
#include "random.hpp"

namespace randhyp {

enum class EnsembleModel { kostlan, fock };

struct GaussianSampleSpec {
  EnsembleModel model = EnsembleModel::kostlan;
  std::size_t n = 1;
  unsigned degree = 1;  // d for Kostlan, truncation D for Fock
  std::uint64_t seed = 0;

  static GaussianSampleSpec kostlan(std::size_t n, unsigned d, std::uint64_t seed) {
    return {EnsembleModel::kostlan, n, d, seed};
  }
  static GaussianSampleSpec fock(std::size_t n, unsigned D, std::uint64_t seed) {
    return {EnsembleModel::fock, n, D, seed};
  }
  /// Spec of the i-th draw in a run seeded by this spec.
  GaussianSampleSpec draw(std::uint64_t i) const {
    GaussianSampleSpec s = *this;
    s.seed = derive_seed(seed, i);
    return s;
  }
};

inline void to_json(nlohmann::json& j, const GaussianSampleSpec& s) {
  j = {{"model", s.model == EnsembleModel::kostlan ? "kostlan" : "fock"},
       {"n", s.n},
       {s.model == EnsembleModel::kostlan ? "d" : "D", s.degree},
       {"seed", s.seed}};
}

inline void from_json(const nlohmann::json& j, GaussianSampleSpec& s) {
  const auto m = j.at("model").get<std::string>();
  if (m == "kostlan") {
    s = GaussianSampleSpec::kostlan(j.at("n").get<std::size_t>(), j.at("d").get<unsigned>(), j.at("seed").get<std::uint64_t>());
  } else if (m == "fock") {
    s = GaussianSampleSpec::fock(j.at("n").get<std::size_t>(), j.at("D").get<unsigned>(), j.at("seed").get<std::uint64_t>());
  } else {
    throw std::invalid_argument("unknown ensemble model " + m);
  }
}

/// All exponent vectors of length m with total degree d, lexicographic.
inline std::vector<MultiIndex> homogeneous_indices(std::size_t m, unsigned d) {
  std::vector<MultiIndex> out;
  MultiIndex I(m);
  auto rec = [&](auto&& self, std::size_t j, unsigned left) -> void {
    if (j + 1 == m) {
      I[j] = left;
      out.push_back(I);
      return;
    }
    for (unsigned e = 0; e <= left; ++e) {
      I[j] = e;
      self(self, j + 1, left - e);
    }
  };
  rec(rec, 0, d);
  return out;
}

/// All exponent vectors of length m with total degree <= D, by degree then
/// lexicographic.
inline std::vector<MultiIndex> indices_up_to(std::size_t m, unsigned D) {
  std::vector<MultiIndex> out;
  for (unsigned k = 0; k <= D; ++k) {
    auto h = homogeneous_indices(m, k);
    out.insert(out.end(), h.begin(), h.end());
  }
  return out;
}

/// sqrt(d! / alpha!).
inline double multinomial_sqrt(const MultiIndex& a) {
  return std::exp(0.5 * (std::lgamma(static_cast<double>(a.degree()) + 1.0) - a.log_factorial()));
}

inline double coefficient_normal(std::uint64_t seed, const MultiIndex& I) {
  return standard_normal(seed, hash_multi_index(I));
}

/// sum over |alpha| = d of a_alpha sqrt(d!/alpha!) x^alpha in n+1 variables.
inline MultiPoly sample_kostlan(std::size_t n, unsigned d, std::uint64_t seed) {
  if (d == 0) throw std::invalid_argument("sample_kostlan: d must be >= 1");
  MultiPoly p(n + 1);
  for (const auto& a : homogeneous_indices(n + 1, d)) p.add_term(a, coefficient_normal(seed, a) * multinomial_sqrt(a));
  return p;
}

/// Coefficients c_k of x0^{d-k} x1^k of the binary Kostlan form; the same
/// values sample_kostlan(1, d, seed) produces.
inline std::vector<double> kostlan_binary_coefficients(unsigned d, std::uint64_t seed) {
  if (d == 0) throw std::invalid_argument("kostlan_binary_coefficients: d must be >= 1");
  std::vector<double> c(d + 1);
  for (unsigned k = 0; k <= d; ++k) {
    const MultiIndex a{d - k, k};
    c[k] = coefficient_normal(seed, a) * multinomial_sqrt(a);
  }
  return c;
}

/// f(x) = sum_{|I| <= D} a_I w_I x^I with w_I = sqrt(pi^{|I|} / I!).
class FockField {
 public:
  FockField(std::size_t n, unsigned D, std::vector<MultiIndex> indices, std::vector<double> coefficients)
      : n_(n), D_(D), indices_(std::move(indices)), coef_(std::move(coefficients)) {
    if (indices_.size() != coef_.size()) throw std::invalid_argument("FockField: size mismatch");
    scaled_.resize(coef_.size());
    for (std::size_t t = 0; t < coef_.size(); ++t) scaled_[t] = coef_[t] * fock_basis_weight(indices_[t]);
    if (n_ == 2) {
      C_ = Eigen::MatrixXd::Zero(D_ + 1, D_ + 1);
      for (std::size_t t = 0; t < coef_.size(); ++t) C_(indices_[t][0], indices_[t][1]) = scaled_[t];
    }
    poly_ = CompiledPoly(as_polynomial());
  }

  std::size_t dimension() const { return n_; }
  unsigned truncation() const { return D_; }
  const std::vector<MultiIndex>& indices() const { return indices_; }
  const std::vector<double>& coefficients() const { return coef_; }

  MultiPoly as_polynomial() const {
    MultiPoly p(n_);
    for (std::size_t t = 0; t < coef_.size(); ++t) p.add_term(indices_[t], scaled_[t]);
    return p;
  }

  double operator()(std::span<const double> x) const { return poly_(x); }

  double value_and_gradient(std::span<const double> x, std::vector<double>& g) const {
    return poly_.value_and_gradient(x, g);
  }

  /// Values and partial derivatives on the tensor grid xs x ys (n = 2).
  /// Outputs are indexed [i][j] for (xs[i], ys[j]).
  void evaluate_grid(std::span<const double> xs, std::span<const double> ys, Eigen::MatrixXd& F,
                     Eigen::MatrixXd& Fx, Eigen::MatrixXd& Fy) const {
    if (n_ != 2) throw DimensionMismatch("FockField::evaluate_grid needs n = 2");
    Eigen::MatrixXd Vx, Dx, Vy, Dy;
    vandermonde(xs, Vx, Dx);
    vandermonde(ys, Vy, Dy);
    const Eigen::MatrixXd CVy = C_ * Vy.transpose();
    F = Vx * CVy;
    Fx = Dx * CVy;
    Fy = Vx * (C_ * Dy.transpose());
  }

 private:
  void vandermonde(std::span<const double> x, Eigen::MatrixXd& V, Eigen::MatrixXd& Dv) const {
    const Eigen::Index m = static_cast<Eigen::Index>(x.size());
    V.resize(m, D_ + 1);
    Dv.resize(m, D_ + 1);
    for (Eigen::Index i = 0; i < m; ++i) {
      V(i, 0) = 1.0;
      Dv(i, 0) = 0.0;
      for (unsigned e = 1; e <= D_; ++e) {
        V(i, e) = V(i, e - 1) * x[i];
        Dv(i, e) = e * V(i, e - 1);
      }
    }
  }

  std::size_t n_;
  unsigned D_;
  std::vector<MultiIndex> indices_;
  std::vector<double> coef_;
  std::vector<double> scaled_;
  Eigen::MatrixXd C_;
  CompiledPoly poly_;
};

inline FockField sample_fock(std::size_t n, unsigned D, std::uint64_t seed) {
  if (D == 0) throw std::invalid_argument("sample_fock: D must be >= 1");
  if (n == 0) throw std::invalid_argument("sample_fock: n must be >= 1");
  auto idx = indices_up_to(n, D);
  std::vector<double> c(idx.size());
  for (std::size_t t = 0; t < idx.size(); ++t) c[t] = coefficient_normal(seed, idx[t]);
  return FockField(n, D, std::move(idx), std::move(c));
}

/// Smallest D with sum_{k > D} (pi R^2)^k / k! < tol * e^{pi R^2}.
inline unsigned fock_truncation_for_radius(double R, double tol = 1e-6) {
  if (!(R >= 0)) throw std::invalid_argument("fock_truncation_for_radius: R must be >= 0");
  const double lam = std::numbers::pi * R * R;
  double term = std::exp(-lam), cdf = term;
  unsigned D = 0;
  while (1.0 - cdf >= tol && D < 10000) {
    ++D;
    term *= lam / D;
    cdf += term;
  }
  return std::max(D, 1u);
}

/// sum_{k <= D} (pi t)^k / k!, the covariance of the truncated Fock field at
/// points with inner product t.
inline double fock_kernel(double t, unsigned D) {
  double term = 1.0, s = 1.0;
  for (unsigned k = 1; k <= D; ++k) {
    term *= std::numbers::pi * t / k;
    s += term;
  }
  return s;
}

inline nlohmann::json sample_to_json(const GaussianSampleSpec& spec) {
  nlohmann::json j;
  j["spec"] = spec;
  if (spec.model == EnsembleModel::kostlan)
    j["polynomial"] = sample_kostlan(spec.n, spec.degree, spec.seed);
  else
    j["polynomial"] = sample_fock(spec.n, spec.degree, spec.seed).as_polynomial();
  return j;
}

struct MonteCarloEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  std::uint64_t samples = 0;
};

/// Mean and standard error of values, summed in index order.
inline MonteCarloEstimate summarize(std::span<const double> v) {
  MonteCarloEstimate e;
  e.samples = v.size();
  if (v.empty()) return e;
  double s = 0.0;
  for (double x : v) s += x;
  e.mean = s / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - e.mean) * (x - e.mean);
  if (v.size() > 1) e.standard_error = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
  return e;
}

/// Monte Carlo estimate of E[f(x) f(y)] over draws spec.draw(0..samples-1).
inline MonteCarloEstimate covariance_probe(const GaussianSampleSpec& spec, std::span<const double> x,
                                           std::span<const double> y, std::uint64_t samples,
                                           unsigned threads = 1) {
  if (samples == 0) throw std::invalid_argument("covariance_probe: samples must be > 0");
  const std::size_t dim = spec.model == EnsembleModel::kostlan ? spec.n + 1 : spec.n;
  if (x.size() != dim || y.size() != dim) throw DimensionMismatch("covariance_probe: point dimension");
  if (spec.model == EnsembleModel::fock) {
    // the monomial values do not depend on the draw
    const auto idx = indices_up_to(spec.n, spec.degree);
    std::vector<double> wx(idx.size()), wy(idx.size());
    for (std::size_t t = 0; t < idx.size(); ++t) {
      const double w = fock_basis_weight(idx[t]);
      wx[t] = w;
      wy[t] = w;
      for (std::size_t j = 0; j < spec.n; ++j) {
        wx[t] *= ipow(x[j], idx[t][j]);
        wy[t] *= ipow(y[j], idx[t][j]);
      }
    }
    auto v = parallel_map<double>(samples, threads, [&](std::size_t s) {
      const auto sp = spec.draw(s);
      double fx = 0.0, fy = 0.0;
      for (std::size_t t = 0; t < idx.size(); ++t) {
        const double a = coefficient_normal(sp.seed, idx[t]);
        fx += a * wx[t];
        fy += a * wy[t];
      }
      return fx * fy;
    });
    return summarize(v);
  }
  auto v = parallel_map<double>(samples, threads, [&](std::size_t s) {
    const auto sp = spec.draw(s);
    const auto p = sample_kostlan(sp.n, sp.degree, sp.seed);
    return evaluate(p, x) * evaluate(p, y);
  });
  return summarize(v);
}

}  // namespace randhyp
