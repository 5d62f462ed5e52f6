#pragma once

// Sparse real polynomials in n variables, their derivatives, and the
// Gaussian (Fock) L2 norm of the monomial basis on C^n with weight
// exp(-pi |z|^2).

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace randhyp {

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Exponent vector (i_1, ..., i_n) of a monomial x_1^{i_1} ... x_n^{i_n}.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::size_t n) : exps_(n, 0u) {}
  MultiIndex(std::initializer_list<unsigned> e) : exps_(e) {}
  explicit MultiIndex(std::vector<unsigned> e) : exps_(std::move(e)) {}

  std::size_t size() const { return exps_.size(); }
  unsigned operator[](std::size_t j) const { return exps_[j]; }
  unsigned& operator[](std::size_t j) { return exps_[j]; }
  std::span<const unsigned> exponents() const { return exps_; }
  auto begin() const { return exps_.begin(); }
  auto end() const { return exps_.end(); }

  unsigned degree() const {
    unsigned s = 0;
    for (unsigned e : exps_) s += e;
    return s;
  }

  /// ln(i_1! ... i_n!)
  double log_factorial() const {
    double s = 0.0;
    for (unsigned e : exps_) s += std::lgamma(static_cast<double>(e) + 1.0);
    return s;
  }

  auto operator<=>(const MultiIndex&) const = default;
  bool operator==(const MultiIndex&) const = default;

 private:
  std::vector<unsigned> exps_;
};

inline double ipow(double x, unsigned e) {
  double r = 1.0;
  while (e) {
    if (e & 1u) r *= x;
    x *= x;
    e >>= 1u;
  }
  return r;
}

/// Sparse real polynomial: a map from MultiIndex to nonzero coefficient.
class MultiPoly {
 public:
  using TermMap = std::map<MultiIndex, double>;

  explicit MultiPoly(std::size_t dimension = 1) : dim_(dimension) {
    if (dimension == 0) throw std::invalid_argument("MultiPoly: dimension must be >= 1");
  }

  static MultiPoly constant(std::size_t n, double c) {
    MultiPoly p(n);
    p.add_term(MultiIndex(n), c);
    return p;
  }

  static MultiPoly variable(std::size_t n, std::size_t j) {
    MultiPoly p(n);
    MultiIndex I(n);
    I[j] = 1;
    p.add_term(I, 1.0);
    return p;
  }

  static MultiPoly monomial(const MultiIndex& I, double c) {
    MultiPoly p(I.size());
    p.add_term(I, c);
    return p;
  }

  std::size_t dimension() const { return dim_; }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  unsigned degree() const {
    unsigned d = 0;
    for (const auto& [I, c] : terms_) d = std::max(d, I.degree());
    return d;
  }

  bool is_homogeneous() const {
    if (terms_.empty()) return true;
    const unsigned d = terms_.begin()->first.degree();
    return std::all_of(terms_.begin(), terms_.end(),
                       [d](const auto& t) { return t.first.degree() == d; });
  }

  double coefficient(const MultiIndex& I) const {
    auto it = terms_.find(I);
    return it == terms_.end() ? 0.0 : it->second;
  }

  /// Accumulates c into the coefficient of I; exact zeros are dropped.
  void add_term(const MultiIndex& I, double c) {
    if (I.size() != dim_) throw DimensionMismatch("MultiPoly::add_term: index length != dimension");
    if (c == 0.0) return;
    auto [it, inserted] = terms_.try_emplace(I, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0.0) terms_.erase(it);
    }
  }

  MultiPoly derivative(std::size_t j) const {
    if (j >= dim_) throw DimensionMismatch("MultiPoly::derivative: variable out of range");
    MultiPoly d(dim_);
    for (const auto& [I, c] : terms_) {
      if (I[j] == 0) continue;
      MultiIndex J = I;
      J[j] -= 1;
      d.add_term(J, c * static_cast<double>(I[j]));
    }
    return d;
  }

  /// Returns x -> p(s * x).
  MultiPoly scaled_variables(double s) const {
    MultiPoly q(dim_);
    for (const auto& [I, c] : terms_) q.add_term(I, c * ipow(s, I.degree()));
    return q;
  }

  MultiPoly& operator+=(const MultiPoly& o) {
    check_same_dim(o);
    for (const auto& [I, c] : o.terms_) add_term(I, c);
    return *this;
  }
  MultiPoly& operator-=(const MultiPoly& o) {
    check_same_dim(o);
    for (const auto& [I, c] : o.terms_) add_term(I, -c);
    return *this;
  }
  MultiPoly& operator*=(double s) {
    if (s == 0.0) {
      terms_.clear();
      return *this;
    }
    for (auto& [I, c] : terms_) c *= s;
    return *this;
  }

  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(MultiPoly a, double s) { return a *= s; }
  friend MultiPoly operator*(double s, MultiPoly a) { return a *= s; }
  friend MultiPoly operator-(MultiPoly a) { return a *= -1.0; }

  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    a.check_same_dim(b);
    MultiPoly r(a.dim_);
    for (const auto& [I, c] : a.terms_) {
      for (const auto& [J, d] : b.terms_) {
        MultiIndex K = I;
        for (std::size_t j = 0; j < a.dim_; ++j) K[j] += J[j];
        r.add_term(K, c * d);
      }
    }
    return r;
  }

  friend MultiPoly operator+(MultiPoly a, double c) {
    a.add_term(MultiIndex(a.dim_), c);
    return a;
  }
  friend MultiPoly operator-(MultiPoly a, double c) { return std::move(a) + (-c); }

  bool operator==(const MultiPoly&) const = default;

  double operator()(std::span<const double> x) const;

 private:
  void check_same_dim(const MultiPoly& o) const {
    if (o.dim_ != dim_) throw DimensionMismatch("MultiPoly: dimension mismatch");
  }

  std::size_t dim_;
  TermMap terms_;
};

/// Sum of a_I x^I.
inline double evaluate(const MultiPoly& p, std::span<const double> x) {
  if (x.size() != p.dimension()) throw DimensionMismatch("evaluate: point has wrong dimension");
  double s = 0.0;
  for (const auto& [I, c] : p.terms()) {
    double m = c;
    for (std::size_t j = 0; j < x.size(); ++j) m *= ipow(x[j], I[j]);
    s += m;
  }
  return s;
}

inline double MultiPoly::operator()(std::span<const double> x) const { return evaluate(*this, x); }

inline std::vector<double> gradient(const MultiPoly& p, std::span<const double> x) {
  if (x.size() != p.dimension()) throw DimensionMismatch("gradient: point has wrong dimension");
  const std::size_t n = x.size();
  std::vector<double> g(n, 0.0);
  for (const auto& [I, c] : p.terms()) {
    for (std::size_t j = 0; j < n; ++j) {
      if (I[j] == 0) continue;
      double m = c * static_cast<double>(I[j]);
      for (std::size_t k = 0; k < n; ++k) m *= ipow(x[k], k == j ? I[k] - 1 : I[k]);
      g[j] += m;
    }
  }
  return g;
}

inline double euclidean_norm(std::span<const double> v) {
  double s = 0.0;
  for (double a : v) s += a * a;
  return std::sqrt(s);
}

/// sqrt(pi^{|I|} / I!): the factor that makes z^I unit-norm for the
/// Gaussian inner product on C^n.
inline double fock_basis_weight(const MultiIndex& I) {
  return std::exp(0.5 * (static_cast<double>(I.degree()) * std::log(std::numbers::pi) -
                         I.log_factorial()));
}

/// ||P||^2 = sum |a_I|^2 I! / pi^{|I|}.
inline double fock_norm_sq(const MultiPoly& p) {
  double s = 0.0;
  for (const auto& [I, c] : p.terms()) {
    s += c * c * std::exp(I.log_factorial() - static_cast<double>(I.degree()) * std::log(std::numbers::pi));
  }
  return s;
}

/// Flat term table for repeated evaluation of one polynomial (and optionally
/// its gradient) at many points.
class CompiledPoly {
 public:
  CompiledPoly() = default;
  explicit CompiledPoly(const MultiPoly& p) : n_(p.dimension()) {
    coef_.reserve(p.size());
    exps_.reserve(p.size() * n_);
    for (const auto& [I, c] : p.terms()) {
      coef_.push_back(c);
      for (std::size_t j = 0; j < n_; ++j) {
        exps_.push_back(I[j]);
        max_exp_ = std::max(max_exp_, I[j]);
      }
    }
  }

  std::size_t dimension() const { return n_; }
  std::size_t size() const { return coef_.size(); }
  unsigned max_exponent() const { return max_exp_; }
  double coefficient(std::size_t t) const { return coef_[t]; }
  unsigned exponent(std::size_t t, std::size_t j) const { return exps_[t * n_ + j]; }

  /// Evaluate with caller-supplied power rows: pw[j][e] = x_j^e.
  double evaluate_rows(const double* const* pw) const {
    double s = 0.0;
    const unsigned* e = exps_.data();
    for (std::size_t t = 0; t < coef_.size(); ++t, e += n_) {
      double m = coef_[t];
      for (std::size_t j = 0; j < n_; ++j) m *= pw[j][e[j]];
      s += m;
    }
    return s;
  }

  double operator()(std::span<const double> x) const {
    std::vector<double> grad;
    return value_and_gradient(x, grad, false);
  }

  /// Value, and the gradient into g when want_gradient is set.
  double value_and_gradient(std::span<const double> x, std::vector<double>& g,
                            bool want_gradient = true) const {
    if (x.size() != n_) throw DimensionMismatch("CompiledPoly: point has wrong dimension");
    const std::size_t stride = max_exp_ + 1u;
    thread_local std::vector<double> pw;
    pw.assign(n_ * stride, 1.0);
    for (std::size_t j = 0; j < n_; ++j)
      for (unsigned e = 1; e <= max_exp_; ++e) pw[j * stride + e] = pw[j * stride + e - 1] * x[j];
    if (want_gradient) g.assign(n_, 0.0);
    double s = 0.0;
    const unsigned* e = exps_.data();
    for (std::size_t t = 0; t < coef_.size(); ++t, e += n_) {
      double m = coef_[t];
      for (std::size_t j = 0; j < n_; ++j) m *= pw[j * stride + e[j]];
      s += m;
      if (!want_gradient) continue;
      for (std::size_t j = 0; j < n_; ++j) {
        if (e[j] == 0) continue;
        double d = coef_[t] * static_cast<double>(e[j]);
        for (std::size_t k = 0; k < n_; ++k) d *= pw[k * stride + (k == j ? e[k] - 1 : e[k])];
        g[j] += d;
      }
    }
    return s;
  }

 private:
  std::size_t n_ = 0;
  unsigned max_exp_ = 0;
  std::vector<double> coef_;
  std::vector<unsigned> exps_;
};

// JSON schema: {"dim": n, "terms": [{"exp": [..], "coef": r}, ...]}

inline void to_json(nlohmann::json& j, const MultiPoly& p) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [I, c] : p.terms()) {
    terms.push_back({{"exp", std::vector<unsigned>(I.begin(), I.end())}, {"coef", c}});
  }
  j = nlohmann::json{{"dim", p.dimension()}, {"terms", std::move(terms)}};
}

inline void from_json(const nlohmann::json& j, MultiPoly& p) {
  const auto dim = j.at("dim").get<std::size_t>();
  MultiPoly q(dim);
  for (const auto& t : j.at("terms")) {
    auto e = t.at("exp").get<std::vector<unsigned>>();
    if (e.size() != dim) throw DimensionMismatch("polynomial JSON: exponent length != dim");
    q.add_term(MultiIndex(std::move(e)), t.at("coef").get<double>());
  }
  p = std::move(q);
}

}  // namespace randhyp
