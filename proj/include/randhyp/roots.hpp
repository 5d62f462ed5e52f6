#pragma once

// Real roots of univariate polynomials and of binary forms on RP^1.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "polycore.hpp"
#include "scalar_search.hpp"

namespace randhyp {

struct RootCount {
  std::size_t count = 0;
  std::size_t cross_check = 0;
  std::string cross_check_method;
  bool agree = true;
};

/// Ascending coefficients of a polynomial in one variable.
inline std::vector<double> univariate_coefficients(const MultiPoly& p) {
  if (p.dimension() != 1) throw DimensionMismatch("univariate polynomial expected");
  std::vector<double> c(p.degree() + 1, 0.0);
  for (const auto& [I, v] : p.terms()) c[I[0]] = v;
  return c;
}

namespace detail {

inline long double horner(std::span<const long double> c, long double x) {
  long double s = 0;
  for (std::size_t k = c.size(); k-- > 0;) s = s * x + c[k];
  return s;
}

inline void trim(std::vector<long double>& p) {
  long double scale = 0;
  for (auto v : p) scale = std::max(scale, std::fabs(v));
  while (p.size() > 1 && std::fabs(p.back()) <= 1e-13L * scale) p.pop_back();
}

// Sturm chain p, p', -rem(...), in long double.
inline std::vector<std::vector<long double>> sturm_chain(std::span<const double> c) {
  std::vector<std::vector<long double>> chain;
  std::vector<long double> p0(c.begin(), c.end()), p1;
  for (std::size_t k = 1; k < p0.size(); ++k) p1.push_back(static_cast<long double>(k) * p0[k]);
  chain.push_back(p0);
  if (p1.empty()) return chain;
  trim(p1);
  chain.push_back(p1);
  long double scale0 = 0;
  for (auto v : p0) scale0 = std::max(scale0, std::fabs(v));
  while (chain.back().size() > 1) {
    std::vector<long double> a = chain[chain.size() - 2];
    const auto& b = chain.back();
    while (a.size() >= b.size()) {
      const long double q = a.back() / b.back();
      const std::size_t shift = a.size() - b.size();
      for (std::size_t k = 0; k < b.size(); ++k) a[k + shift] -= q * b[k];
      a.pop_back();
    }
    long double sa = 0;
    for (auto v : a) sa = std::max(sa, std::fabs(v));
    long double sb = 0;
    for (auto v : b) sb = std::max(sb, std::fabs(v));
    if (a.empty() || sa <= 1e-12L * sb) break;
    for (auto& v : a) v = -v / sa;
    trim(a);
    chain.push_back(std::move(a));
  }
  return chain;
}

// Diagonal similarity scaling by powers of two so row and column norms
// match; companion matrices of high degree are unusable without it.
inline void balance(Eigen::MatrixXd& A) {
  const Eigen::Index n = A.rows();
  for (bool done = false; !done;) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double c = 0.0, r = 0.0;
      for (Eigen::Index j = 0; j < n; ++j)
        if (j != i) {
          c += std::fabs(A(j, i));
          r += std::fabs(A(i, j));
        }
      if (c == 0.0 || r == 0.0) continue;
      const double s = c + r;
      double f = 1.0;
      while (c < r / 2) {
        f *= 2;
        c *= 4;
      }
      while (c > r * 2) {
        f /= 2;
        c /= 4;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        A.row(i) /= f;
        A.col(i) *= f;
      }
    }
  }
}

inline int sign_of(long double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

inline std::size_t sign_variations(const std::vector<int>& s) {
  std::size_t v = 0;
  int prev = 0;
  for (int x : s) {
    if (x == 0) continue;
    if (prev != 0 && x != prev) ++v;
    prev = x;
  }
  return v;
}

inline std::vector<int> chain_signs_at(const std::vector<std::vector<long double>>& chain, long double x) {
  std::vector<int> s;
  for (const auto& p : chain) s.push_back(sign_of(horner(p, x)));
  return s;
}

inline std::vector<int> chain_signs_at_infinity(const std::vector<std::vector<long double>>& chain, int dir) {
  std::vector<int> s;
  for (const auto& p : chain) {
    const int lead = sign_of(p.back());
    const bool odd = (p.size() - 1) % 2 == 1;
    s.push_back(dir < 0 && odd ? -lead : lead);
  }
  return s;
}

}  // namespace detail

/// Distinct real roots of sum c_k t^k (ascending), optionally restricted to
/// [interval.lo, interval.hi]. Counted from companion-matrix eigenvalues;
/// cross-checked by a Sturm chain up to degree 30 and by sign alternation
/// between the candidate roots above that.
inline RootCount real_root_count(std::span<const double> coefficients, std::optional<Interval> interval = {}) {
  std::vector<double> c(coefficients.begin(), coefficients.end());
  while (!c.empty() && c.back() == 0.0) c.pop_back();
  if (c.empty()) throw std::invalid_argument("real_root_count: zero polynomial");
  auto inside = [&](double x) { return !interval || (interval->lo <= x && x <= interval->hi); };

  std::size_t zero_mult = 0;
  while (zero_mult < c.size() && c[zero_mult] == 0.0) ++zero_mult;
  std::vector<double> q(c.begin() + static_cast<std::ptrdiff_t>(zero_mult), c.end());

  std::vector<double> real;
  if (zero_mult > 0) real.push_back(0.0);
  if (q.size() >= 2) {
    const auto m = static_cast<Eigen::Index>(q.size() - 1);
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 1; i < m; ++i) C(i, i - 1) = 1.0;
    for (Eigen::Index i = 0; i < m; ++i) C(i, m - 1) = -q[static_cast<std::size_t>(i)] / q.back();
    detail::balance(C);
    const Eigen::EigenSolver<Eigen::MatrixXd> es(C, false);
    for (Eigen::Index k = 0; k < m; ++k) {
      const auto z = es.eigenvalues()[k];
      if (std::fabs(z.imag()) <= 1e-7 * (1.0 + std::abs(z))) real.push_back(z.real());
    }
  }
  std::sort(real.begin(), real.end());
  std::vector<double> distinct;
  for (double x : real)
    if (distinct.empty() || std::fabs(x - distinct.back()) > 1e-7 * (1.0 + std::fabs(x))) distinct.push_back(x);

  RootCount r;
  for (double x : distinct) r.count += inside(x) ? 1 : 0;

  const std::size_t degree = c.size() - 1;
  if (degree <= 30) {
    r.cross_check_method = "sturm";
    const auto chain = detail::sturm_chain(c);
    const auto va = interval ? detail::chain_signs_at(chain, interval->lo) : detail::chain_signs_at_infinity(chain, -1);
    const auto vb = interval ? detail::chain_signs_at(chain, interval->hi) : detail::chain_signs_at_infinity(chain, 1);
    const std::size_t a = detail::sign_variations(va), b = detail::sign_variations(vb);
    r.cross_check = a >= b ? a - b : 0;
  } else {
    r.cross_check_method = "sign-alternation";
    std::vector<double> pts;
    std::vector<double> in;
    for (double x : distinct)
      if (inside(x)) in.push_back(x);
    if (!in.empty()) {
      const double gap = 1.0 + std::fabs(in.front());
      pts.push_back(interval ? interval->lo : in.front() - gap);
      for (std::size_t k = 0; k + 1 < in.size(); ++k) pts.push_back(0.5 * (in[k] + in[k + 1]));
      pts.push_back(interval ? interval->hi : in.back() + 1.0 + std::fabs(in.back()));
    }
    std::vector<long double> cl(c.begin(), c.end());
    std::size_t changes = 0;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k)
      if (detail::sign_of(detail::horner(cl, pts[k])) * detail::sign_of(detail::horner(cl, pts[k + 1])) < 0) ++changes;
    r.cross_check = changes;
  }
  r.agree = r.cross_check == r.count;
  return r;
}

inline RootCount real_root_count(const MultiPoly& p, std::optional<Interval> interval = {}) {
  const auto c = univariate_coefficients(p);
  return real_root_count(c, interval);
}

/// Binary form F(x0, x1) = sum_k c_k x0^{d-k} x1^k restricted to the circle
/// (cos t, sin t); F(t + pi) = (-1)^d F(t).
class BinaryFormOnCircle {
 public:
  explicit BinaryFormOnCircle(std::span<const double> c) : c_(c.begin(), c.end()) {
    if (c_.size() < 2) throw std::invalid_argument("binary form needs degree >= 1");
  }

  unsigned degree() const { return static_cast<unsigned>(c_.size() - 1); }

  double operator()(double t) const {
    const double cs = std::cos(t), sn = std::sin(t);
    const unsigned d = degree();
    double s = 0.0;
    if (std::fabs(cs) >= std::fabs(sn)) {
      const double u = sn / cs;
      for (std::size_t k = c_.size(); k-- > 0;) s = s * u + c_[k];
      return s * ipow(cs, d);
    }
    const double u = cs / sn;
    for (std::size_t k = 0; k < c_.size(); ++k) s = s * u + c_[k];
    return s * ipow(sn, d);
  }

 private:
  std::vector<double> c_;
};

/// Number of distinct real zeros of a binary form on RP^1, from sign changes
/// on a grid of `samples_per_degree * d` angles in [0, pi). A same-sign local
/// minimum of |F| is refined by golden section to detect nearby root pairs.
inline std::size_t projective_root_count(std::span<const double> c, unsigned samples_per_degree = 16) {
  BinaryFormOnCircle F(c);
  const unsigned d = F.degree();
  const std::size_t M = std::max<std::size_t>(64, static_cast<std::size_t>(samples_per_degree) * d);
  const double h = std::numbers::pi / static_cast<double>(M);
  std::vector<double> v(M);
  for (std::size_t i = 0; i < M; ++i) v[i] = F(h * static_cast<double>(i));
  const double flip = d % 2 ? -1.0 : 1.0;
  auto at = [&](std::ptrdiff_t i) {
    const auto m = static_cast<std::ptrdiff_t>(M);
    if (i < 0) return flip * v[static_cast<std::size_t>(i + m)];
    if (i >= m) return flip * v[static_cast<std::size_t>(i - m)];
    return v[static_cast<std::size_t>(i)];
  };
  auto positive = [](double x) { return x >= 0.0; };
  std::size_t count = 0;
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(M); ++i) {
    const double a = at(i - 1), b = at(i), e = at(i + 1);
    if (positive(b) != positive(e)) ++count;
    if (positive(a) == positive(b) && positive(b) == positive(e) && std::fabs(b) <= std::fabs(a) &&
        std::fabs(b) < std::fabs(e)) {
      const double s = positive(b) ? 1.0 : -1.0;
      const double t0 = h * static_cast<double>(i);
      auto m = golden_section_minimize([&](double t) { return s * F(t); }, t0 - h, t0 + h, 1e-13 * h);
      if (m.value < 0.0) count += 2;
    }
  }
  return count;
}

}  // namespace randhyp
