#pragma once

// Grid certification that (delta, epsilon) is a transversality pair for P
// on U:
//   (1) |P| > delta near the boundary of U, checked as a certified lower
//       bound for |P| on the boundary itself;
//   (2) |P(y)| < delta  =>  |dP(y)| > epsilon  at every y in U.
// Each grid cell carries second-order Taylor bounds from the value, gradient
// and Hessian at its centre plus a global third-derivative bound. Cells the
// bounds cannot settle get a two-constraint linear certificate and, failing
// that, are subdivided.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

#include "pairs.hpp"
#include "parallel.hpp"
#include "polycore.hpp"

namespace randhyp {

struct DeltaEpsilon {
  double delta = 0.0;
  double epsilon = 0.0;
};

struct TransversalityWitness {
  double delta = 0.0;
  double epsilon = 0.0;
  std::size_t grid_resolution = 0;
  bool verified = false;
  // Smallest sampled slack max(|P| - delta, |dP| - epsilon) over examined
  // cell centres and min |P| - delta over boundary samples. Negative means
  // an explicit counterexample was seen; verified == false with a positive
  // margin means the bounds were too coarse to certify.
  double worst_margin = 0.0;
  bool boundary_clause = false;
  bool band_clause = false;
  double boundary_lower_bound = 0.0;
  std::size_t uncertified_cells = 0;
  std::size_t subdivided_cells = 0;
};

inline void to_json(nlohmann::json& j, const TransversalityWitness& w) {
  j = {{"delta", w.delta},
       {"epsilon", w.epsilon},
       {"grid_resolution", w.grid_resolution},
       {"verified", w.verified},
       {"worst_margin", w.worst_margin},
       {"boundary_clause", w.boundary_clause},
       {"band_clause", w.band_clause},
       {"boundary_lower_bound", w.boundary_lower_bound},
       {"uncertified_cells", w.uncertified_cells},
       {"subdivided_cells", w.subdivided_cells}};
}

struct TransversalityOptions {
  unsigned threads = 1;
  int max_subdivision = -1;  // -1: 6 for n <= 2, 4 otherwise
  int boundary_max_depth = 8;
  std::size_t block = 8;
  std::size_t max_boundary_patches = 4'000'000;
};

namespace detail {

constexpr std::size_t kMaxJetDim = 4;

struct Jet {
  double p = 0.0;
  std::array<double, kMaxJetDim> g{};
  std::array<double, kMaxJetDim * kMaxJetDim> H{};
};

/// sum |c| prod amax_j^{e_j}: bounds |p| on the box |x_j| <= amax_j.
inline double coefficient_bound(const MultiPoly& p, std::span<const double> amax) {
  double s = 0.0;
  for (const auto& [I, c] : p.terms()) {
    double m = std::fabs(c);
    for (std::size_t j = 0; j < amax.size(); ++j) m *= ipow(amax[j], I[j]);
    s += m;
  }
  return s;
}

class JetEvaluator {
 public:
  explicit JetEvaluator(const MultiPoly& P) : n_(P.dimension()), value_(P), max_exp_(P.degree()) {
    for (std::size_t j = 0; j < n_; ++j) {
      const MultiPoly dj = P.derivative(j);
      grad_.emplace_back(dj);
      for (std::size_t k = j; k < n_; ++k) hess_.emplace_back(dj.derivative(k));
    }
  }

  std::size_t dimension() const { return n_; }
  unsigned max_exponent() const { return max_exp_; }

  void evaluate_rows(const double* const* pw, Jet& J) const {
    evaluate_first_order(pw, J);
    evaluate_hessian(pw, J);
  }

  void evaluate_first_order(const double* const* pw, Jet& J) const {
    J.p = value_.evaluate_rows(pw);
    for (std::size_t j = 0; j < n_; ++j) J.g[j] = grad_[j].evaluate_rows(pw);
  }

  void evaluate_hessian(const double* const* pw, Jet& J) const {
    std::size_t t = 0;
    for (std::size_t j = 0; j < n_; ++j)
      for (std::size_t k = j; k < n_; ++k) J.H[j * n_ + k] = J.H[k * n_ + j] = hess_[t++].evaluate_rows(pw);
  }

  void evaluate_at(const double* x, Jet& J) const {
    const std::size_t stride = max_exp_ + 1;
    std::array<double, kMaxJetDim * 64> local{};
    std::vector<double> heap;
    double* buf = local.data();
    if (n_ * stride > local.size()) {
      heap.resize(n_ * stride);
      buf = heap.data();
    }
    std::array<const double*, kMaxJetDim> rows{};
    for (std::size_t j = 0; j < n_; ++j) {
      double* r = buf + j * stride;
      r[0] = 1.0;
      for (std::size_t e = 1; e < stride; ++e) r[e] = r[e - 1] * x[j];
      rows[j] = r;
    }
    evaluate_rows(rows.data(), J);
  }

 private:
  std::size_t n_;
  CompiledPoly value_;
  std::vector<CompiledPoly> grad_;
  std::vector<CompiledPoly> hess_;
  unsigned max_exp_;
};

/// max over lambda in [0,1] of min over |v_j| <= w_j of
/// (1-lambda)(a.v - alpha) + lambda (b.v - beta). Positive means the
/// constraints a.v < alpha and b.v <= beta have no common solution in the box.
inline double two_constraint_certificate(const double* a, double alpha, const double* b, double beta,
                                         const double* w, std::size_t n) {
  auto m = [&](double l) {
    double s = -(1.0 - l) * alpha - l * beta;
    for (std::size_t j = 0; j < n; ++j) s -= std::fabs((1.0 - l) * a[j] + l * b[j]) * w[j];
    return s;
  };
  double best = std::max(m(0.0), m(1.0));
  for (std::size_t j = 0; j < n; ++j) {
    const double den = a[j] - b[j];
    if (den == 0.0) continue;
    const double l = a[j] / den;
    if (l > 0.0 && l < 1.0) best = std::max(best, m(l));
  }
  return best;
}

struct BandStats {
  std::vector<double> min_slack;
  std::vector<std::size_t> failures;
  std::size_t subdivided = 0;

  explicit BandStats(std::size_t k = 0)
      : min_slack(k, std::numeric_limits<double>::infinity()), failures(k, 0) {}
  void merge(const BandStats& o) {
    for (std::size_t k = 0; k < min_slack.size(); ++k) {
      min_slack[k] = std::min(min_slack[k], o.min_slack[k]);
      failures[k] += o.failures[k];
    }
    subdivided += o.subdivided;
  }
};

class TransversalitySweep {
 public:
  TransversalitySweep(const MultiPoly& P, const Domain& U, std::span<const DeltaEpsilon> targets,
                      std::size_t resolution, const TransversalityOptions& opt)
      : P_(P), U_(U), targets_(targets.begin(), targets.end()), N_(resolution), opt_(opt), jets_(P) {
    n_ = P.dimension();
    if (n_ > kMaxJetDim) throw std::invalid_argument("verify_transversality: dimension > 4 unsupported");
    if (domain_dimension(U) != n_) throw DimensionMismatch("verify_transversality: domain dimension mismatch");
    if (resolution < 16) throw std::invalid_argument("verify_transversality: resolution must be >= 16");
    if (targets_.empty()) throw std::invalid_argument("verify_transversality: no (delta, epsilon) targets");
    for (const auto& t : targets_)
      if (!(t.delta > 0) || !(t.epsilon > 0)) throw std::invalid_argument("verify_transversality: delta, epsilon must be > 0");
    max_depth_ = opt.max_subdivision >= 0 ? opt.max_subdivision : (n_ <= 2 ? 6 : 4);
    order_.resize(targets_.size());
    for (std::size_t k = 0; k < order_.size(); ++k) order_[k] = k;
    std::stable_sort(order_.begin(), order_.end(),
                     [&](std::size_t a, std::size_t b) { return targets_[a].delta < targets_[b].delta; });
    dmax_ = targets_[order_.back()].delta;

    box_ = bounding_box(U);
    std::vector<double> amax(n_);
    for (std::size_t j = 0; j < n_; ++j) {
      amax[j] = std::max(std::fabs(box_.lo[j]), std::fabs(box_.hi[j]));
      h_[j] = (box_.hi[j] - box_.lo[j]) / static_cast<double>(N_);
    }
    double m2 = 0.0, m3 = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
      const MultiPoly dj = P.derivative(j);
      for (std::size_t k = 0; k < n_; ++k) {
        const MultiPoly djk = dj.derivative(k);
        const double b2 = coefficient_bound(djk, amax);
        m2 += b2 * b2;
        for (std::size_t l = 0; l < n_; ++l) {
          const double b3 = coefficient_bound(djk.derivative(l), amax);
          m3 += b3 * b3;
        }
      }
    }
    M2_ = std::sqrt(m2);
    M3_ = std::sqrt(m3);

    stride_ = jets_.max_exponent() + 1;
    powers_.resize(n_);
    for (std::size_t j = 0; j < n_; ++j) {
      powers_[j].resize(N_ * stride_);
      for (std::size_t i = 0; i < N_; ++i) {
        const double x = cell_center(j, i);
        double* r = &powers_[j][i * stride_];
        r[0] = 1.0;
        for (std::size_t e = 1; e < stride_; ++e) r[e] = r[e - 1] * x;
      }
    }
  }

  std::vector<TransversalityWitness> run() {
    const BandStats band = sweep_band();
    double bmin_sample = std::numeric_limits<double>::infinity();
    const double blower = boundary_lower_bound(bmin_sample);
    std::vector<TransversalityWitness> out(targets_.size());
    for (std::size_t k = 0; k < targets_.size(); ++k) {
      auto& w = out[k];
      w.delta = targets_[k].delta;
      w.epsilon = targets_[k].epsilon;
      w.grid_resolution = N_;
      w.boundary_lower_bound = blower;
      w.boundary_clause = blower > w.delta;
      w.uncertified_cells = band.failures[k];
      w.band_clause = band.failures[k] == 0;
      w.subdivided_cells = band.subdivided;
      w.verified = w.boundary_clause && w.band_clause;
      w.worst_margin = std::min(band.min_slack[k], bmin_sample - w.delta);
    }
    return out;
  }

 private:
  double cell_center(std::size_t j, std::size_t i) const {
    return box_.lo[j] + (static_cast<double>(i) + 0.5) * h_[j];
  }

  bool box_meets_domain(const double* lo, const double* hi) const {
    const auto* ball = std::get_if<BallDomain>(&U_);
    if (!ball) return true;
    double s = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
      const double c = ball->center[j];
      const double d = c < lo[j] ? lo[j] - c : (c > hi[j] ? c - hi[j] : 0.0);
      s += d * d;
    }
    return s < ball->radius * ball->radius;
  }

  double frobenius(const Jet& J) const {
    double s = 0.0;
    for (std::size_t t = 0; t < n_ * n_; ++t) s += J.H[t] * J.H[t];
    return std::sqrt(s);
  }

  bool linear_certificate(const Jet& J, const double* w, double r, double Hc, double eP, double ng,
                          const DeltaEpsilon& t) const {
    const double upG = ng + Hc * r;
    const double eG = (Hc * Hc + upG * M3_) * r * r;
    std::array<double, kMaxJetDim> b{}, mg{};
    for (std::size_t j = 0; j < n_; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n_; ++k) s += J.H[j * n_ + k] * J.g[k];
      b[j] = 2.0 * s;
      mg[j] = -J.g[j];
    }
    const double beta = t.epsilon * t.epsilon - ng * ng + eG;
    const double alpha_plus = t.delta - J.p + eP;
    const double alpha_minus = t.delta + J.p + eP;
    return two_constraint_certificate(J.g.data(), alpha_plus, b.data(), beta, w, n_) > 0.0 ||
           two_constraint_certificate(mg.data(), alpha_minus, b.data(), beta, w, n_) > 0.0 ||
           two_constraint_certificate(J.g.data(), alpha_plus, mg.data(), alpha_minus, w, n_) > 0.0;
  }

  // Checks the cell with centre c and half-widths w against the targets in
  // `active` (indices into targets_, ascending delta).
  void process_cell(const double* c, const double* w, const Jet& J, int depth,
                    std::span<const std::size_t> active, BandStats& st) const {
    double r2 = 0.0, lin = 0.0, ng2 = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
      r2 += w[j] * w[j];
      lin += std::fabs(J.g[j]) * w[j];
      ng2 += J.g[j] * J.g[j];
    }
    const double r = std::sqrt(r2), ng = std::sqrt(ng2);
    const double Hc = frobenius(J) + M3_ * r;
    const double eP = 0.5 * Hc * r2;
    const double lowP = std::fabs(J.p) - lin - eP;
    const double lowG = ng - Hc * r;
    if (lowP >= targets_[active.back()].delta) return;

    std::array<std::size_t, 256> pend_buf;
    std::vector<std::size_t> pend_heap;
    std::size_t npend = 0;
    auto push = [&](std::size_t k) {
      if (npend < pend_buf.size()) pend_buf[npend] = k;
      else {
        if (pend_heap.empty()) pend_heap.assign(pend_buf.begin(), pend_buf.end());
        pend_heap.push_back(k);
      }
      ++npend;
    };
    auto first = std::partition_point(active.begin(), active.end(),
                                      [&](std::size_t k) { return targets_[k].delta <= lowP; });
    for (auto it = first; it != active.end(); ++it) {
      const std::size_t k = *it;
      const auto& t = targets_[k];
      st.min_slack[k] = std::min(st.min_slack[k], std::max(std::fabs(J.p) - t.delta, ng - t.epsilon));
      if (lowG > t.epsilon) continue;
      if (linear_certificate(J, w, r, Hc, eP, ng, t)) continue;
      push(k);
    }
    if (npend == 0) return;
    std::span<const std::size_t> pending =
        pend_heap.empty() ? std::span<const std::size_t>(pend_buf.data(), npend)
                          : std::span<const std::size_t>(pend_heap);
    if (depth >= max_depth_) {
      for (std::size_t k : pending) ++st.failures[k];
      return;
    }
    ++st.subdivided;
    std::array<double, kMaxJetDim> cw{}, cc{};
    for (std::size_t j = 0; j < n_; ++j) cw[j] = 0.5 * w[j];
    Jet child;
    for (std::size_t mask = 0; mask < (std::size_t{1} << n_); ++mask) {
      for (std::size_t j = 0; j < n_; ++j) cc[j] = c[j] + ((mask >> j) & 1u ? cw[j] : -cw[j]);
      jets_.evaluate_at(cc.data(), child);
      process_cell(cc.data(), cw.data(), child, depth + 1, pending, st);
    }
  }

  BandStats sweep_band() const {
    const std::size_t B = std::max<std::size_t>(opt_.block, 1);
    const std::size_t nb = (N_ + B - 1) / B;
    std::size_t nblocks = 1;
    for (std::size_t j = 0; j < n_; ++j) nblocks *= nb;
    const std::size_t chunk = 16;
    const std::size_t nchunks = (nblocks + chunk - 1) / chunk;
    auto parts = parallel_map<BandStats>(nchunks, opt_.threads, [&](std::size_t ch) {
      BandStats st(targets_.size());
      std::array<double, kMaxJetDim> lo{}, hi{}, c{}, W{}, w{};
      std::array<std::size_t, kMaxJetDim> b{}, i0{}, i1{}, ii{};
      std::array<const double*, kMaxJetDim> rows{};
      Jet J;
      for (std::size_t blk = ch * chunk; blk < std::min(nblocks, (ch + 1) * chunk); ++blk) {
        std::size_t rest = blk;
        for (std::size_t j = 0; j < n_; ++j) {
          b[j] = rest % nb;
          rest /= nb;
          i0[j] = b[j] * B;
          i1[j] = std::min(N_, i0[j] + B);
          lo[j] = box_.lo[j] + static_cast<double>(i0[j]) * h_[j];
          hi[j] = box_.lo[j] + static_cast<double>(i1[j]) * h_[j];
          c[j] = 0.5 * (lo[j] + hi[j]);
          W[j] = 0.5 * (hi[j] - lo[j]);
          w[j] = 0.5 * h_[j];
        }
        double r_cell = 0.0;
        for (std::size_t j = 0; j < n_; ++j) r_cell += w[j] * w[j];
        r_cell = std::sqrt(r_cell);
        if (!box_meets_domain(lo.data(), hi.data())) continue;
        jets_.evaluate_at(c.data(), J);
        double R2 = 0.0, lin = 0.0;
        for (std::size_t j = 0; j < n_; ++j) {
          R2 += W[j] * W[j];
          lin += std::fabs(J.g[j]) * W[j];
        }
        const double Hc = frobenius(J) + M3_ * std::sqrt(R2);
        if (std::fabs(J.p) - lin - 0.5 * Hc * R2 >= dmax_) continue;

        ii = i0;
        for (;;) {
          std::array<double, kMaxJetDim> clo{}, chi{};
          for (std::size_t j = 0; j < n_; ++j) {
            c[j] = cell_center(j, ii[j]);
            clo[j] = c[j] - w[j];
            chi[j] = c[j] + w[j];
            rows[j] = &powers_[j][ii[j] * stride_];
          }
          if (box_meets_domain(clo.data(), chi.data())) {
            jets_.evaluate_first_order(rows.data(), J);
            double lin0 = 0.0;
            for (std::size_t j = 0; j < n_; ++j) lin0 += std::fabs(J.g[j]) * w[j];
            if (std::fabs(J.p) - lin0 - 0.5 * (M2_ + M3_ * r_cell) * r_cell * r_cell < dmax_) {
              jets_.evaluate_hessian(rows.data(), J);
              process_cell(c.data(), w.data(), J, 0, order_, st);
            }
          }
          std::size_t j = 0;
          for (; j < n_; ++j) {
            if (++ii[j] < i1[j]) break;
            ii[j] = i0[j];
          }
          if (j == n_) break;
        }
      }
      return st;
    }, 1);
    BandStats total(targets_.size());
    for (const auto& p : parts) total.merge(p);
    return total;
  }

  // Certified lower bound for |P| on the boundary of U, refined until it
  // clears the largest delta or the depth limit is hit. Also records the
  // smallest sampled |P|.
  double boundary_lower_bound(double& sampled_min) const {
    const std::size_t faces = 2 * n_;
    const std::size_t m = n_ - 1;
    std::size_t Nb = N_;
    if (m > 0) {
      const double cap = std::pow(static_cast<double>(opt_.max_boundary_patches) / faces, 1.0 / m);
      Nb = std::max<std::size_t>(2, std::min<std::size_t>(N_, static_cast<std::size_t>(cap)));
    }
    std::size_t per_face = 1;
    for (std::size_t j = 0; j < m; ++j) per_face *= Nb;
    const std::size_t rows = faces * (m > 0 ? per_face / Nb : 1);
    const std::size_t row_len = m > 0 ? Nb : 1;
    struct Part {
      double lower = std::numeric_limits<double>::infinity();
      double sampled = std::numeric_limits<double>::infinity();
    };
    auto parts = parallel_map<Part>(rows, opt_.threads, [&](std::size_t row) {
      Part pt;
      const std::size_t rows_per_face = rows / faces;
      const std::size_t face = row / rows_per_face;
      std::size_t lin = (row % rows_per_face) * row_len;
      std::array<double, kMaxJetDim> u{};
      for (std::size_t q = 0; q < row_len; ++q, ++lin) {
        std::size_t rest = lin;
        for (std::size_t j = 0; j < m; ++j) {
          const std::size_t idx = rest % Nb;
          rest /= Nb;
          u[j] = -1.0 + (2.0 * static_cast<double>(idx) + 1.0) / static_cast<double>(Nb);
        }
        const double lb = patch_bound(face, u.data(), 1.0 / static_cast<double>(Nb), 0, pt.sampled);
        pt.lower = std::min(pt.lower, lb);
      }
      return pt;
    }, 4);
    double lower = std::numeric_limits<double>::infinity();
    for (const auto& p : parts) {
      lower = std::min(lower, p.lower);
      sampled_min = std::min(sampled_min, p.sampled);
    }
    return lower;
  }

  // Patch of face `face` (axis face / 2, sign by parity) with normalized
  // face coordinates u in [-1,1]^{n-1} and half-width hw.
  double patch_bound(std::size_t face, const double* u, double hw, int depth, double& sampled) const {
    const std::size_t axis = face / 2;
    const double sgn = face % 2 ? 1.0 : -1.0;
    const std::size_t m = n_ - 1;
    std::array<double, kMaxJetDim> y{}, q{};
    double bound;
    Jet J;
    if (const auto* ball = std::get_if<BallDomain>(&U_)) {
      double qn = 0.0;
      for (std::size_t j = 0, t = 0; j < n_; ++j) {
        q[j] = j == axis ? sgn : u[t++];
        qn += q[j] * q[j];
      }
      qn = std::sqrt(qn);
      const double R = ball->radius;
      for (std::size_t j = 0; j < n_; ++j) y[j] = ball->center[j] + R * q[j] / qn;
      jets_.evaluate_at(y.data(), J);
      double gn = 0.0, g2 = 0.0;
      for (std::size_t j = 0; j < n_; ++j) {
        gn += J.g[j] * q[j] / qn;
        g2 += J.g[j] * J.g[j];
      }
      const double gt = std::sqrt(std::max(0.0, g2 - gn * gn));
      const double rho = R * hw * std::sqrt(static_cast<double>(m));
      bound = std::fabs(J.p) - gt * rho - std::fabs(gn) * rho * rho / (2.0 * R) - 0.5 * M2_ * rho * rho;
    } else {
      const auto& bx = std::get<BoxDomain>(U_);
      double lin = 0.0, rho2 = 0.0;
      std::array<double, kMaxJetDim> w{};
      for (std::size_t j = 0, t = 0; j < n_; ++j) {
        if (j == axis) {
          y[j] = sgn > 0 ? bx.hi[j] : bx.lo[j];
          continue;
        }
        const double half = 0.5 * (bx.hi[j] - bx.lo[j]);
        y[j] = bx.lo[j] + half * (1.0 + u[t++]);
        w[j] = half * hw;
        rho2 += w[j] * w[j];
      }
      jets_.evaluate_at(y.data(), J);
      for (std::size_t j = 0; j < n_; ++j) lin += std::fabs(J.g[j]) * w[j];
      bound = std::fabs(J.p) - lin - 0.5 * M2_ * rho2;
    }
    sampled = std::min(sampled, std::fabs(J.p));
    if (bound > dmax_ || depth >= opt_.boundary_max_depth || m == 0) return bound;
    double best = std::numeric_limits<double>::infinity();
    std::array<double, kMaxJetDim> cu{};
    for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
      for (std::size_t j = 0; j < m; ++j) cu[j] = u[j] + ((mask >> j) & 1u ? 0.5 * hw : -0.5 * hw);
      best = std::min(best, patch_bound(face, cu.data(), 0.5 * hw, depth + 1, sampled));
    }
    return std::max(bound, best);
  }

  const MultiPoly& P_;
  Domain U_;
  std::vector<DeltaEpsilon> targets_;
  std::size_t N_;
  TransversalityOptions opt_;
  JetEvaluator jets_;
  std::size_t n_ = 1;
  int max_depth_ = 4;
  std::vector<std::size_t> order_;
  double dmax_ = 0.0;
  BoxDomain box_;
  std::array<double, kMaxJetDim> h_{};
  double M2_ = 0.0, M3_ = 0.0;
  std::size_t stride_ = 1;
  std::vector<std::vector<double>> powers_;
};

}  // namespace detail

inline std::vector<TransversalityWitness> verify_transversality_batch(
    const MultiPoly& P, const Domain& U, std::span<const DeltaEpsilon> targets, std::size_t resolution,
    const TransversalityOptions& opt = {}) {
  validate_domain(U);
  return detail::TransversalitySweep(P, U, targets, resolution, opt).run();
}

inline std::vector<TransversalityWitness> verify_transversality_batch(
    const RegularPair& pair, std::span<const DeltaEpsilon> targets, std::size_t resolution,
    const TransversalityOptions& opt = {}) {
  return verify_transversality_batch(pair.polynomial, pair.domain, targets, resolution, opt);
}

inline TransversalityWitness verify_transversality(const RegularPair& pair, double delta, double epsilon,
                                                   std::size_t resolution, const TransversalityOptions& opt = {}) {
  const DeltaEpsilon t{delta, epsilon};
  return verify_transversality_batch(pair, std::span(&t, 1), resolution, opt).front();
}

/// (delta, epsilon * (1 - shrink)) at `count` equispaced interior parameters
/// of the pair's family (the single point for a one-point family).
inline std::vector<DeltaEpsilon> family_targets(const RegularPair& pair, std::size_t count, double shrink) {
  std::vector<DeltaEpsilon> out;
  const auto& f = pair.family;
  if (f.single_point()) {
    auto [d, e] = f.at(f.lo);
    out.push_back({d, e * (1.0 - shrink)});
    return out;
  }
  for (std::size_t k = 1; k <= count; ++k) {
    const double t = f.lo + (f.hi - f.lo) * static_cast<double>(k) / static_cast<double>(count + 1);
    auto [d, e] = f.at(t);
    out.push_back({d, e * (1.0 - shrink)});
  }
  return out;
}

struct BarrierCheck {
  bool holds = false;
  std::size_t d = 1;
  TransversalityWitness witness;
};

/// sigma_d(y) = d^{n/2} P(sqrt(d) y) on U / sqrt(d): checks that
/// |sigma_d| < (delta/2) d^{n/2} forces |d sigma_d| > (epsilon/2) d^{(n+1)/2}.
inline MultiPoly rescaled_barrier(const MultiPoly& P, std::size_t d) {
  const double sd = std::sqrt(static_cast<double>(d));
  return P.scaled_variables(sd) * std::pow(sd, static_cast<double>(P.dimension()));
}

inline BarrierCheck barrier_rescale_check(const RegularPair& pair, std::size_t d, double delta, double epsilon,
                                          std::size_t resolution, const TransversalityOptions& opt = {}) {
  if (d == 0) throw std::invalid_argument("barrier_rescale_check: d must be >= 1");
  const double sd = std::sqrt(static_cast<double>(d));
  const double n = static_cast<double>(pair.n);
  Domain Ud;
  if (const auto* b = std::get_if<BallDomain>(&pair.domain)) {
    BallDomain s = *b;
    for (double& c : s.center) c /= sd;
    s.radius /= sd;
    Ud = s;
  } else {
    BoxDomain s = std::get<BoxDomain>(pair.domain);
    for (double& v : s.lo) v /= sd;
    for (double& v : s.hi) v /= sd;
    Ud = s;
  }
  const DeltaEpsilon t{0.5 * delta * std::pow(sd, n), 0.5 * epsilon * std::pow(sd, n + 1.0)};
  BarrierCheck r;
  r.d = d;
  r.witness = verify_transversality_batch(rescaled_barrier(pair.polynomial, d), Ud, std::span(&t, 1), resolution, opt).front();
  r.holds = r.witness.verified;
  return r;
}

}  // namespace randhyp
