#pragma once

// Connected components of zero sets: intervals in 1-D, sign grids with
// marching squares and union-find in 2-D and on the 2-sphere.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "pairs.hpp"
#include "polycore.hpp"
#include "roots.hpp"

namespace randhyp {

struct ComponentReport {
  std::size_t count = 0;  // components disjoint from the domain boundary
  std::size_t touching_boundary = 0;
  unsigned refinement_depth = 0;  // log2 of the finest local subdivision used
  std::size_t resolution = 0;     // coarse cells per side
  bool confident = true;
  std::size_t ambiguous_cells = 0;
  std::optional<std::size_t> projective_count;  // sphere only: components in RP^2
};

inline void to_json(nlohmann::json& j, const ComponentReport& r) {
  j = {{"count", r.count},
       {"touching_boundary", r.touching_boundary},
       {"refinement_depth", r.refinement_depth},
       {"resolution", r.resolution},
       {"confident", r.confident},
       {"ambiguous_cells", r.ambiguous_cells}};
  if (r.projective_count) j["projective_count"] = *r.projective_count;
}

struct ZeroSetOptions {
  // A cell is near the zero set when min |f| < lambda * diam * max |grad f|.
  // It is ambiguous when, in addition, a quadratic model puts a critical
  // point within half a cell whose critical value is below
  // |Hess| * (lambda * h / 4)^2.
  double lambda = 4.0;
};

/// Polynomial in two variables evaluated on tensor grids.
class PolynomialPlanarField {
 public:
  explicit PolynomialPlanarField(const MultiPoly& p) : poly_(p) {
    if (p.dimension() != 2) throw DimensionMismatch("planar field needs a polynomial in 2 variables");
  }
  void evaluate_grid(std::span<const double> xs, std::span<const double> ys, Eigen::MatrixXd& F,
                     Eigen::MatrixXd& Fx, Eigen::MatrixXd& Fy) const {
    const auto m = static_cast<Eigen::Index>(xs.size()), k = static_cast<Eigen::Index>(ys.size());
    F.resize(m, k);
    Fx.resize(m, k);
    Fy.resize(m, k);
    std::vector<double> g;
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < k; ++j) {
        const double x[2] = {xs[i], ys[j]};
        F(i, j) = poly_.value_and_gradient(x, g);
        Fx(i, j) = g[0];
        Fy(i, j) = g[1];
      }
  }

 private:
  CompiledPoly poly_;
};

namespace detail {

class UnionFind {
 public:
  std::size_t add() {
    parent_.push_back(parent_.size());
    return parent_.size() - 1;
  }
  std::size_t find(std::size_t a) {
    while (parent_[a] != a) a = parent_[a] = parent_[parent_[a]];
    return a;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }
  std::size_t size() const { return parent_.size(); }

 private:
  std::vector<std::size_t> parent_;
};

enum VertexState : std::uint8_t { interior = 0, on_boundary = 1, outside = 2 };

// (Ni+1) x (Nj+1) samples of a chart rectangle, row-major in (i, j).
struct MeshFace {
  std::size_t Ni = 0, Nj = 0;
  std::vector<std::uint64_t> id;
  std::vector<double> f;
  std::vector<std::array<double, 3>> grad;
  std::vector<std::array<double, 3>> pos;
  std::vector<std::uint8_t> state;

  void resize(std::size_t ni, std::size_t nj) {
    Ni = ni;
    Nj = nj;
    const std::size_t V = (ni + 1) * (nj + 1);
    id.resize(V);
    f.resize(V);
    grad.resize(V);
    pos.resize(V);
    state.assign(V, interior);
  }
  std::size_t at(std::size_t i, std::size_t j) const { return i * (Nj + 1) + j; }
  std::array<std::size_t, 4> cell(std::size_t i, std::size_t j) const {
    return {at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)};
  }
};

// One chart of a mesh. sample(i0, j0, ci, cj, k) returns the rectangle of
// ci x cj coarse cells at (i0, j0), each split k x k; vertices on coarse
// lattice points must reproduce the coarse samples bit for bit.
struct Chart {
  std::size_t N = 0;
  std::function<MeshFace(std::size_t, std::size_t, std::size_t, std::size_t, std::size_t)> sample;
  std::function<std::uint64_t(std::size_t, std::size_t)> coarse_id;
};

inline double dist3(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) + (a[2] - b[2]) * (a[2] - b[2]));
}
inline double norm3(const std::array<double, 3>& a) { return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]); }

inline bool is_ambiguous(const MeshFace& F, const std::array<std::size_t, 4>& c, const ZeroSetOptions& opt) {
  double fmin = INFINITY, gmax = 0.0;
  for (auto v : c) {
    fmin = std::min(fmin, std::fabs(F.f[v]));
    gmax = std::max(gmax, norm3(F.grad[v]));
  }
  const double diam = std::max(dist3(F.pos[c[0]], F.pos[c[2]]), dist3(F.pos[c[1]], F.pos[c[3]]));
  if (!(fmin < opt.lambda * diam * gmax)) return false;

  // frame along the cell edges 0->1 (u) and 0->3 (v)
  std::array<double, 3> eu, ev;
  for (int t = 0; t < 3; ++t) {
    eu[t] = 0.5 * (F.pos[c[1]][t] - F.pos[c[0]][t] + F.pos[c[2]][t] - F.pos[c[3]][t]);
    ev[t] = 0.5 * (F.pos[c[3]][t] - F.pos[c[0]][t] + F.pos[c[2]][t] - F.pos[c[1]][t]);
  }
  const double hu = norm3(eu), hv = norm3(ev);
  for (int t = 0; t < 3; ++t) {
    eu[t] /= hu;
    ev[t] /= hv;
  }
  std::array<double, 4> gu, gv;
  for (int a = 0; a < 4; ++a) {
    const auto& g = F.grad[c[a]];
    gu[a] = g[0] * eu[0] + g[1] * eu[1] + g[2] * eu[2];
    gv[a] = g[0] * ev[0] + g[1] * ev[1] + g[2] * ev[2];
  }
  const double huu = 0.5 * (gu[1] - gu[0] + gu[2] - gu[3]) / hu;
  const double hvv = 0.5 * (gv[3] - gv[0] + gv[2] - gv[1]) / hv;
  const double huv = 0.25 * ((gu[3] - gu[0] + gu[2] - gu[1]) / hv + (gv[1] - gv[0] + gv[2] - gv[3]) / hu);
  const double g0u = 0.25 * (gu[0] + gu[1] + gu[2] + gu[3]);
  const double g0v = 0.25 * (gv[0] + gv[1] + gv[2] + gv[3]);
  const double f0 = 0.25 * (F.f[c[0]] + F.f[c[1]] + F.f[c[2]] + F.f[c[3]]);
  const double hnorm = std::sqrt(huu * huu + 2 * huv * huv + hvv * hvv);
  const double det = huu * hvv - huv * huv;
  const double h = std::max(hu, hv);
  if (std::fabs(det) <= 1e-12 * hnorm * hnorm) return std::hypot(g0u, g0v) <= hnorm * h;
  // critical point of the model, relative to the cell center
  const double su = -(hvv * g0u - huv * g0v) / det;
  const double sv = -(huu * g0v - huv * g0u) / det;
  if (std::fabs(su) > hu || std::fabs(sv) > hv) return false;
  const double value = f0 + 0.5 * (g0u * su + g0v * sv);
  const double scale = 0.25 * opt.lambda * h;
  return std::fabs(value) < hnorm * scale * scale;
}

class MeshComponents {
 public:
  void add_cell(const MeshFace& F, const std::array<std::size_t, 4>& c) {
    bool any_out = false, all_out = true;
    for (auto v : c) {
      any_out = any_out || F.state[v] == outside;
      all_out = all_out && F.state[v] == outside;
    }
    if (all_out) return;
    std::array<std::optional<std::size_t>, 4> e;
    for (int k = 0; k < 4; ++k) e[k] = edge_node(F, c[k], c[(k + 1) % 4]);
    std::vector<std::size_t> present;
    for (const auto& x : e)
      if (x) present.push_back(*x);
    // the curve may leave through an edge with both ends outside, which has no node
    if (any_out)
      for (auto x : present) touching_[x] = true;
    if (present.size() < 2) return;
    if (any_out || present.size() == 2) {
      for (std::size_t k = 1; k < present.size(); ++k) uf_.unite(present[0], present[k]);
      return;
    }
    // saddle cell: asymptotic decider on the bilinear interpolant
    const double f0 = F.f[c[0]], f1 = F.f[c[1]], f2 = F.f[c[2]], f3 = F.f[c[3]];
    const double den = f0 + f2 - f1 - f3;
    const double center = den != 0.0 ? (f0 * f2 - f1 * f3) / den : 0.25 * (f0 + f1 + f2 + f3);
    if ((center >= 0) == (f0 >= 0)) {
      // corners 0 and 2 joined through the middle: cut off corners 1 and 3
      uf_.unite(*e[0], *e[1]);
      uf_.unite(*e[2], *e[3]);
    } else {
      uf_.unite(*e[3], *e[0]);
      uf_.unite(*e[1], *e[2]);
    }
  }

  // node for the edge (p, q) if the zero set crosses it
  std::optional<std::size_t> edge_node(const MeshFace& F, std::size_t p, std::size_t q) {
    if (F.state[p] == outside && F.state[q] == outside) return std::nullopt;
    if ((F.f[p] >= 0) == (F.f[q] >= 0)) return std::nullopt;
    const auto [it, fresh] = node_.try_emplace(key(F.id[p], F.id[q]), uf_.size());
    if (fresh) {
      uf_.add();
      touching_.push_back(F.state[p] == outside || F.state[q] == outside ||
                          (F.state[p] == on_boundary && F.state[q] == on_boundary));
    }
    return it->second;
  }

  std::optional<std::size_t> find_edge(std::uint64_t a, std::uint64_t b) const {
    const auto it = node_.find(key(a, b));
    if (it == node_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t add_isolated(bool touching) {
    touching_.push_back(touching);
    return uf_.add();
  }

  void unite(std::size_t a, std::size_t b) { uf_.unite(a, b); }
  std::size_t find(std::size_t a) { return uf_.find(a); }
  bool touching(std::size_t a) const { return touching_[a]; }
  std::size_t size() const { return uf_.size(); }
  const std::unordered_map<std::uint64_t, std::size_t>& nodes() const { return node_; }

  // root -> whether any member touches the domain boundary
  std::unordered_map<std::size_t, bool> components() {
    std::unordered_map<std::size_t, bool> c;
    for (std::size_t k = 0; k < uf_.size(); ++k) {
      auto [it, fresh] = c.try_emplace(uf_.find(k), false);
      it->second = it->second || touching_[k];
    }
    return c;
  }

 private:
  static std::uint64_t key(std::uint64_t a, std::uint64_t b) { return a < b ? (a << 32) | b : (b << 32) | a; }

  UnionFind uf_;
  std::vector<bool> touching_;
  std::unordered_map<std::uint64_t, std::size_t> node_;
};

struct Rect {
  std::size_t i0, j0, i1, j1;  // cells [i0, i1) x [j0, j1)
  bool overlaps_or_touches(const Rect& o) const { return i0 <= o.i1 && o.i0 <= i1 && j0 <= o.j1 && o.j0 <= j1; }
  void absorb(const Rect& o) {
    i0 = std::min(i0, o.i0);
    j0 = std::min(j0, o.j0);
    i1 = std::max(i1, o.i1);
    j1 = std::max(j1, o.j1);
  }
  bool contains(std::size_t i, std::size_t j) const { return i0 <= i && i < i1 && j0 <= j && j < j1; }
  std::size_t cells() const { return (i1 - i0) * (j1 - j0); }
};

inline void merge_rects(std::vector<Rect>& r) {
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t a = 0; a < r.size() && !changed; ++a)
      for (std::size_t b = a + 1; b < r.size(); ++b)
        if (r[a].overlaps_or_touches(r[b])) {
          r[a].absorb(r[b]);
          r.erase(r.begin() + static_cast<std::ptrdiff_t>(b));
          changed = true;
          break;
        }
  }
}

// Connectivity of a refined patch in terms of coarse edges: each group is
// one fine component, listed by the coarse boundary edges it crosses.
struct PatchPlan {
  struct Group {
    std::vector<std::pair<std::size_t, std::size_t>> coarse_edges;  // coarse vertex indices
    bool touching = false;
  };
  enum class Status { resolved, ambiguous, mismatch } status = Status::ambiguous;
  std::vector<Group> groups;
  unsigned depth = 0;
};

inline PatchPlan plan_patch(const Chart& chart, const MeshFace& coarse, const Rect& r, unsigned max_depth,
                            const ZeroSetOptions& opt) {
  PatchPlan plan;
  for (unsigned depth = 1; depth <= max_depth; ++depth) {
    const std::size_t k = std::size_t{1} << depth;
    MeshFace F = chart.sample(r.i0, r.j0, r.i1 - r.i0, r.j1 - r.j0, k);
    for (std::size_t v = 0; v < F.id.size(); ++v) F.id[v] = v;
    bool ambiguous = false;
    for (std::size_t i = 0; i < F.Ni && !ambiguous; ++i)
      for (std::size_t j = 0; j < F.Nj; ++j)
        if (is_ambiguous(F, F.cell(i, j), opt)) {
          ambiguous = true;
          break;
        }
    if (ambiguous) continue;
    MeshComponents L;
    for (std::size_t i = 0; i < F.Ni; ++i)
      for (std::size_t j = 0; j < F.Nj; ++j) L.add_cell(F, F.cell(i, j));

    // walk the patch boundary one coarse edge at a time
    std::unordered_map<std::size_t, std::pair<std::size_t, std::size_t>> crossing;  // fine node -> coarse edge
    std::vector<std::size_t> near_boundary;
    auto walk = [&](std::size_t ci0, std::size_t cj0, std::size_t di, std::size_t dj, std::size_t steps) {
      for (std::size_t s = 0; s < steps; ++s) {
        const std::size_t pi = ci0 + s * di, pj = cj0 + s * dj;
        const std::size_t P = coarse.at(pi, pj), Q = coarse.at(pi + di, pj + dj);
        const bool domain_edge = coarse.state[P] == outside || coarse.state[Q] == outside ||
                                 (coarse.state[P] == on_boundary && coarse.state[Q] == on_boundary);
        const bool coarse_cross = (coarse.f[P] >= 0) != (coarse.f[Q] >= 0);
        std::size_t fine = 0;
        for (std::size_t t = 0; t < k; ++t) {
          const std::size_t a = F.at((pi - r.i0) * k + t * di, (pj - r.j0) * k + t * dj);
          const std::size_t b = F.at((pi - r.i0) * k + (t + 1) * di, (pj - r.j0) * k + (t + 1) * dj);
          if (const auto node = L.find_edge(F.id[a], F.id[b])) {
            ++fine;
            // on a domain edge the curve is within a coarse cell of the
            // boundary, which the coarse mesh counts as touching
            if (domain_edge) near_boundary.push_back(*node);
            if (!domain_edge || coarse_cross) crossing[*node] = {P, Q};
          }
        }
        if (!domain_edge && fine != (coarse_cross ? 1u : 0u)) return false;
      }
      return true;
    };
    const std::size_t wi = r.i1 - r.i0, wj = r.j1 - r.j0;
    if (!(walk(r.i0, r.j0, 1, 0, wi) && walk(r.i0, r.j1, 1, 0, wi) && walk(r.i0, r.j0, 0, 1, wj) &&
          walk(r.i1, r.j0, 0, 1, wj))) {
      plan.status = PatchPlan::Status::mismatch;
      return plan;
    }
    std::unordered_map<std::size_t, std::size_t> group_of_root;
    for (std::size_t node = 0; node < L.size(); ++node) {
      const std::size_t root = L.find(node);
      auto [it, fresh] = group_of_root.try_emplace(root, plan.groups.size());
      if (fresh) plan.groups.emplace_back();
      auto& g = plan.groups[it->second];
      g.touching = g.touching || L.touching(node);
      if (const auto c = crossing.find(node); c != crossing.end()) g.coarse_edges.push_back(c->second);
    }
    for (std::size_t node : near_boundary) plan.groups[group_of_root.at(L.find(node))].touching = true;
    plan.status = PatchPlan::Status::resolved;
    plan.depth = depth;
    return plan;
  }
  return plan;
}

struct ChartResult {
  std::size_t ambiguous_cells = 0;
  unsigned depth = 0;
};

// Adds one chart to the mesh: coarse cells directly, ambiguous clusters by
// local refinement.
inline ChartResult add_chart(MeshComponents& mesh, const Chart& chart, unsigned max_depth, const ZeroSetOptions& opt) {
  MeshFace coarse = chart.sample(0, 0, chart.N, chart.N, 1);
  for (std::size_t i = 0; i <= chart.N; ++i)
    for (std::size_t j = 0; j <= chart.N; ++j) coarse.id[coarse.at(i, j)] = chart.coarse_id(i, j);

  const std::size_t N = chart.N;
  std::vector<Rect> rects;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) {
      const auto c = coarse.cell(i, j);
      bool all_out = true;
      for (auto v : c) all_out = all_out && coarse.state[v] == outside;
      if (!all_out && is_ambiguous(coarse, c, opt))
        rects.push_back({i == 0 ? 0 : i - 1, j == 0 ? 0 : j - 1, std::min(N, i + 2), std::min(N, j + 2)});
    }
  merge_rects(rects);

  ChartResult res;
  std::vector<PatchPlan> plans;
  std::vector<bool> failed;
  for (bool again = true; again;) {
    again = false;
    plans.assign(rects.size(), {});
    failed.assign(rects.size(), false);
    for (std::size_t p = 0; p < rects.size(); ++p) {
      plans[p] = plan_patch(chart, coarse, rects[p], max_depth, opt);
      if (plans[p].status == PatchPlan::Status::mismatch) {
        Rect& r = rects[p];
        const Rect grown{r.i0 == 0 ? 0 : r.i0 - 1, r.j0 == 0 ? 0 : r.j0 - 1, std::min(N, r.i1 + 1),
                         std::min(N, r.j1 + 1)};
        if (grown.cells() > r.cells() && grown.cells() <= 64) {
          r = grown;
          merge_rects(rects);
          again = true;
          break;
        }
      }
      failed[p] = plans[p].status != PatchPlan::Status::resolved;
    }
  }

  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) {
      bool in_resolved = false;
      for (std::size_t p = 0; p < rects.size(); ++p) in_resolved = in_resolved || (!failed[p] && rects[p].contains(i, j));
      if (!in_resolved) mesh.add_cell(coarse, coarse.cell(i, j));
    }
  for (std::size_t p = 0; p < rects.size(); ++p) {
    if (failed[p]) {
      for (std::size_t i = rects[p].i0; i < rects[p].i1; ++i)
        for (std::size_t j = rects[p].j0; j < rects[p].j1; ++j)
          res.ambiguous_cells += is_ambiguous(coarse, coarse.cell(i, j), opt) ? 1 : 0;
      res.depth = std::max(res.depth, max_depth);
      continue;
    }
    res.depth = std::max(res.depth, plans[p].depth);
    for (const auto& g : plans[p].groups) {
      std::optional<std::size_t> anchor;
      for (const auto& [P, Q] : g.coarse_edges) {
        const std::size_t node = mesh.edge_node(coarse, P, Q).value();
        if (anchor) mesh.unite(*anchor, node);
        else anchor = node;
      }
      if (g.touching || !anchor) {
        const std::size_t node = mesh.add_isolated(g.touching);
        if (anchor) mesh.unite(*anchor, node);
      }
    }
  }
  return res;
}

template <class Field>
Chart planar_chart(const Field& field, const Domain& domain, std::size_t N) {
  if (domain_dimension(domain) != 2) throw DimensionMismatch("planar grid needs a 2-D domain");
  const auto box = bounding_box(domain);
  std::optional<BallDomain> disk;
  if (const auto* ball = std::get_if<BallDomain>(&domain)) disk = *ball;
  Chart c;
  c.N = N;
  c.coarse_id = [N](std::size_t i, std::size_t j) { return static_cast<std::uint64_t>(i * (N + 1) + j); };
  c.sample = [&field, box, disk, N](std::size_t i0, std::size_t j0, std::size_t ci, std::size_t cj, std::size_t k) {
    const std::size_t total = N * k;
    auto coord = [&](std::size_t g, int axis) {
      const double t = static_cast<double>(g) / static_cast<double>(total);
      return g == total ? box.hi[axis] : box.lo[axis] + t * (box.hi[axis] - box.lo[axis]);
    };
    std::vector<double> xs(ci * k + 1), ys(cj * k + 1);
    for (std::size_t a = 0; a < xs.size(); ++a) xs[a] = coord(i0 * k + a, 0);
    for (std::size_t b = 0; b < ys.size(); ++b) ys[b] = coord(j0 * k + b, 1);
    Eigen::MatrixXd F, Fx, Fy;
    field.evaluate_grid(xs, ys, F, Fx, Fy);
    MeshFace m;
    m.resize(ci * k, cj * k);
    for (std::size_t a = 0; a < xs.size(); ++a)
      for (std::size_t b = 0; b < ys.size(); ++b) {
        const std::size_t v = m.at(a, b);
        const auto ea = static_cast<Eigen::Index>(a), eb = static_cast<Eigen::Index>(b);
        m.f[v] = F(ea, eb);
        m.grad[v] = {Fx(ea, eb), Fy(ea, eb), 0.0};
        m.pos[v] = {xs[a], ys[b], 0.0};
        if (disk) {
          const double dx = xs[a] - disk->center[0], dy = ys[b] - disk->center[1];
          m.state[v] = dx * dx + dy * dy < disk->radius * disk->radius ? interior : outside;
        } else {
          const std::size_t gi = i0 * k + a, gj = j0 * k + b;
          m.state[v] = (gi == 0 || gj == 0 || gi == total || gj == total) ? on_boundary : interior;
        }
      }
    return m;
  };
  return c;
}

}  // namespace detail

/// Components of {f = 0} in a 2-D ball or box on a grid with `base` cells
/// per side; ambiguous cells are refined locally up to 2^max_depth times.
/// Field needs evaluate_grid(xs, ys, F, Fx, Fy).
template <class Field>
ComponentReport grid_components(const Field& field, const Domain& domain, std::size_t base, unsigned max_depth,
                                const ZeroSetOptions& opt = {}) {
  validate_domain(domain);
  if (base < 2) throw std::invalid_argument("grid_components: base resolution must be >= 2");
  detail::MeshComponents mesh;
  const auto res = detail::add_chart(mesh, detail::planar_chart(field, domain, base), max_depth, opt);
  ComponentReport r;
  r.resolution = base;
  r.refinement_depth = res.depth;
  r.ambiguous_cells = res.ambiguous_cells;
  r.confident = res.ambiguous_cells == 0;
  for (const auto& [root, touching] : mesh.components()) ++(touching ? r.touching_boundary : r.count);
  return r;
}

/// Isolated zeros of a univariate polynomial in an interval (1-D ball or
/// box), counted exactly; confidence is agreement of the two root counts.
inline ComponentReport interval_components(const MultiPoly& p, const Domain& domain) {
  validate_domain(domain);
  if (p.dimension() != 1 || domain_dimension(domain) != 1) throw DimensionMismatch("interval_components needs n = 1");
  const auto box = bounding_box(domain);
  const auto c = univariate_coefficients(p);
  const auto closed = real_root_count(c, Interval{box.lo[0], box.hi[0]});
  ComponentReport r;
  const double lo = evaluate(p, std::vector<double>{box.lo[0]});
  const double hi = evaluate(p, std::vector<double>{box.hi[0]});
  r.touching_boundary = (lo == 0.0 ? 1 : 0) + (hi == 0.0 ? 1 : 0);
  r.count = closed.count - std::min(closed.count, r.touching_boundary);
  r.confident = closed.agree;
  r.ambiguous_cells = closed.agree ? 0 : 1;
  return r;
}

/// Exact interval count for n = 1, grid for n = 2.
inline ComponentReport polynomial_components(const MultiPoly& p, const Domain& domain, std::size_t base = 128,
                                             unsigned max_depth = 6, const ZeroSetOptions& opt = {}) {
  if (p.dimension() == 1) return interval_components(p, domain);
  if (p.dimension() == 2) return grid_components(PolynomialPlanarField(p), domain, base, max_depth, opt);
  throw DimensionMismatch("component counting supports n = 1 and n = 2");
}

namespace detail {

inline bool is_homogeneous(const MultiPoly& p) {
  if (p.is_zero()) return false;
  const unsigned d = p.terms().begin()->first.degree();
  for (const auto& [I, c] : p.terms())
    if (I.degree() != d) return false;
  return true;
}

// Face k of the cube [-1,1]^3: axis k/2 fixed at -1 (even k) or +1 (odd k),
// projected radially to the sphere. Coarse ids are lattice coordinates, so
// the seams between faces share vertices.
inline Chart cube_chart(const CompiledPoly& p, std::size_t N, int face) {
  const int axis = face / 2, a1 = (axis + 1) % 3, a2 = (axis + 2) % 3;
  const std::size_t fixed = (face % 2) ? N : 0;
  Chart c;
  c.N = N;
  c.coarse_id = [=](std::size_t i, std::size_t j) {
    std::array<std::uint64_t, 3> L{};
    L[axis] = fixed;
    L[a1] = i;
    L[a2] = j;
    return (L[0] * (N + 1) + L[1]) * (N + 1) + L[2];
  };
  c.sample = [&p, N, axis, a1, a2, fixed](std::size_t i0, std::size_t j0, std::size_t ci, std::size_t cj,
                                          std::size_t k) {
    MeshFace m;
    m.resize(ci * k, cj * k);
    const auto total = static_cast<std::int64_t>(N * k);
    // (2g - total) / total negates exactly under g -> total - g
    auto coord = [total](std::size_t g) {
      return static_cast<double>(2 * static_cast<std::int64_t>(g) - total) / static_cast<double>(total);
    };
    std::vector<double> g;
    for (std::size_t a = 0; a <= ci * k; ++a)
      for (std::size_t b = 0; b <= cj * k; ++b) {
        std::array<double, 3> x{};
        x[axis] = coord(fixed * k);
        x[a1] = coord(i0 * k + a);
        x[a2] = coord(j0 * k + b);
        const double r = norm3(x);
        for (auto& t : x) t /= r;
        const std::size_t v = m.at(a, b);
        m.f[v] = p.value_and_gradient(x, g);
        const double radial = g[0] * x[0] + g[1] * x[1] + g[2] * x[2];
        m.grad[v] = {g[0] - radial * x[0], g[1] - radial * x[1], g[2] - radial * x[2]};
        m.pos[v] = x;
      }
    return m;
  };
  return c;
}

}  // namespace detail

/// Components of {p = 0} on S^2 for a homogeneous p in three variables, on
/// a cube-surface mesh with `resolution` cells per face edge (made odd so
/// that no vertex lies on a coordinate plane). The RP^2 count pairs each
/// component with its antipodal image.
inline ComponentReport sphere_components(const MultiPoly& p, std::size_t resolution, unsigned max_depth = 6,
                                         const ZeroSetOptions& opt = {}) {
  if (p.dimension() != 3) throw DimensionMismatch("sphere_components needs 3 variables");
  if (!detail::is_homogeneous(p)) throw std::invalid_argument("sphere_components needs a homogeneous polynomial");
  if (resolution < 2) throw std::invalid_argument("sphere_components: resolution must be >= 2");
  const CompiledPoly cp(p);
  const std::size_t N = resolution | 1;
  detail::MeshComponents mesh;
  ComponentReport r;
  r.resolution = N;
  for (int face = 0; face < 6; ++face) {
    const auto res = detail::add_chart(mesh, detail::cube_chart(cp, N, face), max_depth, opt);
    r.ambiguous_cells += res.ambiguous_cells;
    r.refinement_depth = std::max(r.refinement_depth, res.depth);
  }
  const auto comps = mesh.components();
  r.count = comps.size();

  // Components met by the coarse lattice are matched with their antipodes;
  // loops found only inside refined patches are small and never their own
  // antipode.
  const std::uint64_t M = N + 1;
  auto antipode = [&](std::uint64_t id) {
    const std::uint64_t z = id % M, y = (id / M) % M, x = id / (M * M);
    return ((N - x) * M + (N - y)) * M + (N - z);
  };
  std::unordered_map<std::size_t, std::size_t> image;
  bool consistent = true;
  for (const auto& [key, node] : mesh.nodes()) {
    const std::size_t root = mesh.find(node);
    if (image.contains(root)) continue;
    const auto other = mesh.find_edge(antipode(key >> 32), antipode(key & 0xffffffffu));
    if (!other) {
      consistent = false;
      break;
    }
    image[root] = mesh.find(*other);
  }
  std::size_t self = 0;
  for (const auto& [a, b] : image) {
    if (a == b) ++self;
    else if (!image.contains(b) || image.at(b) != a) consistent = false;
  }
  if (consistent && (r.count + self) % 2 == 0) r.projective_count = (r.count + self) / 2;
  r.confident = r.ambiguous_cells == 0 && r.projective_count.has_value();
  return r;
}

struct CompactComponentResult {
  bool found = false;
  ComponentReport report;
};

/// Whether {f = 0} has a component strictly inside the disk, i.e. one that
/// meets no cell crossing the disk boundary.
template <class Field>
CompactComponentResult compact_component_in_ball(const Field& field, std::span<const double> center, double radius,
                                                 std::size_t resolution, unsigned max_depth,
                                                 const ZeroSetOptions& opt = {}) {
  if (center.size() != 2) throw DimensionMismatch("compact_component_in_ball supports n = 2");
  CompactComponentResult res;
  res.report = grid_components(field, BallDomain{{center.begin(), center.end()}, radius}, resolution, max_depth, opt);
  res.found = res.report.count >= 1;
  return res;
}

inline CompactComponentResult compact_component_in_ball(const MultiPoly& p, std::span<const double> center,
                                                        double radius, std::size_t resolution, unsigned max_depth,
                                                        const ZeroSetOptions& opt = {}) {
  return compact_component_in_ball(PolynomialPlanarField(p), center, radius, resolution, max_depth, opt);
}

}  // namespace randhyp
