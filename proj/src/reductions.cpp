// Reduction chain on periodic CNF: width reduction (3SAT), occurrence
// reduction (3SAT3), planarization with crossover gadgets, 1-in-3
// conversion, 3-dimensional matching and trichromatic orientation.
//
// All geometry is exact integer arithmetic on a fine grid; every stage that
// carries a drawing builds it through a shared "geometric builder" that
// reduces absolute positions into the unit cell, derives literal/edge
// offsets from lattice-cell differences, and emits the incidence drawing.

#include "periodica/reductions.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace periodica {

namespace {

using I128 = __int128;

// ---------------------------------------------------------------------------
// Small exact planar integer geometry.
// ---------------------------------------------------------------------------

struct P2 {
  long long x = 0, y = 0;
};
inline P2 operator+(P2 a, P2 b) { return {a.x + b.x, a.y + b.y}; }
inline P2 operator-(P2 a, P2 b) { return {a.x - b.x, a.y - b.y}; }
inline P2 operator*(long long k, P2 a) { return {k * a.x, k * a.y}; }
inline bool operator==(P2 a, P2 b) { return a.x == b.x && a.y == b.y; }
inline bool operator!=(P2 a, P2 b) { return !(a == b); }
inline bool operator<(P2 a, P2 b) { return a.x != b.x ? a.x < b.x : a.y < b.y; }

inline P2 rot_ccw(P2 v) { return {-v.y, v.x}; }
inline P2 rot_cw(P2 v) { return {v.y, -v.x}; }
inline I128 icross(P2 a, P2 b) {
  return static_cast<I128>(a.x) * b.y - static_cast<I128>(a.y) * b.x;
}
inline I128 idot(P2 a, P2 b) {
  return static_cast<I128>(a.x) * b.x + static_cast<I128>(a.y) * b.y;
}
inline long long ll_sgn(long long v) { return v > 0 ? 1 : v < 0 ? -1 : 0; }
inline P2 unit_dir(P2 v) { return {ll_sgn(v.x), ll_sgn(v.y)}; }
inline long long ll_floor_mod(long long a, long long b) {
  long long r = a % b;
  return r < 0 ? r + b : r;
}

// Counterclockwise angular order starting at the positive x axis.
inline int angle_half(P2 v) { return (v.y > 0 || (v.y == 0 && v.x > 0)) ? 0 : 1; }
inline bool angle_less(P2 a, P2 b) {
  int ha = angle_half(a), hb = angle_half(b);
  if (ha != hb) return ha < hb;
  return icross(a, b) > 0;
}

// Exact angular closeness of two directions: tangent of the angle between
// them as a fraction; directions 90 degrees or more apart count as "far".
struct Tan {
  I128 num = 1, den = 0;  // den == 0 encodes "far"
};
inline Tan dir_tan(P2 a, P2 b) {
  I128 d = idot(a, b);
  if (d <= 0) return {1, 0};
  I128 c = icross(a, b);
  return {c < 0 ? -c : c, d};
}
inline bool tan_less(const Tan& a, const Tan& b) {  // strictly closer than b
  if (b.den == 0) return a.den != 0;
  if (a.den == 0) return false;
  return a.num * b.den < b.num * a.den;
}
inline Tan min_tan(P2 cand, const std::vector<P2>& dirs) {
  Tan best{1, 0};
  for (const P2& d : dirs) {
    Tan t = dir_tan(cand, d);
    if (tan_less(t, best)) best = t;
  }
  return best;
}
// Candidate direction keeping the largest exact angular margin to `dirs`.
inline P2 pick_far_dir(const std::vector<P2>& cands, const std::vector<P2>& dirs) {
  P2 best = cands.front();
  Tan bm = min_tan(best, dirs);
  for (size_t i = 1; i < cands.size(); ++i) {
    Tan m = min_tan(cands[i], dirs);
    if (tan_less(bm, m)) {
      best = cands[i];
      bm = m;
    }
  }
  return best;
}

inline long long rat_scaled(const Rat& r, long long scale) {
  BigInt t = r.num * scale;
  if (t % r.den != 0)
    throw std::logic_error("reduction: coordinate not on the expected grid");
  return static_cast<BigInt>(t / r.den).convert_to<long long>();
}
inline P2 pt_to_int(const Pt& p, long long scale) {
  return {rat_scaled(p.x, scale), rat_scaled(p.y, scale)};
}

// Compressed integer polyline (duplicates dropped, forward-collinear runs
// merged). Diagonal segments are allowed.
std::vector<P2> compress_path(const std::vector<Pt>& pts, long long scale) {
  std::vector<P2> out;
  for (const Pt& p : pts) {
    P2 q = pt_to_int(p, scale);
    if (!out.empty() && q == out.back()) continue;
    if (out.size() >= 2) {
      P2 a = out[out.size() - 2], b = out.back();
      if (icross(b - a, q - b) == 0 && idot(b - a, q - b) > 0) {
        out.back() = q;
        continue;
      }
    }
    out.push_back(q);
  }
  if (out.size() < 2) throw std::logic_error("reduction: degenerate edge path");
  return out;
}

inline bool on_segment(P2 a, P2 b, P2 p) {
  if (icross(b - a, p - a) != 0) return false;
  I128 t = idot(p - a, b - a);
  return t >= 0 && t <= idot(b - a, b - a);
}

// ---------------------------------------------------------------------------
// Geometric CNF builder: clauses and variables at absolute fine positions;
// finalize() reduces into the unit cell and emits cnf + incidence drawing.
// ---------------------------------------------------------------------------

struct GLit {
  int var = 0;
  P2 q;                  // literal instance position (congruent to the home)
  bool neg = false;
  std::vector<P2> path;  // drawn polyline clause -> q; empty = straight
};
struct GCl {
  P2 p;
  std::vector<GLit> lits;
};
struct GeomCNF {
  int dim = 1;
  long long cell = 2;  // fine units per lattice cell (both axes in 2D)
  std::vector<P2> home;
  std::vector<GCl> cls;
  int add_var(P2 p) {
    home.push_back(p);
    return static_cast<int>(home.size()) - 1;
  }
  int add_clause(P2 p) {
    cls.push_back({p, {}});
    return static_cast<int>(cls.size()) - 1;
  }
  void lit(int ci, int var, P2 q, bool neg, std::vector<P2> path = {}) {
    cls[static_cast<size_t>(ci)].lits.push_back({var, q, neg, std::move(path)});
  }
};

// Reduction context: translation tau + cell bookkeeping. All builder
// positions have even coordinates; tau_x = 1 then guarantees no reduced
// anchor falls on a cell boundary.
struct ReduceCtx {
  int dim = 1;
  long long cell = 2;
  long long tx = 1, ty = 1;
  long long ydiv = 2;  // y denominator (== cell in 2D)
  P2 sh(P2 p) const { return {p.x + tx, p.y + ty}; }
  P2 redv(P2 p) const {
    P2 s = sh(p);
    return {ll_floor_mod(s.x, cell), dim == 2 ? ll_floor_mod(s.y, cell) : s.y};
  }
  P2 cellof(P2 p) const {
    P2 s = sh(p);
    P2 r = redv(p);
    return {(s.x - r.x) / cell, dim == 2 ? (s.y - r.y) / cell : 0};
  }
};

template <typename SeeFn>
ReduceCtx make_ctx(int dim, long long cell, const SeeFn& for_each_pos) {
  if (cell <= 0 || cell % 2 != 0)
    throw std::logic_error("reduction: cell size must be positive and even");
  ReduceCtx cx;
  cx.dim = dim;
  cx.cell = cell;
  cx.tx = 1;
  if (dim == 2) {
    cx.ty = 1;
    cx.ydiv = cell;
    return cx;
  }
  long long ymin = 0, ymax = 0;
  bool any = false;
  for_each_pos([&](P2 p) {
    if (!any) {
      ymin = ymax = p.y;
      any = true;
    } else {
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
  });
  cx.ty = 2 - ymin;
  long long top = ymax + cx.ty + 2;
  long long k = (top + cell - 1) / cell;
  if (k < 1) k = 1;
  cx.ydiv = k * cell;
  return cx;
}

// Occurrence-cluster splitting: variables with more than 3 literal slots are
// replaced by a cyclically ordered ring of copies tied together by the
// implication cycle (!x_i v x_{i+1}); each slot attaches to the copy facing
// its approach direction.
constexpr int kRingN = 12;
const P2 kRing[kRingN] = {{12, 0},  {10, 6},   {6, 10},  {0, 12},
                          {-6, 10}, {-10, 6},  {-12, 0}, {-10, -6},
                          {-6, -10}, {0, -12}, {6, -10}, {10, -6}};
// Cycle-clause anchors sit strictly inside the ring: chords arriving from
// outside end on the ring and never enter the inner disc.
const P2 kCyc[kRingN] = {{6, 0},   {4, 2},  {2, 4},  {0, 6},
                         {-2, 4},  {-4, 2}, {-6, 0}, {-4, -2},
                         {-2, -4}, {0, -6}, {2, -4}, {4, -2}};

int ring_sector(P2 v) {
  int r = 0;
  for (int i = 1; i < kRingN; ++i)
    if (!angle_less(v, kRing[i])) r = i;
  return r;
}

void split_high_occurrence(GeomCNF& g) {
  const int n0 = static_cast<int>(g.home.size());
  std::vector<std::vector<std::pair<int, int>>> occ(static_cast<size_t>(n0));
  for (int ci = 0; ci < static_cast<int>(g.cls.size()); ++ci)
    for (int li = 0; li < static_cast<int>(g.cls[ci].lits.size()); ++li)
      occ[static_cast<size_t>(g.cls[ci].lits[li].var)].push_back({ci, li});
  for (int v = 0; v < n0; ++v) {
    const int d = static_cast<int>(occ[v].size());
    if (d <= 3) continue;
    if (d > kRingN)
      throw std::logic_error("reduction: occurrence cluster exceeds ring size");
    struct Slot {
      int ci, li;
      P2 ap;
    };
    std::vector<Slot> ss;
    for (auto [ci, li] : occ[v]) {
      const GLit& l = g.cls[ci].lits[li];
      P2 ap = l.path.size() >= 2 ? l.path[l.path.size() - 2] - l.q
                                 : g.cls[ci].p - l.q;
      if (ap == P2{0, 0})
        throw std::logic_error("reduction: zero-length slot approach");
      ss.push_back({ci, li, ap});
    }
    std::sort(ss.begin(), ss.end(), [](const Slot& a, const Slot& b) {
      if (angle_less(a.ap, b.ap)) return true;
      if (angle_less(b.ap, a.ap)) return false;
      return std::make_pair(a.ci, a.li) < std::make_pair(b.ci, b.li);
    });
    std::vector<int> ring(static_cast<size_t>(d));
    int prev = -1;
    for (int k = 0; k < d; ++k) {
      int u = std::max(ring_sector(ss[k].ap), prev + 1);
      ring[k] = u;
      prev = u;
    }
    if (ring.back() - ring.front() >= kRingN)
      throw std::logic_error("reduction: occurrence cluster too crowded");
    for (int& r : ring) r %= kRingN;
    const P2 h = g.home[static_cast<size_t>(v)];
    std::vector<int> ids(static_cast<size_t>(d));
    for (int k = 0; k < d; ++k) {
      ids[k] = k == 0 ? v : g.add_var(h);
      g.home[static_cast<size_t>(ids[k])] = h + kRing[ring[k]];
    }
    for (int k = 0; k < d; ++k) {
      GLit& l = g.cls[ss[k].ci].lits[ss[k].li];
      const P2 q0 = l.q;
      l.var = ids[k];
      l.q = q0 + kRing[ring[k]];
      if (!l.path.empty()) {
        l.path.back() = l.q;
        l.path.insert(l.path.end() - 1, q0 + 3 * kRing[ring[k]]);
      }
    }
    for (int k = 0; k < d; ++k) {
      const int kn = (k + 1) % d;
      int gap = (ring[kn] - ring[k] + kRingN) % kRingN;
      if (gap == 0) gap = kRingN;
      const int mid = (ring[k] + gap / 2) % kRingN;
      const int ci = g.add_clause(h + kCyc[mid]);
      g.lit(ci, ids[k], g.home[static_cast<size_t>(ids[k])], true);
      g.lit(ci, ids[kn], g.home[static_cast<size_t>(ids[kn])], false);
    }
  }
}

PlanarCNF finalize_cnf(const GeomCNF& g) {
  ReduceCtx cx = make_ctx(g.dim, g.cell, [&](auto see) {
    for (const P2& p : g.home) see(p);
    for (const GCl& c : g.cls) {
      see(c.p);
      for (const GLit& l : c.lits) {
        see(l.q);
        for (const P2& q : l.path) see(q);
      }
    }
  });
  const long long C = g.cell;
  const long long ygrid = cx.ydiv;
  const int nv = static_cast<int>(g.home.size());
  const int nc = static_cast<int>(g.cls.size());

  PeriodicCNF cnf(g.dim);
  PeriodicGraph ig(g.dim);
  std::vector<P2> vred(static_cast<size_t>(nv));
  PeriodicDrawing dr;
  dr.grid_size = g.dim == 2 ? C : ygrid;
  dr.vertex_points.resize(static_cast<size_t>(nv + nc));
  auto anchor_of = [&](P2 red) {
    return Pt{Rat(BigInt(red.x), BigInt(C)), Rat(BigInt(red.y), BigInt(ygrid))};
  };
  auto check_inside = [&](P2 red) {
    if (red.x <= 0 || red.x >= C ||
        (g.dim == 2 && (red.y <= 0 || red.y >= C)) ||
        (g.dim == 1 && (red.y <= 0 || red.y >= ygrid)))
      throw std::logic_error("reduction: anchor on a cell boundary");
  };
  for (int i = 0; i < nv; ++i) {
    cnf.add_var("v" + std::to_string(i));
    ig.add_vertex("v" + std::to_string(i));
    vred[static_cast<size_t>(i)] = cx.redv(g.home[static_cast<size_t>(i)]);
    check_inside(vred[static_cast<size_t>(i)]);
    dr.vertex_points[static_cast<size_t>(i)] = anchor_of(vred[static_cast<size_t>(i)]);
  }
  for (int j = 0; j < nc; ++j) ig.add_vertex("c" + std::to_string(j));

  for (int j = 0; j < nc; ++j) {
    const GCl& cl = g.cls[static_cast<size_t>(j)];
    const P2 pr = cx.redv(cl.p);
    check_inside(pr);
    dr.vertex_points[static_cast<size_t>(nv + j)] = anchor_of(pr);
    const P2 ccell = cx.cellof(cl.p);
    auto to_pt = [&](P2 p) {
      P2 s = cx.sh(p);
      long long px = s.x - ccell.x * C;
      long long py = g.dim == 2 ? s.y - ccell.y * C : s.y;
      return Pt{Rat(BigInt(px), BigInt(C)), Rat(BigInt(py), BigInt(ygrid))};
    };
    Clause oc;
    for (const GLit& l : cl.lits) {
      if (cx.redv(l.q) != vred[static_cast<size_t>(l.var)])
        throw std::logic_error("reduction: literal incongruent with variable");
      const P2 qc = cx.cellof(l.q);
      Offset off(static_cast<size_t>(g.dim), 0);
      off[0] = static_cast<int>(qc.x - ccell.x);
      if (g.dim == 2) off[1] = static_cast<int>(qc.y - ccell.y);
      oc.push_back(Lit{l.var, off, l.neg});
      ig.add_edge(nv + j, l.var, off, l.neg ? "-" : "+");
      std::vector<Pt> path;
      if (l.path.empty()) {
        path = {to_pt(cl.p), to_pt(l.q)};
      } else {
        if (l.path.front() != cl.p || l.path.back() != l.q)
          throw std::logic_error("reduction: slot path endpoint mismatch");
        for (const P2& p : l.path) path.push_back(to_pt(p));
      }
      dr.edge_paths.push_back(std::move(path));
    }
    cnf.add_clause(std::move(oc));
  }
  dr.graph = std::move(ig);
  dr.orthogonal = false;
  dr.local = false;
  dr.validate();
  return {std::move(cnf), std::move(dr)};
}

// ---------------------------------------------------------------------------
// Geometric graph builder (same reduction machinery, for 3DM instances).
// ---------------------------------------------------------------------------

struct GVert {
  P2 p;
  std::string name, label;
};
struct GEdgeG {
  int u = 0, v = 0;
  P2 pu, pv;
  std::vector<P2> path;  // polyline u -> v; empty = straight
  std::string label;
};
struct GeomGraph {
  int dim = 1;
  long long cell = 2;
  std::vector<GVert> verts;
  std::vector<GEdgeG> edges;
  int add(P2 p, std::string name, std::string label) {
    verts.push_back({p, std::move(name), std::move(label)});
    return static_cast<int>(verts.size()) - 1;
  }
  void edge(int u, P2 pu, int v, P2 pv, std::string label,
            std::vector<P2> path = {}) {
    edges.push_back({u, v, pu, pv, std::move(path), std::move(label)});
  }
};

std::pair<PeriodicGraph, PeriodicDrawing> finalize_graph(const GeomGraph& g) {
  ReduceCtx cx = make_ctx(g.dim, g.cell, [&](auto see) {
    for (const GVert& v : g.verts) see(v.p);
    for (const GEdgeG& e : g.edges) {
      see(e.pu);
      see(e.pv);
      for (const P2& q : e.path) see(q);
    }
  });
  const long long C = g.cell;
  const long long ygrid = cx.ydiv;
  PeriodicGraph pg(g.dim);
  PeriodicDrawing dr;
  dr.grid_size = g.dim == 2 ? C : ygrid;
  std::vector<P2> vred(g.verts.size());
  for (size_t i = 0; i < g.verts.size(); ++i) {
    pg.add_vertex(g.verts[i].name, g.verts[i].label);
    vred[i] = cx.redv(g.verts[i].p);
    if (vred[i].x <= 0 || vred[i].x >= C ||
        (g.dim == 2 && (vred[i].y <= 0 || vred[i].y >= C)) ||
        (g.dim == 1 && (vred[i].y <= 0 || vred[i].y >= ygrid)))
      throw std::logic_error("reduction: anchor on a cell boundary");
    dr.vertex_points.push_back(
        Pt{Rat(BigInt(vred[i].x), BigInt(C)), Rat(BigInt(vred[i].y), BigInt(ygrid))});
  }
  for (const GEdgeG& e : g.edges) {
    if (cx.redv(e.pu) != vred[static_cast<size_t>(e.u)] ||
        cx.redv(e.pv) != vred[static_cast<size_t>(e.v)])
      throw std::logic_error("reduction: edge endpoint incongruent with vertex");
    const P2 ucell = cx.cellof(e.pu);
    const P2 vcell = cx.cellof(e.pv);
    Offset shift(static_cast<size_t>(g.dim), 0);
    shift[0] = static_cast<int>(vcell.x - ucell.x);
    if (g.dim == 2) shift[1] = static_cast<int>(vcell.y - ucell.y);
    pg.add_edge(e.u, e.v, shift, e.label);
    auto to_pt = [&](P2 p) {
      P2 s = cx.sh(p);
      long long px = s.x - ucell.x * C;
      long long py = g.dim == 2 ? s.y - ucell.y * C : s.y;
      return Pt{Rat(BigInt(px), BigInt(C)), Rat(BigInt(py), BigInt(ygrid))};
    };
    std::vector<Pt> path;
    if (e.path.empty()) {
      path = {to_pt(e.pu), to_pt(e.pv)};
    } else {
      if (e.path.front() != e.pu || e.path.back() != e.pv)
        throw std::logic_error("reduction: edge path endpoint mismatch");
      for (const P2& p : e.path) path.push_back(to_pt(p));
    }
    dr.edge_paths.push_back(std::move(path));
  }
  dr.graph = std::move(pg);
  dr.orthogonal = false;
  dr.local = false;
  dr.validate();
  return {dr.graph, dr};
}

// ---------------------------------------------------------------------------
// Shared shape check for PlanarCNF inputs (incidence-drawing convention).
// ---------------------------------------------------------------------------

void check_planar_cnf_shape(const PlanarCNF& pc) {
  pc.cnf.validate();
  pc.drawing.validate();
  const PeriodicGraph& g = pc.drawing.graph;
  const int nv = pc.cnf.num_vars();
  const int nc = static_cast<int>(pc.cnf.clauses.size());
  if (g.num_vertices() != nv + nc)
    throw std::invalid_argument("planar CNF: drawing vertex count mismatch");
  size_t tot = 0;
  for (const Clause& c : pc.cnf.clauses) tot += c.size();
  if (static_cast<size_t>(g.num_edges()) != tot)
    throw std::invalid_argument("planar CNF: drawing edge count mismatch");
  int e = 0;
  for (int j = 0; j < nc; ++j)
    for (const Lit& l : pc.cnf.clauses[static_cast<size_t>(j)]) {
      const ProtoEdge& pe = g.edges[static_cast<size_t>(e++)];
      if (pe.u != nv + j || pe.v != l.var || pe.shift != l.off)
        throw std::invalid_argument("planar CNF: drawing does not match clauses");
    }
}

std::vector<int> occurrence_counts(const PeriodicCNF& f) {
  std::vector<int> occ(static_cast<size_t>(f.num_vars()), 0);
  for (const Clause& c : f.clauses)
    for (const Lit& l : c) ++occ[static_cast<size_t>(l.var)];
  return occ;
}

std::string fresh_name(std::set<std::string>& used, const std::string& base) {
  for (long long i = 0;; ++i) {
    std::string cand = base + std::to_string(i);
    if (used.insert(cand).second) return cand;
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// cnf_to_3sat
// ---------------------------------------------------------------------------

PeriodicCNF cnf_to_3sat(const PeriodicCNF& f) {
  f.validate();
  PeriodicCNF g(f.dim);
  g.var_names = f.var_names;
  std::set<std::string> used(f.var_names.begin(), f.var_names.end());
  for (const Clause& c : f.clauses) {
    Clause cur = c;
    while (cur.size() > 3) {
      const int z = g.add_var(fresh_name(used, "s"));
      const Offset zo = cur[0].off;
      g.add_clause({cur[0], cur[1], Lit{z, zo, false}});
      Clause rest;
      rest.push_back(Lit{z, zo, true});
      rest.insert(rest.end(), cur.begin() + 2, cur.end());
      cur = std::move(rest);
    }
    g.add_clause(cur);
  }
  return g;
}

// ---------------------------------------------------------------------------
// to_3sat3
// ---------------------------------------------------------------------------

PeriodicCNF to_3sat3(const PeriodicCNF& f) {
  f.validate();
  for (const Clause& c : f.clauses)
    if (c.size() > 3)
      throw std::invalid_argument("to_3sat3: clause width exceeds 3");
  const std::vector<int> occ = occurrence_counts(f);
  PeriodicCNF g(f.dim);
  g.var_names = f.var_names;
  std::set<std::string> used(f.var_names.begin(), f.var_names.end());
  std::vector<std::vector<int>> copies(static_cast<size_t>(f.num_vars()));
  for (int v = 0; v < f.num_vars(); ++v) {
    copies[static_cast<size_t>(v)].push_back(v);
    if (occ[static_cast<size_t>(v)] > 3)
      for (int i = 1; i < occ[static_cast<size_t>(v)]; ++i)
        copies[static_cast<size_t>(v)].push_back(
            g.add_var(fresh_name(used, f.var_names[static_cast<size_t>(v)] + "~")));
  }
  std::vector<int> next(static_cast<size_t>(f.num_vars()), 0);
  for (const Clause& c : f.clauses) {
    Clause oc;
    for (const Lit& l : c) {
      int var = l.var;
      if (occ[static_cast<size_t>(l.var)] > 3)
        var = copies[static_cast<size_t>(l.var)]
                    [static_cast<size_t>(next[static_cast<size_t>(l.var)]++)];
      oc.push_back(Lit{var, l.off, l.neg});
    }
    g.add_clause(oc);
  }
  const Offset zero = zero_offset(f.dim);
  for (int v = 0; v < f.num_vars(); ++v) {
    const auto& cp = copies[static_cast<size_t>(v)];
    if (cp.size() <= 1) continue;
    for (size_t i = 0; i < cp.size(); ++i) {
      const size_t j = (i + 1) % cp.size();
      g.add_clause({Lit{cp[i], zero, true}, Lit{cp[j], zero, false}});
    }
  }
  return g;
}

// ---------------------------------------------------------------------------
// Crossover gadget. Logical clause table; `crossover_gadget_cnf` exposes it
// in isolation, `planarize` instantiates it with positions at each crossing.
// Variables: ports xw, ys, xe, yn; quadrant indicators cne, cnw, csw, cse
// (corner c_XY holds iff the horizontal wire is "on the XY side" of the
// quadrant test below); splitter z. Models restricted to the ports are
// exactly { (a, b, a, b) }, each with a unique extension.
// ---------------------------------------------------------------------------

namespace {

struct XLit {
  int var;     // 0..3 ports, 4..7 corners, 8 splitter
  bool neg;
};
struct XCl {
  P2 pos;                  // clause position relative to the crossing point
  std::vector<XLit> lits;
};

// Scale of the crossover core relative to the base layout below. The
// occurrence rings spliced in afterwards have fixed radius 12/20, so the
// core must be large enough that ring chords stay clear of core chords.
constexpr long long kXScale = 4;

// Port home positions relative to the crossing point.
const P2 kXPort[4] = {{-80, 0}, {0, -80}, {80, 0}, {0, 80}};  // xw ys xe yn
const P2 kXCorner[4] = {{24, 24}, {-24, 24}, {-24, -24}, {24, -24}};
constexpr int XW = 0, YS = 1, XE = 2, YN = 3;
constexpr int CNE = 4, CNW = 5, CSW = 6, CSE = 7, XZ = 8;

std::vector<XCl> crossover_table() {
  return {
      {{40, 16}, {{CNE, true}, {XE, false}}},
      {{16, 40}, {{CNE, true}, {YN, false}}},
      {{40, 40}, {{CNE, false}, {XE, true}, {YN, true}}},
      {{-40, 16}, {{CNW, true}, {XW, true}}},
      {{-16, 40}, {{CNW, true}, {YN, false}}},
      {{-40, 40}, {{CNW, false}, {XW, false}, {YN, true}}},
      {{-40, -16}, {{CSW, true}, {XW, true}}},
      {{-16, -40}, {{CSW, true}, {YS, true}}},
      {{-40, -40}, {{CSW, false}, {XW, false}, {YS, false}}},
      {{40, -16}, {{CSE, true}, {XE, false}}},
      {{16, -40}, {{CSE, true}, {YS, true}}},
      {{40, -40}, {{CSE, false}, {XE, true}, {YS, false}}},
      {{0, 32}, {{CNE, true}, {CNW, true}}},
      {{-32, 0}, {{CNW, true}, {CSW, true}}},
      {{0, -32}, {{CSW, true}, {CSE, true}}},
      {{32, 0}, {{CSE, true}, {CNE, true}}},
      {{0, 16}, {{CNE, false}, {CNW, false}, {XZ, false}}},
      {{0, -16}, {{XZ, true}, {CSW, false}, {CSE, false}}},
  };
}

P2 xvar_rel_pos(int v) {
  if (v < 4) return kXPort[v];
  if (v < 8) return kXCorner[v - 4];
  return {0, 0};
}

}  // namespace

PeriodicCNF crossover_gadget_cnf() {
  PeriodicCNF f(1);
  for (const char* n : {"xw", "ys", "xe", "yn", "cne", "cnw", "csw", "cse", "z"})
    f.add_var(n);
  const Offset zero = zero_offset(1);
  for (const XCl& c : crossover_table()) {
    Clause oc;
    for (const XLit& l : c.lits) oc.push_back(Lit{l.var, zero, l.neg});
    f.add_clause(oc);
  }
  return f;
}

// ---------------------------------------------------------------------------
// planarize
// ---------------------------------------------------------------------------

namespace {

// Equality pair (!a v b), (!b v a) between the variables at the two ends of
// a corridor piece, drawn as twin clauses on lateral lanes +-32.
void emit_equality_pair(GeomCNF& g, const std::vector<P2>& piece, int va, int vb) {
  size_t best = 0;
  long long blen = -1;
  for (size_t i = 0; i + 1 < piece.size(); ++i) {
    const P2 d = piece[i + 1] - piece[i];
    const long long len = std::max(std::llabs(d.x), std::llabs(d.y));
    if (len > blen) {
      blen = len;
      best = i;
    }
  }
  const P2 a = piece[best], b = piece[best + 1];
  const P2 u = unit_dir(b - a);
  const P2 mid{(a.x + b.x) / 2, (a.y + b.y) / 2};
  auto lane = [&](P2 start, long long side, bool toward_start) {
    std::vector<P2> out{start};
    if (toward_start) {
      for (size_t j = best; j >= 1; --j) {
        const P2 u1 = unit_dir(piece[j] - piece[j - 1]);
        const P2 u2 = unit_dir(piece[j + 1] - piece[j]);
        out.push_back(piece[j] + 32 * side * (rot_ccw(u1) + rot_ccw(u2)));
      }
      out.push_back(piece.front());
    } else {
      for (size_t j = best + 1; j + 1 < piece.size(); ++j) {
        const P2 u1 = unit_dir(piece[j] - piece[j - 1]);
        const P2 u2 = unit_dir(piece[j + 1] - piece[j]);
        out.push_back(piece[j] + 32 * side * (rot_ccw(u1) + rot_ccw(u2)));
      }
      out.push_back(piece.back());
    }
    return out;
  };
  for (long long side : {1LL, -1LL}) {
    const P2 dp = mid + 32 * side * rot_ccw(u);
    const int ci = g.add_clause(dp);
    g.lit(ci, va, piece.front(), side > 0, lane(dp, side, true));
    g.lit(ci, vb, piece.back(), side < 0, lane(dp, side, false));
  }
}

}  // namespace

PlanarCNF planarize(const PeriodicCNF& f0) {
  f0.validate();
  if (f0.dim != 1 && f0.dim != 2)
    throw std::invalid_argument("planarize: dim must be 1 or 2");
  for (const Clause& c : f0.clauses)
    if (c.size() > 3)
      throw std::invalid_argument("planarize: clause width exceeds 3");
  for (int o : occurrence_counts(f0))
    if (o > 3)
      throw std::invalid_argument("planarize: variable occurs more than 3 times");
  if (locality(f0) > 1)
    throw std::invalid_argument("planarize: locality exceeds 1");

  PeriodicCNF f = f0;
  f.canonicalize();
  const int nv = f.num_vars();
  const int nc = static_cast<int>(f.clauses.size());

  PeriodicGraph inc(f.dim);
  for (int i = 0; i < nv; ++i) inc.add_vertex("v" + std::to_string(i));
  for (int j = 0; j < nc; ++j) inc.add_vertex("c" + std::to_string(j));
  for (int j = 0; j < nc; ++j)
    for (const Lit& l : f.clauses[static_cast<size_t>(j)])
      inc.add_edge(nv + j, l.var, l.off, l.neg ? "-" : "+");

  PeriodicDrawing dr0 = draw_orthocrossing(inc);
  const DrawingReport rep = check_drawing(dr0);
  if (!rep.violations.empty())
    throw std::logic_error("planarize: invalid orthocrossing drawing");
  if (rep.crossings.empty()) return {std::move(f), std::move(dr0)};

  const long long M = dr0.grid_size;
  const long long kStep = 160 * kXScale;
  const long long kPort = 80 * kXScale;  // port distance from the crossing
  const long long C = kStep * M;
  const bool d2 = f.dim == 2;
  auto red_grid = [&](P2 p) {
    return P2{ll_floor_mod(p.x, M), d2 ? ll_floor_mod(p.y, M) : p.y};
  };
  auto red_fine = [&](P2 p) {
    return P2{ll_floor_mod(p.x, C), d2 ? ll_floor_mod(p.y, C) : p.y};
  };

  // Integer gridpoint polylines; orthocrossing paths are axis-parallel.
  const int ne = inc.num_edges();
  std::vector<std::vector<P2>> gpath(static_cast<size_t>(ne));
  for (int e = 0; e < ne; ++e) {
    gpath[static_cast<size_t>(e)] = compress_path(dr0.edge_paths[static_cast<size_t>(e)], M);
    for (size_t i = 0; i + 1 < gpath[static_cast<size_t>(e)].size(); ++i) {
      const P2 d = gpath[static_cast<size_t>(e)][i + 1] - gpath[static_cast<size_t>(e)][i];
      if (d.x != 0 && d.y != 0)
        throw std::logic_error("planarize: non-orthogonal drawing segment");
    }
  }

  // Straight-through events at interior gridpoints; two perpendicular events
  // at one reduced gridpoint form a crossing.
  std::map<P2, std::vector<std::pair<int, int>>> ev;  // reduced -> (edge, axis)
  for (int e = 0; e < ne; ++e) {
    const auto& gp = gpath[static_cast<size_t>(e)];
    for (size_t si = 0; si + 1 < gp.size(); ++si) {
      const P2 a = gp[si], b = gp[si + 1];
      const P2 u = unit_dir(b - a);
      const long long len = std::max(std::llabs(b.x - a.x), std::llabs(b.y - a.y));
      for (long long k = 1; k < len; ++k)
        ev[red_grid(a + k * u)].push_back({e, u.x != 0 ? 0 : 1});
    }
  }
  std::set<P2> xpts;
  for (const auto& [p, list] : ev) {
    if (list.size() == 1) continue;
    if (list.size() == 2 && list[0].second != list[1].second) {
      xpts.insert(p);
      continue;
    }
    throw std::logic_error("planarize: unexpected path coincidence");
  }
  if (xpts.empty())
    throw std::logic_error("planarize: crossing report mismatch");

  GeomCNF g;
  g.dim = f.dim;
  g.cell = C;
  std::vector<int> xvar(static_cast<size_t>(nv));
  for (int i = 0; i < nv; ++i)
    xvar[static_cast<size_t>(i)] = g.add_var(pt_to_int(dr0.vertex_points[static_cast<size_t>(i)], C));

  std::map<P2, int> portmap;
  auto port = [&](P2 abs) {
    const P2 r = red_fine(abs);
    auto it = portmap.find(r);
    if (it == portmap.end()) it = portmap.emplace(r, g.add_var(r)).first;
    return it->second;
  };

  // One crossover gadget per reduced crossing point.
  for (const P2& t : xpts) {
    const P2 T = kStep * t;
    int xv[9];
    for (int v = 0; v < 4; ++v) xv[v] = port(T + kXScale * kXPort[v]);
    for (int v = 4; v < 9; ++v) xv[v] = g.add_var(T + kXScale * xvar_rel_pos(v));
    for (const XCl& c : crossover_table()) {
      const int ci = g.add_clause(T + kXScale * c.pos);
      for (const XLit& l : c.lits)
        g.lit(ci, xv[l.var], T + kXScale * xvar_rel_pos(l.var), l.neg);
    }
  }

  // Original clauses; crossing edges are cut into corridor pieces joined by
  // ports and equality pairs.
  int eidx = 0;
  for (int j = 0; j < nc; ++j) {
    const int ci = g.add_clause(pt_to_int(dr0.vertex_points[static_cast<size_t>(nv + j)], C));
    for (const Lit& l : f.clauses[static_cast<size_t>(j)]) {
      const auto& gp = gpath[static_cast<size_t>(eidx++)];
      std::vector<P2> fp;
      for (const P2& p : gp) fp.push_back(kStep * p);

      struct Hit {
        P2 fine;
        P2 dir;
      };
      std::vector<Hit> hits;
      for (size_t si = 0; si + 1 < gp.size(); ++si) {
        const P2 a = gp[si], b = gp[si + 1];
        const P2 u = unit_dir(b - a);
        const long long len = std::max(std::llabs(b.x - a.x), std::llabs(b.y - a.y));
        for (long long k = 1; k < len; ++k) {
          const P2 p = a + k * u;
          if (xpts.count(red_grid(p))) hits.push_back({kStep * p, u});
        }
      }
      if (hits.empty()) {
        g.lit(ci, xvar[static_cast<size_t>(l.var)], fp.back(), l.neg, fp);
        continue;
      }
      // Cut the fine polyline at the crossing ports.
      std::vector<std::vector<P2>> pieces;
      std::vector<P2> cur{fp.front()};
      size_t hi = 0;
      for (size_t si = 0; si + 1 < fp.size(); ++si) {
        const P2 a = fp[si], b = fp[si + 1];
        const P2 u = unit_dir(b - a);
        while (hi < hits.size() && hits[hi].dir == u &&
               on_segment(a, b, hits[hi].fine)) {
          cur.push_back(hits[hi].fine - kPort * u);
          pieces.push_back(cur);
          cur.clear();
          cur.push_back(hits[hi].fine + kPort * u);
          ++hi;
        }
        cur.push_back(b);
      }
      pieces.push_back(cur);
      if (hi != hits.size() || pieces.size() != hits.size() + 1)
        throw std::logic_error("planarize: crossing cut mismatch");

      // Clause slot attaches to the first in-port.
      g.lit(ci, port(pieces.front().back()), pieces.front().back(), l.neg,
            pieces.front());
      // Remaining pieces: equality links (port <-> port / port <-> variable).
      for (size_t pi = 1; pi < pieces.size(); ++pi) {
        const auto& pc = pieces[pi];
        const int va = port(pc.front());
        if (pi + 1 == pieces.size()) {
          emit_equality_pair(g, pc, va, xvar[static_cast<size_t>(l.var)]);
        } else if (pc.front() == pc.back()) {
          if (va != port(pc.back()))
            throw std::logic_error("planarize: shared port mismatch");
        } else {
          emit_equality_pair(g, pc, va, port(pc.back()));
        }
      }
    }
  }

  split_high_occurrence(g);
  return finalize_cnf(g);
}

// ---------------------------------------------------------------------------
// to_1in3
// ---------------------------------------------------------------------------

namespace {

const P2 kCompass[8] = {{1, 0},  {1, 1},  {0, 1},  {-1, 1},
                        {-1, 0}, {-1, -1}, {0, -1}, {1, -1}};

// Perpendicular of v scaled to L-infinity norm ~8, components forced even.
P2 even_perp8(P2 v) {
  const P2 p = rot_ccw(v);
  const long long m = std::max(std::llabs(p.x), std::llabs(p.y));
  P2 r{p.x * 8 / m, p.y * 8 / m};
  r.x = 2 * (r.x / 2);
  r.y = 2 * (r.y / 2);
  return r;
}

}  // namespace

PlanarCNF to_1in3(const PlanarCNF& in) {
  check_planar_cnf_shape(in);
  for (const Clause& c : in.cnf.clauses)
    if (c.size() > 3)
      throw std::invalid_argument("to_1in3: clause width exceeds 3");
  for (int o : occurrence_counts(in.cnf))
    if (o > 3)
      throw std::invalid_argument("to_1in3: variable occurs more than 3 times");

  const long long G = in.drawing.grid_size;
  const long long SC = 32 * G;
  GeomCNF g;
  g.dim = in.cnf.dim;
  g.cell = SC;
  const int nv = in.cnf.num_vars();
  for (int i = 0; i < nv; ++i)
    g.add_var(pt_to_int(in.drawing.vertex_points[static_cast<size_t>(i)], SC));

  int eidx = 0;
  for (int j = 0; j < static_cast<int>(in.cnf.clauses.size()); ++j) {
    const Clause& c = in.cnf.clauses[static_cast<size_t>(j)];
    const P2 A = pt_to_int(in.drawing.vertex_points[static_cast<size_t>(nv + j)], SC);
    const int w = static_cast<int>(c.size());
    std::vector<std::vector<P2>> sp(static_cast<size_t>(w));
    std::vector<P2> d(static_cast<size_t>(w));
    for (int s = 0; s < w; ++s) {
      sp[static_cast<size_t>(s)] =
          compress_path(in.drawing.edge_paths[static_cast<size_t>(eidx++)], SC);
      if (sp[static_cast<size_t>(s)].front() != A)
        throw std::logic_error("to_1in3: slot path does not start at the clause");
      const P2 u = sp[static_cast<size_t>(s)][1] - A;
      if (u.x % 16 != 0 || u.y % 16 != 0)
        throw std::logic_error("to_1in3: off-grid first waypoint");
      d[static_cast<size_t>(s)] = {u.x / 16, u.y / 16};
    }
    auto tail_path = [&](int s, P2 from) {
      std::vector<P2> r{from};
      r.insert(r.end(), sp[static_cast<size_t>(s)].begin() + 1,
               sp[static_cast<size_t>(s)].end());
      return r;
    };
    auto lateral = [&](int s) {
      const P2 p = even_perp8(d[static_cast<size_t>(s)]);
      std::vector<P2> others;
      for (int t = 0; t < w; ++t)
        if (t != s) others.push_back(d[static_cast<size_t>(t)]);
      if (others.empty()) return p;
      return pick_far_dir({p, P2{0, 0} - p}, others);
    };
    // Chain variables b (spoke 0) and c (spoke 2 or padding axis), and the
    // three 1-in-3 clauses; width < 3 pads with force-false variables.
    if (w == 0) {
      g.add_clause(A);  // exactly-one over zero literals: unsatisfiable
      continue;
    }
    // Slot 0 always exists: C1 = 1in3(!l1, a, b) an eighth of the way out.
    const P2 c1p = A + 2 * d[0];
    const int bv = g.add_var(A + d[0]);
    const int av = g.add_var(c1p + lateral(0));
    {
      const int ci = g.add_clause(c1p);
      g.lit(ci, c[0].var, sp[0].back(), !c[0].neg, tail_path(0, c1p));
      g.lit(ci, av, c1p + lateral(0), false);
      g.lit(ci, bv, A + d[0], false);
    }
    if (w == 3) {
      const P2 c3p = A + 2 * d[2];
      const int cv = g.add_var(A + d[2]);
      const int dv = g.add_var(c3p + lateral(2));
      {
        const int ci = g.add_clause(A);  // C2 = 1in3(l2, b, c)
        g.lit(ci, c[1].var, sp[1].back(), c[1].neg, sp[1]);
        g.lit(ci, bv, A + d[0], false);
        g.lit(ci, cv, A + d[2], false);
      }
      {
        const int ci = g.add_clause(c3p);  // C3 = 1in3(!l3, c, d)
        g.lit(ci, c[2].var, sp[2].back(), !c[2].neg, tail_path(2, c3p));
        g.lit(ci, cv, A + d[2], false);
        g.lit(ci, dv, c3p + lateral(2), false);
      }
      continue;
    }
    // Padding: force-false gadget F(f) = { 1in3(f,y,z), 1in3(f,!y,!z) } along
    // a free compass direction.
    std::vector<P2> spokes(d.begin(), d.end());
    auto emit_force_false = [&](P2 nu) {
      const P2 pp = 4 * rot_ccw(nu);
      const int fv = g.add_var(A + 12 * nu);
      const int yv = g.add_var(A + 16 * nu);
      const int zv = g.add_var(A + 20 * nu);
      int ci = g.add_clause(A + 16 * nu + pp);
      g.lit(ci, fv, A + 12 * nu, false);
      g.lit(ci, yv, A + 16 * nu, false);
      g.lit(ci, zv, A + 20 * nu, false);
      ci = g.add_clause(A + 16 * nu - pp);
      g.lit(ci, fv, A + 12 * nu, false);
      g.lit(ci, yv, A + 16 * nu, true);
      g.lit(ci, zv, A + 20 * nu, true);
      return fv;
    };
    const P2 nu = pick_far_dir(
        std::vector<P2>(kCompass, kCompass + 8), spokes);
    const int cv = g.add_var(A + 4 * nu);
    const P2 c3p = A + 8 * nu;
    {
      // d sits beside C3, away from the spokes.
      const P2 dd = pick_far_dir({4 * rot_ccw(nu), -4LL * rot_ccw(nu)}, spokes);
      const int fv = emit_force_false(nu);
      const int dv = g.add_var(c3p + dd);
      const int ci = g.add_clause(c3p);  // C3 = 1in3(!f, c, d)
      g.lit(ci, fv, A + 12 * nu, true);
      g.lit(ci, cv, A + 4 * nu, false);
      g.lit(ci, dv, c3p + dd, false);
    }
    {
      const int ci = g.add_clause(A);  // C2 = 1in3(l2 or f', b, c)
      if (w == 2) {
        g.lit(ci, c[1].var, sp[1].back(), c[1].neg, sp[1]);
      } else {
        std::vector<P2> avoid = spokes;
        avoid.push_back(nu);
        const P2 mu = pick_far_dir(std::vector<P2>(kCompass, kCompass + 8), avoid);
        const P2 pm = 4 * rot_ccw(mu);
        const int fv2 = g.add_var(A + 4 * mu);
        const int yv2 = g.add_var(A + 8 * mu);
        const int zv2 = g.add_var(A + 12 * mu);
        int cj = g.add_clause(A + 8 * mu + pm);
        g.lit(cj, fv2, A + 4 * mu, false);
        g.lit(cj, yv2, A + 8 * mu, false);
        g.lit(cj, zv2, A + 12 * mu, false);
        cj = g.add_clause(A + 8 * mu - pm);
        g.lit(cj, fv2, A + 4 * mu, false);
        g.lit(cj, yv2, A + 8 * mu, true);
        g.lit(cj, zv2, A + 12 * mu, true);
        g.lit(ci, fv2, A + 4 * mu, false);
      }
      g.lit(ci, bv, A + d[0], false);
      g.lit(ci, cv, A + 4 * nu, false);
    }
  }
  return finalize_cnf(g);
}

// ---------------------------------------------------------------------------
// to_3dm
// ---------------------------------------------------------------------------

namespace {

// Frame-local point: anchor + x * e_hat + y * k_hat.
inline P2 frame_at(P2 anchor, P2 eh, P2 kh, long long x, long long y) {
  return anchor + x * eh + y * kh;
}

// Right-offset lane along an orthogonal corridor walked clause -> variable.
std::vector<P2> corridor_lane(const std::vector<P2>& fp, long long lat, P2 head,
                              P2 tip) {
  std::vector<P2> out{head};
  for (size_t j = 1; j + 1 < fp.size(); ++j) {
    const P2 u1 = unit_dir(fp[j] - fp[j - 1]);
    const P2 u2 = unit_dir(fp[j + 1] - fp[j]);
    out.push_back(fp[j] + lat * (rot_cw(u1) + rot_cw(u2)));
  }
  out.push_back(tip);
  return out;
}

P2 hub_pos(P2 anchor, P2 da, P2 db) {
  if (da + db == P2{0, 0}) return anchor + 88 * rot_ccw(da);
  return anchor + 88 * (da + db);
}

}  // namespace

Planar3DM to_3dm(const PlanarCNF& in) {
  check_planar_cnf_shape(in);
  if (in.cnf.dim != 1 && in.cnf.dim != 2)
    throw std::invalid_argument("to_3dm: dim must be 1 or 2");
  for (const Clause& c : in.cnf.clauses)
    if (!c.empty() && c.size() != 3)
      throw std::invalid_argument("to_3dm: clause width must be 0 or 3");
  for (int o : occurrence_counts(in.cnf))
    if (o > 3)
      throw std::invalid_argument("to_3dm: variable occurs more than 3 times");

  const PeriodicDrawing orth = orthogonalize(in.drawing);
  const long long SC = 128 * orth.grid_size;
  GeomGraph gg;
  gg.dim = in.cnf.dim;
  gg.cell = SC;

  const int nv = in.cnf.num_vars();
  const int nc = static_cast<int>(in.cnf.clauses.size());
  const int ne = orth.graph.num_edges();
  std::vector<std::vector<P2>> fp(static_cast<size_t>(ne));
  for (int e = 0; e < ne; ++e) {
    fp[static_cast<size_t>(e)] = compress_path(orth.edge_paths[static_cast<size_t>(e)], SC);
    for (size_t i = 0; i + 1 < fp[static_cast<size_t>(e)].size(); ++i) {
      const P2 dd = fp[static_cast<size_t>(e)][i + 1] - fp[static_cast<size_t>(e)][i];
      if (dd.x != 0 && dd.y != 0)
        throw std::logic_error("to_3dm: non-orthogonal corridor segment");
    }
  }

  // Variable rings: per port i (counterclockwise) elements a_i, b_i and the
  // literal tips w/w-bar; ring triples T_i = (a_i, b_i, near_i) and
  // F_i = (b_i, a_{i+1}, far_i). A matching covers all near tips (variable
  // true) or all far tips (variable false).
  std::vector<std::vector<int>> byvar(static_cast<size_t>(nv));
  {
    int e = 0;
    for (const Clause& c : in.cnf.clauses)
      for (const Lit& l : c) byvar[static_cast<size_t>(l.var)].push_back(e++);
  }
  struct Tips {
    int near_el = -1, far_el = -1;
    P2 near_abs, far_abs;  // positions at the corridor's walk endpoint
  };
  std::map<int, Tips> tips;  // by edge index
  for (int v = 0; v < nv; ++v) {
    const auto& inc = byvar[static_cast<size_t>(v)];
    if (inc.empty()) continue;
    const P2 V = pt_to_int(orth.vertex_points[static_cast<size_t>(v)], SC);
    struct Prt {
      int e;
      P2 eh, kh;
    };
    std::vector<Prt> ports;
    for (int e : inc) {
      const auto& path = fp[static_cast<size_t>(e)];
      const P2 u = unit_dir(path[path.size() - 1] - path[path.size() - 2]);
      const P2 eh = P2{0, 0} - u;
      ports.push_back({e, eh, rot_ccw(eh)});
    }
    std::sort(ports.begin(), ports.end(),
              [](const Prt& a, const Prt& b) { return angle_less(a.eh, b.eh); });
    for (size_t i = 0; i + 1 < ports.size(); ++i)
      if (ports[i].eh == ports[i + 1].eh)
        throw std::logic_error("to_3dm: coincident variable ports");
    const int k = static_cast<int>(ports.size());
    std::vector<int> aid(ports.size()), bid(ports.size()), Tid(ports.size()),
        Fid(ports.size());
    const std::string vb = "x" + std::to_string(v) + "p";
    for (int i = 0; i < k; ++i) {
      const Prt& P = ports[static_cast<size_t>(i)];
      auto at = [&](long long x, long long y) { return frame_at(V, P.eh, P.kh, x, y); };
      const std::string pb = vb + std::to_string(i);
      aid[static_cast<size_t>(i)] = gg.add(at(16, 0), pb + ".a", "R");
      bid[static_cast<size_t>(i)] = gg.add(at(12, 12), pb + ".b", "G");
      Tips tp;
      tp.near_el = gg.add(at(36, 8), pb + ".w0", "B");
      tp.far_el = gg.add(at(40, 16), pb + ".w1", "B");
      const P2 end = fp[static_cast<size_t>(P.e)].back();
      tp.near_abs = frame_at(end, P.eh, P.kh, 36, 8);
      tp.far_abs = frame_at(end, P.eh, P.kh, 40, 16);
      tips[P.e] = tp;
      Tid[static_cast<size_t>(i)] = gg.add(at(24, -8), pb + ".T", "T");
      Fid[static_cast<size_t>(i)] = gg.add(at(12, 16), pb + ".F", "T");
    }
    for (int i = 0; i < k; ++i) {
      const Prt& P = ports[static_cast<size_t>(i)];
      const Prt& Pn = ports[static_cast<size_t>((i + 1) % k)];
      auto at = [&](long long x, long long y) { return frame_at(V, P.eh, P.kh, x, y); };
      const Tips& tp = tips[P.e];
      const int T = Tid[static_cast<size_t>(i)], F = Fid[static_cast<size_t>(i)];
      gg.edge(T, at(24, -8), aid[static_cast<size_t>(i)], at(16, 0), "R");
      gg.edge(T, at(24, -8), bid[static_cast<size_t>(i)], at(12, 12), "G");
      gg.edge(T, at(24, -8), tp.near_el, at(36, 8), "B");
      gg.edge(F, at(12, 16), bid[static_cast<size_t>(i)], at(12, 12), "G");
      gg.edge(F, at(12, 16), tp.far_el, at(40, 16), "B");
      // F_i -> a_{i+1}: quarter-turn waypoints at radius 28.
      int gap = 0;
      P2 r = P.eh;
      do {
        r = rot_ccw(r);
        ++gap;
      } while (r != Pn.eh && gap < 4);
      if (k == 1) gap = 4;
      std::vector<P2> path{at(12, 16)};
      if (gap >= 2) path.push_back(at(0, 28));
      if (gap >= 3) path.push_back(at(-28, 0));
      if (gap >= 4) path.push_back(at(0, -28));
      const P2 an = frame_at(V, Pn.eh, Pn.kh, 16, 0);
      path.push_back(an);
      gg.edge(F, at(12, 16), aid[static_cast<size_t>((i + 1) % k)], an, "R", path);
    }
  }

  // Clause gadgets.
  int eidx = 0;
  for (int j = 0; j < nc; ++j) {
    const Clause& c = in.cnf.clauses[static_cast<size_t>(j)];
    const std::string cb = "c" + std::to_string(j);
    const P2 Q = pt_to_int(orth.vertex_points[static_cast<size_t>(nv + j)], SC);
    if (c.empty()) {
      gg.add(Q, cb + ".empty", "B");  // never coverable
      continue;
    }
    struct Sl {
      int e;
      bool neg;
      P2 dh, kh;
    };
    std::vector<Sl> sl;
    for (int s = 0; s < 3; ++s) {
      const int e = eidx + s;
      const P2 dh = unit_dir(fp[static_cast<size_t>(e)][1] - fp[static_cast<size_t>(e)][0]);
      sl.push_back({e, c[static_cast<size_t>(s)].neg, dh, rot_ccw(dh)});
    }
    eidx += 3;
    std::sort(sl.begin(), sl.end(),
              [](const Sl& a, const Sl& b) { return angle_less(a.dh, b.dh); });
    if (sl[0].dh == sl[1].dh || sl[1].dh == sl[2].dh)
      throw std::logic_error("to_3dm: coincident clause corridors");
    const int beta = gg.add(Q, cb + ".beta", "B");
    const P2 hubA = hub_pos(Q, sl[0].dh, sl[1].dh);
    const P2 hubB = hub_pos(Q, sl[1].dh, sl[2].dh);
    const int hA = gg.add(hubA, cb + ".hA", "B");
    const int hB = gg.add(hubB, cb + ".hB", "B");
    for (int t = 0; t < 3; ++t) {
      const Sl& S = sl[static_cast<size_t>(t)];
      auto at = [&](long long x, long long y) { return frame_at(Q, S.dh, S.kh, x, y); };
      const std::string sb = cb + ".s" + std::to_string(t);
      const bool pos = !S.neg;
      // Two element pairs on the corridor axis: an inner L-pair and an outer
      // R-pair. The w-triple F keeps (r, g); the w-bar-triple Q keeps
      // (rho, gam). Which pair plays which role swaps with the literal sign
      // so each head reaches its pair by straight chords.
      const P2 rpos = pos ? at(42, 0) : at(20, 0);
      const P2 gpos = pos ? at(50, 0) : at(26, 0);
      const P2 rhop = pos ? at(20, 0) : at(42, 0);
      const P2 gamp = pos ? at(26, 0) : at(50, 0);
      const int rel = gg.add(rpos, sb + ".r", "R");
      const int gel = gg.add(gpos, sb + ".g", "G");
      const int rho = gg.add(rhop, sb + ".rho", "R");
      const int gam = gg.add(gamp, sb + ".gam", "G");
      // Literal lanes: the head at lateral -8 feeds the near tip, the head at
      // lateral -16 the far tip. A positive literal puts w at the near tip,
      // so the w-triple F sits on the lane-8 head; negative literals swap.
      const Tips& tp = tips.at(S.e);
      const P2 H8 = at(34, -8), H16 = at(6, -16);
      const int tri8 = gg.add(H8, sb + (pos ? ".F" : ".Q"), "T");
      const int tri16 = gg.add(H16, sb + (pos ? ".Q" : ".F"), "T");
      gg.edge(tri8, H8, tp.near_el, tp.near_abs, "B",
              corridor_lane(fp[static_cast<size_t>(S.e)], 8, H8, tp.near_abs));
      gg.edge(tri16, H16, tp.far_el, tp.far_abs, "B",
              corridor_lane(fp[static_cast<size_t>(S.e)], 16, H16, tp.far_abs));
      const int Ftr = pos ? tri8 : tri16;   // (r, g, w)
      const int Qtr = pos ? tri16 : tri8;   // (rho, gam, w-bar)
      const P2 Fp = pos ? H8 : H16;
      const P2 Qp = pos ? H16 : H8;
      gg.edge(Ftr, Fp, rel, rpos, "R");
      gg.edge(Ftr, Fp, gel, gpos, "G");
      gg.edge(Qtr, Qp, rho, rhop, "R");
      gg.edge(Qtr, Qp, gam, gamp, "G");
      // Pressure triple P: (r, g, beta). For positive literals its pair is
      // the outer one, so the beta edge escapes rectilinearly over the slot.
      const P2 Pp = pos ? at(46, 8) : at(22, 8);
      const int Ptr = gg.add(Pp, sb + ".P", "T");
      gg.edge(Ptr, Pp, rel, rpos, "R");
      gg.edge(Ptr, Pp, gel, gpos, "G");
      if (pos)
        gg.edge(Ptr, Pp, beta, Q, "B",
                {Pp, at(46, 28), at(18, 28), at(18, 4), Q});
      else
        gg.edge(Ptr, Pp, beta, Q, "B");
      // Hub absorbers (rho, gam, hub): slot t serves hub t (open slot) and
      // hub t-1 (slip slot); hubs sit between adjacent corridor pairs (0,1)
      // and (1,2). All forced crossings below are axis-parallel.
      if (t == 0 || t == 1) {
        const int hub = t == 0 ? hA : hB;
        const P2 hp = t == 0 ? hubA : hubB;
        const P2 Ap = pos ? at(24, 16) : at(46, 24);
        const int A = gg.add(Ap, sb + ".Ao", "T");
        if (pos) {
          gg.edge(A, Ap, rho, rhop, "R", {Ap, at(20, 12), rhop});
          gg.edge(A, Ap, gam, gamp, "G", {Ap, at(26, 12), gamp});
          gg.edge(A, Ap, hub, hp, "B", {Ap, at(24, 88), hp});
        } else {
          gg.edge(A, Ap, rho, rhop, "R", {Ap, at(42, 20), rhop});
          gg.edge(A, Ap, gam, gamp, "G", {Ap, at(50, 20), gamp});
          gg.edge(A, Ap, hub, hp, "B", {Ap, at(46, 88), hp});
        }
      }
      if (t == 1 || t == 2) {
        const int hub = t == 1 ? hA : hB;
        const P2 hp = t == 1 ? hubA : hubB;
        const P2 Ap = pos ? at(24, 8) : at(46, 16);
        const int A = gg.add(Ap, sb + ".As", "T");
        gg.edge(A, Ap, rho, rhop, "R");
        gg.edge(A, Ap, gam, gamp, "G");
        if (pos)
          gg.edge(A, Ap, hub, hp, "B",
                  {Ap, at(30, 8), at(30, -88), hp});
        else
          gg.edge(A, Ap, hub, hp, "B",
                  {Ap, at(56, 16), at(56, -88), hp});
      }
    }
  }

  auto [graph, drawing] = finalize_graph(gg);
  Planar3DM out;
  out.dm.graph = std::move(graph);
  out.dm.validate();
  out.drawing = std::move(drawing);
  return out;
}

// ---------------------------------------------------------------------------
// Periodic3DM / OrientationInstance
// ---------------------------------------------------------------------------

void Periodic3DM::validate() const {
  graph.validate();
  const int n = graph.num_vertices();
  for (int v = 0; v < n; ++v) {
    const std::string& l = graph.vertex_labels[static_cast<size_t>(v)];
    if (l != "T" && l != "R" && l != "G" && l != "B")
      throw std::invalid_argument("3DM: vertex label must be T, R, G or B");
  }
  std::vector<int> deg(static_cast<size_t>(n), 0);
  std::vector<std::set<std::string>> cols(static_cast<size_t>(n));
  for (const ProtoEdge& e : graph.edges) {
    const bool ut = graph.vertex_labels[static_cast<size_t>(e.u)] == "T";
    const bool vt = graph.vertex_labels[static_cast<size_t>(e.v)] == "T";
    if (ut == vt)
      throw std::invalid_argument("3DM: edge must join a triple and an element");
    const int t = ut ? e.u : e.v;
    const int el = ut ? e.v : e.u;
    ++deg[static_cast<size_t>(t)];
    cols[static_cast<size_t>(t)].insert(graph.vertex_labels[static_cast<size_t>(el)]);
  }
  for (int v = 0; v < n; ++v)
    if (graph.vertex_labels[static_cast<size_t>(v)] == "T" &&
        (deg[static_cast<size_t>(v)] != 3 || cols[static_cast<size_t>(v)].size() != 3))
      throw std::invalid_argument("3DM: triple must have one neighbor per color");
}

std::vector<int> Periodic3DM::triple_vertices() const {
  std::vector<int> out;
  for (int v = 0; v < graph.num_vertices(); ++v)
    if (graph.vertex_labels[static_cast<size_t>(v)] == "T") out.push_back(v);
  return out;
}

std::vector<int> Periodic3DM::element_vertices() const {
  std::vector<int> out;
  for (int v = 0; v < graph.num_vertices(); ++v)
    if (graph.vertex_labels[static_cast<size_t>(v)] != "T") out.push_back(v);
  return out;
}

void OrientationInstance::validate() const {
  graph.validate();
  const int n = graph.num_vertices();
  for (int v = 0; v < n; ++v) {
    const std::string& l = graph.vertex_labels[static_cast<size_t>(v)];
    if (l != "T" && l != "Z")
      throw std::invalid_argument("orientation: vertex label must be T or Z");
  }
  std::vector<int> deg(static_cast<size_t>(n), 0);
  std::vector<std::set<std::string>> cols(static_cast<size_t>(n));
  for (const ProtoEdge& e : graph.edges) {
    if (e.label != "R" && e.label != "G" && e.label != "B")
      throw std::invalid_argument("orientation: edge label must be R, G or B");
    const bool ut = graph.vertex_labels[static_cast<size_t>(e.u)] == "T";
    const bool vt = graph.vertex_labels[static_cast<size_t>(e.v)] == "T";
    if (ut == vt)
      throw std::invalid_argument("orientation: edge must join a T and a Z vertex");
    const int t = ut ? e.u : e.v;
    const int z = ut ? e.v : e.u;
    ++deg[static_cast<size_t>(t)];
    cols[static_cast<size_t>(t)].insert(e.label);
    cols[static_cast<size_t>(z)].insert(e.label);
  }
  for (int v = 0; v < n; ++v) {
    if (graph.vertex_labels[static_cast<size_t>(v)] == "T") {
      if (deg[static_cast<size_t>(v)] != 3 || cols[static_cast<size_t>(v)].size() != 3)
        throw std::invalid_argument("orientation: T vertex needs one edge per color");
    } else if (cols[static_cast<size_t>(v)].size() > 1) {
      throw std::invalid_argument("orientation: Z vertex must be monochromatic");
    }
  }
}

PlanarOrientation to_orientation(const Planar3DM& m) {
  m.dm.validate();
  PeriodicGraph g = m.dm.graph;
  const std::vector<std::string> old = g.vertex_labels;
  for (size_t i = 0; i < g.vertex_labels.size(); ++i)
    g.vertex_labels[i] = old[i] == "T" ? "T" : "Z";
  for (ProtoEdge& e : g.edges) {
    const int el = old[static_cast<size_t>(e.u)] == "T" ? e.v : e.u;
    e.label = old[static_cast<size_t>(el)];
  }
  PlanarOrientation out;
  out.inst.graph = std::move(g);
  out.inst.validate();
  out.drawing = m.drawing;
  out.drawing.graph = out.inst.graph;
  return out;
}

std::vector<char> orientation_from_matching(const OrientationInstance& o,
                                            const std::vector<char>& matched) {
  o.validate();
  const int n = o.graph.num_vertices();
  std::vector<int> tidx(static_cast<size_t>(n), -1);
  int k = 0;
  for (int v = 0; v < n; ++v)
    if (o.graph.vertex_labels[static_cast<size_t>(v)] == "T") tidx[static_cast<size_t>(v)] = k++;
  if (static_cast<int>(matched.size()) != k)
    throw std::invalid_argument("orientation_from_matching: flag count mismatch");
  std::vector<char> toward;
  for (const ProtoEdge& e : o.graph.edges) {
    const int t = o.graph.vertex_labels[static_cast<size_t>(e.u)] == "T" ? e.u : e.v;
    toward.push_back(matched[static_cast<size_t>(tidx[static_cast<size_t>(t)])]);
  }
  return toward;
}

std::vector<char> matching_from_orientation(const OrientationInstance& o,
                                            const std::vector<char>& toward) {
  o.validate();
  if (toward.size() != static_cast<size_t>(o.graph.num_edges()))
    throw std::invalid_argument("matching_from_orientation: flag count mismatch");
  const int n = o.graph.num_vertices();
  std::vector<int> seen(static_cast<size_t>(n), -1);
  for (size_t i = 0; i < o.graph.edges.size(); ++i) {
    const ProtoEdge& e = o.graph.edges[i];
    const int t = o.graph.vertex_labels[static_cast<size_t>(e.u)] == "T" ? e.u : e.v;
    const int f = toward[i] ? 1 : 0;
    if (seen[static_cast<size_t>(t)] == -1)
      seen[static_cast<size_t>(t)] = f;
    else if (seen[static_cast<size_t>(t)] != f)
      throw std::invalid_argument(
          "matching_from_orientation: triple with mixed edge orientations");
  }
  std::vector<char> matched;
  for (int v = 0; v < n; ++v)
    if (o.graph.vertex_labels[static_cast<size_t>(v)] == "T")
      matched.push_back(seen[static_cast<size_t>(v)] == 1);
  return matched;
}

PeriodicCNF dm_to_exactly_one_cnf(const Periodic3DM& m) {
  m.validate();
  PeriodicCNF f(m.graph.dim);
  const int n = m.graph.num_vertices();
  std::vector<int> tvar(static_cast<size_t>(n), -1);
  for (int v = 0; v < n; ++v)
    if (m.graph.vertex_labels[static_cast<size_t>(v)] == "T")
      tvar[static_cast<size_t>(v)] = f.add_var(m.graph.vertex_names[static_cast<size_t>(v)]);
  for (int v = 0; v < n; ++v) {
    if (m.graph.vertex_labels[static_cast<size_t>(v)] == "T") continue;
    Clause c;
    for (const ProtoEdge& e : m.graph.edges) {
      if (e.u == v && tvar[static_cast<size_t>(e.v)] >= 0)
        c.push_back(Lit{tvar[static_cast<size_t>(e.v)], e.shift, false});
      else if (e.v == v && tvar[static_cast<size_t>(e.u)] >= 0)
        c.push_back(Lit{tvar[static_cast<size_t>(e.u)], negate(e.shift), false});
    }
    f.add_clause(std::move(c));
  }
  return f;
}

}  // namespace periodica
