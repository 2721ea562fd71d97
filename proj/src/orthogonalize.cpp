// Planar -> planar orthogonal conversion via the slab construction.
//
// The drawing is refined to eps = 1/(480 M^2) where M is the input grid
// size (the documented bound 30 M^2 c with c = 16). All geometry below is
// integer arithmetic in eps units; K = 480 M^2 is one lattice period.
//
// Outline:
//  1. Bends of the input polylines become dummy nodes, so every drawn piece
//     is a straight segment between nodes. Steep pieces (|dy| > K/2) are
//     subdivided so a piece never spans half a period vertically; this keeps
//     every rerouted piece clear of its own vertical translates.
//  2. Every node gets a 6eps x 12eps box around its anchor with ports on the
//     box sides: four candidate ports on the left, four on the right, one on
//     top, one on bottom. Piece ends are assigned ports on the side they
//     leave through, ordered by slope (ties by protoedge index).
//  3. Vertical lines through all node x positions cut the cell into slabs.
//     Where a piece crosses a slab boundary it is assigned a new crossing
//     height: crossings keep their order inside each gap between nodes on
//     the line and are snapped to integer eps positions at least 7 eps away
//     from node anchors (clearing the boxes).
//  4. Inside a slab each piece becomes an H-V-H "Z" through a private
//     vertical lane. Lane order is chosen by a constraint graph that rules
//     out crossings between any two Zs and their lattice translates; an
//     unsatisfiable constraint set or too many pieces per slab raises
//     std::length_error.
//  5. Inside each box, connectors from the anchor to the assigned ports are
//     found by a small deterministic disjoint-path router.

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "grid_router.hpp"
#include "periodica/drawing.hpp"

namespace periodica {

namespace {

using ll = long long;

ll floordiv(ll a, ll b) {
  ll q = a / b, r = a % b;
  return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}
ll floormod(ll a, ll b) { return a - floordiv(a, b) * b; }

struct UPt {
  ll x = 0, y = 0;
  friend bool operator==(const UPt& a, const UPt& b) {
    return a.x == b.x && a.y == b.y;
  }
  friend bool operator!=(const UPt& a, const UPt& b) { return !(a == b); }
};

BigInt big_floordiv(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;  // truncates toward zero
  if ((a % b) != 0 && ((a < 0) != (b < 0))) q -= 1;
  return q;
}

ll rat_floor(const Rat& r) {
  return big_floordiv(r.num, r.den).convert_to<ll>();
}

ll rat_round(const Rat& r) {  // nearest integer, half up
  return big_floordiv(2 * r.num + r.den, 2 * r.den).convert_to<ll>();
}

ll to_units(const Rat& c, ll N, const char* what) {
  BigInt t = c.num * N;
  if (t % c.den != 0)
    throw std::invalid_argument(std::string("orthogonalize: ") + what +
                                " is not a multiple of 1/M");
  return (t / c.den).convert_to<ll>();
}

struct Node {
  ll x = 0, y = 0;  // representative anchor, x in [0,K) (y too in 2D)
  // ends incident to this node: (piece index, side) with side 0 = the
  // canonical A end (left / bottom), 1 = the B end
  std::vector<std::pair<int, int>> ends;
  std::map<std::pair<int, int>, UPt> port;  // end -> port (rep coords)
  std::map<std::pair<int, int>, std::vector<UPt>> inner;  // anchor..port
};

struct Piece {
  int na = -1, nb = -1;
  UPt A, B;  // walk-absolute; canonical: vertical ? A.y < B.y : A.x < B.x
  bool vertical = false;
  bool flipped = false;  // canonicalization reversed the walk direction
  std::vector<std::pair<ll, Rat>> cross;  // (absolute line x, exact height)
  std::vector<UPt> stations;              // port, crossings..., port
  std::vector<UPt> route;                 // final polyline portA..portB
};

struct ZSpan {
  ll kx = 0;          // absolute slab offset: lane_abs = lane_rep + kx
  ll leftH = 0, rightH = 0;
  int piece = -1, span = -1;
  ll lane = 0;  // assigned absolute lane x
};

constexpr ll kInf = std::numeric_limits<ll>::max() / 4;

// Snap gap-relative crossing positions to distinct integers, preserving
// order and the 7-eps margins toward finite gap ends.
std::vector<ll> pack_gap(const std::vector<Rat>& upos, ll lo_margin,
                         ll hi_margin) {
  size_t r = upos.size();
  std::vector<ll> t(r);
  for (size_t i = 0; i < r; ++i) t[i] = rat_round(upos[i]);
  for (size_t i = 0; i < r; ++i) {
    if (t[i] < lo_margin) t[i] = lo_margin;
    if (i > 0 && t[i] <= t[i - 1]) t[i] = t[i - 1] + 1;
  }
  for (size_t i = r; i-- > 0;) {
    if (t[i] > hi_margin) t[i] = hi_margin;
    if (i + 1 < r && t[i] >= t[i + 1]) t[i] = t[i + 1] - 1;
  }
  for (size_t i = 0; i < r; ++i) {
    if (t[i] < lo_margin || t[i] > hi_margin ||
        (i > 0 && t[i] <= t[i - 1]))
      throw std::length_error(
          "orthogonalize: too many crossings in one gap between nodes");
  }
  return t;
}

void append_pt(std::vector<UPt>& out, UPt p) {
  if (!out.empty() && out.back() == p) return;
  if (out.size() >= 2) {
    const UPt& a = out[out.size() - 2];
    const UPt& b = out.back();
    if ((a.x == b.x && b.x == p.x) || (a.y == b.y && b.y == p.y)) {
      out.back() = p;  // merge collinear runs
      return;
    }
  }
  out.push_back(p);
}

}  // namespace

PeriodicDrawing orthogonalize(const PeriodicDrawing& dr) {
  const PeriodicGraph& g = dr.graph;
  if (g.dim != 1 && g.dim != 2)
    throw std::invalid_argument("orthogonalize: dimension must be 1 or 2");
  {
    std::vector<int> deg(static_cast<size_t>(g.num_vertices()), 0);
    for (const auto& e : g.edges) {
      deg[static_cast<size_t>(e.u)]++;
      deg[static_cast<size_t>(e.v)]++;
    }
    for (int d : deg)
      if (d > 4)
        throw std::invalid_argument("orthogonalize: max degree 4 exceeded");
  }
  DrawingReport rep = check_drawing(dr);
  if (!rep.is_planar)
    throw std::invalid_argument("orthogonalize: input drawing is not planar");

  const ll M = dr.grid_size;
  const ll K = 480 * M * M;  // eps units per lattice period
  const bool d2 = (g.dim == 2);
  const int V = g.num_vertices();
  const int E = g.num_edges();

  // --- nodes (anchors first) and straight pieces -------------------------
  std::vector<Node> nodes(static_cast<size_t>(V));
  std::map<std::pair<ll, ll>, int> node_at;
  for (int v = 0; v < V; ++v) {
    UPt a{to_units(dr.vertex_points[static_cast<size_t>(v)].x, K, "anchor"),
          to_units(dr.vertex_points[static_cast<size_t>(v)].y, K, "anchor")};
    if (a.x < 0 || a.x >= K || (d2 && (a.y < 0 || a.y >= K)))
      throw std::invalid_argument(
          "orthogonalize: anchors must lie in the origin cell");
    nodes[static_cast<size_t>(v)].x = a.x;
    nodes[static_cast<size_t>(v)].y = a.y;
    if (!node_at.emplace(std::make_pair(a.x, a.y), v).second)
      throw std::invalid_argument("orthogonalize: coincident anchors");
  }

  std::vector<Piece> pieces;
  std::vector<std::vector<int>> chain(static_cast<size_t>(E));  // walk order
  for (int ei = 0; ei < E; ++ei) {
    const auto& path = dr.edge_paths[static_cast<size_t>(ei)];
    std::vector<UPt> pts;
    for (const auto& p : path) {
      UPt q{to_units(p.x, K, "path point"), to_units(p.y, K, "path point")};
      if (pts.empty() || pts.back() != q) pts.push_back(q);
    }
    if (pts.size() < 2)
      throw std::invalid_argument("orthogonalize: degenerate edge path");
    // subdivide steep non-vertical segments so |dy| <= K/2 per piece
    std::vector<UPt> sub{pts[0]};
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
      UPt p = pts[i], q = pts[i + 1];
      ll ady = q.y > p.y ? q.y - p.y : p.y - q.y;
      int parts = 1;
      if (p.x != q.x && ady > K / 2) parts = (ady <= K) ? 2 : 4;
      if (p.x != q.x && ady > 2 * K)
        throw std::invalid_argument(
            "orthogonalize: segment spans more than two periods vertically");
      if ((q.x - p.x) % parts != 0 || (q.y - p.y) % parts != 0)
        throw std::invalid_argument(
            "orthogonalize: cannot subdivide segment on the refined grid");
      for (int t = 1; t <= parts; ++t)
        sub.push_back(UPt{p.x + (q.x - p.x) / parts * t,
                          p.y + (q.y - p.y) / parts * t});
    }
    pts = std::move(sub);
    // node ids along the walk
    std::vector<int> nid(pts.size(), -1);
    nid.front() = g.edges[static_cast<size_t>(ei)].u;
    nid.back() = g.edges[static_cast<size_t>(ei)].v;
    for (size_t i = 1; i + 1 < pts.size(); ++i) {
      std::pair<ll, ll> rep_pos{floormod(pts[i].x, K),
                                d2 ? floormod(pts[i].y, K) : pts[i].y};
      auto it = node_at.find(rep_pos);
      if (it != node_at.end())
        throw std::invalid_argument(
            "orthogonalize: a bend coincides with another drawing feature");
      int id = static_cast<int>(nodes.size());
      node_at.emplace(rep_pos, id);
      Node nd;
      nd.x = rep_pos.first;
      nd.y = rep_pos.second;
      nodes.push_back(nd);
      nid[i] = id;
    }
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
      Piece pc;
      pc.A = pts[i];
      pc.B = pts[i + 1];
      pc.na = nid[i];
      pc.nb = nid[i + 1];
      pc.vertical = (pc.A.x == pc.B.x);
      if (pc.vertical ? pc.A.y > pc.B.y : pc.A.x > pc.B.x) {
        std::swap(pc.A, pc.B);
        std::swap(pc.na, pc.nb);
        pc.flipped = true;
      }
      // strictly more than one period would run through the lower node's
      // own translate; exactly one period (a vertical (0,1)-loop) is fine
      if (pc.vertical && pc.B.y - pc.A.y > K && d2)
        throw std::invalid_argument(
            "orthogonalize: vertical segment spans more than one period");
      int pi = static_cast<int>(pieces.size());
      nodes[static_cast<size_t>(pc.na)].ends.push_back({pi, 0});
      nodes[static_cast<size_t>(pc.nb)].ends.push_back({pi, 1});
      pieces.push_back(std::move(pc));
      chain[static_cast<size_t>(ei)].push_back(pi);
    }
  }

  // --- port assignment ----------------------------------------------------
  auto end_dir = [&](const std::pair<int, int>& e) -> UPt {
    const Piece& pc = pieces[static_cast<size_t>(e.first)];
    if (e.second == 0) return UPt{pc.B.x - pc.A.x, pc.B.y - pc.A.y};
    return UPt{pc.A.x - pc.B.x, pc.A.y - pc.B.y};
  };
  static const ll kPortY[4] = {4, 2, -2, -4};
  for (auto& nd : nodes) {
    if (nd.ends.size() > 4)
      throw std::invalid_argument("orthogonalize: node degree exceeds 4");
    std::vector<std::pair<int, int>> right, left, top, bottom;
    for (const auto& e : nd.ends) {
      UPt d = end_dir(e);
      if (d.x > 0)
        right.push_back(e);
      else if (d.x < 0)
        left.push_back(e);
      else if (d.y > 0)
        top.push_back(e);
      else
        bottom.push_back(e);
    }
    if (top.size() > 1 || bottom.size() > 1)
      throw std::invalid_argument(
          "orthogonalize: two overlapping vertical segments at a node");
    // top-down on either side; ties broken by (piece, side)
    auto slope_cmp = [&](bool descending) {
      return [&, descending](const std::pair<int, int>& a,
                             const std::pair<int, int>& b) {
        UPt da = end_dir(a), db = end_dir(b);
        __int128 lhs = static_cast<__int128>(da.y) * db.x;
        __int128 rhs = static_cast<__int128>(db.y) * da.x;
        if (lhs != rhs) return descending ? lhs > rhs : lhs < rhs;
        return a < b;
      };
    };
    std::sort(right.begin(), right.end(), slope_cmp(true));
    std::sort(left.begin(), left.end(), slope_cmp(false));
    for (size_t r = 0; r < right.size(); ++r)
      nd.port[right[r]] = UPt{nd.x + 3, nd.y + kPortY[r]};
    for (size_t r = 0; r < left.size(); ++r)
      nd.port[left[r]] = UPt{nd.x - 3, nd.y + kPortY[r]};
    for (const auto& e : top) nd.port[e] = UPt{nd.x, nd.y + 6};
    for (const auto& e : bottom) nd.port[e] = UPt{nd.x, nd.y - 6};
  }

  // --- slab boundaries and crossing heights --------------------------------
  std::vector<ll> xs;
  for (const auto& nd : nodes) xs.push_back(nd.x);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  // In 2D a slab whose pieces climb a full period in total can wind around
  // the torus ("spiral" columns of diagonals); no consistent one-lane order
  // exists then. Split such slabs with node-free virtual boundary lines so
  // every slab's total rise stays below one period, which makes the lane
  // constraints acyclic.
  if (d2 && !xs.empty()) {
    std::vector<ll> extra;
    for (size_t j = 0; j < xs.size(); ++j) {
      ll x1 = xs[j];
      ll w = (j + 1 < xs.size()) ? xs[j + 1] - x1 : xs.front() + K - x1;
      Rat S(0);
      ll zcount = 0;
      for (const auto& pc : pieces) {
        if (pc.vertical) continue;
        // lattice lifts of the slab fully covered by this piece
        ll cnt = 0;
        for (ll kk = floordiv(pc.A.x - x1, K); ; ++kk) {
          ll sx1 = x1 + kk * K;
          if (sx1 + w > pc.B.x) break;
          if (sx1 >= pc.A.x) ++cnt;
        }
        if (cnt > 0) {
          ll ady = pc.B.y > pc.A.y ? pc.B.y - pc.A.y : pc.A.y - pc.B.y;
          S = S + Rat(ady) * Rat(w) / Rat(pc.B.x - pc.A.x) * Rat(cnt);
          zcount += cnt;
        }
      }
      if (zcount == 0) continue;
      ll slack = 2 * zcount * (zcount + 8);  // packing-drift allowance
      if (slack >= K / 2)
        throw std::length_error("orthogonalize: too many pieces in one slab");
      Rat budget(K / 2 - slack);
      ll parts = 1;
      if (S > budget)
        parts = big_floordiv(S.num + S.den * budget.num - 1,
                             S.den * budget.num)
                    .convert_to<ll>();
      if (parts <= 1) continue;
      if (w / parts < zcount + 10)
        throw std::length_error(
            "orthogonalize: slab too narrow to split around a spiral");
      for (ll t = 1; t < parts; ++t)
        extra.push_back(floormod(x1 + w * t / parts, K));
    }
    xs.insert(xs.end(), extra.begin(), extra.end());
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  }
  std::map<ll, int> line_of;
  for (size_t i = 0; i < xs.size(); ++i)
    line_of[xs[i]] = static_cast<int>(i);
  const int L = static_cast<int>(xs.size());
  std::vector<std::vector<ll>> line_ys(static_cast<size_t>(L));
  for (const auto& nd : nodes)
    line_ys[static_cast<size_t>(line_of[nd.x])].push_back(nd.y);
  for (auto& ys : line_ys) std::sort(ys.begin(), ys.end());

  // crossing events grouped per (line, gap); gap index = index of the gap's
  // lower fixed y (wrap gap in 2D uses the last index)
  struct Event {
    Rat u;     // exact position relative to the representative gap's lower end
    ll shift;  // absolute height = shift + packed integer position
    int piece, ord;
  };
  std::map<std::pair<int, int>, std::vector<Event>> gap_events;
  for (size_t pi = 0; pi < pieces.size(); ++pi) {
    Piece& pc = pieces[pi];
    if (pc.vertical) continue;
    for (int l = 0; l < L; ++l) {
      ll k = floordiv(pc.A.x - xs[static_cast<size_t>(l)], K) + 1;
      for (ll X = xs[static_cast<size_t>(l)] + k * K; X < pc.B.x; X += K) {
        if (X <= pc.A.x) continue;
        Rat y = Rat(pc.A.y) + Rat(pc.B.y - pc.A.y) * Rat(X - pc.A.x) /
                                  Rat(pc.B.x - pc.A.x);
        pc.cross.push_back({X, y});
      }
    }
    std::sort(pc.cross.begin(), pc.cross.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (size_t c = 0; c < pc.cross.size(); ++c) {
      ll X = pc.cross[c].first;
      const Rat& y = pc.cross[c].second;
      int l = line_of.at(floormod(X, K));
      const auto& ys = line_ys[static_cast<size_t>(l)];
      Event ev;
      ev.piece = static_cast<int>(pi);
      ev.ord = static_cast<int>(c);
      int gap;
      if (d2 && ys.empty()) {
        // virtual line: one cyclic gap covering the whole period
        Rat ym = y - Rat(K) * Rat(rat_floor(y / Rat(K)));
        gap = -2;
        ev.u = ym;
        ev.shift = rat_floor(y - ym);
      } else if (d2) {
        Rat ym = y - Rat(K) * Rat(rat_floor(y / Rat(K)));
        // locate the gap between consecutive node y's (cyclically)
        size_t i = 0;
        while (i < ys.size() && Rat(ys[i]) < ym) ++i;
        if (i < ys.size() && Rat(ys[i]) == ym)
          throw std::invalid_argument(
              "orthogonalize: edge passes through a node");
        ll base_rep;
        if (i == 0) {  // below the first node: wrap gap, shifted down
          gap = static_cast<int>(ys.size()) - 1;
          base_rep = ys.back() - K;
        } else {
          gap = static_cast<int>(i) - 1;
          base_rep = ys[i - 1];
        }
        ev.u = ym - Rat(base_rep);
        ev.shift = rat_floor(y - ev.u);  // integer: y - u is exact
      } else {
        size_t i = 0;
        while (i < ys.size() && Rat(ys[i]) < y) ++i;
        if (i < ys.size() && Rat(ys[i]) == y)
          throw std::invalid_argument(
              "orthogonalize: edge passes through a node");
        gap = static_cast<int>(i) - 1;  // -1 = below all nodes
        ll base_rep = (gap >= 0) ? ys[static_cast<size_t>(gap)] : 0;
        ev.u = y - Rat(base_rep);
        ev.shift = base_rep;
      }
      gap_events[{l, gap}].push_back(ev);
    }
  }
  // pack each gap and record the final absolute heights
  std::map<std::pair<int, int>, ll> cross_height;  // (piece, ord) -> height
  for (auto& [key, evs] : gap_events) {
    // Packing works in representative coordinates: lattice translates of a
    // crossing land at the same in-gap position, so order and distinctness
    // must hold modulo the period.
    std::sort(evs.begin(), evs.end(), [](const Event& a, const Event& b) {
      if (a.u != b.u) return a.u < b.u;
      return std::make_pair(a.piece, a.ord) < std::make_pair(b.piece, b.ord);
    });
    // equal representative positions from the SAME lift mean two pieces
    // truly intersect; equal positions from different lifts (one period
    // apart) are fine and get separated by the integer packing
    for (size_t i = 0; i + 1 < evs.size(); ++i)
      if (evs[i].u == evs[i + 1].u && evs[i].shift == evs[i + 1].shift)
        throw std::invalid_argument(
            "orthogonalize: coincident crossings on a slab boundary");
    const auto& ys = line_ys[static_cast<size_t>(key.first)];
    if (key.second == -2) {
      // cyclic packing over one whole period (virtual line, no boxes)
      size_t r = evs.size();
      std::vector<ll> t(r);
      for (size_t i = 0; i < r; ++i) t[i] = rat_round(evs[i].u);
      for (size_t i = 1; i < r; ++i)
        if (t[i] <= t[i - 1]) t[i] = t[i - 1] + 1;
      if (r > 1 && t[r - 1] - t[0] >= K)
        throw std::length_error(
            "orthogonalize: too many crossings on a virtual line");
      for (size_t i = 0; i < r; ++i)
        cross_height[{evs[i].piece, evs[i].ord}] = evs[i].shift + t[i];
      continue;
    }
    ll lo_margin = 7, hi_margin;
    if (!d2 && key.second < 0) {
      lo_margin = -kInf;
      hi_margin = ys.front() - 7;
    } else if (!d2 && key.second + 1 >= static_cast<int>(ys.size())) {
      hi_margin = kInf;
    } else if (d2 && key.second + 1 >= static_cast<int>(ys.size())) {
      hi_margin = (ys.front() + K) - ys.back() - 7;  // wrap gap length - 7
    } else {
      hi_margin = ys[static_cast<size_t>(key.second) + 1] -
                  ys[static_cast<size_t>(key.second)] - 7;
    }
    std::vector<Rat> upos;
    for (const auto& ev : evs) upos.push_back(ev.u);
    std::vector<ll> t = pack_gap(upos, lo_margin, hi_margin);
    for (size_t i = 0; i < evs.size(); ++i)
      cross_height[{evs[i].piece, evs[i].ord}] = evs[i].shift + t[i];
  }

  // --- stations and Z spans ------------------------------------------------
  std::vector<std::vector<ZSpan>> slabs(static_cast<size_t>(L));
  for (size_t pi = 0; pi < pieces.size(); ++pi) {
    Piece& pc = pieces[pi];
    if (pc.vertical) continue;
    const Node& na = nodes[static_cast<size_t>(pc.na)];
    const Node& nb = nodes[static_cast<size_t>(pc.nb)];
    UPt pa = na.port.at({static_cast<int>(pi), 0});
    UPt pb = nb.port.at({static_cast<int>(pi), 1});
    pc.stations.clear();
    pc.stations.push_back(UPt{pc.A.x + (pa.x - na.x), pc.A.y + (pa.y - na.y)});
    for (size_t c = 0; c < pc.cross.size(); ++c)
      pc.stations.push_back(
          UPt{pc.cross[c].first,
              cross_height.at({static_cast<int>(pi), static_cast<int>(c)})});
    pc.stations.push_back(UPt{pc.B.x + (pb.x - nb.x), pc.B.y + (pb.y - nb.y)});
    for (size_t s = 0; s + 1 < pc.stations.size(); ++s) {
      // slab is identified by the line at/under the span's left end
      ll lx = (s == 0) ? pc.A.x : pc.stations[s].x;
      ll rep_x = floormod(lx, K);
      auto it = line_of.find(rep_x);
      if (it == line_of.end())
        throw std::logic_error("orthogonalize: internal slab lookup failure");
      ZSpan z;
      z.kx = lx - rep_x;
      z.leftH = pc.stations[s].y;
      z.rightH = pc.stations[s + 1].y;
      z.piece = static_cast<int>(pi);
      z.span = static_cast<int>(s);
      slabs[static_cast<size_t>(it->second)].push_back(z);
    }
  }

  // --- lane assignment per slab --------------------------------------------
  for (int l = 0; l < L; ++l) {
    auto& zs = slabs[static_cast<size_t>(l)];
    if (zs.empty()) continue;
    ll width = (l + 1 < L) ? xs[static_cast<size_t>(l) + 1] -
                                 xs[static_cast<size_t>(l)]
                           : xs.front() + K - xs.back();
    int n = static_cast<int>(zs.size());
    // need[p][q] true: lane_p must be < lane_q
    std::vector<std::vector<bool>> need(static_cast<size_t>(n),
                                        std::vector<bool>(static_cast<size_t>(n), false));
    for (int p = 0; p < n; ++p) {
      for (int q = 0; q < n; ++q) {
        if (p == q && !d2) continue;
        ll a = zs[static_cast<size_t>(p)].leftH,
           b = zs[static_cast<size_t>(p)].rightH;
        ll c0 = zs[static_cast<size_t>(q)].leftH,
           d0 = zs[static_cast<size_t>(q)].rightH;
        ll lop = std::min(a, b), hip = std::max(a, b);
        ll loq = std::min(c0, d0), hiq = std::max(c0, d0);
        ll nlo = 0, nhi = 0;
        if (d2) {
          nlo = floordiv(lop - hiq, K) - 1;
          nhi = floordiv(hip - loq, K) + 1;
        }
        for (ll nn = nlo; nn <= nhi; ++nn) {
          if (p == q && nn == 0) continue;
          ll c = c0 + nn * K, d = d0 + nn * K;
          bool lt = false, gt = false;
          if (c >= lop && c <= hip) gt = true;  // q.H1 would hit p.V
          if (d >= lop && d <= hip) lt = true;  // q.H2 would hit p.V
          if (a >= loq + nn * K && a <= hiq + nn * K) lt = true;
          if (b >= loq + nn * K && b <= hiq + nn * K) gt = true;
          if (p == q && (lt || gt))
            throw std::length_error(
                "orthogonalize: a piece conflicts with its own translate");
          if (lt && gt)
            throw std::length_error(
                "orthogonalize: unsatisfiable lane constraints in a slab");
          if (lt) need[static_cast<size_t>(p)][static_cast<size_t>(q)] = true;
          if (gt) need[static_cast<size_t>(q)][static_cast<size_t>(p)] = true;
        }
      }
    }
    // deterministic Kahn toposort (smallest index first)
    std::vector<int> indeg(static_cast<size_t>(n), 0);
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q)
        if (need[static_cast<size_t>(p)][static_cast<size_t>(q)])
          indeg[static_cast<size_t>(q)]++;
    std::vector<int> order;
    std::vector<bool> done(static_cast<size_t>(n), false);
    for (int step = 0; step < n; ++step) {
      int pick = -1;
      for (int p = 0; p < n; ++p)
        if (!done[static_cast<size_t>(p)] && indeg[static_cast<size_t>(p)] == 0) {
          pick = p;
          break;
        }
      if (pick < 0)
        throw std::length_error(
            "orthogonalize: cyclic lane constraints in a slab");
      done[static_cast<size_t>(pick)] = true;
      order.push_back(pick);
      for (int q = 0; q < n; ++q)
        if (need[static_cast<size_t>(pick)][static_cast<size_t>(q)])
          indeg[static_cast<size_t>(q)]--;
    }
    if (4 + n - 1 > width - 4)
      throw std::length_error("orthogonalize: too many pieces in one slab");
    for (int r = 0; r < n; ++r) {
      ZSpan& z = zs[static_cast<size_t>(order[static_cast<size_t>(r)])];
      z.lane = xs[static_cast<size_t>(l)] + 4 + r + z.kx;
    }
  }
  // emit piece routes (in span order)
  for (auto& pc : pieces) {
    if (pc.vertical) {
      pc.route = {UPt{pc.A.x, pc.A.y + 6}, UPt{pc.B.x, pc.B.y - 6}};
      continue;
    }
    // collect this piece's spans with lanes
    std::vector<std::pair<int, ll>> lanes;  // (span, lane)
    for (const auto& zs : slabs)
      for (const auto& z : zs)
        if (z.piece >= 0 &&
            &pc == &pieces[static_cast<size_t>(z.piece)])
          lanes.push_back({z.span, z.lane});
    std::sort(lanes.begin(), lanes.end());
    pc.route.clear();
    append_pt(pc.route, pc.stations.front());
    for (const auto& [s, lane] : lanes) {
      const UPt& a = pc.stations[static_cast<size_t>(s)];
      const UPt& b = pc.stations[static_cast<size_t>(s) + 1];
      append_pt(pc.route, a);
      append_pt(pc.route, UPt{lane, a.y});
      append_pt(pc.route, UPt{lane, b.y});
      append_pt(pc.route, b);
    }
  }

  // --- in-box connectors ---------------------------------------------------
  using detail::Cell;
  std::set<Cell> allowed;
  for (int cx = -2; cx <= 2; ++cx)
    for (int cy = -5; cy <= 5; ++cy) allowed.insert({cx, cy});
  static const Cell kCompass[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (auto& nd : nodes) {
    if (nd.ends.empty()) continue;
    // cyclic (counterclockwise) order of the true directions
    std::vector<std::pair<int, int>> ends = nd.ends;
    auto half = [&](const UPt& d) {
      return (d.y < 0 || (d.y == 0 && d.x < 0)) ? 1 : 0;
    };
    std::sort(ends.begin(), ends.end(),
              [&](const std::pair<int, int>& ea, const std::pair<int, int>& eb) {
                UPt da = end_dir(ea), db = end_dir(eb);
                if (half(da) != half(db)) return half(da) < half(db);
                __int128 cr = static_cast<__int128>(da.x) * db.y -
                              static_cast<__int128>(da.y) * db.x;
                if (cr != 0) return cr > 0;
                return ea < eb;
              });
    int k = static_cast<int>(ends.size());
    bool routed = false;
    for (int mask = 0; mask < 16 && !routed; ++mask) {
      if (__builtin_popcount(static_cast<unsigned>(mask)) != k) continue;
      std::vector<int> comp;
      for (int c = 0; c < 4; ++c)
        if (mask & (1 << c)) comp.push_back(c);
      for (int rot = 0; rot < k && !routed; ++rot) {
        std::vector<detail::RouteSpec> specs;
        for (int i = 0; i < k; ++i) {
          const auto& e = ends[static_cast<size_t>(i)];
          UPt port = nd.port.at(e);
          detail::RouteSpec rs;
          rs.first_step = kCompass[comp[static_cast<size_t>((i + rot) % k)]];
          rs.goal = {static_cast<int>(port.x - nd.x),
                     static_cast<int>(port.y - nd.y)};
          specs.push_back(rs);
        }
        auto paths = detail::route_disjoint_paths(allowed, {0, 0}, specs);
        if (!paths) continue;
        for (int i = 0; i < k; ++i) {
          std::vector<UPt> poly;
          for (const auto& c : (*paths)[static_cast<size_t>(i)])
            append_pt(poly, UPt{nd.x + c.first, nd.y + c.second});
          nd.inner[ends[static_cast<size_t>(i)]] = std::move(poly);
        }
        routed = true;
      }
    }
    if (!routed)
      throw std::logic_error(
          "orthogonalize: in-box connector routing failed");
  }

  // --- assemble output polylines -------------------------------------------
  PeriodicDrawing out;
  out.graph = g;
  out.grid_size = K;
  out.vertex_points = dr.vertex_points;
  out.edge_paths.resize(static_cast<size_t>(E));
  out.orthogonal = true;
  for (int ei = 0; ei < E; ++ei) {
    std::vector<UPt> poly;
    for (size_t c = 0; c < chain[static_cast<size_t>(ei)].size(); ++c) {
      int pi = chain[static_cast<size_t>(ei)][c];
      const Piece& pc = pieces[static_cast<size_t>(pi)];
      int side_in = pc.flipped ? 1 : 0;   // walk enters at this end
      int side_out = pc.flipped ? 0 : 1;  // walk leaves at this end
      // inner connector at the walk-entry node
      const Node& nin = nodes[static_cast<size_t>(pc.flipped ? pc.nb : pc.na)];
      UPt walk_entry = pc.flipped ? pc.B : pc.A;
      UPt off{walk_entry.x - nin.x, walk_entry.y - nin.y};
      for (const auto& p : nin.inner.at({pi, side_in}))
        append_pt(poly, UPt{p.x + off.x, p.y + off.y});
      // the piece route, oriented along the walk
      if (!pc.flipped) {
        for (const auto& p : pc.route) append_pt(poly, p);
      } else {
        for (auto it = pc.route.rbegin(); it != pc.route.rend(); ++it)
          append_pt(poly, *it);
      }
      // inner connector at the walk-exit node, reversed (port -> anchor)
      const Node& nout = nodes[static_cast<size_t>(pc.flipped ? pc.na : pc.nb)];
      UPt walk_exit = pc.flipped ? pc.A : pc.B;
      UPt off2{walk_exit.x - nout.x, walk_exit.y - nout.y};
      const auto& inner_out = nout.inner.at({pi, side_out});
      for (auto it = inner_out.rbegin(); it != inner_out.rend(); ++it)
        append_pt(poly, UPt{it->x + off2.x, it->y + off2.y});
    }
    std::vector<Pt> rp;
    for (const auto& p : poly)
      rp.push_back(Pt{Rat(BigInt(p.x), BigInt(K)), Rat(BigInt(p.y), BigInt(K))});
    out.edge_paths[static_cast<size_t>(ei)] = std::move(rp);
  }
  // locality: every path must stay in the union of its endpoint cells
  bool local = true;
  for (int ei = 0; ei < E && local; ++ei) {
    Pt sh = out.shift_point(g.edges[static_cast<size_t>(ei)].shift);
    Rat lox = std::min(Rat(0), sh.x), hix = std::max(Rat(0), sh.x) + Rat(1);
    Rat loy = std::min(Rat(0), sh.y), hiy = std::max(Rat(0), sh.y) + Rat(1);
    for (const auto& p : out.edge_paths[static_cast<size_t>(ei)]) {
      if (p.x < lox || p.x > hix) local = false;
      if (d2 && (p.y < loy || p.y > hiy)) local = false;
    }
  }
  out.local = local;
  out.validate();
  return out;
}

}  // namespace periodica
