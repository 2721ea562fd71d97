#include "periodica/drawing.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace periodica {

void PeriodicDrawing::validate() const {
  if (graph.dim > 2) throw std::invalid_argument("drawing requires d <= 2");
  if (vertex_points.size() != static_cast<size_t>(graph.num_vertices()))
    throw std::invalid_argument("vertex point count mismatch");
  if (edge_paths.size() != static_cast<size_t>(graph.num_edges()))
    throw std::invalid_argument("edge path count mismatch");
  for (size_t i = 0; i < edge_paths.size(); ++i) {
    const auto& e = graph.edges[i];
    const auto& path = edge_paths[i];
    if (path.size() < 2) throw std::invalid_argument("edge path too short");
    Pt want_a = vertex_points[static_cast<size_t>(e.u)];
    Pt want_b = vertex_points[static_cast<size_t>(e.v)] + shift_point(e.shift);
    if (path.front() != want_a || path.back() != want_b)
      throw std::invalid_argument("edge path endpoints do not match anchors");
    if (orthogonal)
      for (size_t s = 0; s + 1 < path.size(); ++s)
        if (path[s].x != path[s + 1].x && path[s].y != path[s + 1].y)
          throw std::invalid_argument("non-axis-parallel segment in orthogonal drawing");
  }
}

// ---------------------------------------------------------------------------
// draw_orthocrossing
// ---------------------------------------------------------------------------

PeriodicDrawing draw_orthocrossing(const PeriodicGraph& g) {
  g.validate();
  if (g.dim > 2) throw std::invalid_argument("draw_orthocrossing: d must be 1 or 2");
  if (locality(g) > 1)
    throw std::invalid_argument("draw_orthocrossing: input must be 1-local");
  for (const auto& e : g.edges)
    if (e.u == e.v && l1_norm(e.shift) == 0)
      throw std::invalid_argument("draw_orthocrossing: degenerate zero-offset loop");

  const long long V = g.num_vertices(), E = g.num_edges();
  const long long M = 5 * V + 2 * E;

  // Occurrences per vertex in protoedge order; each protoedge contributes an
  // occurrence at u and one at v (two at u for self-edges).
  std::vector<std::vector<std::pair<int, int>>> occ(static_cast<size_t>(V));
  // (edge index, side 0=u 1=v)
  for (int ei = 0; ei < E; ++ei) {
    occ[static_cast<size_t>(g.edges[static_cast<size_t>(ei)].u)].push_back({ei, 0});
    occ[static_cast<size_t>(g.edges[static_cast<size_t>(ei)].v)].push_back({ei, 1});
  }

  PeriodicDrawing dr;
  dr.graph = g;
  dr.grid_size = M;
  dr.vertex_points.resize(static_cast<size_t>(V));
  dr.edge_paths.resize(static_cast<size_t>(E));
  bool all_deg_le4 = true;
  for (int v = 0; v < V; ++v)
    if (occ[static_cast<size_t>(v)].size() > 4) all_deg_le4 = false;

  auto pt = [&](long long zx, long long zy) {
    return Pt{Rat(BigInt(zx), BigInt(M)), Rat(BigInt(zy), BigInt(M))};
  };

  // Column allocation. Ports/vertices first, then split columns for
  // x-offset edges that need two heights, then gate columns for y-offset
  // edges. Everything must fit strictly inside the unit cell.
  long long a = 1;
  std::vector<std::array<std::vector<std::pair<long long, long long>>, 2>> connectors(
      static_cast<size_t>(E));
  std::vector<std::array<long long, 2>> port_col(static_cast<size_t>(E), {0, 0});

  for (int v = 0; v < V; ++v) {
    const auto& vocc = occ[static_cast<size_t>(v)];
    long long deg = static_cast<long long>(vocc.size());
    a += 1;
    long long c = a;  // vertex column
    dr.vertex_points[static_cast<size_t>(v)] = pt(c, 2);
    if (deg <= 4) {
      // Orthogonal connectors: occurrence j -> port column c-1, c, c+1, c+2.
      static const int kRel[4] = {-1, 0, 1, 2};
      for (size_t j = 0; j < vocc.size(); ++j) {
        long long p = c + kRel[j];
        std::vector<std::pair<long long, long long>> conn;
        conn.push_back({c, 2});
        if (kRel[j] == 0) {
          conn.push_back({c, 3});
        } else if (kRel[j] == -1 || kRel[j] == 1) {
          conn.push_back({p, 2});
          conn.push_back({p, 3});
        } else {  // c+2: route below to avoid overlapping the c+1 run
          conn.push_back({c, 1});
          conn.push_back({p, 1});
          conn.push_back({p, 3});
        }
        auto [ei, side] = vocc[j];
        connectors[static_cast<size_t>(ei)][static_cast<size_t>(side)] = conn;
        port_col[static_cast<size_t>(ei)][static_cast<size_t>(side)] = p;
      }
      // Isolated vertices still reserve one spare column so the next
      // vertex's c-1 port cannot land on this anchor's column.
      a += std::max<long long>(deg, 1);
    } else {
      // Straight (diagonal) connectors, ports at c-1 .. c+deg-2.
      for (size_t j = 0; j < vocc.size(); ++j) {
        long long p = c - 1 + static_cast<long long>(j);
        auto [ei, side] = vocc[j];
        connectors[static_cast<size_t>(ei)][static_cast<size_t>(side)] = {{c, 2}, {p, 3}};
        port_col[static_cast<size_t>(ei)][static_cast<size_t>(side)] = p;
      }
      a += deg;
    }
  }

  // Heights: protoedge ei uses b = 6 + 2*ei (and b+1), strictly below the
  // top boundary except through gates.
  auto height = [&](int ei) { return 6 + 2 * static_cast<long long>(ei); };
  if (E > 0 && height(static_cast<int>(E) - 1) + 1 > M)
    throw std::length_error("draw_orthocrossing: height budget exhausted");

  for (int ei = 0; ei < E; ++ei) {
    const auto& e = g.edges[static_cast<size_t>(ei)];
    long long b = height(ei);
    long long pu = port_col[static_cast<size_t>(ei)][0];
    long long pv = port_col[static_cast<size_t>(ei)][1];
    // Build the path in grid units, then convert.
    std::vector<std::pair<long long, long long>> mid;  // between the two ports
    // dy/dx from the canonical shift (u at cell 0, v at cell shift).
    long long dx = e.shift[0];
    long long dy = g.dim == 2 ? e.shift[1] : 0;
    bool swapped = false;  // path built from v-side first
    if (dx == 0 && dy == 0) {
      mid = {{pu, 3}, {pu, b}, {pv, b}, {pv, 3}};
    } else if (dy == 0) {
      // x-offset edge; normalize to +1 by possibly starting from v.
      long long from = pu, to = pv;
      if (dx < 0) {
        std::swap(from, to);
        swapped = true;
      }
      if (from > to) {
        mid = {{from, 3}, {from, b}, {to + M, b}, {to + M, 3}};
      } else {
        long long r = a++;  // split column
        mid = {{from, 3}, {from, b},     {r, b},
               {r, b + 1}, {to + M, b + 1}, {to + M, 3}};
      }
    } else {
      // y-offset edge via a gate on the top boundary.
      long long from = pu, to = pv;
      if (dy < 0) {
        std::swap(from, to);
        swapped = true;
      }
      long long gcol = a++;
      mid = {{from, 3},     {from, b + 1}, {gcol, b + 1},
             {gcol, M + b}, {to, M + b},   {to, M + 3}};
    }
    if (a >= M)
      throw std::length_error(
          "draw_orthocrossing: column budget 5|V|+2|E| exhausted (too many "
          "offset edges for so few protovertices)");

    // Assemble: u connector, mid, reversed v connector (+ shift).
    std::vector<std::pair<long long, long long>> path;
    auto append = [&](std::pair<long long, long long> p) {
      if (path.empty() || path.back() != p) path.push_back(p);
    };
    long long sx = dx * M, sy = dy * M;
    if (!swapped) {
      for (auto p : connectors[static_cast<size_t>(ei)][0]) append(p);
      for (auto p : mid) append(p);
      auto vc = connectors[static_cast<size_t>(ei)][1];
      for (auto it = vc.rbegin(); it != vc.rend(); ++it)
        append({it->first + sx, it->second + sy});
    } else {
      // mid was built from the v side; walk u connector, reversed mid
      // shifted so that it starts in cell 0 relative to u... mid starts at
      // v's port in cell 0 and ends at u's port in cell +1 (positive
      // direction). The protoedge path runs u^0 -> v^shift, i.e. the
      // translate of the reverse of mid by shift (shift is negative here).
      for (auto p : connectors[static_cast<size_t>(ei)][0]) append(p);
      for (auto it = mid.rbegin(); it != mid.rend(); ++it)
        append({it->first + sx, it->second + sy});
      auto vc = connectors[static_cast<size_t>(ei)][1];
      for (auto it = vc.rbegin(); it != vc.rend(); ++it)
        append({it->first + sx, it->second + sy});
    }
    std::vector<Pt> rp;
    for (auto [zx, zy] : path) rp.push_back(pt(zx, zy));
    dr.edge_paths[static_cast<size_t>(ei)] = std::move(rp);
  }

  dr.orthogonal = all_deg_le4;
  dr.local = true;
  dr.validate();
  return dr;
}

// ---------------------------------------------------------------------------
// check_drawing
// ---------------------------------------------------------------------------

namespace {

struct EdgeInstance {
  int edge = -1;
  Offset delta;            // lattice translate
  std::vector<Pt> path;
  Rat minx, maxx, miny, maxy;
};

bool bbox_overlap(const EdgeInstance& a, const EdgeInstance& b) {
  return !(a.maxx < b.minx || b.maxx < a.minx || a.maxy < b.miny || b.maxy < a.miny);
}

}  // namespace

DrawingReport check_drawing(const PeriodicDrawing& dr) {
  dr.validate();
  DrawingReport rep;
  const auto& g = dr.graph;
  const Rat zero(0), one(1);

  // Gather every edge translate whose bounding box meets [0,1]^2.
  std::vector<EdgeInstance> inst;
  int range = std::max(2, locality(g) + 1);
  auto deltas = enumerate_cells(g.dim, -range, range);
  for (int ei = 0; ei < g.num_edges(); ++ei) {
    for (const auto& d : deltas) {
      EdgeInstance e;
      e.edge = ei;
      e.delta = d;
      Pt t = dr.shift_point(d);
      for (const auto& p : dr.edge_paths[static_cast<size_t>(ei)])
        e.path.push_back(p + t);
      e.minx = e.maxx = e.path[0].x;
      e.miny = e.maxy = e.path[0].y;
      for (const auto& p : e.path) {
        e.minx = std::min(e.minx, p.x);
        e.maxx = std::max(e.maxx, p.x);
        e.miny = std::min(e.miny, p.y);
        e.maxy = std::max(e.maxy, p.y);
      }
      if (e.maxx < zero || e.minx > one || e.maxy < zero || e.miny > one) continue;
      inst.push_back(std::move(e));
    }
  }

  // All vertex anchor translates near the origin square.
  std::set<Pt> vertex_pts;
  for (const auto& d : deltas) {
    Pt t = dr.shift_point(d);
    for (const auto& vp : dr.vertex_points) vertex_pts.insert(vp + t);
  }

  bool planar = true, ortho = true;
  auto violation = [&](const std::string& msg) {
    planar = ortho = false;
    if (rep.violations.size() < 50) rep.violations.push_back(msg);
  };

  // Edges through vertices: a vertex point in a path's interior is illegal.
  for (const auto& e : inst) {
    for (size_t s = 0; s + 1 < e.path.size(); ++s) {
      Seg seg{e.path[s], e.path[s + 1]};
      for (const auto& vp : vertex_pts) {
        if (!point_on_segment(vp, seg)) continue;
        bool endpoint_of_edge = (vp == e.path.front() || vp == e.path.back());
        if (!endpoint_of_edge)
          violation("edge " + std::to_string(e.edge) + " passes through a vertex");
      }
    }
  }

  // Pairwise segment meetings.
  auto handle_pair = [&](const EdgeInstance& A, size_t sa, const EdgeInstance& B,
                         size_t sb, bool same_instance) {
    Seg s{A.path[sa], A.path[sa + 1]};
    Seg t{B.path[sb], B.path[sb + 1]};
    auto m = classify_meeting(s, t);
    switch (m.kind) {
      case SegMeet::kDisjoint:
        return;
      case SegMeet::kOverlap:
        violation("collinear overlap between edges " + std::to_string(A.edge) +
                  " and " + std::to_string(B.edge) + " near (" + s.a.x.str() +
                  "," + s.a.y.str() + ")-(" + s.b.x.str() + "," + s.b.y.str() +
                  ")");
        return;
      case SegMeet::kProperCrossing: {
        bool hv = (s.horizontal() && t.vertical()) || (s.vertical() && t.horizontal());
        if (!hv) {
          violation("non-orthogonal proper crossing between edges " +
                    std::to_string(A.edge) + " and " + std::to_string(B.edge) +
                    " at (" + m.point->x.str() + "," + m.point->y.str() + ")");
          return;
        }
        planar = false;
        // Record crossings whose point lies in the origin square closure.
        const Pt& p = *m.point;
        if (zero <= p.x && p.x <= one && zero <= p.y && p.y <= one &&
            rep.crossings.size() < 1000)
          rep.crossings.push_back({A.edge, B.edge, p, sub(B.delta, A.delta)});
        return;
      }
      case SegMeet::kEndpointShared:
      case SegMeet::kEndpointInterior: {
        const Pt& p = *m.point;
        if (same_instance) {
          // Consecutive segments legitimately share a joint.
          if (sb == sa + 1 && p == A.path[sa + 1]) return;
          violation("self-meeting polyline on edge " + std::to_string(A.edge));
          return;
        }
        bool a_end = (p == A.path.front() || p == A.path.back());
        bool b_end = (p == B.path.front() || p == B.path.back());
        if (a_end && b_end && vertex_pts.count(p)) return;  // common vertex
        violation("edges " + std::to_string(A.edge) + " and " +
                  std::to_string(B.edge) + " meet away from a common vertex at (" +
                  p.x.str() + "," + p.y.str() + ")");
        return;
      }
    }
  };

  for (size_t i = 0; i < inst.size(); ++i) {
    // Within one instance: non-consecutive segment pairs must not meet.
    for (size_t sa = 0; sa + 1 < inst[i].path.size(); ++sa)
      for (size_t sb = sa + 1; sb + 1 < inst[i].path.size(); ++sb)
        handle_pair(inst[i], sa, inst[i], sb, true);
    for (size_t j = i + 1; j < inst.size(); ++j) {
      if (inst[i].edge == inst[j].edge && inst[i].delta == inst[j].delta) continue;
      if (!bbox_overlap(inst[i], inst[j])) continue;
      for (size_t sa = 0; sa + 1 < inst[i].path.size(); ++sa)
        for (size_t sb = 0; sb + 1 < inst[j].path.size(); ++sb)
          handle_pair(inst[i], sa, inst[j], sb, false);
    }
  }

  rep.is_planar = planar && rep.crossings.empty() && rep.violations.empty();
  rep.is_orthocrossing = ortho && rep.violations.empty();
  return rep;
}

}  // namespace periodica
