#include "periodica/matching.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <tuple>

namespace periodica {

namespace {

// Canonical undirected key for a protoedge: a protoedge and its reversal
// (endpoints swapped, shift negated) denote the same set of lattice edges.
std::tuple<int, int, Offset> edge_key(const ProtoEdge& e) {
  std::tuple<int, int, Offset> a{e.u, e.v, e.shift};
  std::tuple<int, int, Offset> b{e.v, e.u, negate(e.shift)};
  return std::min(a, b);
}

bool same_edge(const ProtoEdge& a, const ProtoEdge& b) {
  return edge_key(a) == edge_key(b);
}

// 2-colors the protovertices so that every protoedge (regardless of shift)
// joins different colors; nullopt if the quotient multigraph has an odd
// cycle. Components are colored independently.
std::optional<std::vector<int>> two_color_quotient(const PeriodicGraph& g) {
  int nv = g.num_vertices();
  std::vector<std::vector<int>> adj(static_cast<size_t>(nv));
  for (const auto& e : g.edges) {
    if (e.u == e.v) return std::nullopt;
    adj[static_cast<size_t>(e.u)].push_back(e.v);
    adj[static_cast<size_t>(e.v)].push_back(e.u);
  }
  std::vector<int> color(static_cast<size_t>(nv), -1);
  for (int s = 0; s < nv; ++s) {
    if (color[static_cast<size_t>(s)] != -1) continue;
    color[static_cast<size_t>(s)] = 0;
    std::deque<int> q{s};
    while (!q.empty()) {
      int u = q.front();
      q.pop_front();
      for (int v : adj[static_cast<size_t>(u)]) {
        if (color[static_cast<size_t>(v)] == -1) {
          color[static_cast<size_t>(v)] = 1 - color[static_cast<size_t>(u)];
          q.push_back(v);
        } else if (color[static_cast<size_t>(v)] ==
                   color[static_cast<size_t>(u)]) {
          return std::nullopt;
        }
      }
    }
  }
  return color;
}

// 2-colors the radius-R window unrolling; false if it has an odd cycle
// (which is then an odd cycle of the infinite graph).
bool window_two_colorable(const PeriodicGraph& g, int R) {
  WindowGraph w = unroll_window(g, R);
  int n = static_cast<int>(w.proto.size());
  std::vector<std::vector<int>> adj(static_cast<size_t>(n));
  for (const auto& e : w.edges) {
    if (e.a == e.b) return false;
    adj[static_cast<size_t>(e.a)].push_back(e.b);
    adj[static_cast<size_t>(e.b)].push_back(e.a);
  }
  std::vector<int> color(static_cast<size_t>(n), -1);
  for (int s = 0; s < n; ++s) {
    if (color[static_cast<size_t>(s)] != -1) continue;
    color[static_cast<size_t>(s)] = 0;
    std::deque<int> q{s};
    while (!q.empty()) {
      int u = q.front();
      q.pop_front();
      for (int v : adj[static_cast<size_t>(u)]) {
        if (color[static_cast<size_t>(v)] == -1) {
          color[static_cast<size_t>(v)] = 1 - color[static_cast<size_t>(u)];
          q.push_back(v);
        } else if (color[static_cast<size_t>(v)] ==
                   color[static_cast<size_t>(u)]) {
          return false;
        }
      }
    }
  }
  return true;
}

}  // namespace

void BipartitePartition::validate(const PeriodicGraph& g) const {
  if (static_cast<int>(side.size()) != g.num_vertices())
    throw std::invalid_argument("partition size mismatch");
  for (int s : side)
    if (s != 0 && s != 1)
      throw std::invalid_argument("partition sides must be 0 (R) or 1 (B)");
  for (const auto& e : g.edges)
    if (side[static_cast<size_t>(e.u)] == side[static_cast<size_t>(e.v)])
      throw std::invalid_argument(
          "partition invalid: protoedge joins two same-side protovertices");
}

BipartitionResult bipartition_2periodic(const PeriodicGraph& g) {
  g.validate();
  BipartitionResult res;
  PeriodicGraph refined = refine_period(g, 2);
  if (auto color = two_color_quotient(refined)) {
    res.status = BipartitionStatus::kOk;
    res.refined = std::move(refined);
    res.partition.side = std::move(*color);
    return res;
  }
  // No protovertex-constant coloring of the 2-refinement exists. Decide
  // whether the infinite graph itself has an odd cycle.
  int R = 2 * g.num_vertices() * std::max(1, locality(g));
  res.status = window_two_colorable(g, R)
                   ? BipartitionStatus::kNotPeriodically2Colorable
                   : BipartitionStatus::kNotBipartite;
  return res;
}

MatchingReport verify_matching(const PeriodicGraph& g,
                               const PeriodicMatching& m) {
  MatchingReport rep;
  if (m.k < 1) {
    rep.messages.push_back("matching multiplier must be >= 1");
    return rep;
  }
  PeriodicGraph ref = refine_period(g, m.k);
  int nv = ref.num_vertices();
  bool edges_ok = true;
  std::vector<std::vector<int>> cover(static_cast<size_t>(nv));
  for (size_t j = 0; j < m.edges.size(); ++j) {
    const auto& e = m.edges[j];
    if (e.u < 0 || e.u >= nv || e.v < 0 || e.v >= nv ||
        static_cast<int>(e.shift.size()) != ref.dim) {
      edges_ok = false;
      rep.messages.push_back("matched edge " + std::to_string(j) +
                             " is malformed for the refined graph");
      continue;
    }
    bool present = false;
    for (const auto& f : ref.edges)
      if (same_edge(e, f)) {
        present = true;
        break;
      }
    if (!present) {
      edges_ok = false;
      rep.messages.push_back("matched edge " + std::to_string(j) +
                             " is not a protoedge of the refined graph");
      continue;
    }
    cover[static_cast<size_t>(e.u)].push_back(static_cast<int>(j));
    cover[static_cast<size_t>(e.v)].push_back(static_cast<int>(j));
  }
  for (int v = 0; v < nv; ++v) {
    const auto& c = cover[static_cast<size_t>(v)];
    if (c.empty()) {
      rep.free_protovertices.push_back(v);
    } else if (c.size() > 1) {
      rep.conflicts.emplace_back(c[0], c[1]);
      rep.messages.push_back("protovertex " + std::to_string(v) +
                             " covered by more than one matched edge");
    }
  }
  rep.valid = edges_ok && rep.conflicts.empty();
  rep.perfect = rep.valid && rep.free_protovertices.empty();
  return rep;
}

PerfectMatchingResult perfect_matching(const PeriodicGraph& g,
                                       const BipartitePartition& part) {
  g.validate();
  part.validate(g);
  PerfectMatchingResult res;
  int nv = g.num_vertices();
  // Quotient bipartite multigraph: parallel protoedges stay distinct so that
  // every matched quotient edge has a definite protoedge to lift.
  std::vector<int> left, right;
  std::vector<int> side_index(static_cast<size_t>(nv), -1);
  for (int v = 0; v < nv; ++v) {
    if (part.side[static_cast<size_t>(v)] == 0) {
      side_index[static_cast<size_t>(v)] = static_cast<int>(left.size());
      left.push_back(v);
    } else {
      side_index[static_cast<size_t>(v)] = static_cast<int>(right.size());
      right.push_back(v);
    }
  }
  int nl = static_cast<int>(left.size()), nr = static_cast<int>(right.size());
  struct Arc {
    int r;   // right-side index
    int ei;  // protoedge index
  };
  std::vector<std::vector<Arc>> adj(static_cast<size_t>(nl));
  for (int ei = 0; ei < g.num_edges(); ++ei) {
    const auto& e = g.edges[static_cast<size_t>(ei)];
    int lp = part.side[static_cast<size_t>(e.u)] == 0 ? e.u : e.v;
    int rp = lp == e.u ? e.v : e.u;
    adj[static_cast<size_t>(side_index[static_cast<size_t>(lp)])].push_back(
        {side_index[static_cast<size_t>(rp)], ei});
  }

  // Hopcroft-Karp: repeat { layered BFS from free left vertices; augment
  // along the layer graph } until no augmenting path exists.
  constexpr int kInf = 1 << 30;
  std::vector<int> match_l(static_cast<size_t>(nl), -1);
  std::vector<int> match_r(static_cast<size_t>(nr), -1);
  std::vector<int> match_edge(static_cast<size_t>(nl), -1);
  std::vector<int> dist(static_cast<size_t>(nl));
  auto bfs = [&]() {
    std::deque<int> q;
    for (int l = 0; l < nl; ++l) {
      if (match_l[static_cast<size_t>(l)] == -1) {
        dist[static_cast<size_t>(l)] = 0;
        q.push_back(l);
      } else {
        dist[static_cast<size_t>(l)] = kInf;
      }
    }
    bool reachable_free_right = false;
    while (!q.empty()) {
      int l = q.front();
      q.pop_front();
      for (const Arc& a : adj[static_cast<size_t>(l)]) {
        int l2 = match_r[static_cast<size_t>(a.r)];
        if (l2 == -1) {
          reachable_free_right = true;
        } else if (dist[static_cast<size_t>(l2)] == kInf) {
          dist[static_cast<size_t>(l2)] = dist[static_cast<size_t>(l)] + 1;
          q.push_back(l2);
        }
      }
    }
    return reachable_free_right;
  };
  auto dfs = [&](auto&& self, int l) -> bool {
    for (const Arc& a : adj[static_cast<size_t>(l)]) {
      int l2 = match_r[static_cast<size_t>(a.r)];
      if (l2 == -1 || (dist[static_cast<size_t>(l2)] ==
                           dist[static_cast<size_t>(l)] + 1 &&
                       self(self, l2))) {
        match_l[static_cast<size_t>(l)] = a.r;
        match_r[static_cast<size_t>(a.r)] = l;
        match_edge[static_cast<size_t>(l)] = a.ei;
        return true;
      }
    }
    dist[static_cast<size_t>(l)] = kInf;
    return false;
  };
  int matched = 0;
  while (bfs()) {
    bool any = false;
    for (int l = 0; l < nl; ++l)
      if (match_l[static_cast<size_t>(l)] == -1 && dfs(dfs, l)) {
        ++matched;
        any = true;
      }
    if (!any) break;
    ++res.phases;
  }

  if (matched == nl && matched == nr) {
    res.found = true;
    res.matching.k = 1;
    res.matching.perfect = true;
    for (int l = 0; l < nl; ++l)
      res.matching.edges.push_back(
          g.edges[static_cast<size_t>(match_edge[static_cast<size_t>(l)])]);
    return res;
  }

  // Hall violator certificate: from the side with a free vertex, collect the
  // set S reachable by alternating paths (unmatched edge out, matched edge
  // back). Every neighbor of S is matched into S, so |N(S)| = |S| - #free.
  if (matched < nl) {
    std::vector<char> vis(static_cast<size_t>(nl), 0);
    std::deque<int> q;
    for (int l = 0; l < nl; ++l)
      if (match_l[static_cast<size_t>(l)] == -1) {
        vis[static_cast<size_t>(l)] = 1;
        q.push_back(l);
      }
    while (!q.empty()) {
      int l = q.front();
      q.pop_front();
      for (const Arc& a : adj[static_cast<size_t>(l)]) {
        int l2 = match_r[static_cast<size_t>(a.r)];
        if (l2 != -1 && !vis[static_cast<size_t>(l2)]) {
          vis[static_cast<size_t>(l2)] = 1;
          q.push_back(l2);
        }
      }
    }
    for (int l = 0; l < nl; ++l)
      if (vis[static_cast<size_t>(l)])
        res.hall_violators.push_back(left[static_cast<size_t>(l)]);
    res.hall_side = 0;
  } else {
    std::vector<std::vector<Arc>> radj(static_cast<size_t>(nr));
    for (int l = 0; l < nl; ++l)
      for (const Arc& a : adj[static_cast<size_t>(l)])
        radj[static_cast<size_t>(a.r)].push_back({l, a.ei});
    std::vector<char> vis(static_cast<size_t>(nr), 0);
    std::deque<int> q;
    for (int r = 0; r < nr; ++r)
      if (match_r[static_cast<size_t>(r)] == -1) {
        vis[static_cast<size_t>(r)] = 1;
        q.push_back(r);
      }
    while (!q.empty()) {
      int r = q.front();
      q.pop_front();
      for (const Arc& a : radj[static_cast<size_t>(r)]) {
        int r2 = match_l[static_cast<size_t>(a.r)];
        if (r2 != -1 && !vis[static_cast<size_t>(r2)]) {
          vis[static_cast<size_t>(r2)] = 1;
          q.push_back(r2);
        }
      }
    }
    for (int r = 0; r < nr; ++r)
      if (vis[static_cast<size_t>(r)])
        res.hall_violators.push_back(right[static_cast<size_t>(r)]);
    res.hall_side = 1;
  }
  return res;
}

std::optional<AlternatingPath> protovertex_simple_augmenting_path(
    const PeriodicGraph& g, const BipartitePartition& part,
    const PeriodicMatching& m) {
  g.validate();
  part.validate(g);
  if (m.k != 1)
    throw std::invalid_argument(
        "augmenting-path search requires a 1-periodic matching");
  int nv = g.num_vertices(), ne = g.num_edges();
  std::vector<int> match_edge(static_cast<size_t>(nv), -1);
  std::vector<char> is_matched(static_cast<size_t>(ne), 0);
  std::vector<char> used(static_cast<size_t>(ne), 0);
  for (const auto& e : m.edges) {
    int found = -1;
    for (int i = 0; i < ne && found < 0; ++i)
      if (!used[static_cast<size_t>(i)] &&
          same_edge(e, g.edges[static_cast<size_t>(i)]))
        found = i;
    if (found < 0)
      throw std::invalid_argument("matched edge is not a protoedge of the graph");
    used[static_cast<size_t>(found)] = 1;
    is_matched[static_cast<size_t>(found)] = 1;
    for (int p : {g.edges[static_cast<size_t>(found)].u,
                  g.edges[static_cast<size_t>(found)].v}) {
      if (match_edge[static_cast<size_t>(p)] != -1)
        throw std::invalid_argument("matching is not disjoint");
      match_edge[static_cast<size_t>(p)] = found;
    }
  }
  std::vector<int> free_r, free_b;
  for (int v = 0; v < nv; ++v)
    if (match_edge[static_cast<size_t>(v)] == -1)
      (part.side[static_cast<size_t>(v)] == 0 ? free_r : free_b).push_back(v);
  if (free_r.empty() && free_b.empty())
    throw std::invalid_argument("matching is already perfect");
  // An augmenting path joins a free B vertex to a free R vertex.
  if (free_r.empty() || free_b.empty()) return std::nullopt;

  // Shortest alternating walks lie within diameter 2 * d * |E|; bound the
  // explored window accordingly (plus one locality step of slack).
  const int radius = 2 * g.dim * ne + locality(g) + 1;

  // Multi-source BFS over states (protovertex, cell) starting from every
  // free B protovertex at the origin cell. From a B state all non-matched
  // incident edge translates are taken; from a matched R state only its
  // matched edge. The first free R state reached closes the shortest
  // alternating walk between any pair of free vertices (up to translation).
  std::map<std::pair<int, Offset>, int> id;
  std::vector<int> st_proto, st_parent, st_edge;
  std::vector<Offset> st_cell;
  std::deque<int> q;
  int goal = -1;
  auto push = [&](int p, const Offset& c, int parent, int via) {
    if (linf_norm(c) > radius) return;
    auto key = std::make_pair(p, c);
    if (id.count(key)) return;
    int s = static_cast<int>(st_proto.size());
    id[key] = s;
    st_proto.push_back(p);
    st_cell.push_back(c);
    st_parent.push_back(parent);
    st_edge.push_back(via);
    if (part.side[static_cast<size_t>(p)] == 0 &&
        match_edge[static_cast<size_t>(p)] == -1) {
      if (goal == -1) goal = s;
      return;
    }
    q.push_back(s);
  };
  for (int b : free_b) push(b, zero_offset(g.dim), -1, -1);
  while (goal == -1 && !q.empty()) {
    int s = q.front();
    q.pop_front();
    int p = st_proto[static_cast<size_t>(s)];
    // Copy: push() may reallocate st_cell.
    Offset c = st_cell[static_cast<size_t>(s)];
    if (part.side[static_cast<size_t>(p)] == 1) {
      for (int i = 0; i < ne && goal == -1; ++i) {
        if (is_matched[static_cast<size_t>(i)]) continue;
        const auto& e = g.edges[static_cast<size_t>(i)];
        if (e.u == p) push(e.v, add(c, e.shift), s, i);
        if (goal == -1 && e.v == p) push(e.u, sub(c, e.shift), s, i);
      }
    } else {
      int i = match_edge[static_cast<size_t>(p)];
      const auto& e = g.edges[static_cast<size_t>(i)];
      if (e.u == p) push(e.v, add(c, e.shift), s, i);
      else push(e.u, sub(c, e.shift), s, i);
    }
  }
  if (goal == -1) return std::nullopt;

  AlternatingPath path;
  for (int s = goal; s != -1; s = st_parent[static_cast<size_t>(s)]) {
    path.proto.push_back(st_proto[static_cast<size_t>(s)]);
    path.cell.push_back(st_cell[static_cast<size_t>(s)]);
    if (st_edge[static_cast<size_t>(s)] != -1)
      path.edge_protos.push_back(st_edge[static_cast<size_t>(s)]);
  }
  std::reverse(path.proto.begin(), path.proto.end());
  std::reverse(path.cell.begin(), path.cell.end());
  std::reverse(path.edge_protos.begin(), path.edge_protos.end());

  // Translate-and-splice simplification: while some protovertex repeats at
  // positions j < j', replace the walk by its prefix up to j followed by the
  // suffix after j' translated by cell[j] - cell[j']. A shortest walk never
  // actually repeats a protovertex, so this is a safety net.
  for (size_t guard = 0; guard <= path.proto.size(); ++guard) {
    size_t j = path.proto.size(), j2 = 0;
    for (size_t a = 0; a < path.proto.size() && j == path.proto.size(); ++a)
      for (size_t b = a + 1; b < path.proto.size(); ++b)
        if (path.proto[a] == path.proto[b]) {
          j = a;
          j2 = b;
          break;
        }
    if (j == path.proto.size()) break;
    Offset delta = sub(path.cell[j], path.cell[j2]);
    AlternatingPath next;
    for (size_t a = 0; a <= j; ++a) {
      next.proto.push_back(path.proto[a]);
      next.cell.push_back(path.cell[a]);
      if (a < j) next.edge_protos.push_back(path.edge_protos[a]);
    }
    for (size_t a = j2 + 1; a < path.proto.size(); ++a) {
      next.proto.push_back(path.proto[a]);
      next.cell.push_back(add(path.cell[a], delta));
      next.edge_protos.push_back(path.edge_protos[a - 1]);
    }
    path = std::move(next);
  }
  return path;
}

PeriodicMatching augment_by_translates(const PeriodicGraph& g,
                                       const PeriodicMatching& m,
                                       const AlternatingPath& path) {
  if (m.k != 1)
    throw std::invalid_argument("augmentation requires a 1-periodic matching");
  std::map<std::tuple<int, int, Offset>, ProtoEdge> current;
  for (const auto& e : m.edges) current[edge_key(e)] = e;
  for (int ei : path.edge_protos) {
    const auto& e = g.edges[static_cast<size_t>(ei)];
    auto key = edge_key(e);
    auto it = current.find(key);
    if (it != current.end())
      current.erase(it);
    else
      current[key] = e;
  }
  PeriodicMatching res;
  res.k = 1;
  for (const auto& [key, e] : current) res.edges.push_back(e);
  res.perfect = verify_matching(g, res).perfect;
  return res;
}

DominoTilingResult domino_tiling(const PeriodicRegion& region) {
  region.validate();
  DominoTilingResult res;
  int d = region.dim;
  // Dual graph: one protovertex per included cell; one protoedge per
  // face-adjacency {x, x + e_i} of the infinite periodic cell set (taken
  // once, in the + direction, from the representative in the domain).
  res.dual = PeriodicGraph(d);
  std::map<Offset, int> cell_id;
  for (size_t i = 0; i < region.cells.size(); ++i) {
    std::string name = "c";
    for (int c : region.cells[i]) name += "_" + std::to_string(c);
    res.dual.add_vertex(name);
    cell_id[region.cells[i]] = static_cast<int>(i);
  }
  for (size_t i = 0; i < region.cells.size(); ++i) {
    for (int j = 0; j < d; ++j) {
      Offset t = region.cells[i];
      t[static_cast<size_t>(j)] += 1;
      Offset shift = zero_offset(d);
      shift[static_cast<size_t>(j)] =
          floor_div(t[static_cast<size_t>(j)], region.extents[static_cast<size_t>(j)]);
      t[static_cast<size_t>(j)] =
          floor_mod(t[static_cast<size_t>(j)], region.extents[static_cast<size_t>(j)]);
      auto it = cell_id.find(t);
      if (it == cell_id.end()) continue;
      res.dual.add_edge(static_cast<int>(i), it->second, shift);
    }
  }
  // Parity of the absolute lattice cell is a proper 2-coloring of the dual;
  // it is constant on protovertices only after doubling the period.
  res.refined_dual = refine_period(res.dual, 2);
  auto subcells = enumerate_cells(d, 0, 1);
  int nsub = static_cast<int>(subcells.size());
  BipartitePartition part;
  part.side.resize(static_cast<size_t>(res.refined_dual.num_vertices()));
  for (size_t i = 0; i < region.cells.size(); ++i)
    for (int r = 0; r < nsub; ++r) {
      int parity = 0;
      for (int j = 0; j < d; ++j)
        parity += region.cells[i][static_cast<size_t>(j)] +
                  subcells[static_cast<size_t>(r)][static_cast<size_t>(j)] *
                      region.extents[static_cast<size_t>(j)];
      part.side[static_cast<size_t>(static_cast<int>(i) * nsub + r)] =
          parity & 1;
    }
  PerfectMatchingResult pm = perfect_matching(res.refined_dual, part);
  res.found = pm.found;
  res.period_multiplier = 2;
  if (pm.found) {
    res.tiling.k = 2;
    res.tiling.edges = std::move(pm.matching.edges);
    res.tiling.perfect = true;
  } else {
    res.hall_violators = std::move(pm.hall_violators);
    res.hall_side = pm.hall_side;
  }
  return res;
}

std::vector<std::pair<Offset, Offset>> domino_cells(
    const PeriodicRegion& region, const DominoTilingResult& result) {
  std::vector<std::pair<Offset, Offset>> out;
  if (!result.found) return out;
  int d = region.dim;
  auto subcells = enumerate_cells(d, 0, 1);
  int nsub = static_cast<int>(subcells.size());
  auto absolute = [&](int proto, const Offset& big) {
    int ci = proto / nsub, r = proto % nsub;
    Offset a(static_cast<size_t>(d));
    for (int j = 0; j < d; ++j)
      a[static_cast<size_t>(j)] =
          region.cells[static_cast<size_t>(ci)][static_cast<size_t>(j)] +
          region.extents[static_cast<size_t>(j)] *
              (subcells[static_cast<size_t>(r)][static_cast<size_t>(j)] +
               2 * big[static_cast<size_t>(j)]);
    return a;
  };
  for (const auto& e : result.tiling.edges)
    out.emplace_back(absolute(e.u, zero_offset(d)), absolute(e.v, e.shift));
  return out;
}

}  // namespace periodica
