// Degree-3 port normalization: reroute the three edge ends of every
// degree-3 protovertex inside a 6x6 block (on the grid refined by 6) so the
// first segments leave left, up and right. If the caller-designated edge
// cannot take the left port directly (some direction/designation patterns
// are impossible inside a single block), a clockwise or counterclockwise
// rotation block is applied around the vertex on a second 6x refinement, so
// the output grid is 6M normally and 36M in the rotated case.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "grid_router.hpp"
#include "periodica/drawing.hpp"

namespace periodica {

namespace {

using detail::Cell;

// (edge, side): side 0 = the u end (path front), 1 = the v end (path back)
struct End {
  int edge, side;
};

Cell first_dir(const std::vector<Pt>& path, int side) {
  Pt a = side == 0 ? path.front() : path.back();
  Pt b = side == 0 ? path[1] : path[path.size() - 2];
  if (a.x == b.x) return {0, b.y > a.y ? 1 : -1};
  return {b.x > a.x ? 1 : -1, 0};
}

// Splice a connector (anchor .. block-boundary point, in cells of `unit`)
// into the start or end of an edge path. The connector's last cell must lie
// on the path's existing first/last segment.
void splice(std::vector<Pt>& path, int side, const std::vector<Cell>& cells,
            const Rat& unit) {
  Pt anchor = side == 0 ? path.front() : path.back();
  std::vector<Pt> conn;
  for (size_t j = 0; j < cells.size(); ++j) {
    Pt p{anchor.x + Rat(cells[j].first) * unit,
         anchor.y + Rat(cells[j].second) * unit};
    if (conn.size() >= 2) {
      const Pt& a = conn[conn.size() - 2];
      const Pt& b = conn.back();
      if ((a.x == b.x && b.x == p.x) || (a.y == b.y && b.y == p.y)) {
        conn.back() = p;
        continue;
      }
    }
    conn.push_back(p);
  }
  if (side == 0) {
    std::vector<Pt> np(conn.begin(), conn.end());
    np.insert(np.end(), path.begin() + 1, path.end());
    path = std::move(np);
  } else {
    path.pop_back();
    for (auto it = conn.rbegin(); it != conn.rend(); ++it) path.push_back(*it);
  }
}

}  // namespace

PeriodicDrawing normalize_degree3(const PeriodicDrawing& dr,
                                  const std::map<int, int>& left_choice) {
  const PeriodicGraph& g = dr.graph;
  dr.validate();
  if (!dr.orthogonal)
    throw std::invalid_argument("normalize_degree3: input must be orthogonal");
  const int V = g.num_vertices();
  std::vector<std::vector<End>> ends(static_cast<size_t>(V));
  for (int ei = 0; ei < g.num_edges(); ++ei) {
    ends[static_cast<size_t>(g.edges[static_cast<size_t>(ei)].u)].push_back(
        {ei, 0});
    ends[static_cast<size_t>(g.edges[static_cast<size_t>(ei)].v)].push_back(
        {ei, 1});
  }
  for (int v = 0; v < V; ++v)
    if (ends[static_cast<size_t>(v)].size() > 3)
      throw std::invalid_argument("normalize_degree3: vertex degree exceeds 3");

  const long long M = dr.grid_size;
  PeriodicDrawing out = dr;
  out.grid_size = 6 * M;
  const Rat unit(1, 6 * M);

  static const Cell kW{-1, 0}, kN{0, 1}, kE{1, 0};
  std::set<Cell> allowed;
  for (int cx = -2; cx <= 2; ++cx)
    for (int cy = -2; cy <= 2; ++cy) allowed.insert({cx, cy});

  // vertices whose designated edge could not take the left port directly;
  // second = the step it did take ('E' -> clockwise, 'N' -> counterclockwise)
  std::vector<std::pair<int, Cell>> needs_rotation;

  for (int v = 0; v < V; ++v) {
    const auto& ev = ends[static_cast<size_t>(v)];
    if (ev.size() != 3) continue;
    auto lc = left_choice.find(v);
    if (lc == left_choice.end())
      throw std::invalid_argument(
          "normalize_degree3: no left edge designated for a degree-3 vertex");
    int designated = lc->second;
    int des_idx = -1;  // index in ev of the designated end (u side first)
    for (size_t i = 0; i < ev.size() && des_idx < 0; ++i)
      if (ev[i].edge == designated) des_idx = static_cast<int>(i);
    if (des_idx < 0)
      throw std::invalid_argument(
          "normalize_degree3: designated edge is not incident to its vertex");

    std::vector<detail::RouteSpec> specs(3);
    for (size_t i = 0; i < ev.size(); ++i) {
      Cell d = first_dir(out.edge_paths[static_cast<size_t>(ev[i].edge)],
                         ev[i].side);
      specs[i].goal = {3 * d.first, 3 * d.second};
    }
    std::vector<int> others;
    for (int i = 0; i < 3; ++i)
      if (i != des_idx) others.push_back(i);

    // Step assignments in preference order: designated left first, then
    // designated up/right (which a rotation block fixes afterwards).
    std::optional<std::vector<std::vector<Cell>>> paths;
    Cell des_step{0, 0};
    const Cell steps_for_des[3] = {kW, kE, kN};
    for (const Cell& ds : steps_for_des) {
      Cell rest[2];
      int r = 0;
      for (const Cell& c : {kW, kN, kE})
        if (!(c == ds)) rest[r++] = c;
      for (int order = 0; order < 2 && !paths; ++order) {
        specs[static_cast<size_t>(des_idx)].first_step = ds;
        specs[static_cast<size_t>(others[0])].first_step = rest[order];
        specs[static_cast<size_t>(others[1])].first_step = rest[1 - order];
        paths = detail::route_disjoint_paths(allowed, {0, 0}, specs);
      }
      if (paths) {
        des_step = ds;
        break;
      }
    }
    if (!paths)
      throw std::logic_error("normalize_degree3: block rerouting failed");
    if (!(des_step == kW)) needs_rotation.push_back({v, des_step});

    for (size_t i = 0; i < ev.size(); ++i)
      splice(out.edge_paths[static_cast<size_t>(ev[i].edge)], ev[i].side,
             (*paths)[i], unit);
  }

  if (!needs_rotation.empty()) {
    // Second refinement: rotate all three edges of the affected vertices by
    // one position so the designated edge ends up on the left port.
    out.grid_size = 36 * M;
    const Rat unit2(1, 36 * M);
    // connector from the vertex to each entry direction, clockwise block
    const std::map<Cell, std::vector<Cell>> cw = {
        {kE, {{0, 0}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}, {2, -1}, {2, 0}, {3, 0}}},
        {kW, {{0, 0}, {0, 1}, {-1, 1}, {-2, 1}, {-2, 0}, {-3, 0}}},
        {kN, {{0, 0}, {1, 0}, {1, 1}, {1, 2}, {0, 2}, {0, 3}}},
    };
    // counterclockwise block = mirror image across the vertical axis
    std::map<Cell, std::vector<Cell>> ccw;
    for (const auto& [entry, cells] : cw) {
      std::vector<Cell> m;
      for (const Cell& c : cells) m.push_back({-c.first, c.second});
      ccw[{-entry.first, entry.second}] = std::move(m);
    }
    for (const auto& [v, step] : needs_rotation) {
      const auto& table = (step == kE) ? cw : ccw;
      for (const auto& e : ends[static_cast<size_t>(v)]) {
        auto& path = out.edge_paths[static_cast<size_t>(e.edge)];
        Cell entry = first_dir(path, e.side);
        splice(path, e.side, table.at(entry), unit2);
      }
    }
  }

  out.validate();
  return out;
}

}  // namespace periodica
