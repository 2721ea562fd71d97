// Internal: tiny deterministic router for vertex-disjoint orthogonal paths
// on a small integer grid. Used for the in-box connector layouts of
// orthogonalize and the degree-3 rewiring blocks of normalize_degree3.
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace periodica::detail {

using Cell = std::pair<int, int>;

struct RouteSpec {
  Cell first_step;  // direction of the path's first segment from the hub
  Cell goal;        // target cell (typically on the region boundary)
};

// Routes one path per spec, all starting at `hub`. Paths are pairwise
// vertex-disjoint, share only the hub, and may only use `allowed` cells
// (goals are implicitly allowed for their own path). Deterministic: tries
// every routing order, BFS with a fixed neighbour order. Returns paths
// including the hub as first point, or nullopt.
inline std::optional<std::vector<std::vector<Cell>>> route_disjoint_paths(
    const std::set<Cell>& allowed, Cell hub,
    const std::vector<RouteSpec>& specs) {
  const int n = static_cast<int>(specs.size());
  std::vector<int> order(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;
  static const Cell kDirs[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

  std::sort(order.begin(), order.end());
  do {
    std::set<Cell> used;  // cells consumed by already-routed paths
    std::vector<std::vector<Cell>> paths(static_cast<size_t>(n));
    bool ok = true;
    for (int step = 0; step < n && ok; ++step) {
      int s = order[static_cast<size_t>(step)];
      const auto& spec = specs[static_cast<size_t>(s)];
      Cell start{hub.first + spec.first_step.first,
                 hub.second + spec.first_step.second};
      // Cells the path may enter: allowed + own goal, minus hub, minus
      // cells of routed paths, minus other paths' goals and first cells.
      auto usable = [&](const Cell& c) {
        if (c == hub) return false;
        if (used.count(c)) return false;
        for (int t = 0; t < n; ++t)
          if (t != s && c == specs[static_cast<size_t>(t)].goal) return false;
        return allowed.count(c) > 0 || c == spec.goal;
      };
      // Reserve the first cells of not-yet-routed paths.
      std::set<Cell> reserved;
      for (int step2 = step + 1; step2 < n; ++step2) {
        const auto& other = specs[static_cast<size_t>(
            order[static_cast<size_t>(step2)])];
        reserved.insert(Cell{hub.first + other.first_step.first,
                             hub.second + other.first_step.second});
      }
      if (reserved.count(start) || !usable(start)) {
        ok = false;
        break;
      }
      // BFS from start to goal.
      std::map<Cell, Cell> parent;
      std::vector<Cell> frontier{start};
      parent[start] = start;
      bool found = (start == spec.goal);
      while (!frontier.empty() && !found) {
        std::vector<Cell> next;
        for (const auto& c : frontier) {
          for (const auto& d : kDirs) {
            Cell m{c.first + d.first, c.second + d.second};
            if (parent.count(m) || !usable(m)) continue;
            if (m != spec.goal && reserved.count(m)) continue;
            parent[m] = c;
            if (m == spec.goal) {
              found = true;
              break;
            }
            next.push_back(m);
          }
          if (found) break;
        }
        frontier = std::move(next);
      }
      if (!found) {
        ok = false;
        break;
      }
      std::vector<Cell> path{spec.goal};
      while (path.back() != start) path.push_back(parent[path.back()]);
      path.push_back(hub);
      std::reverse(path.begin(), path.end());
      for (const auto& c : path)
        if (c != hub) used.insert(c);
      paths[static_cast<size_t>(s)] = std::move(path);
    }
    if (ok) return paths;
  } while (std::next_permutation(order.begin(), order.end()));
  return std::nullopt;
}

}  // namespace periodica::detail
