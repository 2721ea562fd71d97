#include "periodica/core.hpp"

#include <algorithm>
#include <set>

namespace periodica {

void PeriodicGraph::validate() const {
  if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
  if (!vertex_labels.empty() && vertex_labels.size() != vertex_names.size())
    throw std::invalid_argument("vertex label list length mismatch");
  for (const auto& e : edges) {
    if (e.u < 0 || e.u >= num_vertices() || e.v < 0 || e.v >= num_vertices())
      throw std::invalid_argument("protoedge endpoint out of range");
    if (static_cast<int>(e.shift.size()) != dim)
      throw std::invalid_argument("protoedge offset dimension mismatch");
  }
}

int locality(const PeriodicGraph& g) {
  int k = 0;
  for (const auto& e : g.edges) k = std::max(k, l1_norm(e.shift));
  return k;
}

std::vector<Offset> enumerate_cells(int dim, int lo, int hi) {
  std::vector<Offset> out;
  Offset cur(static_cast<size_t>(dim), lo);
  while (true) {
    out.push_back(cur);
    int i = dim - 1;
    while (i >= 0) {
      if (++cur[static_cast<size_t>(i)] <= hi) break;
      cur[static_cast<size_t>(i)] = lo;
      --i;
    }
    if (i < 0) break;
  }
  return out;
}

PeriodicGraph refine_period(const PeriodicGraph& g, int k) {
  if (k < 1) throw std::invalid_argument("refine_period: k must be >= 1");
  if (k == 1) return g;
  PeriodicGraph out;
  out.dim = g.dim;
  auto cells = enumerate_cells(g.dim, 0, k - 1);
  // New protovertex (v, r) has index v*cells + cell_index(r).
  std::map<Offset, int> cell_index;
  for (size_t i = 0; i < cells.size(); ++i) cell_index[cells[i]] = static_cast<int>(i);
  int nc = static_cast<int>(cells.size());
  for (int v = 0; v < g.num_vertices(); ++v) {
    for (const auto& r : cells) {
      std::string name = g.vertex_names[static_cast<size_t>(v)];
      for (int c : r) name += "_" + std::to_string(c);
      out.add_vertex(name, g.vertex_labels.empty()
                               ? ""
                               : g.vertex_labels[static_cast<size_t>(v)]);
    }
  }
  for (size_t ei = 0; ei < g.edges.size(); ++ei) {
    const auto& e = g.edges[ei];
    for (const auto& r : cells) {
      // Copy of e with u at sub-cell r: v lands at r + shift, which splits
      // into an enlarged-cell offset (floor div) and a sub-cell (floor mod).
      Offset target = add(r, e.shift);
      Offset big(static_cast<size_t>(g.dim)), small(static_cast<size_t>(g.dim));
      for (int i = 0; i < g.dim; ++i) {
        big[static_cast<size_t>(i)] = floor_div(target[static_cast<size_t>(i)], k);
        small[static_cast<size_t>(i)] = floor_mod(target[static_cast<size_t>(i)], k);
      }
      int nu = e.u * nc + cell_index[r];
      int nv = e.v * nc + cell_index[small];
      out.add_edge(nu, nv, big, e.label);
    }
  }
  return out;
}

QuotientGraph quotient(const PeriodicGraph& g, bool dedupe) {
  QuotientGraph q;
  q.num_vertices = g.num_vertices();
  std::set<std::tuple<int, int, Offset>> seen;
  for (size_t i = 0; i < g.edges.size(); ++i) {
    const auto& e = g.edges[i];
    if (dedupe) {
      // Undirected dedupe on (endpoints, shift) up to orientation flip.
      auto key = std::make_tuple(e.u, e.v, e.shift);
      auto flipped = std::make_tuple(e.v, e.u, negate(e.shift));
      if (seen.count(key) || seen.count(flipped)) continue;
      seen.insert(key);
    }
    q.edges.push_back({e.u, e.v, e.shift, static_cast<int>(i)});
  }
  return q;
}

WindowGraph unroll_window(const PeriodicGraph& g, int R) {
  if (R < 0) throw std::invalid_argument("unroll_window: R must be >= 0");
  WindowGraph w;
  w.radius = R;
  w.dim = g.dim;
  auto cells = enumerate_cells(g.dim, -R, R);
  for (int v = 0; v < g.num_vertices(); ++v)
    for (const auto& c : cells) {
      w.index[{v, c}] = static_cast<int>(w.proto.size());
      w.proto.push_back(v);
      w.cell.push_back(c);
    }
  for (size_t ei = 0; ei < g.edges.size(); ++ei) {
    const auto& e = g.edges[ei];
    for (const auto& c : cells) {
      Offset target = add(c, e.shift);
      if (linf_norm(target) > R) continue;
      int a = w.vertex(e.u, c);
      int b = w.vertex(e.v, target);
      w.edges.push_back({a, b, static_cast<int>(ei)});
    }
  }
  return w;
}

int TorusGraph::num_vertices() const {
  int n = num_proto;
  for (int i = 0; i < dim; ++i) n *= k;
  return n;
}

int TorusGraph::vertex(int p, const Offset& c) const {
  int idx = p;
  for (int i = 0; i < dim; ++i) idx = idx * k + floor_mod(c[static_cast<size_t>(i)], k);
  return idx;
}

std::pair<int, Offset> TorusGraph::decode(int idx) const {
  Offset c(static_cast<size_t>(dim));
  for (int i = dim - 1; i >= 0; --i) {
    c[static_cast<size_t>(i)] = idx % k;
    idx /= k;
  }
  return {idx, c};
}

TorusGraph project_torus(const PeriodicGraph& g, int k) {
  if (k < 1) throw std::invalid_argument("project_torus: k must be >= 1");
  TorusGraph t;
  t.k = k;
  t.dim = g.dim;
  t.num_proto = g.num_vertices();
  auto cells = enumerate_cells(g.dim, 0, k - 1);
  for (size_t ei = 0; ei < g.edges.size(); ++ei) {
    const auto& e = g.edges[ei];
    for (const auto& c : cells) {
      int a = t.vertex(e.u, c);
      int b = t.vertex(e.v, add(c, e.shift));
      t.edges.push_back({a, b, static_cast<int>(ei), e.shift, c});
    }
  }
  return t;
}

}  // namespace periodica
