// Core data model: d-dimensional periodic graphs, their finite quotients,
// window unrollings and torus projections.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace periodica {

// Lattice offset vector in Z^d.
using Offset = std::vector<int>;

inline int l1_norm(const Offset& o) {
  int s = 0;
  for (int c : o) s += c < 0 ? -c : c;
  return s;
}
inline int linf_norm(const Offset& o) {
  int s = 0;
  for (int c : o) s = std::max(s, c < 0 ? -c : c);
  return s;
}
inline Offset zero_offset(int d) { return Offset(static_cast<size_t>(d), 0); }
inline Offset add(const Offset& a, const Offset& b) {
  Offset r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}
inline Offset sub(const Offset& a, const Offset& b) {
  Offset r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}
inline Offset negate(const Offset& a) {
  Offset r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
  return r;
}
// Floor division helpers used when re-binning offsets into enlarged cells.
inline int floor_div(int a, int b) {
  int q = a / b, r = a % b;
  return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}
inline int floor_mod(int a, int b) { return a - floor_div(a, b) * b; }

// A protoedge in canonical form: connects u at the origin cell to v at
// cell `shift`. The generated infinite edge set is translation-closed, so
// the representative with offset_u = 0 is canonical.
struct ProtoEdge {
  int u = 0;
  int v = 0;
  Offset shift;
  std::string label;  // optional (colors, signs)

  friend bool operator==(const ProtoEdge& a, const ProtoEdge& b) {
    return a.u == b.u && a.v == b.v && a.shift == b.shift && a.label == b.label;
  }
};

struct PeriodicGraph {
  int dim = 1;
  std::vector<std::string> vertex_names;  // index = protovertex id
  std::vector<std::string> vertex_labels;  // optional, same length or empty
  std::vector<ProtoEdge> edges;

  PeriodicGraph() = default;
  explicit PeriodicGraph(int d) : dim(d) {}

  int num_vertices() const { return static_cast<int>(vertex_names.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }

  int add_vertex(const std::string& name, const std::string& label = "") {
    vertex_names.push_back(name);
    vertex_labels.push_back(label);
    return num_vertices() - 1;
  }
  void add_edge(int u, int v, Offset shift, const std::string& label = "") {
    if (u < 0 || u >= num_vertices() || v < 0 || v >= num_vertices())
      throw std::invalid_argument("protoedge endpoint out of range");
    if (static_cast<int>(shift.size()) != dim)
      throw std::invalid_argument("offset dimension mismatch");
    edges.push_back(ProtoEdge{u, v, std::move(shift), label});
  }
  // Accepts a non-canonical protoedge (u at offset_u, v at offset_v) and
  // stores the canonical translate with offset_u = 0.
  void add_edge2(int u, const Offset& off_u, int v, const Offset& off_v,
                 const std::string& label = "") {
    add_edge(u, v, sub(off_v, off_u), label);
  }
  void validate() const;
};

// Finite quotient multigraph: one vertex per protovertex, one edge per
// protoedge (optionally deduplicated), annotated with the net offset.
struct QuotientGraph {
  int num_vertices = 0;
  struct Edge {
    int u, v;
    Offset shift;
    int proto_index;  // index of a source protoedge
  };
  std::vector<Edge> edges;
};

// Finite unrolling of all vertices v^x with ||x||_inf <= R.
struct WindowGraph {
  int radius = 0;
  int dim = 1;
  // vertex i corresponds to (proto[i], cell[i])
  std::vector<int> proto;
  std::vector<Offset> cell;
  struct Edge {
    int a, b;        // window vertex indices
    int proto_index; // source protoedge
  };
  std::vector<Edge> edges;
  std::map<std::pair<int, Offset>, int> index;  // (protovertex, cell) -> vertex

  int vertex(int p, const Offset& c) const {
    auto it = index.find({p, c});
    return it == index.end() ? -1 : it->second;
  }
};

// Torus projection: vertices (protovertex, cell mod k).
struct TorusGraph {
  int k = 1;
  int dim = 1;
  int num_proto = 0;
  struct Edge {
    int a, b;        // torus vertex indices
    int proto_index;
    Offset shift;    // original (unreduced) protoedge shift
    Offset cell;     // cell of endpoint u for this instance
  };
  std::vector<Edge> edges;

  int num_vertices() const;
  int vertex(int p, const Offset& c) const;  // c reduced mod k
  std::pair<int, Offset> decode(int idx) const;
};

int locality(const PeriodicGraph& g);
PeriodicGraph refine_period(const PeriodicGraph& g, int k);
QuotientGraph quotient(const PeriodicGraph& g, bool dedupe);
WindowGraph unroll_window(const PeriodicGraph& g, int R);
TorusGraph project_torus(const PeriodicGraph& g, int k);

// Enumerate all cells of [0,k)^d (or [-R,R]^d via unroll) in lexicographic
// order; shared helper for torus/window construction.
std::vector<Offset> enumerate_cells(int dim, int lo, int hi);

}  // namespace periodica
