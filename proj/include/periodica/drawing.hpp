// Periodic drawings of 1D/2D periodic graphs: the orthocrossing
// construction, exact drawing validation, planar-to-orthogonal conversion
// and degree-3 port normalization.
#pragma once

#include <map>
#include <vector>

#include "periodica/core.hpp"
#include "periodica/rational.hpp"

namespace periodica {

struct PeriodicDrawing {
  PeriodicGraph graph;         // 1D or 2D
  long long grid_size = 1;     // all coordinates are multiples of 1/grid_size
  std::vector<Pt> vertex_points;             // protovertex anchors in (0,1)^2
  std::vector<std::vector<Pt>> edge_paths;   // polyline per protoedge:
                                             // starts at anchor(u), ends at
                                             // anchor(v) + shift
  bool orthogonal = false;
  bool local = false;

  // Lattice translation of the protoedge shift as a 2D point (1D graphs
  // translate along x only).
  Pt shift_point(const Offset& o) const {
    if (graph.dim == 1) return {Rat(o[0]), Rat(0)};
    return {Rat(o[0]), Rat(o[1])};
  }
  void validate() const;  // endpoint/flag invariants
};

struct DrawingReport {
  bool is_planar = false;
  bool is_orthocrossing = false;
  struct Crossing {
    int edge_a, edge_b;   // protoedge indices
    Pt point;             // meeting point (in the origin square's closure)
    Offset offset;        // translate applied to edge_b relative to edge_a
  };
  std::vector<Crossing> crossings;   // proper orthogonal crossings
  std::vector<std::string> violations;  // human-readable defects
};

// The orthocrossing construction: grid size exactly M = 5|V| + 2|E|.
// Requires locality(g) <= 1 and d in {1,2}. Throws std::invalid_argument on
// precondition violation and std::length_error if the column budget M is
// exhausted (possible for extreme |E|/|V| ratios; see README).
PeriodicDrawing draw_orthocrossing(const PeriodicGraph& g);

// Exact intersection analysis of all edge translates meeting the origin
// square. Meetings are classified as shared-endpoint-at-vertex (fine),
// proper axis-parallel crossing (orthocrossing), or violation.
DrawingReport check_drawing(const PeriodicDrawing& dr);

// Planar max-degree-4 drawing -> planar orthogonal drawing (slab
// construction). Output grid size is exactly 480*M^2 = 30*M^2*c with c = 16,
// where M is the input grid size: the construction refines the input grid by
// 4 (so steep segments can be subdivided exactly) and uses eps = 1/(480 M^2)
// with 6eps x 12eps vertex boxes, gap-packed slab-boundary crossings and one
// whole-eps lane per edge piece and slab. Throws std::invalid_argument on a
// non-planar or degree > 4 input (or coordinates not on the 1/M grid) and
// std::length_error when a slab or gap runs out of lanes.
PeriodicDrawing orthogonalize(const PeriodicDrawing& dr);

// Planar orthogonal max-degree-3 drawing -> drawing where every degree-3
// protovertex has first segments going left, up and right, with the
// requested protoedge (left_choice) exiting left. Grid refines by factor 6,
// or 36 when a rotation block is needed to bring the designated edge to the
// left port (some designations are impossible within a single 6x6 block).
PeriodicDrawing normalize_degree3(const PeriodicDrawing& dr,
                                  const std::map<int, int>& left_choice);

}  // namespace periodica
