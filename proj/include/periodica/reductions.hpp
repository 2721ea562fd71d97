// The reduction chain on periodic CNF: width reduction, occurrence
// reduction, planarization with crossover gadgets, 1-in-3 conversion,
// 3-dimensional matching, and trichromatic orientation. Every planar stage
// carries a drawing of its incidence (or instance) graph.
#pragma once

#include <vector>

#include "periodica/cnf.hpp"
#include "periodica/drawing.hpp"

namespace periodica {

// A CNF together with a planar drawing of its incidence graph. The drawing's
// graph has one protovertex per protovariable (first num_vars vertices, in
// order) followed by one per protoclause; protoedges run clause -> variable,
// one per literal slot in clause/slot order, with the literal offset as
// shift and label "+" or "-" for the literal sign.
struct PlanarCNF {
  PeriodicCNF cnf;
  PeriodicDrawing drawing;
};

// Periodic 3-dimensional matching instance as a bipartite periodic graph.
// Element protovertices carry label "R", "G" or "B"; triple protovertices
// carry label "T". Edges connect triples to elements only; each triple has
// degree exactly 3 with one neighbor of each color.
struct Periodic3DM {
  PeriodicGraph graph;
  void validate() const;
  std::vector<int> triple_vertices() const;
  std::vector<int> element_vertices() const;
};

struct Planar3DM {
  Periodic3DM dm;
  PeriodicDrawing drawing;
};

// Trichromatic orientation instance: edges colored "R"/"G"/"B" via label;
// vertex labels "T" (0-or-3-in-3) and "Z" (1-in-3, monochromatic).
struct OrientationInstance {
  PeriodicGraph graph;
  void validate() const;
};

struct PlanarOrientation {
  OrientationInstance inst;
  PeriodicDrawing drawing;
};

// Splits every clause of width > 3 with fresh chain variables anchored at
// the clause's first literal offset. Equisatisfiable; locality preserved.
PeriodicCNF cnf_to_3sat(const PeriodicCNF& f);

// Limits every protovariable to at most 3 occurrence slots by replacing a
// d-occurrence variable with d copies tied together by the implication cycle
// (!x_i v x_{i+1 mod d}). Requires width <= 3.
PeriodicCNF to_3sat3(const PeriodicCNF& f);

// Draws the incidence graph orthogonally (with crossings) and splices one
// crossover gadget into each crossing: edge routes are kept verbatim, a
// crossing edge is cut into corridor pieces joined by port variables and
// equality clause pairs, and any variable left with more than 3 occurrence
// slots is replaced by an angle-ordered ring of copies tied by the
// implication cycle. A crossing-free drawing is returned as is (grid M);
// otherwise the output grid is 640 * M in 2D and a multiple of 640 * M in
// 1D. Requires width <= 3, occurrences <= 3, locality <= 1, dim in {1, 2}.
PlanarCNF planarize(const PeriodicCNF& f);

// Replaces each clause (l1 v l2 v l3) by the 1-in-3 chain
// 1in3(!l1,a,b), 1in3(l2,b,c), 1in3(!l3,c,d) with fresh a,b,c,d, laid out
// along the clause's own drawn spokes; clauses of width < 3 are padded with
// a fresh variable forced false by the pair 1in3(f,y,z), 1in3(f,!y,!z).
// The result is satisfiable under exactly-one semantics iff the input is
// satisfiable under standard semantics. Grid grows by a factor of 32 in 2D
// (up to a further rounding multiple in 1D). Requires width <= 3 and
// occurrences <= 3; the output again satisfies both bounds.
PlanarCNF to_1in3(const PlanarCNF& f);

// Matching gadgets along the orthogonalized drawing: each variable becomes
// a ring of triples around its vertex with two B tips per port (covering
// the near tips = true, the far tips = false); each clause gadget has a
// shared B core covered iff some literal is true, per-slot triples reading
// the tips through corridor lanes, and two hub elements absorbing the two
// false slots. A perfect matching exists iff the 1-in-3 instance is
// satisfiable under exactly-one semantics. The drawing is orthogonalized
// first, then refined by a factor of 128. The clause gadget is inherently
// nonplanar (the two shared hub elements force a K_{3,3} minor through the
// middle slot), so the output drawing is not planar; every crossing is an
// axis-parallel (horizontal x vertical) crossing and check_drawing reports
// no violations. Requires clause widths in {0, 3} and occurrences <= 3.
Planar3DM to_3dm(const PlanarCNF& f);

// Relabeling: triples become T vertices, elements become Z vertices, edges
// inherit the element's color. Graph and drawing are otherwise unchanged.
PlanarOrientation to_orientation(const Planar3DM& m);

// Quotient-level translations between 1-periodic matchings (one flag per
// triple protovertex) and 1-periodic orientations (one flag per protoedge,
// true = oriented toward the triple endpoint).
std::vector<char> orientation_from_matching(const OrientationInstance& o,
                                            const std::vector<char>& matched);
std::vector<char> matching_from_orientation(const OrientationInstance& o,
                                            const std::vector<char>& toward);

// Perfect-matching existence as an exactly-one CNF: one variable per triple
// protovertex, one clause per element protovertex over the incident triple
// instances. Decide with exactly-one semantics.
PeriodicCNF dm_to_exactly_one_cnf(const Periodic3DM& m);

// The crossover gadget in isolation (dim 1, all offsets zero): variables
// 0..3 are the boundary wires x_w, y_s, x_e, y_n; 4..7 the quadrant
// indicators; 8 the splitter. Satisfying assignments project onto the
// boundary exactly as {(a, b, a, b)}.
PeriodicCNF crossover_gadget_cnf();

}  // namespace periodica
