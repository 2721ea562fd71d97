// Bipartite periodic perfect matching: 2-periodic bipartitions, a
// Hopcroft-Karp matcher on the quotient multigraph with 1-periodic lifting,
// matching verification, protovertex-simple augmenting paths, and periodic
// domino tiling built on top.
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "periodica/core.hpp"
#include "periodica/region.hpp"

namespace periodica {

// Protovertex 2-coloring; side 0 = R, side 1 = B. Valid for a graph when
// every protoedge joins an R protovertex to a B protovertex.
struct BipartitePartition {
  std::vector<int> side;  // one entry per protovertex, each 0 or 1

  // Throws std::invalid_argument if the partition is not valid for g.
  void validate(const PeriodicGraph& g) const;
};

enum class BipartitionStatus {
  kOk = 0,
  kNotBipartite = 1,              // the infinite graph contains an odd cycle
  kNotPeriodically2Colorable = 2  // bipartite, but no 2-periodic 2-coloring
};

struct BipartitionResult {
  BipartitionStatus status = BipartitionStatus::kOk;
  // Populated when status == kOk: the input refined by 2 together with a
  // valid partition of its protovertices.
  PeriodicGraph refined;
  BipartitePartition partition;
};

// Decides whether g admits a protovertex-constant 2-coloring after refining
// the period by 2, returning the coloring when it exists. A connected
// bipartite periodic graph always admits one; disconnected graphs are
// handled per quotient component. Odd cycles in the infinite graph are
// detected by 2-coloring a window unrolling of radius 2 * |V| * locality.
BipartitionResult bipartition_2periodic(const PeriodicGraph& g);

// A matching that is 1-periodic at period k: the matched edges are given as
// protoedges of refine_period(g, k), and each protoedge stands for all of
// its lattice translates.
struct PeriodicMatching {
  int k = 1;
  std::vector<ProtoEdge> edges;
  bool perfect = false;
};

struct MatchingReport {
  bool valid = false;    // matched edges are edges of the graph and disjoint
  bool perfect = false;  // valid and every vertex covered
  // Protovertices of refine_period(g, k) not covered by any matched edge.
  std::vector<int> free_protovertices;
  // Pairs of indices into m.edges that share a covered protovertex.
  std::vector<std::pair<int, int>> conflicts;
  std::vector<std::string> messages;  // human-readable violation details
};

// Checks disjointness and coverage of m on the k-torus, which suffices by
// periodicity. Never throws; problems are reported in the result.
MatchingReport verify_matching(const PeriodicGraph& g, const PeriodicMatching& m);

struct PerfectMatchingResult {
  bool found = false;
  PeriodicMatching matching;  // k = 1 and perfect when found
  // When not found: a Hall violator set S of protovertices, all on one side
  // (recorded in hall_side), whose quotient neighborhood is smaller than S.
  std::vector<int> hall_violators;
  int hall_side = 0;
  // Number of layered (shortest-augmenting) phases the matcher executed;
  // bounded by O(sqrt(|V|)).
  int phases = 0;
};

// Decides whether g (with the given valid partition) admits a perfect
// matching, by maximum matching on the quotient multigraph (parallel
// protoedges kept distinct) with shortest-augmenting layered phases, then
// lifting a perfect quotient matching to a 1-periodic perfect matching.
// Throws std::invalid_argument if the partition is not valid for g.
PerfectMatchingResult perfect_matching(const PeriodicGraph& g,
                                       const BipartitePartition& part);

// An alternating path in the infinite graph with no repeated protovertex.
// vertices[i] = (proto[i], cell[i]); edge_protos[i] is the index into
// g.edges of the protoedge whose translate joins vertex i to vertex i+1.
struct AlternatingPath {
  std::vector<int> proto;
  std::vector<Offset> cell;
  std::vector<int> edge_protos;

  size_t length() const { return edge_protos.size(); }
};

// Given a valid imperfect 1-periodic matching m (k = 1), finds an augmenting
// path that starts and ends at free vertices and visits each protovertex at
// most once, or nullopt when none exists within the diameter bound
// 2 * d * |E| (plus slack). Throws std::invalid_argument if m is perfect or
// not 1-periodic.
std::optional<AlternatingPath> protovertex_simple_augmenting_path(
    const PeriodicGraph& g, const BipartitePartition& part,
    const PeriodicMatching& m);

// Augments m by the path and all of its lattice translates: the protoedges
// along the path toggle their membership in the matching. Increases the
// number of matched protovertices by exactly 2.
PeriodicMatching augment_by_translates(const PeriodicGraph& g,
                                       const PeriodicMatching& m,
                                       const AlternatingPath& path);

struct DominoTilingResult {
  bool found = false;
  // Dominoes correspond to matched edges of the dual graph of the region
  // (one protovertex per included cell, edges between face-adjacent cells).
  PeriodicGraph dual;
  // The dual refined by 2; the matching below and the Hall violators refer
  // to this graph's protovertices.
  PeriodicGraph refined_dual;
  // Tiling as a matching on `dual` with multiplier k = 2: the achieved
  // period is twice the region's fundamental-domain extents. (A period-1
  // tiling may also exist, but the parity bipartition is only guaranteed at
  // period 2, so the doubled period is what is constructed and reported.)
  PeriodicMatching tiling;
  int period_multiplier = 2;
  std::vector<int> hall_violators;  // protovertices of refined_dual
  int hall_side = 0;
};

// Decides whether the periodic region can be tiled by dominoes (pairs of
// face-adjacent cells), via a perfect matching of the parity-bipartitioned
// dual graph on the doubled fundamental domain.
DominoTilingResult domino_tiling(const PeriodicRegion& region);

// Decodes a domino tiling into explicit cell pairs within the doubled
// fundamental domain: each pair is two face-adjacent absolute lattice cells;
// the full tiling is the set of all their translates by doubled extents.
std::vector<std::pair<Offset, Offset>> domino_cells(
    const PeriodicRegion& region, const DominoTilingResult& result);

}  // namespace periodica
