// Polyforms (polyominoes / polycubes), finite cell regions, and tiling
// solutions: the shared vocabulary of the tiling module.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "periodica/core.hpp"
#include "periodica/region.hpp"

namespace periodica {

// Translates cells so the bounding box touches the origin, then sorts.
std::vector<Offset> normalize_cells(std::vector<Offset> cells);

struct Polyform {
  enum class Isometries {
    kTranslations = 0,         // fixed orientation
    kRotations = 1,            // + rotations
    kRotationsReflections = 2  // + reflections
  };

  int dim = 2;
  std::vector<Offset> cells;  // normalized
  Isometries allowed = Isometries::kRotations;
  bool connected = false;  // face-adjacency, computed at construction
  // All distinct orientations under the allowed isometries, each normalized.
  std::vector<std::vector<Offset>> orientations;

  int size() const { return static_cast<int>(cells.size()); }

  static Polyform make(int dim, std::vector<Offset> cells,
                       Isometries iso = Isometries::kRotations);
};

// The two trominoes (3-cell polyominoes up to rotation).
Polyform tromino_L(
    Polyform::Isometries iso = Polyform::Isometries::kRotations);
Polyform tromino_I(
    Polyform::Isometries iso = Polyform::Isometries::kRotations);

// Optional per-cell boundary annotations used by gadget/completion builders
// when deriving the per-case regions to enumerate.
enum class BoundaryRule {
  kFree = 0,    // may be covered from either side
  kInside = 1,  // must be covered by a tile of this region
  kOutside = 2  // covered by the surrounding context; excluded from the set
};

struct FiniteRegion {
  int dim = 2;
  std::vector<Offset> cells;  // the set to cover exactly
  std::map<Offset, BoundaryRule> boundary;  // metadata, may be empty

  bool contains(const Offset& c) const;
  void validate() const;
};

struct Placement {
  int tile = 0;         // index into the tile list
  int orientation = 0;  // index into tile.orientations
  Offset translation;

  friend bool operator==(const Placement& a, const Placement& b) {
    return a.tile == b.tile && a.orientation == b.orientation &&
           a.translation == b.translation;
  }
};

struct TilingSolution {
  std::vector<Placement> placements;
};

// Absolute cells covered by a placement (no wraparound).
std::vector<Offset> placement_cells(const std::vector<Polyform>& tiles,
                                    const Placement& p);

struct TilingCheck {
  bool ok = false;
  std::string violation;  // empty when ok
};

// Exact coverage + disjointness against a finite target.
TilingCheck verify_tiling(const FiniteRegion& target,
                          const std::vector<Polyform>& tiles,
                          const TilingSolution& sol);

// Same on a torus: placement cells are reduced modulo the region extents and
// must cover the fundamental-domain cells exactly once.
TilingCheck verify_tiling_torus(const PeriodicRegion& target,
                                const std::vector<Polyform>& tiles,
                                const TilingSolution& sol);

}  // namespace periodica
