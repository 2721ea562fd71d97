// Exact-cover tiling search: complete enumeration over finite regions and
// existence search on tori, with a serial reference implementation and an
// OpenMP variant that produces bit-identical results.
#pragma once

#include <string>
#include <vector>

#include "periodica/polyform.hpp"
#include "periodica/region.hpp"

namespace periodica {

struct EnumerationResult {
  std::vector<TilingSolution> solutions;  // deterministic order
  long long count = 0;                    // == solutions.size()
  // True when the solution limit stopped the search; further solutions may
  // exist beyond the ones returned.
  bool truncated = false;
};

// All exact tilings of `region` by `tiles` (translations of the precomputed
// orientations). Deterministic: cells are processed fewest-candidates-first
// with ties broken by cell order, and placements in construction order.
// `limit` < 0 means unlimited.
EnumerationResult enumerate_tilings(const FiniteRegion& region,
                                    const std::vector<Polyform>& tiles,
                                    long long limit = -1);

// Serial reference implementation; enumerate_tilings must match it exactly.
EnumerationResult enumerate_tilings_serial(const FiniteRegion& region,
                                           const std::vector<Polyform>& tiles,
                                           long long limit = -1);

// Number of tilings without materializing them (same search order).
long long count_tilings(const FiniteRegion& region,
                        const std::vector<Polyform>& tiles,
                        long long limit = -1);

enum class SearchStatus {
  kFound = 0,      // a tiling was constructed
  kNone = 1,       // proven: no tiling exists
  kExhausted = 2,  // node budget ran out before deciding
};

struct TorusTilingResult {
  SearchStatus status = SearchStatus::kNone;
  TilingSolution solution;  // valid when status == kFound
  std::vector<std::string> warnings;
};

// Searches for one exact tiling of the periodic region viewed as a torus
// (placements wrap around the extents). `node_budget` < 0 means unlimited.
TorusTilingResult tile_torus(const PeriodicRegion& region,
                             const std::vector<Polyform>& tiles,
                             long long node_budget = -1);

}  // namespace periodica
