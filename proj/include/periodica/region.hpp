// Periodic cell regions: a fundamental domain of lattice cells repeated by
// translations equal to the domain extents.
#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "periodica/core.hpp"

namespace periodica {

// E = union over all t in Z^d of { c + (t_0*extents_0, ..., t_{d-1}*extents_{d-1}) : c in cells }.
struct PeriodicRegion {
  int dim = 2;
  std::vector<int> extents;   // fundamental domain size per dimension, all >= 1
  std::vector<Offset> cells;  // included cells, each within [0, extents_i)

  void validate() const {
    if (dim < 1) throw std::invalid_argument("region dimension must be >= 1");
    if (static_cast<int>(extents.size()) != dim)
      throw std::invalid_argument("region extents dimension mismatch");
    for (int e : extents)
      if (e < 1) throw std::invalid_argument("region extents must be positive");
    for (const auto& c : cells) {
      if (static_cast<int>(c.size()) != dim)
        throw std::invalid_argument("region cell dimension mismatch");
      for (int i = 0; i < dim; ++i)
        if (c[static_cast<size_t>(i)] < 0 ||
            c[static_cast<size_t>(i)] >= extents[static_cast<size_t>(i)])
          throw std::invalid_argument("region cell outside fundamental domain");
    }
    auto sorted = cells;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw std::invalid_argument("region cell listed twice");
  }

  bool contains(const Offset& c) const {
    Offset reduced(static_cast<size_t>(dim));
    for (int i = 0; i < dim; ++i)
      reduced[static_cast<size_t>(i)] =
          floor_mod(c[static_cast<size_t>(i)], extents[static_cast<size_t>(i)]);
    return std::find(cells.begin(), cells.end(), reduced) != cells.end();
  }
};

}  // namespace periodica
