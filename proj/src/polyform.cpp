#include "periodica/polyform.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

namespace periodica {

namespace {

std::string cell_to_string(const Offset& c) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
  os << ")";
  return os.str();
}

// Square matrices acting on cells, used to generate orientation sets.
using Matrix = std::vector<std::vector<int>>;

Offset apply(const Matrix& m, const Offset& c) {
  int d = static_cast<int>(m.size());
  Offset out(static_cast<size_t>(d), 0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      out[static_cast<size_t>(i)] +=
          m[static_cast<size_t>(i)][static_cast<size_t>(j)] *
          c[static_cast<size_t>(j)];
  return out;
}

Matrix identity(int d) {
  Matrix m(static_cast<size_t>(d), std::vector<int>(static_cast<size_t>(d)));
  for (int i = 0; i < d; ++i) m[static_cast<size_t>(i)][static_cast<size_t>(i)] = 1;
  return m;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  int d = static_cast<int>(a.size());
  Matrix m(static_cast<size_t>(d),
           std::vector<int>(static_cast<size_t>(d), 0));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        m[static_cast<size_t>(i)][static_cast<size_t>(j)] +=
            a[static_cast<size_t>(i)][static_cast<size_t>(k)] *
            b[static_cast<size_t>(k)][static_cast<size_t>(j)];
  return m;
}

// Closure of the given generators under composition.
std::vector<Matrix> group_closure(int d, std::vector<Matrix> generators) {
  std::set<Matrix> seen;
  std::queue<Matrix> todo;
  Matrix id = identity(d);
  seen.insert(id);
  todo.push(id);
  while (!todo.empty()) {
    Matrix cur = todo.front();
    todo.pop();
    for (const Matrix& g : generators) {
      Matrix next = multiply(g, cur);
      if (seen.insert(next).second) todo.push(next);
    }
  }
  return std::vector<Matrix>(seen.begin(), seen.end());
}

std::vector<Matrix> isometry_matrices(int dim, Polyform::Isometries iso) {
  if (iso == Polyform::Isometries::kTranslations) return {identity(dim)};
  std::vector<Matrix> gens;
  if (dim == 2) {
    gens.push_back({{0, -1}, {1, 0}});  // 90-degree rotation
    if (iso == Polyform::Isometries::kRotationsReflections)
      gens.push_back({{-1, 0}, {0, 1}});
  } else {
    gens.push_back({{1, 0, 0}, {0, 0, -1}, {0, 1, 0}});  // about x
    gens.push_back({{0, 0, 1}, {0, 1, 0}, {-1, 0, 0}});  // about y
    if (iso == Polyform::Isometries::kRotationsReflections)
      gens.push_back({{-1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  }
  return group_closure(dim, gens);
}

bool cells_connected(const std::vector<Offset>& cells, int dim) {
  if (cells.empty()) return false;
  std::set<Offset> all(cells.begin(), cells.end());
  std::set<Offset> seen;
  std::queue<Offset> todo;
  todo.push(cells.front());
  seen.insert(cells.front());
  while (!todo.empty()) {
    Offset cur = todo.front();
    todo.pop();
    for (int a = 0; a < dim; ++a) {
      for (int s = -1; s <= 1; s += 2) {
        Offset nb = cur;
        nb[static_cast<size_t>(a)] += s;
        if (all.count(nb) && seen.insert(nb).second) todo.push(nb);
      }
    }
  }
  return seen.size() == cells.size();
}

}  // namespace

std::vector<Offset> normalize_cells(std::vector<Offset> cells) {
  if (cells.empty()) return cells;
  Offset lo = cells.front();
  for (const Offset& c : cells)
    for (size_t i = 0; i < lo.size(); ++i) lo[i] = std::min(lo[i], c[i]);
  for (Offset& c : cells) c = sub(c, lo);
  std::sort(cells.begin(), cells.end());
  return cells;
}

Polyform Polyform::make(int dim, std::vector<Offset> cells, Isometries iso) {
  if (dim != 2 && dim != 3)
    throw std::invalid_argument("Polyform::make: dim must be 2 or 3");
  if (cells.empty())
    throw std::invalid_argument("Polyform::make: cell set is empty");
  for (const Offset& c : cells)
    if (static_cast<int>(c.size()) != dim)
      throw std::invalid_argument("Polyform::make: cell dimension mismatch");
  Polyform p;
  p.dim = dim;
  p.cells = normalize_cells(std::move(cells));
  if (std::adjacent_find(p.cells.begin(), p.cells.end()) != p.cells.end())
    throw std::invalid_argument("Polyform::make: duplicate cell " +
                                cell_to_string(*std::adjacent_find(
                                    p.cells.begin(), p.cells.end())));
  p.allowed = iso;
  p.connected = cells_connected(p.cells, dim);
  std::set<std::vector<Offset>> distinct;
  for (const Matrix& m : isometry_matrices(dim, iso)) {
    std::vector<Offset> img;
    img.reserve(p.cells.size());
    for (const Offset& c : p.cells) img.push_back(apply(m, c));
    distinct.insert(normalize_cells(std::move(img)));
  }
  p.orientations.assign(distinct.begin(), distinct.end());
  return p;
}

Polyform tromino_L(Polyform::Isometries iso) {
  return Polyform::make(2, {{0, 0}, {1, 0}, {0, 1}}, iso);
}

Polyform tromino_I(Polyform::Isometries iso) {
  return Polyform::make(2, {{0, 0}, {1, 0}, {2, 0}}, iso);
}

bool FiniteRegion::contains(const Offset& c) const {
  return std::find(cells.begin(), cells.end(), c) != cells.end();
}

void FiniteRegion::validate() const {
  if (dim != 2 && dim != 3)
    throw std::invalid_argument("FiniteRegion: dim must be 2 or 3");
  for (const Offset& c : cells)
    if (static_cast<int>(c.size()) != dim)
      throw std::invalid_argument("FiniteRegion: cell dimension mismatch at " +
                                  cell_to_string(c));
  std::vector<Offset> sorted = cells;
  std::sort(sorted.begin(), sorted.end());
  auto dup = std::adjacent_find(sorted.begin(), sorted.end());
  if (dup != sorted.end())
    throw std::invalid_argument("FiniteRegion: duplicate cell " +
                                cell_to_string(*dup));
  for (const auto& [c, rule] : boundary) {
    (void)rule;
    if (static_cast<int>(c.size()) != dim)
      throw std::invalid_argument(
          "FiniteRegion: boundary cell dimension mismatch at " +
          cell_to_string(c));
  }
}

std::vector<Offset> placement_cells(const std::vector<Polyform>& tiles,
                                    const Placement& p) {
  if (p.tile < 0 || p.tile >= static_cast<int>(tiles.size()))
    throw std::out_of_range("placement_cells: tile index out of range");
  const Polyform& t = tiles[static_cast<size_t>(p.tile)];
  if (p.orientation < 0 ||
      p.orientation >= static_cast<int>(t.orientations.size()))
    throw std::out_of_range("placement_cells: orientation index out of range");
  std::vector<Offset> out;
  for (const Offset& c : t.orientations[static_cast<size_t>(p.orientation)])
    out.push_back(add(c, p.translation));
  return out;
}

namespace {

TilingCheck check_cover(const std::vector<Offset>& target,
                        const std::vector<Polyform>& tiles,
                        const TilingSolution& sol,
                        const PeriodicRegion* torus) {
  std::map<Offset, int> covered;
  for (size_t i = 0; i < sol.placements.size(); ++i) {
    std::vector<Offset> cells;
    try {
      cells = placement_cells(tiles, sol.placements[i]);
    } catch (const std::out_of_range& e) {
      return {false, e.what()};
    }
    for (Offset c : cells) {
      if (torus) {
        for (size_t j = 0; j < c.size(); ++j)
          c[j] = floor_mod(c[j], torus->extents[j]);
      }
      if (++covered[c] > 1)
        return {false, "cell " + cell_to_string(c) + " covered twice"};
    }
  }
  for (const Offset& c : target) {
    auto it = covered.find(c);
    if (it == covered.end())
      return {false, "cell " + cell_to_string(c) + " left uncovered"};
    covered.erase(it);
  }
  if (!covered.empty())
    return {false, "cell " + cell_to_string(covered.begin()->first) +
                       " outside the target region"};
  return {true, ""};
}

}  // namespace

TilingCheck verify_tiling(const FiniteRegion& target,
                          const std::vector<Polyform>& tiles,
                          const TilingSolution& sol) {
  target.validate();
  return check_cover(target.cells, tiles, sol, nullptr);
}

TilingCheck verify_tiling_torus(const PeriodicRegion& target,
                                const std::vector<Polyform>& tiles,
                                const TilingSolution& sol) {
  target.validate();
  std::vector<Offset> reduced;
  for (const Offset& c : target.cells) {
    Offset r = c;
    for (size_t j = 0; j < r.size(); ++j)
      r[j] = floor_mod(r[j], target.extents[j]);
    reduced.push_back(r);
  }
  return check_cover(reduced, tiles, sol, &target);
}

}  // namespace periodica
