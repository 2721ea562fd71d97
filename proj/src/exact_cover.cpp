#include "periodica/exact_cover.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace periodica {

namespace {

// Knuth's dancing-links structure for exact cover. Columns are region cells,
// rows are tile placements.
struct Dlx {
  std::vector<int> left, right, up, down, col;
  std::vector<int> col_size;  // per column header
  std::vector<int> row_id;    // node -> placement row (-1 for headers/root)
  int ncols = 0;
  int root = 0;

  void init(int columns) {
    ncols = columns;
    root = columns;
    int n = columns + 1;
    left.resize(n);
    right.resize(n);
    up.resize(n);
    down.resize(n);
    col.resize(n);
    col_size.assign(static_cast<size_t>(columns), 0);
    row_id.assign(static_cast<size_t>(n), -1);
    for (int i = 0; i <= columns; ++i) {
      left[static_cast<size_t>(i)] = (i == 0) ? columns : i - 1;
      right[static_cast<size_t>(i)] = (i == columns) ? 0 : i + 1;
      up[static_cast<size_t>(i)] = i;
      down[static_cast<size_t>(i)] = i;
      col[static_cast<size_t>(i)] = i;
    }
  }

  void add_row(int row, const std::vector<int>& cols) {
    int first = -1;
    for (int c : cols) {
      int node = static_cast<int>(left.size());
      left.push_back(node);
      right.push_back(node);
      up.push_back(up[static_cast<size_t>(c)]);
      down.push_back(c);
      col.push_back(c);
      row_id.push_back(row);
      down[static_cast<size_t>(up[static_cast<size_t>(c)])] = node;
      up[static_cast<size_t>(c)] = node;
      ++col_size[static_cast<size_t>(c)];
      if (first < 0) {
        first = node;
      } else {
        left[static_cast<size_t>(node)] = left[static_cast<size_t>(first)];
        right[static_cast<size_t>(node)] = first;
        right[static_cast<size_t>(left[static_cast<size_t>(first)])] = node;
        left[static_cast<size_t>(first)] = node;
      }
    }
  }

  void cover(int c) {
    right[static_cast<size_t>(left[static_cast<size_t>(c)])] =
        right[static_cast<size_t>(c)];
    left[static_cast<size_t>(right[static_cast<size_t>(c)])] =
        left[static_cast<size_t>(c)];
    for (int i = down[static_cast<size_t>(c)]; i != c;
         i = down[static_cast<size_t>(i)]) {
      for (int j = right[static_cast<size_t>(i)]; j != i;
           j = right[static_cast<size_t>(j)]) {
        up[static_cast<size_t>(down[static_cast<size_t>(j)])] =
            up[static_cast<size_t>(j)];
        down[static_cast<size_t>(up[static_cast<size_t>(j)])] =
            down[static_cast<size_t>(j)];
        --col_size[static_cast<size_t>(col[static_cast<size_t>(j)])];
      }
    }
  }

  void uncover(int c) {
    for (int i = up[static_cast<size_t>(c)]; i != c;
         i = up[static_cast<size_t>(i)]) {
      for (int j = left[static_cast<size_t>(i)]; j != i;
           j = left[static_cast<size_t>(j)]) {
        ++col_size[static_cast<size_t>(col[static_cast<size_t>(j)])];
        up[static_cast<size_t>(down[static_cast<size_t>(j)])] = j;
        down[static_cast<size_t>(up[static_cast<size_t>(j)])] = j;
      }
    }
    right[static_cast<size_t>(left[static_cast<size_t>(c)])] = c;
    left[static_cast<size_t>(right[static_cast<size_t>(c)])] = c;
  }

  // Cover all columns of the row containing `node` (row selection).
  void select(int node) {
    cover(col[static_cast<size_t>(node)]);
    for (int j = right[static_cast<size_t>(node)]; j != node;
         j = right[static_cast<size_t>(j)])
      cover(col[static_cast<size_t>(j)]);
  }

  void deselect(int node) {
    for (int j = left[static_cast<size_t>(node)]; j != node;
         j = left[static_cast<size_t>(j)])
      uncover(col[static_cast<size_t>(j)]);
    uncover(col[static_cast<size_t>(node)]);
  }

  // Column with the fewest remaining rows; ties broken by column order.
  int choose_column() const {
    int best = -1, best_size = -1;
    for (int c = right[static_cast<size_t>(root)]; c != root;
         c = right[static_cast<size_t>(c)]) {
      int s = col_size[static_cast<size_t>(c)];
      if (best < 0 || s < best_size) {
        best = c;
        best_size = s;
        if (s == 0) break;
      }
    }
    return best;
  }
};

struct SearchState {
  Dlx* dlx = nullptr;
  const std::vector<Placement>* rows = nullptr;
  long long limit = -1;          // max solutions, < 0 unlimited
  long long node_budget = -1;    // < 0 unlimited
  bool store_solutions = true;
  std::vector<int> stack;        // forced prefix + search rows
  std::vector<TilingSolution> solutions;
  long long count = 0;
  long long nodes = 0;
  bool truncated = false;
  bool exhausted = false;

  void emit() {
    ++count;
    if (store_solutions) {
      TilingSolution sol;
      for (int r : stack)
        sol.placements.push_back((*rows)[static_cast<size_t>(r)]);
      solutions.push_back(std::move(sol));
    }
    if (limit >= 0 && count >= limit) truncated = true;
  }

  // Depth-first enumeration; returns false when the search must stop.
  bool search() {
    Dlx& d = *dlx;
    if (d.right[static_cast<size_t>(d.root)] == d.root) {
      emit();
      return !truncated;
    }
    ++nodes;
    if (node_budget >= 0 && nodes > node_budget) {
      exhausted = true;
      return false;
    }
    int c = d.choose_column();
    if (d.col_size[static_cast<size_t>(c)] == 0) return true;
    d.cover(c);
    bool keep_going = true;
    for (int i = d.down[static_cast<size_t>(c)];
         i != c && keep_going; i = d.down[static_cast<size_t>(i)]) {
      stack.push_back(d.row_id[static_cast<size_t>(i)]);
      for (int j = d.right[static_cast<size_t>(i)]; j != i;
           j = d.right[static_cast<size_t>(j)])
        d.cover(d.col[static_cast<size_t>(j)]);
      keep_going = search();
      for (int j = d.left[static_cast<size_t>(i)]; j != i;
           j = d.left[static_cast<size_t>(j)])
        d.uncover(d.col[static_cast<size_t>(j)]);
      stack.pop_back();
    }
    d.uncover(c);
    return keep_going;
  }
};

struct Problem {
  std::vector<Offset> cells;               // sorted target cells
  std::map<Offset, int> cell_index;
  std::vector<Placement> rows;             // construction order
  std::vector<std::vector<int>> row_cols;  // covered cell indices per row
};

void check_tiles(const std::vector<Polyform>& tiles, int dim) {
  if (tiles.empty())
    throw std::invalid_argument("tiling search: empty tile list");
  for (const Polyform& t : tiles)
    if (t.dim != dim)
      throw std::invalid_argument("tiling search: tile dimension mismatch");
}

Problem build_finite(const FiniteRegion& region,
                     const std::vector<Polyform>& tiles) {
  region.validate();
  check_tiles(tiles, region.dim);
  Problem pb;
  pb.cells = region.cells;
  std::sort(pb.cells.begin(), pb.cells.end());
  for (size_t i = 0; i < pb.cells.size(); ++i)
    pb.cell_index[pb.cells[i]] = static_cast<int>(i);
  for (size_t t = 0; t < tiles.size(); ++t) {
    const Polyform& tile = tiles[t];
    for (size_t o = 0; o < tile.orientations.size(); ++o) {
      const std::vector<Offset>& shape = tile.orientations[o];
      // Anchor the lexicographically smallest shape cell on each region cell.
      for (const Offset& anchor : pb.cells) {
        Offset tr = sub(anchor, shape.front());
        std::vector<int> cols;
        bool ok = true;
        for (const Offset& sc : shape) {
          auto it = pb.cell_index.find(add(sc, tr));
          if (it == pb.cell_index.end()) {
            ok = false;
            break;
          }
          cols.push_back(it->second);
        }
        if (!ok) continue;
        pb.rows.push_back(
            {static_cast<int>(t), static_cast<int>(o), tr});
        pb.row_cols.push_back(std::move(cols));
      }
    }
  }
  return pb;
}

Problem build_torus(const PeriodicRegion& region,
                    const std::vector<Polyform>& tiles) {
  region.validate();
  check_tiles(tiles, region.dim);
  Problem pb;
  pb.cells = region.cells;
  std::sort(pb.cells.begin(), pb.cells.end());
  for (size_t i = 0; i < pb.cells.size(); ++i)
    pb.cell_index[pb.cells[i]] = static_cast<int>(i);
  std::set<std::vector<int>> seen_covers;  // dedupe wrapped-identical rows
  // Lexicographic enumeration of translations over the fundamental domain.
  std::vector<Offset> translations;
  Offset t(static_cast<size_t>(region.dim), 0);
  for (;;) {
    translations.push_back(t);
    int i = region.dim - 1;
    while (i >= 0) {
      if (++t[static_cast<size_t>(i)] < region.extents[static_cast<size_t>(i)])
        break;
      t[static_cast<size_t>(i)] = 0;
      --i;
    }
    if (i < 0) break;
  }
  for (size_t ti = 0; ti < tiles.size(); ++ti) {
    const Polyform& tile = tiles[ti];
    for (size_t o = 0; o < tile.orientations.size(); ++o) {
      const std::vector<Offset>& shape = tile.orientations[o];
      for (const Offset& tr : translations) {
        std::vector<int> cols;
        bool ok = true;
        for (const Offset& sc : shape) {
          Offset c = add(sc, tr);
          for (int k = 0; k < region.dim; ++k)
            c[static_cast<size_t>(k)] = floor_mod(
                c[static_cast<size_t>(k)], region.extents[static_cast<size_t>(k)]);
          auto it = pb.cell_index.find(c);
          if (it == pb.cell_index.end()) {
            ok = false;
            break;
          }
          cols.push_back(it->second);
        }
        if (!ok) continue;
        std::vector<int> key = cols;
        std::sort(key.begin(), key.end());
        if (std::adjacent_find(key.begin(), key.end()) != key.end())
          continue;  // tile wraps onto itself
        if (!seen_covers.insert(key).second) continue;
        pb.rows.push_back({static_cast<int>(ti), static_cast<int>(o), tr});
        pb.row_cols.push_back(std::move(cols));
      }
    }
  }
  return pb;
}

SearchState run_search(const Problem& pb, long long limit,
                       long long node_budget, bool store,
                       int forced_row = -1) {
  Dlx dlx;
  dlx.init(static_cast<int>(pb.cells.size()));
  std::vector<int> row_first_node(pb.rows.size(), -1);
  for (size_t r = 0; r < pb.rows.size(); ++r) {
    int first = static_cast<int>(dlx.left.size());
    dlx.add_row(static_cast<int>(r), pb.row_cols[r]);
    row_first_node[r] = first;
  }
  SearchState st;
  st.dlx = &dlx;
  st.rows = &pb.rows;
  st.limit = limit;
  st.node_budget = node_budget;
  st.store_solutions = store;
  if (forced_row >= 0) {
    dlx.select(row_first_node[static_cast<size_t>(forced_row)]);
    st.stack.push_back(forced_row);
  }
  st.search();
  return st;
}

EnumerationResult collect(SearchState&& st) {
  EnumerationResult res;
  res.solutions = std::move(st.solutions);
  res.count = st.count;
  res.truncated = st.truncated;
  return res;
}

EnumerationResult enumerate_serial_impl(const Problem& pb, long long limit,
                                        bool store) {
  return collect(run_search(pb, limit, -1, store));
}

#ifdef _OPENMP
// Splits the search at the root column; each first-row branch is explored
// independently and results are concatenated in row order, which reproduces
// the serial enumeration order exactly.
EnumerationResult enumerate_parallel_impl(const Problem& pb, long long limit,
                                          bool store) {
  // Identify the serial root column and its candidate rows.
  std::vector<int> col_count(pb.cells.size(), 0);
  for (const auto& cols : pb.row_cols)
    for (int c : cols) ++col_count[static_cast<size_t>(c)];
  if (pb.cells.empty()) return enumerate_serial_impl(pb, limit, store);
  int root_col = 0;
  for (size_t c = 1; c < col_count.size(); ++c)
    if (col_count[c] < col_count[static_cast<size_t>(root_col)])
      root_col = static_cast<int>(c);
  std::vector<int> branch_rows;
  for (size_t r = 0; r < pb.rows.size(); ++r)
    if (std::find(pb.row_cols[r].begin(), pb.row_cols[r].end(), root_col) !=
        pb.row_cols[r].end())
      branch_rows.push_back(static_cast<int>(r));
  if (branch_rows.size() < 2) return enumerate_serial_impl(pb, limit, store);

  std::vector<EnumerationResult> partial(branch_rows.size());
#pragma omp parallel for schedule(dynamic)
  for (size_t b = 0; b < branch_rows.size(); ++b)
    partial[b] = collect(run_search(pb, limit, -1, store, branch_rows[b]));

  EnumerationResult res;
  long long total = 0;
  for (auto& p : partial) total += p.count;
  res.truncated = (limit >= 0 && total >= limit);
  res.count = (limit >= 0) ? std::min(total, limit) : total;
  if (store) {
    for (auto& p : partial)
      for (auto& s : p.solutions) {
        if (static_cast<long long>(res.solutions.size()) >= res.count) break;
        res.solutions.push_back(std::move(s));
      }
  }
  return res;
}
#endif

}  // namespace

EnumerationResult enumerate_tilings_serial(const FiniteRegion& region,
                                           const std::vector<Polyform>& tiles,
                                           long long limit) {
  Problem pb = build_finite(region, tiles);
  return enumerate_serial_impl(pb, limit, true);
}

EnumerationResult enumerate_tilings(const FiniteRegion& region,
                                    const std::vector<Polyform>& tiles,
                                    long long limit) {
#ifdef _OPENMP
  Problem pb = build_finite(region, tiles);
  return enumerate_parallel_impl(pb, limit, true);
#else
  return enumerate_tilings_serial(region, tiles, limit);
#endif
}

long long count_tilings(const FiniteRegion& region,
                        const std::vector<Polyform>& tiles, long long limit) {
  Problem pb = build_finite(region, tiles);
  return enumerate_serial_impl(pb, limit, false).count;
}

TorusTilingResult tile_torus(const PeriodicRegion& region,
                             const std::vector<Polyform>& tiles,
                             long long node_budget) {
  Problem pb = build_torus(region, tiles);
  TorusTilingResult res;
  // Warn when wraparound interactions may make the search unrepresentative.
  int diameter = 0;
  for (const Polyform& t : tiles)
    for (const auto& shape : t.orientations)
      for (const Offset& c : shape)
        for (int v : c) diameter = std::max(diameter, v + 1);
  for (int e : region.extents)
    if (e < 2 * diameter) {
      std::ostringstream os;
      os << "extent " << e << " is smaller than twice the tile diameter "
         << diameter << "; wraparound may dominate the search";
      res.warnings.push_back(os.str());
      break;
    }
  SearchState st = run_search(pb, 1, node_budget, true);
  if (st.count > 0) {
    res.status = SearchStatus::kFound;
    res.solution = std::move(st.solutions.front());
  } else if (st.exhausted) {
    res.status = SearchStatus::kExhausted;
  } else {
    res.status = SearchStatus::kNone;
  }
  return res;
}

}  // namespace periodica
