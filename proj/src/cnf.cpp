#include "periodica/cnf.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

namespace periodica {

namespace {

long long ipow(long long b, int e) {
  long long r = 1;
  while (e-- > 0) r *= b;
  return r;
}

int floormod(int a, int m) {
  int r = a % m;
  return r < 0 ? r + m : r;
}

// Mixed-radix index of a torus cell (each coordinate reduced mod k).
long long cell_index(const Offset& cell, int k) {
  long long idx = 0;
  for (int c : cell) idx = idx * k + floormod(c, k);
  return idx;
}

int l1(const Offset& a, const Offset& b) {
  int d = 0;
  for (size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
  return d;
}

}  // namespace

void PeriodicCNF::add_clause(Clause c) {
  for (const Lit& l : c) {
    if (l.var < 0 || l.var >= num_vars())
      throw std::invalid_argument("PeriodicCNF: literal variable out of range");
    if (static_cast<int>(l.off.size()) != dim)
      throw std::invalid_argument("PeriodicCNF: literal offset dimension mismatch");
  }
  clauses.push_back(std::move(c));
}

void PeriodicCNF::validate() const {
  if (dim < 1) throw std::invalid_argument("PeriodicCNF: dim must be >= 1");
  for (const Clause& c : clauses)
    for (const Lit& l : c) {
      if (l.var < 0 || l.var >= num_vars())
        throw std::invalid_argument("PeriodicCNF: literal variable out of range");
      if (static_cast<int>(l.off.size()) != dim)
        throw std::invalid_argument("PeriodicCNF: literal offset dimension mismatch");
    }
}

void PeriodicCNF::canonicalize() {
  for (Clause& c : clauses) {
    if (c.empty()) continue;
    Offset base = c[0].off;
    for (const Lit& l : c) base = std::min(base, l.off);
    for (Lit& l : c)
      for (int i = 0; i < dim; ++i) l.off[i] -= base[i];
  }
}

int locality(const PeriodicCNF& f) {
  int loc = 0;
  for (const Clause& c : f.clauses)
    for (size_t i = 0; i < c.size(); ++i)
      for (size_t j = i + 1; j < c.size(); ++j)
        loc = std::max(loc, l1(c[i].off, c[j].off));
  return loc;
}

PeriodicCNF refine_period(const PeriodicCNF& f, int k) {
  if (k < 1) throw std::invalid_argument("refine_period: k must be >= 1");
  f.validate();
  PeriodicCNF out(f.dim);
  // Copy (v, r) for each residue cell r in [0,k)^dim, ordered with the cell
  // index as the fastest-varying component.
  long long cells = ipow(k, f.dim);
  for (int v = 0; v < f.num_vars(); ++v) {
    for (long long c = 0; c < cells; ++c)
      out.add_var(f.var_names[v] + "@" + std::to_string(c));
  }
  // Residue cells in mixed-radix order.
  std::vector<Offset> residues;
  {
    Offset cur(f.dim, 0);
    for (long long c = 0; c < cells; ++c) {
      residues.push_back(cur);
      for (int i = f.dim - 1; i >= 0; --i) {
        if (++cur[i] < k) break;
        cur[i] = 0;
      }
    }
  }
  for (const Clause& c : f.clauses) {
    for (const Offset& base : residues) {
      Clause nc;
      for (const Lit& l : c) {
        Offset pos = add(base, l.off);
        Offset cell(f.dim), res(f.dim);
        for (int i = 0; i < f.dim; ++i) {
          res[i] = floormod(pos[i], k);
          cell[i] = (pos[i] - res[i]) / k;
        }
        Lit nl;
        nl.var = static_cast<int>(l.var * cells + cell_index(res, k));
        nl.off = cell;
        nl.neg = l.neg;
        nc.push_back(nl);
      }
      out.add_clause(std::move(nc));
    }
  }
  out.canonicalize();
  return out;
}

bool Assignment1Periodic::value(int var, const Offset& cell) const {
  return values[var * ipow(k, dim) + cell_index(cell, k)] != 0;
}

void Assignment1Periodic::set(int var, const Offset& cell, bool v) {
  values[var * ipow(k, dim) + cell_index(cell, k)] = v ? 1 : 0;
}

Assignment1Periodic Assignment1Periodic::make(int dim, int k, int num_vars) {
  Assignment1Periodic a;
  a.dim = dim;
  a.k = k;
  a.num_vars = num_vars;
  a.values.assign(static_cast<size_t>(num_vars) * ipow(k, dim), 0);
  return a;
}

bool verify_assignment(const PeriodicCNF& f, const Assignment1Periodic& a,
                       bool exactly_one) {
  if (f.dim != a.dim || f.num_vars() != a.num_vars) return false;
  long long cells = ipow(a.k, a.dim);
  for (const Clause& c : f.clauses) {
    Offset base(f.dim, 0);
    for (long long ci = 0; ci < cells; ++ci) {
      int true_count = 0;
      for (const Lit& l : c) {
        bool v = a.value(l.var, add(base, l.off));
        if (v != l.neg) ++true_count;
      }
      bool ok = exactly_one ? (true_count == 1) : (true_count >= 1);
      if (!ok) return false;
      for (int i = f.dim - 1; i >= 0; --i) {
        if (++base[i] < a.k) break;
        base[i] = 0;
      }
    }
  }
  return true;
}

void WangTileSet::validate() const {
  if (num_colors < 1) throw std::invalid_argument("WangTileSet: need colors");
  for (const Tile& t : tiles)
    for (int c : {t.south, t.west, t.north, t.east})
      if (c < 1 || c > num_colors)
        throw std::invalid_argument("WangTileSet: color id out of range");
}

PeriodicCNF wang_to_cnf(const WangTileSet& w) {
  w.validate();
  PeriodicCNF f(2);
  const int C = w.num_colors;
  const int T = static_cast<int>(w.tiles.size());
  // s_i: the south edge color of the tile in this cell is i.
  // w_i: the west edge color is i. t_i: this cell holds tile i.
  std::vector<int> s(C), ww(C), t(T);
  for (int i = 0; i < C; ++i) s[i] = f.add_var("s" + std::to_string(i + 1));
  for (int i = 0; i < C; ++i) ww[i] = f.add_var("w" + std::to_string(i + 1));
  for (int i = 0; i < T; ++i) t[i] = f.add_var("t" + std::to_string(i + 1));
  Offset o00 = {0, 0}, o01 = {0, 1}, o10 = {1, 0};
  // At most one south color and at most one west color per cell.
  for (int i = 0; i < C; ++i)
    for (int j = i + 1; j < C; ++j) {
      f.add_clause({{s[i], o00, true}, {s[j], o00, true}});
      f.add_clause({{ww[i], o00, true}, {ww[j], o00, true}});
    }
  // At least one tile per cell.
  {
    Clause c;
    for (int i = 0; i < T; ++i) c.push_back({t[i], o00, false});
    f.add_clause(std::move(c));
  }
  // Tile i fixes its four edge colors; the north/east edges live in the
  // north/east neighbor cells.
  for (int i = 0; i < T; ++i) {
    const WangTileSet::Tile& tl = w.tiles[i];
    f.add_clause({{t[i], o00, true}, {s[tl.south - 1], o00, false}});
    f.add_clause({{t[i], o00, true}, {ww[tl.west - 1], o00, false}});
    f.add_clause({{t[i], o00, true}, {s[tl.north - 1], o01, false}});
    f.add_clause({{t[i], o00, true}, {ww[tl.east - 1], o10, false}});
  }
  return f;
}

namespace detail {

std::optional<std::vector<char>> dpll(int num_vars,
                                      const std::vector<std::vector<int>>& cls,
                                      long long* budget, bool* exhausted) {
  // values: -1 unassigned, 0 false, 1 true.
  std::vector<char> val(num_vars, -1);
  struct Frame {
    int var;
    bool tried_true;          // second branch taken
    std::vector<int> trail;   // vars assigned since this decision
  };
  std::vector<Frame> stack;

  auto clause_state = [&](const std::vector<int>& c, int* unit) {
    // Returns 1 satisfied, 0 unresolved, -1 conflict. Sets *unit to the sole
    // unassigned literal when exactly one remains.
    int unassigned = 0;
    *unit = 0;
    for (int lit : c) {
      int v = std::abs(lit) - 1;
      if (val[v] < 0) {
        ++unassigned;
        *unit = lit;
      } else if ((val[v] == 1) == (lit > 0)) {
        return 1;
      }
    }
    if (unassigned == 0) return -1;
    if (unassigned > 1) *unit = 0;
    return 0;
  };

  auto propagate = [&](std::vector<int>* trail) {
    // Unit propagation to fixpoint; returns false on conflict.
    bool changed = true;
    while (changed) {
      changed = false;
      for (const std::vector<int>& c : cls) {
        int unit;
        int st = clause_state(c, &unit);
        if (st == -1) return false;
        if (st == 0 && unit != 0) {
          int v = std::abs(unit) - 1;
          val[v] = unit > 0 ? 1 : 0;
          trail->push_back(v);
          changed = true;
        }
      }
    }
    return true;
  };

  std::vector<int> root_trail;
  if (!propagate(&root_trail)) return std::nullopt;

  for (;;) {
    int branch = -1;
    for (int v = 0; v < num_vars; ++v)
      if (val[v] < 0) {
        branch = v;
        break;
      }
    if (branch < 0) return std::vector<char>(val.begin(), val.end());
    if (--(*budget) < 0) {
      *exhausted = true;
      return std::nullopt;
    }
    stack.push_back({branch, false, {branch}});
    val[branch] = 0;  // deterministic: false first
    while (!propagate(&stack.back().trail)) {
      // Backtrack to the deepest frame with an untried branch.
      for (;;) {
        if (stack.empty()) return std::nullopt;
        Frame& f = stack.back();
        for (int v : f.trail) val[v] = -1;
        f.trail.clear();
        if (!f.tried_true) {
          f.tried_true = true;
          f.trail.push_back(f.var);
          val[f.var] = 1;
          break;
        }
        stack.pop_back();
      }
    }
  }
}

}  // namespace detail

namespace {

// Appends the finite encoding of one clause instance (literals +-(v+1), with
// multiplicity). Exactly-one mode emits at-least-one plus pairwise
// at-most-one; a repeated literal then yields a forcing unit clause.
void emit_finite_clause(std::vector<int> fc, bool exactly_one,
                        std::set<std::vector<int>>* seen,
                        std::vector<std::vector<int>>* out) {
  auto push = [&](std::vector<int> c) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    if (!seen || seen->insert(c).second) out->push_back(std::move(c));
  };
  if (exactly_one)
    for (size_t i = 0; i < fc.size(); ++i)
      for (size_t j = i + 1; j < fc.size(); ++j)
        push({-fc[i], -fc[j]});
  push(std::move(fc));
}

// Instantiates f on the k-torus as a finite CNF; var index = v*k^dim + cell.
std::vector<std::vector<int>> torus_instance(const PeriodicCNF& f, int k,
                                             bool exactly_one = false) {
  long long cells = ipow(k, f.dim);
  std::vector<std::vector<int>> out;
  std::set<std::vector<int>> seen;
  Offset base(f.dim, 0);
  for (long long ci = 0; ci < cells; ++ci) {
    for (const Clause& c : f.clauses) {
      std::vector<int> fc;
      for (const Lit& l : c) {
        long long v = l.var * cells + cell_index(add(base, l.off), k);
        int lit = static_cast<int>(v) + 1;
        fc.push_back(l.neg ? -lit : lit);
      }
      emit_finite_clause(std::move(fc), exactly_one, &seen, &out);
    }
    for (int i = f.dim - 1; i >= 0; --i) {
      if (++base[i] < k) break;
      base[i] = 0;
    }
  }
  return out;
}

}  // namespace

SatResult solve_1d(const PeriodicCNF& f, bool exactly_one, int max_vars) {
  f.validate();
  if (f.dim != 1) throw std::invalid_argument("solve_1d: dim must be 1");
  PeriodicCNF g = f;
  g.canonicalize();
  int loc = locality(g);
  if (loc > 1) g = refine_period(g, loc);
  const int n = g.num_vars();
  if (n > max_vars)
    throw std::length_error("solve_1d: refined variable count " +
                            std::to_string(n) + " exceeds limit " +
                            std::to_string(max_vars));
  for (const Clause& c : g.clauses)
    if (c.empty()) return {SatStatus::UNSAT, std::nullopt};

  const long long S = 1LL << n;
  auto bit = [](long long st, int v) { return (st >> v) & 1; };
  // Arc (A, B) is valid when every clause crossing columns (0,1) holds with
  // column 0 = A, column 1 = B, and every single-column clause holds on A.
  auto arc_ok = [&](long long A, long long B) {
    for (const Clause& c : g.clauses) {
      int true_count = 0;
      for (const Lit& l : c) {
        bool v = l.off[0] == 0 ? bit(A, l.var) : bit(B, l.var);
        if (v != l.neg) ++true_count;
      }
      if (exactly_one ? (true_count != 1) : (true_count < 1)) return false;
    }
    return true;
  };

  // Find a cycle in the implicit digraph over states via iterative DFS.
  // color: 0 unvisited, 1 on stack, 2 done.
  std::vector<char> color(S, 0);
  std::vector<long long> parent(S, -1);
  for (long long s0 = 0; s0 < S; ++s0) {
    if (color[s0]) continue;
    std::vector<std::pair<long long, long long>> st;  // (node, next succ)
    st.push_back({s0, 0});
    color[s0] = 1;
    while (!st.empty()) {
      auto& [u, next] = st.back();
      bool advanced = false;
      for (long long v = next; v < S; ++v) {
        if (!arc_ok(u, v)) continue;
        if (color[v] == 1) {
          // Cycle found: walk the DFS stack back from u to v.
          std::vector<long long> cyc;
          for (size_t i = st.size(); i-- > 0;) {
            cyc.push_back(st[i].first);
            if (st[i].first == v) break;
          }
          std::reverse(cyc.begin(), cyc.end());  // v, ..., u
          int k = static_cast<int>(cyc.size());
          Assignment1Periodic a = Assignment1Periodic::make(1, k, n);
          for (int col = 0; col < k; ++col)
            for (int var = 0; var < n; ++var)
              a.set(var, {col}, bit(cyc[col], var) != 0);
          if (!verify_assignment(g, a, exactly_one))
            throw std::logic_error("solve_1d: model verification failed");
          return {SatStatus::SAT, std::move(a)};
        }
        if (color[v] == 0) {
          st.back().second = v + 1;
          st.push_back({v, 0});
          color[v] = 1;
          advanced = true;
          break;
        }
      }
      if (!advanced) {
        color[u] = 2;
        st.pop_back();
      }
    }
  }
  return {SatStatus::UNSAT, std::nullopt};
}

SatResult solve_2sat(const PeriodicCNF& f) {
  f.validate();
  const int n = f.num_vars();
  // Literal node ids: 2v = positive, 2v+1 = negative (offsets dropped:
  // implications are between protoliteral classes of the quotient).
  std::vector<std::set<int>> adj(2 * n);
  auto node = [](int var, bool neg) { return 2 * var + (neg ? 1 : 0); };
  for (const Clause& c : f.clauses) {
    if (c.empty()) return {SatStatus::UNSAT, std::nullopt};
    if (c.size() > 2)
      throw std::invalid_argument("solve_2sat: clause width exceeds 2");
    const Lit& a = c[0];
    const Lit& b = c.size() == 2 ? c[1] : c[0];
    adj[node(a.var, !a.neg)].insert(node(b.var, b.neg));
    adj[node(b.var, !b.neg)].insert(node(a.var, a.neg));
  }
  // Strongly connected components via iterative Tarjan; components are
  // numbered in reverse topological order of the condensation.
  const int N = 2 * n;
  std::vector<int> comp(N, -1), low(N), num(N, -1);
  int counter = 0, ncomp = 0;
  std::vector<int> scc_stack;
  std::vector<char> on_stack(N, 0);
  for (int s = 0; s < N; ++s) {
    if (num[s] >= 0) continue;
    std::vector<std::pair<int, std::set<int>::const_iterator>> dfs;
    num[s] = low[s] = counter++;
    scc_stack.push_back(s);
    on_stack[s] = 1;
    dfs.push_back({s, adj[s].begin()});
    while (!dfs.empty()) {
      auto& [u, it] = dfs.back();
      if (it != adj[u].end()) {
        int v = *it++;
        if (num[v] < 0) {
          num[v] = low[v] = counter++;
          scc_stack.push_back(v);
          on_stack[v] = 1;
          dfs.push_back({v, adj[v].begin()});
        } else if (on_stack[v]) {
          low[u] = std::min(low[u], num[v]);
        }
      } else {
        if (low[u] == num[u]) {
          for (;;) {
            int w = scc_stack.back();
            scc_stack.pop_back();
            on_stack[w] = 0;
            comp[w] = ncomp;
            if (w == u) break;
          }
          ++ncomp;
        }
        int done = u;
        dfs.pop_back();
        if (!dfs.empty())
          low[dfs.back().first] =
              std::min(low[dfs.back().first], low[done]);
      }
    }
  }
  Assignment1Periodic a = Assignment1Periodic::make(f.dim, 1, n);
  Offset zero(f.dim, 0);
  for (int v = 0; v < n; ++v) {
    if (comp[node(v, false)] == comp[node(v, true)])
      return {SatStatus::UNSAT, std::nullopt};
    // Tarjan numbers components in reverse topological order, so the literal
    // whose component comes earlier topologically (larger id) is set false.
    a.set(v, zero, comp[node(v, false)] < comp[node(v, true)]);
  }
  if (!verify_assignment(f, a))
    throw std::logic_error("solve_2sat: model construction failed");
  return {SatStatus::SAT, std::move(a)};
}

SatResult solve_horn(const PeriodicCNF& f) {
  f.validate();
  const int n = f.num_vars();
  bool horn = true, dual = true;
  for (const Clause& c : f.clauses) {
    int pos = 0, neg = 0;
    for (const Lit& l : c) (l.neg ? neg : pos)++;
    if (pos > 1) horn = false;
    if (neg > 1) dual = false;
  }
  if (!horn && !dual)
    throw std::invalid_argument("solve_horn: instance is neither Horn nor dual-Horn");
  const bool flip = !horn;  // solve the negated instance, flip the model
  // Collapse offsets: protovariable-level unit propagation.
  std::vector<char> val(n, 0);  // minimal model: all false initially
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Clause& c : f.clauses) {
      int unassigned_pos = -1;
      int pos_count = 0;
      bool satisfied = false;
      for (const Lit& l : c) {
        bool neg = flip ? !l.neg : l.neg;
        if (!neg) {
          ++pos_count;
          if (val[l.var]) satisfied = true;
          else unassigned_pos = l.var;
        } else if (!val[l.var]) {
          satisfied = true;  // negative literal true under current model
        }
      }
      if (satisfied) continue;
      if (pos_count == 0) return {SatStatus::UNSAT, std::nullopt};
      // All negative literals falsified and the positive head is false:
      // derive it.
      if (unassigned_pos >= 0 && !val[unassigned_pos]) {
        val[unassigned_pos] = 1;
        changed = true;
      }
    }
  }
  Assignment1Periodic a = Assignment1Periodic::make(f.dim, 1, n);
  Offset zero(f.dim, 0);
  for (int v = 0; v < n; ++v) a.set(v, zero, flip ? !val[v] : val[v] != 0);
  if (!verify_assignment(f, a))
    throw std::logic_error("solve_horn: model construction failed");
  return {SatStatus::SAT, std::move(a)};
}

SatResult search_k_periodic(const PeriodicCNF& f, int k_max, long long budget,
                            bool exactly_one) {
  f.validate();
  for (const Clause& c : f.clauses)
    if (c.empty()) return {SatStatus::EXHAUSTED, std::nullopt};
  long long left = budget;
  for (int k = 1; k <= k_max; ++k) {
    long long cells = ipow(k, f.dim);
    std::vector<std::vector<int>> inst = torus_instance(f, k, exactly_one);
    bool exhausted = false;
    auto m = detail::dpll(static_cast<int>(f.num_vars() * cells), inst, &left,
                          &exhausted);
    if (m) {
      Assignment1Periodic a = Assignment1Periodic::make(f.dim, k, f.num_vars());
      for (size_t i = 0; i < m->size(); ++i) a.values[i] = (*m)[i];
      if (!verify_assignment(f, a, exactly_one))
        throw std::logic_error("search_k_periodic: model verification failed");
      return {SatStatus::SAT, std::move(a)};
    }
    if (exhausted) return {SatStatus::EXHAUSTED, std::nullopt};
  }
  return {SatStatus::EXHAUSTED, std::nullopt};
}

SatResult refute_window(const PeriodicCNF& f, int R_max, long long budget,
                        bool exactly_one) {
  f.validate();
  long long left = budget;
  for (int R = 0; R <= R_max; ++R) {
    // Clause instances whose literals all fall inside the window [-R, R]^dim.
    std::map<std::pair<int, Offset>, int> var_id;
    std::vector<std::vector<int>> inst;
    std::vector<Offset> cells;
    {
      Offset cur(f.dim, -R);
      for (;;) {
        cells.push_back(cur);
        int i = f.dim - 1;
        for (; i >= 0; --i) {
          if (++cur[i] <= R) break;
          cur[i] = -R;
        }
        if (i < 0) break;
      }
    }
    for (const Offset& base : cells) {
      for (const Clause& c : f.clauses) {
        bool inside = true;
        for (const Lit& l : c) {
          Offset p = add(base, l.off);
          for (int i = 0; i < f.dim && inside; ++i)
            if (p[i] < -R || p[i] > R) inside = false;
        }
        if (!inside) continue;
        std::vector<int> fc;
        for (const Lit& l : c) {
          auto key = std::make_pair(l.var, add(base, l.off));
          auto it = var_id.find(key);
          if (it == var_id.end())
            it = var_id.emplace(key, static_cast<int>(var_id.size())).first;
          int lit = it->second + 1;
          fc.push_back(l.neg ? -lit : lit);
        }
        emit_finite_clause(std::move(fc), exactly_one, nullptr, &inst);
      }
    }
    bool exhausted = false;
    auto m = detail::dpll(static_cast<int>(var_id.size()), inst, &left,
                          &exhausted);
    if (exhausted) return {SatStatus::EXHAUSTED, std::nullopt};
    if (!m) return {SatStatus::UNSAT, std::nullopt};
  }
  return {SatStatus::EXHAUSTED, std::nullopt};
}

}  // namespace periodica
