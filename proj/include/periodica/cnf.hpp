// Periodic CNF data model and decision / semi-decision procedures:
// exact 1D solver (column automaton), quotient 2SAT, collapsed Horn SAT,
// k-periodic model search and window refutation.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "periodica/core.hpp"

namespace periodica {

// A literal: protovariable `var` at lattice offset `off`, negated if `neg`.
struct Lit {
  int var = 0;
  Offset off;
  bool neg = false;

  friend bool operator==(const Lit& a, const Lit& b) {
    return a.var == b.var && a.off == b.off && a.neg == b.neg;
  }
};

using Clause = std::vector<Lit>;

struct PeriodicCNF {
  int dim = 1;
  std::vector<std::string> var_names;
  std::vector<Clause> clauses;

  PeriodicCNF() = default;
  explicit PeriodicCNF(int d) : dim(d) {}

  int num_vars() const { return static_cast<int>(var_names.size()); }
  int add_var(const std::string& name) {
    var_names.push_back(name);
    return num_vars() - 1;
  }
  void add_clause(Clause c);
  void validate() const;
  // Translates each clause so its lexicographically least offset is zero.
  void canonicalize();
};

// Max pairwise L1 distance between literal offsets within a clause.
int locality(const PeriodicCNF& f);

// Analogue of refine_period for CNFs: k^d copies of each protovariable;
// output locality <= ceil(locality/k).
PeriodicCNF refine_period(const PeriodicCNF& f, int k);

// A k-periodic assignment stored on the k-torus.
struct Assignment1Periodic {
  int dim = 1;
  int k = 1;
  int num_vars = 0;
  std::vector<char> values;  // index = var * k^dim + cell (mixed radix)

  bool value(int var, const Offset& cell) const;
  void set(int var, const Offset& cell, bool v);
  static Assignment1Periodic make(int dim, int k, int num_vars);
};

// Checks every protoclause instance on the k-torus. With `exactly_one`,
// a clause is satisfied iff exactly one literal is true.
bool verify_assignment(const PeriodicCNF& f, const Assignment1Periodic& a,
                       bool exactly_one = false);

enum class SatStatus { SAT, UNSAT, EXHAUSTED };

struct SatResult {
  SatStatus status = SatStatus::EXHAUSTED;
  std::optional<Assignment1Periodic> model;
};

// Wang tile set: colors 1..C, tiles with (south, west, north, east) glues.
struct WangTileSet {
  int num_colors = 0;
  struct Tile {
    int south, west, north, east;  // color ids in 1..num_colors
  };
  std::vector<Tile> tiles;
  void validate() const;
};

// Wang tiles -> local 2D Periodic CNF. Protovariables s_1..s_C, w_1..w_C,
// t_1..t_T; satisfiable iff the tile set tiles the plane.
PeriodicCNF wang_to_cnf(const WangTileSet& w);

// Exact decision for local 1D instances via the column automaton whose
// nodes are full single-column assignments; SAT iff the trimmed automaton
// has a cycle, returned as a k-periodic model (k = cycle length).
// Throws std::length_error if the refined variable count exceeds max_vars.
SatResult solve_1d(const PeriodicCNF& f, bool exactly_one = false,
                   int max_vars = 20);

// Quotient implication-digraph 2SAT (any dimension, width <= 2).
SatResult solve_2sat(const PeriodicCNF& f);

// Horn / dual-Horn SAT on the collapsed (period-1) instance; SAT models
// have k = 1.
SatResult solve_horn(const PeriodicCNF& f);

// Searches k = 1..k_max for a k-periodic model via an internal DPLL with a
// shared decision budget. Never answers UNSAT. With exactly_one, every
// clause demands exactly one true literal (counted with multiplicity).
SatResult search_k_periodic(const PeriodicCNF& f, int k_max,
                            long long budget = 1000000,
                            bool exactly_one = false);

// Refutes by finite window infeasibility for R = 0..R_max. Never answers SAT.
// With exactly_one, every clause demands exactly one true literal.
SatResult refute_window(const PeriodicCNF& f, int R_max,
                        long long budget = 1000000, bool exactly_one = false);

namespace detail {
// Self-contained deterministic DPLL with unit propagation on a finite CNF.
// Literals: +-(v+1). Returns nullopt if UNSAT, or if the decision budget is
// exhausted (in which case *exhausted is set).
std::optional<std::vector<char>> dpll(int num_vars,
                                      const std::vector<std::vector<int>>& cls,
                                      long long* budget, bool* exhausted);
}  // namespace detail

}  // namespace periodica
