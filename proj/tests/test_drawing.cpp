#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>

#include "periodica/core.hpp"
#include "periodica/drawing.hpp"

using namespace periodica;

namespace {

PeriodicGraph grid2d() {
  PeriodicGraph g(2);
  int v = g.add_vertex("v");
  g.add_edge(v, v, {1, 0});
  g.add_edge(v, v, {0, 1});
  return g;
}

// A random connected-ish 2D graph with offsets in {-1,0,1}^2.
PeriodicGraph random_local_graph(std::mt19937& rng, int max_v, int max_e) {
  std::uniform_int_distribution<int> nv(1, max_v);
  int V = nv(rng);
  PeriodicGraph g(2);
  for (int i = 0; i < V; ++i) g.add_vertex("v" + std::to_string(i));
  std::uniform_int_distribution<int> ne(0, max_e);
  std::uniform_int_distribution<int> pick(0, V - 1);
  // 1-local offsets only: the drawing routine requires L1-locality <= 1.
  const Offset offs[5] = {{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  std::uniform_int_distribution<int> off(0, 4);
  int E = ne(rng);
  std::set<std::tuple<int, int, int, int>> seen;
  int offset_edges = 0;
  for (int i = 0; i < E; ++i) {
    int u = pick(rng), v = pick(rng);
    Offset s = offs[off(rng)];
    if (u == v && s[0] == 0 && s[1] == 0) continue;  // no trivial loops
    // Each offset edge may consume one extra routing column; the drawing
    // grid has 4|V|-2 of them to spare, so cap the offset edges.
    if (s[0] != 0 || s[1] != 0) {
      if (offset_edges >= 4 * V - 2) continue;
      ++offset_edges;
    }
    // Dedupe undirected parallel copies so the quotient stays simple-ish.
    auto key = std::make_tuple(std::min(u, v), std::max(u, v),
                               u <= v ? s[0] : -s[0], u <= v ? s[1] : -s[1]);
    if (!seen.insert(key).second) continue;
    g.add_edge(u, v, s);
  }
  return g;
}

}  // namespace

TEST_CASE("grid size is exactly 5V+2E") {
  // |V| = 6, |E| = 9 -> M = 48.
  PeriodicGraph g(2);
  for (int i = 0; i < 6; ++i) g.add_vertex("v" + std::to_string(i));
  for (int i = 0; i < 5; ++i) g.add_edge(i, i + 1, {0, 0});
  g.add_edge(0, 3, {1, 0});
  g.add_edge(1, 4, {0, 1});
  g.add_edge(2, 5, {-1, 0});
  g.add_edge(0, 5, {0, -1});
  auto dr = draw_orthocrossing(g);
  CHECK(dr.grid_size == 48);
  CHECK(dr.vertex_points.size() == 6);
  CHECK(dr.edge_paths.size() == 9);
  auto rep = check_drawing(dr);
  CHECK(rep.is_orthocrossing);
  CHECK(rep.violations.empty());
}

TEST_CASE("edgeless graph: three isolated points, M = 15") {
  PeriodicGraph g(2);
  g.add_vertex("a");
  g.add_vertex("b");
  g.add_vertex("c");
  auto dr = draw_orthocrossing(g);
  CHECK(dr.grid_size == 15);
  auto rep = check_drawing(dr);
  CHECK(rep.is_planar);
  CHECK(rep.is_orthocrossing);
  CHECK(rep.crossings.empty());
}

TEST_CASE("square grid graph draws orthogonally") {
  auto g = grid2d();
  auto dr = draw_orthocrossing(g);
  CHECK(dr.grid_size == 5 * 1 + 2 * 2);
  CHECK(dr.orthogonal);
  auto rep = check_drawing(dr);
  CHECK(rep.is_orthocrossing);
  CHECK(rep.violations.empty());
}

TEST_CASE("self-edge with y-offset uses a gate and verifies") {
  PeriodicGraph g(2);
  int v = g.add_vertex("v");
  g.add_edge(v, v, {0, 1});
  auto dr = draw_orthocrossing(g);
  auto rep = check_drawing(dr);
  CHECK(rep.is_orthocrossing);
  CHECK(rep.violations.empty());
}

TEST_CASE("negative offsets round-trip through the swapped path assembly") {
  for (Offset s : {Offset{-1, 0}, Offset{0, -1}, Offset{-1, -1}, Offset{1, -1}}) {
    PeriodicGraph g(2);
    int u = g.add_vertex("u");
    int v = g.add_vertex("v");
    g.add_edge(u, v, s);
    PeriodicDrawing dr;
    if (std::abs(s[0]) + std::abs(s[1]) <= 1) {
      dr = draw_orthocrossing(g);
    } else {
      // Diagonal offsets are not 1-local; refine to make them so is the
      // caller's job, here we just skip.
      continue;
    }
    dr.validate();
    auto rep = check_drawing(dr);
    CHECK_MESSAGE(rep.is_orthocrossing,
                  "offset (" << s[0] << "," << s[1] << ")");
    CHECK(rep.violations.empty());
  }
}

TEST_CASE("degree >= 5 vertices fall back to diagonal connectors") {
  PeriodicGraph g(2);
  int hub = g.add_vertex("hub");
  for (int i = 0; i < 5; ++i) {
    int w = g.add_vertex("w" + std::to_string(i));
    g.add_edge(hub, w, {0, 0});
  }
  auto dr = draw_orthocrossing(g);
  CHECK_FALSE(dr.orthogonal);
  auto rep = check_drawing(dr);
  // Diagonal connectors violate the horizontal-x-vertical crossing rule in
  // general but the drawing must still avoid overlaps at vertices; for this
  // star the connectors only meet at the hub which is permitted.
  CHECK(rep.violations.empty());
}

TEST_CASE("overlapping parallel drawn edges are flagged") {
  PeriodicGraph g(2);
  int u = g.add_vertex("u");
  int v = g.add_vertex("v");
  g.add_edge(u, v, {0, 0});
  g.add_edge(u, v, {0, 0});
  auto dr = draw_orthocrossing(g);
  // Sabotage: give edge 1 the same path as edge 0 (full overlap).
  dr.edge_paths[1] = dr.edge_paths[0];
  auto rep = check_drawing(dr);
  CHECK_FALSE(rep.is_orthocrossing);
  CHECK_FALSE(rep.violations.empty());
}

TEST_CASE("a forced H x V crossing is orthocrossing but not planar") {
  PeriodicGraph g(2);
  int a = g.add_vertex("a");
  int b = g.add_vertex("b");
  g.add_edge(a, b, {0, 0});
  g.add_edge(a, b, {0, 0});
  auto dr = draw_orthocrossing(g);
  // Replace the two paths by a horizontal and a vertical segment crossing
  // in the middle of the cell, anchored at the true vertex points.
  const Rat h(1, 2);
  Pt pa = dr.vertex_points[0], pb = dr.vertex_points[1];
  dr.edge_paths[0] = {pa, {pa.x, h}, {pb.x, h}, pb};
  // Second path leaves pa along its row and re-enters pb along its row, so
  // the only meetings with the first path are two proper H x V crossings.
  dr.edge_paths[1] = {pa,
                      {Rat(1, 3), pa.y},
                      {Rat(1, 3), Rat(3, 4)},
                      {Rat(9, 20), Rat(3, 4)},
                      {Rat(9, 20), pb.y},
                      pb};
  dr.validate();
  auto rep = check_drawing(dr);
  CHECK(rep.is_orthocrossing);
  CHECK_FALSE(rep.is_planar);
  CHECK_FALSE(rep.crossings.empty());
}

TEST_CASE("1D graphs draw correctly") {
  PeriodicGraph g(1);
  int u = g.add_vertex("u");
  int v = g.add_vertex("v");
  g.add_edge(u, v, {0});
  g.add_edge(v, u, {1});
  auto dr = draw_orthocrossing(g);
  CHECK(dr.grid_size == 14);
  auto rep = check_drawing(dr);
  CHECK(rep.is_orthocrossing);
  CHECK(rep.violations.empty());
}

TEST_CASE("random local graphs: exact grid size and verified orthocrossing") {
  std::mt19937 rng(20240817);
  for (int trial = 0; trial < 40; ++trial) {
    auto g = random_local_graph(rng, 8, 12);
    long long M = 5LL * static_cast<long long>(g.vertex_names.size()) +
                  2LL * static_cast<long long>(g.edges.size());
    auto dr = draw_orthocrossing(g);
    REQUIRE(dr.grid_size == M);
    auto rep = check_drawing(dr);
    CHECK_MESSAGE(rep.is_orthocrossing, "trial " << trial);
    CHECK_MESSAGE(rep.violations.empty(), "trial " << trial);
  }
}

// ---------------------------------------------------------------------------
// orthogonalize
// ---------------------------------------------------------------------------

#include "planar_gen.hpp"

namespace {

void check_ortho_output(const PeriodicDrawing& in, const PeriodicDrawing& out,
                        int trial = -1) {
  REQUIRE(out.grid_size == 480 * in.grid_size * in.grid_size);
  auto rep = check_drawing(out);
  CHECK_MESSAGE(rep.is_planar, "trial " << trial);
  CHECK_MESSAGE(rep.violations.empty(),
                "trial " << trial << ": " << (rep.violations.empty()
                                                  ? std::string()
                                                  : rep.violations.front()));
  CHECK(out.orthogonal);
  // quotient graph and anchors are preserved
  REQUIRE(out.graph.edges.size() == in.graph.edges.size());
  for (size_t i = 0; i < in.graph.edges.size(); ++i) {
    CHECK(out.graph.edges[i].u == in.graph.edges[i].u);
    CHECK(out.graph.edges[i].v == in.graph.edges[i].v);
    CHECK(out.graph.edges[i].shift == in.graph.edges[i].shift);
  }
  for (size_t i = 0; i < in.vertex_points.size(); ++i) {
    CHECK(out.vertex_points[i].x == in.vertex_points[i].x);
    CHECK(out.vertex_points[i].y == in.vertex_points[i].y);
  }
}

}  // namespace

TEST_CASE("orthogonalize: single diagonal edge") {
  PeriodicGraph g(2);
  int u = g.add_vertex("u");
  int v = g.add_vertex("v");
  g.add_edge(u, v, {0, 0});
  PeriodicDrawing dr;
  dr.graph = g;
  dr.grid_size = 4;
  dr.vertex_points = {{Rat(1, 4), Rat(1, 4)}, {Rat(3, 4), Rat(3, 4)}};
  dr.edge_paths = {{dr.vertex_points[0], dr.vertex_points[1]}};
  dr.validate();
  auto out = orthogonalize(dr);
  check_ortho_output(dr, out);
  CHECK(out.local);
}

TEST_CASE("orthogonalize: square grid with straight axis edges") {
  auto g = grid2d();
  PeriodicDrawing dr;
  dr.graph = g;
  dr.grid_size = 2;
  dr.vertex_points = {{Rat(1, 2), Rat(1, 2)}};
  dr.edge_paths = {
      {{Rat(1, 2), Rat(1, 2)}, {Rat(3, 2), Rat(1, 2)}},
      {{Rat(1, 2), Rat(1, 2)}, {Rat(1, 2), Rat(3, 2)}},
  };
  dr.validate();
  REQUIRE(check_drawing(dr).is_planar);
  auto out = orthogonalize(dr);
  check_ortho_output(dr, out);
  CHECK(out.local);
}

TEST_CASE("orthogonalize: steep segments are subdivided safely") {
  // dy = 3/4 of a period on the first edge and two full periods on the
  // second (a (1,2)-shifted loop drawn as one straight segment).
  PeriodicGraph g(2);
  int u = g.add_vertex("u");
  int v = g.add_vertex("v");
  g.add_edge(u, v, {0, 0});
  g.add_edge(u, u, {1, 2});
  PeriodicDrawing dr;
  dr.graph = g;
  dr.grid_size = 8;
  dr.vertex_points = {{Rat(1, 8), Rat(1, 8)}, {Rat(5, 8), Rat(7, 8)}};
  dr.edge_paths = {
      {dr.vertex_points[0], dr.vertex_points[1]},
      {dr.vertex_points[0], {Rat(9, 8), Rat(17, 8)}},
  };
  dr.validate();
  REQUIRE(check_drawing(dr).is_planar);
  auto out = orthogonalize(dr);
  check_ortho_output(dr, out);
}

TEST_CASE("orthogonalize: polyline with bends") {
  PeriodicGraph g(2);
  int u = g.add_vertex("u");
  int v = g.add_vertex("v");
  g.add_edge(u, v, {0, 0});
  g.add_edge(u, v, {0, 0});
  PeriodicDrawing dr;
  dr.graph = g;
  dr.grid_size = 8;
  dr.vertex_points = {{Rat(1, 8), Rat(1, 2)}, {Rat(7, 8), Rat(1, 2)}};
  dr.edge_paths = {
      // straight connection
      {dr.vertex_points[0], dr.vertex_points[1]},
      // a detour over the top with two bends
      {dr.vertex_points[0],
       {Rat(3, 8), Rat(6, 8)},
       {Rat(5, 8), Rat(6, 8)},
       dr.vertex_points[1]},
  };
  dr.validate();
  REQUIRE(check_drawing(dr).is_planar);
  auto out = orthogonalize(dr);
  check_ortho_output(dr, out);
}

TEST_CASE("orthogonalize: planar 1D strip drawing") {
  PeriodicGraph g(1);
  int u = g.add_vertex("u");
  int v = g.add_vertex("v");
  g.add_edge(u, v, {0});
  g.add_edge(v, u, {1});
  PeriodicDrawing dr;
  dr.graph = g;
  dr.grid_size = 4;
  dr.vertex_points = {{Rat(1, 4), Rat(1, 4)}, {Rat(3, 4), Rat(3, 4)}};
  dr.edge_paths = {
      {dr.vertex_points[0], dr.vertex_points[1]},
      {dr.vertex_points[1], {Rat(5, 4), Rat(1, 4)}},
  };
  dr.validate();
  REQUIRE(check_drawing(dr).is_planar);
  auto out = orthogonalize(dr);
  check_ortho_output(dr, out);
}

TEST_CASE("orthogonalize rejects bad inputs") {
  // non-planar: two straight edges crossing mid-cell
  PeriodicGraph g(2);
  int a = g.add_vertex("a");
  int b = g.add_vertex("b");
  int c = g.add_vertex("c");
  int d = g.add_vertex("d");
  g.add_edge(a, b, {0, 0});
  g.add_edge(c, d, {0, 0});
  PeriodicDrawing dr;
  dr.graph = g;
  dr.grid_size = 4;
  dr.vertex_points = {{Rat(1, 4), Rat(1, 4)},
                      {Rat(3, 4), Rat(3, 4)},
                      {Rat(1, 4), Rat(3, 4)},
                      {Rat(3, 4), Rat(1, 4)}};
  dr.edge_paths = {{dr.vertex_points[0], dr.vertex_points[1]},
                   {dr.vertex_points[2], dr.vertex_points[3]}};
  dr.validate();
  CHECK_THROWS_AS(orthogonalize(dr), std::invalid_argument);

  // degree 5 vertex
  PeriodicGraph h(2);
  int z = h.add_vertex("z");
  for (int i = 0; i < 3; ++i) h.add_edge(z, z, {1, 0});
  PeriodicDrawing hd;
  hd.graph = h;
  hd.grid_size = 2;
  hd.vertex_points = {{Rat(1, 2), Rat(1, 2)}};
  hd.edge_paths.assign(3, {{Rat(1, 2), Rat(1, 2)}, {Rat(3, 2), Rat(1, 2)}});
  hd.validate();
  CHECK_THROWS_AS(orthogonalize(hd), std::invalid_argument);
}

TEST_CASE("orthogonalize: 50 random planar drawings") {
  std::mt19937 rng(987654321);
  for (int trial = 0; trial < 50; ++trial) {
    auto dr = random_planar_drawing(rng);
    REQUIRE_MESSAGE(check_drawing(dr).is_planar, "trial " << trial);
    auto out = orthogonalize(dr);
    check_ortho_output(dr, out, trial);
  }
}

// ---------------------------------------------------------------------------
// normalize_degree3
// ---------------------------------------------------------------------------

namespace {

// A plus-shaped planar orthogonal drawing: central vertex 0 plus one
// degree-1 neighbor per requested compass direction (subset of "WENS").
PeriodicDrawing plus_drawing(const std::string& dirs) {
  PeriodicGraph g(2);
  int c = g.add_vertex("c");
  PeriodicDrawing dr;
  dr.grid_size = 8;
  dr.vertex_points.push_back({Rat(1, 2), Rat(1, 2)});
  std::map<char, Pt> at = {{'W', {Rat(1, 4), Rat(1, 2)}},
                           {'E', {Rat(3, 4), Rat(1, 2)}},
                           {'N', {Rat(1, 2), Rat(3, 4)}},
                           {'S', {Rat(1, 2), Rat(1, 4)}}};
  for (char d : dirs) {
    int v = g.add_vertex(std::string(1, d));
    g.add_edge(c, v, {0, 0});
    dr.vertex_points.push_back(at[d]);
    dr.edge_paths.push_back({dr.vertex_points[0], at[d]});
  }
  dr.graph = g;
  dr.orthogonal = true;
  dr.local = true;
  dr.validate();
  return dr;
}

std::vector<Pt> merge_collinear(const std::vector<Pt>& p) {
  std::vector<Pt> out;
  for (const auto& q : p) {
    if (!out.empty() && out.back() == q) continue;
    if (out.size() >= 2) {
      const Pt& a = out[out.size() - 2];
      const Pt& b = out.back();
      if ((a.x == b.x && b.x == q.x) || (a.y == b.y && b.y == q.y)) {
        out.back() = q;
        continue;
      }
    }
    out.push_back(q);
  }
  return out;
}

// First segment direction of each edge end at vertex 0's anchor.
char exit_dir(const std::vector<Pt>& path) {
  const Pt& a = path.front();
  const Pt& b = path[1];
  if (a.x == b.x) return b.y > a.y ? 'N' : 'S';
  return b.x > a.x ? 'E' : 'W';
}

}  // namespace

TEST_CASE("normalize_degree3: already-normal vertex unchanged up to refinement") {
  auto dr = plus_drawing("WNE");
  auto out = normalize_degree3(dr, {{0, 0}});
  CHECK(out.grid_size == 48);
  for (size_t e = 0; e < dr.edge_paths.size(); ++e) {
    auto a = merge_collinear(dr.edge_paths[e]);
    auto b = merge_collinear(out.edge_paths[e]);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].x == b[i].x);
      CHECK(a[i].y == b[i].y);
    }
  }
  auto rep = check_drawing(out);
  CHECK(rep.is_planar);
}

TEST_CASE("normalize_degree3: left/right/down vertex is rewired") {
  auto dr = plus_drawing("WES");
  auto out = normalize_degree3(dr, {{0, 0}});
  CHECK(out.grid_size == 48);
  std::set<char> dirs;
  for (const auto& p : out.edge_paths) dirs.insert(exit_dir(p));
  CHECK(dirs == std::set<char>{'W', 'N', 'E'});
  CHECK(exit_dir(out.edge_paths[0]) == 'W');
  auto rep = check_drawing(out);
  CHECK_MESSAGE(rep.is_planar,
                (rep.violations.empty() ? std::string() : rep.violations.front()));
  // quotient graph preserved
  REQUIRE(out.graph.edges.size() == dr.graph.edges.size());
}

TEST_CASE("normalize_degree3: designated edge currently pointing up") {
  auto dr = plus_drawing("NES");
  auto out = normalize_degree3(dr, {{0, 0}});  // edge 0 exits N in the input
  CHECK(exit_dir(out.edge_paths[0]) == 'W');
  std::set<char> dirs;
  for (const auto& p : out.edge_paths) dirs.insert(exit_dir(p));
  CHECK(dirs == std::set<char>{'W', 'N', 'E'});
  auto rep = check_drawing(out);
  CHECK_MESSAGE(rep.is_planar,
                (rep.violations.empty() ? std::string() : rep.violations.front()));
}

TEST_CASE("normalize_degree3: all four rotations normalize and stay planar") {
  const std::string combos[4] = {"WNE", "WES", "NES", "WNS"};
  for (const auto& combo : combos) {
    for (int pick = 0; pick < 3; ++pick) {
      auto dr = plus_drawing(combo);
      auto out = normalize_degree3(dr, {{0, pick}});
      // 6x refinement, or 36x when a rotation block was needed
      CHECK((out.grid_size == 48 || out.grid_size == 288));
      CHECK(exit_dir(out.edge_paths[static_cast<size_t>(pick)]) == 'W');
      std::set<char> dirs;
      for (const auto& p : out.edge_paths) dirs.insert(exit_dir(p));
      CHECK(dirs == std::set<char>{'W', 'N', 'E'});
      auto rep = check_drawing(out);
      CHECK_MESSAGE(rep.is_planar, "combo " << combo << " pick " << pick);
    }
  }
}

TEST_CASE("normalize_degree3: wrap-around edge ends are rerouted in place") {
  // degree-3 vertex whose left edge arrives across the cell boundary
  PeriodicGraph g(2);
  int c = g.add_vertex("c");
  g.add_edge(c, c, {1, 0});  // leaves E, arrives W (degree 2)
  int n = g.add_vertex("n");
  g.add_edge(c, n, {0, 0});  // leaves S toward a lower neighbor
  PeriodicDrawing dr;
  dr.graph = g;
  dr.grid_size = 8;
  dr.vertex_points = {{Rat(1, 2), Rat(1, 2)}, {Rat(1, 2), Rat(1, 4)}};
  dr.edge_paths = {
      {{Rat(1, 2), Rat(1, 2)}, {Rat(3, 2), Rat(1, 2)}},
      {{Rat(1, 2), Rat(1, 2)}, {Rat(1, 2), Rat(1, 4)}},
  };
  dr.orthogonal = true;
  dr.validate();
  REQUIRE(check_drawing(dr).is_planar);
  auto out = normalize_degree3(dr, {{0, 0}});
  CHECK((out.grid_size == 48 || out.grid_size == 288));
  CHECK(exit_dir(out.edge_paths[0]) == 'W');
  auto rep = check_drawing(out);
  CHECK_MESSAGE(rep.is_planar,
                (rep.violations.empty() ? std::string() : rep.violations.front()));
}

TEST_CASE("normalize_degree3 rejects bad inputs") {
  auto dr = plus_drawing("WNES");  // degree 4
  CHECK_THROWS_AS(normalize_degree3(dr, {{0, 0}}), std::invalid_argument);
  auto dr3 = plus_drawing("WNE");
  dr3.orthogonal = false;
  CHECK_THROWS_AS(normalize_degree3(dr3, {{0, 0}}), std::invalid_argument);
  // missing left_choice entry
  auto dr4 = plus_drawing("WNE");
  CHECK_THROWS_AS(normalize_degree3(dr4, {}), std::invalid_argument);
  // designated edge not incident
  CHECK_THROWS_AS(normalize_degree3(dr4, {{0, 99}}), std::invalid_argument);
}
