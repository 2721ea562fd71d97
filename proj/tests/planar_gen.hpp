// Random planar max-degree-4 periodic drawings for exercising
// orthogonalize: a k x k torus of vertices with straight axis edges plus at
// most one slope-1 diagonal per cell. All segments are straight lines
// between anchors, so the drawing is planar by construction (verified by
// check_drawing in the tests anyway).
#pragma once

#include <random>

#include "periodica/core.hpp"
#include "periodica/drawing.hpp"

inline periodica::PeriodicDrawing random_planar_drawing(std::mt19937& rng) {
  using namespace periodica;
  std::uniform_int_distribution<int> kd(2, 4);
  int k = kd(rng);
  long long M = 4 * k;
  PeriodicGraph g(2);
  auto vid = [&](int i, int j) { return i * k + j; };
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      g.add_vertex("v" + std::to_string(i) + "_" + std::to_string(j));
  std::vector<int> deg(static_cast<size_t>(k * k), 0);
  std::bernoulli_distribution keep(0.55), diag(0.3);

  PeriodicDrawing dr;
  dr.grid_size = M;
  auto anchor = [&](int i, int j) {
    return Pt{Rat(4 * i + 2, M), Rat(4 * j + 2, M)};
  };
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) dr.vertex_points.push_back(anchor(i, j));

  auto add = [&](int ui, int uj, int vi, int vj) {
    int u = vid(ui, uj);
    int v = vid(vi % k, vj % k);
    if (deg[static_cast<size_t>(u)] >= 4 || deg[static_cast<size_t>(v)] >= 4)
      return;
    if (u == v && deg[static_cast<size_t>(u)] >= 3) return;
    Offset s{vi / k, vj / k};
    g.add_edge(u, v, s);
    deg[static_cast<size_t>(u)]++;
    deg[static_cast<size_t>(v)]++;
    Pt a = anchor(ui, uj);
    Pt b = anchor(vi % k, vj % k) + Pt{Rat(s[0]), Rat(s[1])};
    dr.edge_paths.push_back({a, b});
  };
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      if (keep(rng)) add(i, j, i + 1, j);
      if (keep(rng)) add(i, j, i, j + 1);
      if (diag(rng)) add(i, j, i + 1, j + 1);
    }
  dr.graph = g;
  dr.orthogonal = false;
  dr.local = true;
  dr.validate();
  return dr;
}
