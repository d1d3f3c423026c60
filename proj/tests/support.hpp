#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "chroma/coloring.hpp"
#include "chroma/multigraph.hpp"

namespace testing {

using chroma::Color;
using chroma::EdgeColoring;
using chroma::MultiGraph;
using chroma::VertexId;

inline MultiGraph cycle(VertexId n) {
  MultiGraph g(n);
  for (VertexId i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
  return g;
}

inline MultiGraph complete(VertexId n) {
  MultiGraph g(n);
  for (VertexId u = 0; u < n; ++u) {
    for (VertexId v = u + 1; v < n; ++v) g.add_edge(u, v);
  }
  return g;
}

inline MultiGraph complete_bipartite(VertexId m) {
  MultiGraph g(2 * m);
  for (VertexId u = 0; u < m; ++u) {
    for (VertexId v = 0; v < m; ++v) g.add_edge(u, m + v);
  }
  return g;
}

// Outer 5-cycle 0..4, inner pentagram 5..9, spokes i -- i+5.
inline MultiGraph petersen() {
  MultiGraph g(10);
  for (VertexId i = 0; i < 5; ++i) {
    g.add_edge(i, (i + 1) % 5);
    g.add_edge(5 + i, 5 + (i + 2) % 5);
    g.add_edge(i, 5 + i);
  }
  return g;
}

// Petersen graph minus vertex 9, relabeled onto [0, 9).
inline MultiGraph petersen_minus_vertex() {
  const MultiGraph p = petersen();
  MultiGraph g(9);
  for (const auto& e : p.edges()) {
    if (e.u != 9 && e.v != 9) g.add_edge(e.u, e.v);
  }
  return g;
}

inline MultiGraph random_simple(VertexId n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  MultiGraph g(n);
  for (VertexId u = 0; u < n; ++u) {
    for (VertexId v = u + 1; v < n; ++v) {
      if (coin(rng)) g.add_edge(u, v);
    }
  }
  return g;
}

// Random star-multigraph: simple part G(n, p) plus extra parallel copies on
// edges at the center 0.
inline MultiGraph random_star(VertexId n, double p, int max_mult, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  std::uniform_int_distribution<int> mult(1, max_mult);
  MultiGraph g(n, VertexId{0});
  for (VertexId u = 0; u < n; ++u) {
    for (VertexId v = u + 1; v < n; ++v) {
      if (!coin(rng)) continue;
      g.add_edge(u, v, u == 0 ? mult(rng) : 1);
    }
  }
  return g;
}

// Properness and totality recomputed from the raw color table, sharing no
// code with the library verifiers.
struct Recount {
  bool proper = true;
  bool total = true;
  int colors = 0;
};

inline Recount recount(const MultiGraph& g, const EdgeColoring& c) {
  Recount r;
  std::set<Color> used;
  for (VertexId v = 0; v < g.order(); ++v) {
    int seen = 0;
    for (Color col = 1; col <= c.palette(); ++col) {
      const VertexId w = c.at(v, col);
      if (w == chroma::kNoVertex) continue;
      ++seen;
      used.insert(col);
      if (w < 0 || w >= g.order() || w == v || c.at(w, col) != v || !g.adjacent(v, w)) r.proper = false;
    }
    if (seen != g.degree(v)) r.total = false;
  }
  for (const auto& e : g.edges()) {
    int on_pair = 0;
    for (Color col = 1; col <= c.palette(); ++col) on_pair += c.at(e.u, col) == e.v ? 1 : 0;
    if (on_pair > e.multiplicity) r.proper = false;
    if (on_pair != e.multiplicity) r.total = false;
  }
  r.colors = static_cast<int>(used.size());
  return r;
}

// Every color class saturates every vertex.
inline bool all_classes_perfect(const MultiGraph& g, const EdgeColoring& c) {
  for (Color col = 1; col <= c.palette(); ++col) {
    for (VertexId v = 0; v < g.order(); ++v) {
      if (c.at(v, col) == chroma::kNoVertex) return false;
    }
  }
  return true;
}

}  // namespace testing
