#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>

#include "chroma/matching.hpp"
#include "support.hpp"

using namespace chroma;

namespace {

Bipartition halves(VertexId m) {
  Bipartition s;
  for (VertexId v = 0; v < m; ++v) {
    s.left.push_back(v);
    s.right.push_back(m + v);
  }
  return s;
}

// Exhaustive maximum matching over subsets of the right side.
int brute_max_matching(const MultiGraph& g, const Bipartition& s) {
  const std::size_t r = s.right.size();
  std::vector<int> best(std::size_t{1} << r, -1);
  best[0] = 0;
  int answer = 0;
  for (VertexId u : s.left) {
    std::vector<int> next = best;
    for (std::size_t mask = 0; mask < best.size(); ++mask) {
      if (best[mask] < 0) continue;
      for (std::size_t j = 0; j < r; ++j) {
        if ((mask >> j) & 1 || !g.adjacent(u, s.right[j])) continue;
        const std::size_t to = mask | (std::size_t{1} << j);
        next[to] = std::max(next[to], best[mask] + 1);
      }
    }
    best = std::move(next);
  }
  for (int b : best) answer = std::max(answer, b);
  return answer;
}

bool is_matching(const MultiGraph& g, const Matching& m) {
  std::set<VertexId> seen;
  for (const auto& [u, v] : m.edges) {
    if (!g.adjacent(u, v) || !seen.insert(u).second || !seen.insert(v).second) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("maximum matchings of small bipartite graphs") {
  CHECK(max_bipartite_matching(testing::complete_bipartite(3), halves(3)).size() == 3);
  MultiGraph star(5);
  for (VertexId v = 1; v < 5; ++v) star.add_edge(0, v);
  CHECK(max_bipartite_matching(star, Bipartition{{0}, {1, 2, 3, 4}}).size() == 1);
}

TEST_CASE("maximum matching agrees with exhaustive search") {
  std::mt19937_64 rng(4);
  std::bernoulli_distribution coin(0.3);
  for (int t = 0; t < 100; ++t) {
    const VertexId m = 1 + static_cast<VertexId>(rng() % 10);
    MultiGraph g(2 * m);
    for (VertexId u = 0; u < m; ++u) {
      for (VertexId v = 0; v < m; ++v) {
        if (coin(rng)) g.add_edge(u, m + v);
      }
    }
    const Matching mm = max_bipartite_matching(g, halves(m));
    CHECK(is_matching(g, mm));
    CHECK(static_cast<int>(mm.size()) == brute_max_matching(g, halves(m)));
  }
}

TEST_CASE("non-bipartite input is rejected") {
  MultiGraph g(4);
  g.add_edge(0, 1);
  g.add_edge(0, 2);
  try {
    max_bipartite_matching(g, Bipartition{{0, 1}, {2, 3}});
    FAIL("edge inside a side accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotBipartite);
  }
}

TEST_CASE("Hall perfect matching") {
  const MultiGraph c8 = testing::cycle(8);
  const Bipartition alt{{0, 2, 4, 6}, {1, 3, 5, 7}};
  const Matching m = hall_perfect_matching(c8, alt);
  CHECK(m.size() == 4);
  CHECK(is_matching(c8, m));

  // One edge 0-2 plus isolated 1 and 3.
  MultiGraph h(4);
  h.add_edge(0, 2);
  const Bipartition sides{{0, 1}, {2, 3}};
  try {
    hall_perfect_matching(h, sides);
    FAIL("perfect matching reported");
  } catch (const NoPerfectMatchingError& e) {
    std::set<VertexId> hood;
    for (VertexId a : e.violator()) {
      for (VertexId w : h.neighbors(a)) hood.insert(w);
    }
    CHECK(!e.violator().empty());
    CHECK(hood.size() < e.violator().size());
  }
}

TEST_CASE("Hall violators on random near-perfect instances") {
  std::mt19937_64 rng(9);
  std::bernoulli_distribution coin(0.25);
  int failures = 0;
  for (int t = 0; t < 200; ++t) {
    const VertexId m = 2 + static_cast<VertexId>(rng() % 8);
    MultiGraph g(2 * m);
    for (VertexId u = 0; u < m; ++u) {
      for (VertexId v = 0; v < m; ++v) {
        if (coin(rng)) g.add_edge(u, m + v);
      }
    }
    try {
      const Matching pm = hall_perfect_matching(g, halves(m));
      CHECK(pm.size() == static_cast<std::size_t>(m));
    } catch (const NoPerfectMatchingError& e) {
      ++failures;
      std::set<VertexId> hood;
      for (VertexId a : e.violator()) {
        CHECK(a < m);
        for (VertexId w : g.neighbors(a)) hood.insert(w);
      }
      CHECK(hood.size() < e.violator().size());
      CHECK(brute_max_matching(g, halves(m)) < m);
    }
  }
  CHECK(failures > 0);
}

TEST_CASE("Konig colorings") {
  const MultiGraph c6 = testing::cycle(6);
  const EdgeColoring c = konig_edge_coloring(c6, Bipartition{{0, 2, 4}, {1, 3, 5}});
  CHECK(testing::recount(c6, c).colors == 2);

  const MultiGraph k33 = testing::complete_bipartite(3);
  const EdgeColoring k = konig_edge_coloring(k33, halves(3));
  const auto r = testing::recount(k33, k);
  CHECK(r.proper);
  CHECK(r.total);
  CHECK(r.colors == 3);
  CHECK(testing::all_classes_perfect(k33, k));

  MultiGraph mg(3, VertexId{1});
  mg.add_edge(0, 1, 2);
  mg.add_edge(1, 2);
  const EdgeColoring t = konig_edge_coloring(mg, Bipartition{{1}, {0, 2}});
  const auto rt = testing::recount(mg, t);
  CHECK(rt.proper);
  CHECK(rt.total);
  CHECK(rt.colors == 3);
}
