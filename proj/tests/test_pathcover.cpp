#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>

#include "chroma/oracle.hpp"
#include "chroma/pathcover.hpp"
#include "support.hpp"

using namespace chroma;

namespace {

// Own check: disjoint, spanning, right ends, real edges.
bool covers(const MultiGraph& g, const std::vector<VertexPair>& pairs, const PathCover& pc) {
  if (pc.paths.size() != pairs.size()) return false;
  std::set<VertexId> seen;
  for (std::size_t i = 0; i < pc.paths.size(); ++i) {
    const auto& p = pc.paths[i];
    if (p.empty()) return false;
    const bool fwd = p.front() == pairs[i].first && p.back() == pairs[i].second;
    const bool rev = p.front() == pairs[i].second && p.back() == pairs[i].first;
    if (!fwd && !rev) return false;
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (!seen.insert(p[j]).second) return false;
      if (j > 0 && !g.adjacent(p[j - 1], p[j])) return false;
    }
  }
  return static_cast<VertexId>(seen.size()) == g.order();
}

std::vector<VertexPair> random_pairs(VertexId n, int count, VertexId skip, std::mt19937_64& rng) {
  std::vector<VertexId> perm;
  for (VertexId v = 0; v < n; ++v) {
    if (v != skip) perm.push_back(v);
  }
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<VertexPair> pairs;
  for (int i = 0; i < count; ++i) pairs.emplace_back(perm[2 * i], perm[2 * i + 1]);
  return pairs;
}

}  // namespace

TEST_CASE("a Hamilton path is its own cover") {
  MultiGraph g(6);
  for (VertexId v = 0; v + 1 < 6; ++v) g.add_edge(v, v + 1);
  std::mt19937_64 rng(1);
  const std::vector<VertexPair> pairs{{0, 5}};
  const PathCover pc = path_cover(g, pairs, PathCoverBudget{}, rng);
  CHECK(pc.paths.front() == std::vector<VertexId>{0, 1, 2, 3, 4, 5});
  CHECK(validate_path_cover(g, pairs, pc).ok);
}

TEST_CASE("K6 with two pairs") {
  const MultiGraph g = testing::complete(6);
  std::mt19937_64 rng(2);
  const std::vector<VertexPair> pairs{{0, 1}, {2, 3}};
  const PathCover pc = path_cover(g, pairs, PathCoverBudget{}, rng);
  CHECK(covers(g, pairs, pc));
  CHECK(validate_path_cover(g, pairs, pc).ok);
}

TEST_CASE("validator rejects broken covers") {
  const MultiGraph g = testing::cycle(5);
  const std::vector<VertexPair> pairs{{0, 2}};
  PathCover bad;
  bad.paths = {{0, 1, 2}};
  bad.endpoints = pairs;
  CHECK_FALSE(validate_path_cover(g, pairs, bad).ok);
  bad.paths = {{0, 4, 3, 1, 2}};
  CHECK_FALSE(validate_path_cover(g, pairs, bad).ok);
  bad.paths = {{0, 4, 3, 2, 1}};
  CHECK_FALSE(validate_path_cover(g, pairs, bad).ok);
}

TEST_CASE("cover of G(80, 0.5) with three pairs") {
  int ok = 0;
  for (int s = 0; s < 100; ++s) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(s));
    const MultiGraph g = testing::random_simple(80, 0.5, rng);
    const auto pairs = random_pairs(80, 3, kNoVertex, rng);
    try {
      const PathCover pc = path_cover(g, pairs, PathCoverBudget{}, rng);
      CHECK(covers(g, pairs, pc));
      ++ok;
    } catch (const CoverNotFoundError& e) {
      CHECK(e.partial().covered() < 80);
    }
  }
  CHECK(ok >= 99);
}

TEST_CASE("star cover with the center as an endpoint") {
  MultiGraph g = testing::complete(7).with_center(VertexId{0});
  g.add_edge(0, 3);
  std::mt19937_64 rng(3);
  const std::vector<VertexPair> pairs{{0, 6}, {1, 2}};
  const PathCover pc = path_cover_star(g, 0, pairs, PathCoverBudget{}, rng);
  CHECK(covers(g, pairs, pc));
  const auto& p = pc.paths.front();
  const VertexId second = p.front() == 0 ? p[1] : p[p.size() - 2];
  CHECK(g.adjacent(0, second));
  CHECK(second != 1);
  CHECK(second != 2);
}

TEST_CASE("star cover with the center inside a path") {
  const MultiGraph g = testing::complete(7).with_center(VertexId{0});
  std::mt19937_64 rng(4);
  const std::vector<VertexPair> pairs{{1, 2}};
  const PathCover pc = path_cover_star(g, 0, pairs, PathCoverBudget{}, rng);
  CHECK(covers(g, pairs, pc));
  const auto& p = pc.paths.front();
  const auto at = std::find(p.begin(), p.end(), 0);
  REQUIRE(at != p.end());
  CHECK(at != p.begin());
  CHECK(at + 1 != p.end());
  CHECK(g.adjacent(0, *(at - 1)));
  CHECK(g.adjacent(0, *(at + 1)));
}

TEST_CASE("star cover needs free neighbors of the center") {
  MultiGraph g(5, VertexId{0});
  g.add_edge(0, 1);
  g.add_edge(0, 2);
  for (VertexId u = 1; u < 5; ++u) {
    for (VertexId v = u + 1; v < 5; ++v) g.add_edge(u, v);
  }
  std::mt19937_64 rng(5);
  const std::vector<VertexPair> pairs{{1, 3}};
  try {
    path_cover_star(g, 0, pairs, PathCoverBudget{}, rng);
    FAIL("one free neighbor accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PreconditionViolated);
  }
}

TEST_CASE("star covers of generated star-multigraphs") {
  int ok = 0;
  for (int s = 0; s < 100; ++s) {
    const Generated gen = gen_quasirandom(GeneratorSpec{81, 0.5, static_cast<std::uint64_t>(s),
                                                        Conditioning::NonOverfull});
    // Center 0 with a few doubled edges.
    MultiGraph g = gen.graph.with_center(VertexId{0});
    for (VertexId v : std::vector<VertexId>(g.neighbors(0).begin(), g.neighbors(0).end())) {
      if (v % 5 == 0) g.add_edge(0, v);
    }
    std::mt19937_64 rng(static_cast<std::uint64_t>(s));
    const auto pairs = random_pairs(81, 4, 0, rng);
    try {
      const PathCover pc = path_cover_star(g, 0, pairs, PathCoverBudget{}, rng);
      CHECK(covers(g, pairs, pc));
      CHECK(validate_path_cover(g, pairs, pc).ok);
      ++ok;
    } catch (const CoverNotFoundError&) {
    }
  }
  CHECK(ok >= 99);
}
