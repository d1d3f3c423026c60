#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "chroma/io.hpp"
#include "chroma/oracle.hpp"
#include "support.hpp"

using namespace chroma;

namespace {

// Plain enumeration of all k^m assignments; only for a handful of edges.
bool naive_colorable(const MultiGraph& g, int k) {
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (const auto& e : g.edges()) {
    for (int s = 0; s < e.multiplicity; ++s) edges.emplace_back(e.u, e.v);
  }
  std::vector<int> col(edges.size(), 0);
  while (true) {
    bool ok = true;
    for (std::size_t i = 0; i < edges.size() && ok; ++i) {
      for (std::size_t j = i + 1; j < edges.size() && ok; ++j) {
        const bool touch = edges[i].first == edges[j].first || edges[i].first == edges[j].second ||
                           edges[i].second == edges[j].first || edges[i].second == edges[j].second;
        if (touch && col[i] == col[j]) ok = false;
      }
    }
    if (ok) return true;
    std::size_t i = 0;
    while (i < col.size() && ++col[i] == k) col[i++] = 0;
    if (i == col.size()) return false;
  }
}

}  // namespace

TEST_CASE("oracle on named graphs") {
  CHECK(brute_force_chromatic_index(testing::cycle(5)) == 3);
  CHECK(brute_force_chromatic_index(testing::complete(4)) == 3);
  CHECK(brute_force_chromatic_index(testing::petersen()) == 4);
  CHECK(brute_force_chromatic_index(testing::petersen_minus_vertex()) == 4);
  CHECK(brute_force_chromatic_index(testing::complete(5)) == 5);
  CHECK(brute_force_chromatic_index(MultiGraph(4)) == 0);
}

TEST_CASE("K4 has an explicit 1-factorization") {
  // {01,23}, {02,13}, {03,12}.
  const MultiGraph g = testing::complete(4);
  EdgeColoring c(4, 3);
  c.assign(0, 1, 1);
  c.assign(2, 3, 1);
  c.assign(0, 2, 2);
  c.assign(1, 3, 2);
  c.assign(0, 3, 3);
  c.assign(1, 2, 3);
  CHECK(testing::recount(g, c).total);
  const auto oracle = brute_force_coloring(g, 3);
  REQUIRE(oracle.has_value());
  const auto r = testing::recount(g, *oracle);
  CHECK(r.proper);
  CHECK(r.total);
}

TEST_CASE("oracle agrees with plain enumeration") {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 150; ++t) {
    const VertexId n = 3 + static_cast<VertexId>(rng() % 4);
    const MultiGraph g = t % 3 == 0 ? testing::random_star(n, 0.5, 2, rng) : testing::random_simple(n, 0.6, rng);
    if (g.size() > 9 || g.max_degree() == 0) continue;
    const int chi = brute_force_chromatic_index(g);
    CHECK(naive_colorable(g, chi));
    if (chi > 1) CHECK_FALSE(naive_colorable(g, chi - 1));
  }
}

TEST_CASE("oracle colorings are proper and within Vizing's range") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 100; ++t) {
    const VertexId n = 2 + static_cast<VertexId>(rng() % 11);
    const MultiGraph g = testing::random_simple(n, 0.5, rng);
    const int chi = brute_force_chromatic_index(g);
    CHECK(chi >= g.max_degree());
    CHECK(chi <= g.max_degree() + 1);
    const auto c = brute_force_coloring(g, chi);
    REQUIRE(c.has_value());
    const auto r = testing::recount(g, *c);
    CHECK(r.proper);
    CHECK(r.total);
  }
}

TEST_CASE("oracle size limit") {
  try {
    brute_force_chromatic_index(testing::complete(13));
    FAIL("13 vertices accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooLarge);
  }
}

TEST_CASE("generator edge cases and determinism") {
  const Generated full = gen_quasirandom(GeneratorSpec{9, 1.0, 1});
  CHECK(full.graph == testing::complete(9));
  CHECK(gen_quasirandom(GeneratorSpec{9, 0.0, 1}).graph.size() == 0);
  const GeneratorSpec spec{40, 0.5, 1234};
  CHECK(format_edge_list(gen_quasirandom(spec).graph) == format_edge_list(gen_quasirandom(spec).graph));
  CHECK_FALSE(gen_quasirandom(GeneratorSpec{40, 0.5, 1235}).graph == gen_quasirandom(spec).graph);

  for (std::uint64_t s = 0; s < 20; ++s) {
    const Generated g = gen_quasirandom(GeneratorSpec{11, 0.9, s, Conditioning::NonOverfull});
    CHECK(g.graph.size() <= static_cast<std::int64_t>(g.graph.max_degree()) * 5);
    CHECK(g.attempts >= 1);
  }
  const Generated star = gen_quasirandom(GeneratorSpec{41, 0.6, 3, Conditioning::RegularizeToStar});
  CHECK(star.graph.order() == 42);
  CHECK(star.graph.is_regular());
  CHECK(star.graph.multi_center() == VertexId{41});
  CHECK_THROWS_AS(gen_quasirandom(GeneratorSpec{10, 0.5, 1, Conditioning::RegularizeToStar}), Error);
}

TEST_CASE("lower regularity sampling") {
  const RegularityReport full = check_lower_regularity(testing::complete(30), 0.9, 0.1, 1000, 1);
  CHECK(full.violations == 0);
  CHECK(full.min_ratio == 1.0);
  const RegularityReport empty = check_lower_regularity(MultiGraph(30), 0.5, 0.1, 1000, 1);
  CHECK(empty.violations > 0);
  const RegularityReport small = check_lower_regularity(testing::complete(10), 0.5, 0.2, 0, 1);
  CHECK(small.exhaustive);
  CHECK(small.violations == 0);
  // Disjoint pairs of subsets of size >= 2 in 10 vertices.
  CHECK(small.pairs > 1000);
  const Generated g = gen_quasirandom(GeneratorSpec{200, 0.5, 99});
  const RegularityReport baseline = check_lower_regularity(g.graph, 0.5, 0.1, 10000, 5);
  MESSAGE("G(200, 0.5) min ratio " << baseline.min_ratio);
  CHECK(baseline.violations == 0);
}

TEST_CASE("parity check") {
  MultiGraph pm(4);
  pm.add_edge(0, 1);
  pm.add_edge(2, 3);
  EdgeColoring c(4, 1);
  c.assign(0, 1, 1);
  c.assign(2, 3, 1);
  const ParityReport r = parity_check(pm, c);
  CHECK(r.violations == 0);
  CHECK(r.per_color[0].missing == 0);

  const MultiGraph c5 = testing::cycle(5);
  const auto c5c = brute_force_coloring(c5, 3);
  REQUIRE(c5c.has_value());
  const ParityReport p5 = parity_check(c5, *c5c);
  for (const auto& e : p5.per_color) CHECK(e.missing % 2 == 1);

  EdgeColoring partial(4, 1);
  partial.assign(0, 1, 1);
  try {
    parity_check(pm, partial);
    FAIL("partial coloring accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotTotal);
  }
}
