#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "chroma/io.hpp"
#include "support.hpp"

using namespace chroma;

TEST_CASE("edge list parsing") {
  const MultiGraph g = parse_edge_list("# comment\n4 0\n\n0 1 3  # triple\n1 2\n2 3\n");
  CHECK(g.order() == 4);
  CHECK(g.multi_center() == VertexId{0});
  CHECK(g.multiplicity(0, 1) == 3);
  CHECK(g.size() == 5);
}

TEST_CASE("parse errors carry line numbers") {
  auto line_of = [](const std::string& text) {
    try {
      parse_edge_list(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return -1;
  };
  CHECK(line_of("") == 0);
  CHECK(line_of("3\n0 1\n0 x\n") == 3);
  CHECK(line_of("3\n0 5\n") == 2);
  CHECK(line_of("3\n1 1\n") == 2);
  CHECK(line_of("3\n0 1\n0 1\n") == 3);
  CHECK(line_of("3 1 2\n") == 1);
}

TEST_CASE("edge list round-trips exactly") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 100; ++t) {
    const VertexId n = 1 + static_cast<VertexId>(rng() % 20);
    const MultiGraph g = t % 2 ? testing::random_star(n, 0.4, 4, rng) : testing::random_simple(n, 0.4, rng);
    const std::string text = format_edge_list(g);
    const MultiGraph back = parse_edge_list(text);
    CHECK(back == g);
    CHECK(format_edge_list(back) == text);
  }
}

TEST_CASE("coloring dump round-trips") {
  const MultiGraph g = testing::complete(5);
  const EdgeColoring c = star_multigraph_coloring(g);
  const auto slots = to_slots(g, c);
  const std::string text = format_coloring(slots);
  CHECK(parse_coloring(text) == slots);
  CHECK(format_coloring(parse_coloring(text)) == text);
  CHECK_THROWS_AS(parse_coloring("0 1 0\n"), ParseError);
}
