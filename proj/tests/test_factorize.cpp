#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "chroma/factorize.hpp"
#include "chroma/oracle.hpp"
#include "support.hpp"

using namespace chroma;

namespace {

void check_factorization(const MultiGraph& g, const Factorization& f) {
  CHECK(static_cast<int>(f.factors.size()) == g.max_degree());
  std::vector<int> used(static_cast<std::size_t>(g.order()) * static_cast<std::size_t>(g.order()), 0);
  for (const Matching& m : f.factors) {
    std::set<VertexId> seen;
    for (const auto& [u, v] : m.edges) {
      CHECK(g.adjacent(u, v));
      CHECK(seen.insert(u).second);
      CHECK(seen.insert(v).second);
      ++used[static_cast<std::size_t>(std::min(u, v)) * static_cast<std::size_t>(g.order()) +
             static_cast<std::size_t>(std::max(u, v))];
    }
    CHECK(static_cast<VertexId>(seen.size()) == g.order());
  }
  for (const auto& e : g.edges()) {
    CHECK(used[static_cast<std::size_t>(e.u) * static_cast<std::size_t>(g.order()) + static_cast<std::size_t>(e.v)] ==
          e.multiplicity);
  }
  CHECK(is_one_factorization(g, f.coloring));
  CHECK(testing::all_classes_perfect(g, f.coloring));
}

}  // namespace

TEST_CASE("K4 factorizes into three perfect matchings") {
  const MultiGraph g = testing::complete(4).with_center(VertexId{0});
  const Factorization f = one_factorize(g, FactorizeParams{});
  check_factorization(g, f);
}

TEST_CASE("K_{n,n} factorizes into n perfect matchings") {
  for (VertexId m : {3, 4, 6, 8}) {
    const MultiGraph g = testing::complete_bipartite(m).with_center(VertexId{0});
    const Factorization f = one_factorize(g, FactorizeParams{});
    check_factorization(g, f);
  }
}

TEST_CASE("bad inputs are refused") {
  const MultiGraph odd = testing::cycle(5).with_center(VertexId{0});
  CHECK_THROWS_AS(prepare_partition(odd, FactorizeParams{}), Error);
  MultiGraph irregular(4, VertexId{0});
  irregular.add_edge(0, 1);
  irregular.add_edge(1, 2);
  irregular.add_edge(2, 3);
  try {
    prepare_partition(irregular, FactorizeParams{});
    FAIL("irregular graph accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PreconditionViolated);
  }
}

TEST_CASE("step 1 average-missing inequality") {
  // Average missing count per color when k > 2 alpha n / 3 is below
  // 2 eta n / (2 alpha / 3); the chain ends below sqrt(eta) n - 2 once
  // eta is small against alpha.
  auto holds = [](double eta, double alpha, double n) {
    return 2.0 * eta * n / (2.0 * alpha / 3.0) < std::sqrt(eta) * n - 2.0;
  };
  CHECK(holds(1e-4, 0.25, 1e4));
  CHECK(holds(1e-3, 0.35, 1e5));
  CHECK_FALSE(holds(0.1, 0.25, 200));
}

TEST_CASE("stages on regularized quasirandom instances") {
  int ok = 0;
  const int runs = 12;
  for (int s = 0; s < runs; ++s) {
    const Generated gen =
        gen_quasirandom(GeneratorSpec{61 + 20 * (s % 3), 0.6, static_cast<std::uint64_t>(100 + s),
                                      Conditioning::RegularizeToStar});
    const MultiGraph& g = gen.graph;
    REQUIRE(g.is_regular());
    FactorizeParams params;
    params.p = 0.6;
    params.alpha = 0.3;
    params.seed = static_cast<std::uint64_t>(s);
    FactorizeContext ctx = prepare_partition(g, params);
    CHECK(ctx.a.size() == ctx.b.size());
    CHECK(ctx.in_a(ctx.x));
    int dax = 0;
    int dbx = 0;
    for (VertexId w : g.neighbors(ctx.x)) (ctx.in_a(w) ? dax : dbx) += g.multiplicity(ctx.x, w);
    CHECK(dbx >= dax);

    EdgeColoring c = step1_near_equalized(ctx);
    for (Color i = 1; i <= ctx.k; ++i) {
      int ma = 0;
      int mb = 0;
      for (VertexId v : ctx.a) ma += c.is_missing(v, i) ? 1 : 0;
      for (VertexId v : ctx.b) mb += c.is_missing(v, i) ? 1 : 0;
      CHECK(ma == mb);
    }
    try {
      step2_make_factors(ctx, c);
      for (Color i = 1; i <= ctx.k; ++i) {
        for (VertexId v = 0; v < g.order(); ++v) CHECK(c.is_present(v, i));
      }
      step3_residual_factors(ctx, c);
      step4_finish(ctx, c);
      const auto r = testing::recount(g, c);
      CHECK(r.proper);
      CHECK(r.total);
      CHECK(r.colors == g.max_degree());
      CHECK(testing::all_classes_perfect(g, c));
      CHECK(parity_check(g, c).violations == 0);
      ++ok;
    } catch (const Error& e) {
      MESSAGE("stage failure without repair: " << std::string(e.what()));
    }
  }
  MESSAGE("unrepaired stage success: " << ok << " of " << runs);
}

TEST_CASE("one_factorize on regularized quasirandom instances") {
  int repaired = 0;
  for (int s = 0; s < 20; ++s) {
    const Generated gen =
        gen_quasirandom(GeneratorSpec{71 + 20 * (s % 4), 0.5 + 0.1 * (s % 3), static_cast<std::uint64_t>(s),
                                      Conditioning::RegularizeToStar});
    FactorizeParams params;
    params.seed = static_cast<std::uint64_t>(s);
    const Factorization f = one_factorize(gen.graph, params);
    check_factorization(gen.graph, f);
    CHECK(f.report.find("step1") != nullptr);
    repaired += f.counters.repaired != 0 ? 1 : 0;
  }
  MESSAGE("finished by Kempe repair: " << repaired << " of 20");
}

TEST_CASE("without repair a failure surfaces as FactorizationFailed") {
  int failed = 0;
  for (int s = 0; s < 20; ++s) {
    const Generated gen =
        gen_quasirandom(GeneratorSpec{41, 0.5, static_cast<std::uint64_t>(s), Conditioning::RegularizeToStar});
    FactorizeParams params;
    params.kempe_repair = false;
    params.seed = static_cast<std::uint64_t>(s);
    try {
      check_factorization(gen.graph, one_factorize(gen.graph, params));
    } catch (const FactorizationFailedError& e) {
      ++failed;
      CHECK(e.cause() != ErrorCode::FactorizationFailed);
      CHECK(!e.report().stages.empty());
    }
  }
  MESSAGE("failures without repair: " << failed << " of 20");
}
