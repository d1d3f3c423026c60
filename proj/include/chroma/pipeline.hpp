#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chroma/coloring.hpp"
#include "chroma/factorize.hpp"
#include "chroma/matching.hpp"
#include "chroma/multigraph.hpp"
#include "chroma/pathcover.hpp"
#include "chroma/report.hpp"

namespace chroma {

struct DeficiencyProfile {
  std::vector<int> df;  // Delta(g) - d(v)
  std::int64_t total = 0;
  int max_degree = 0;
  int min_degree = 0;
};

DeficiencyProfile deficiency_profile(const MultiGraph& g);

// n odd and |E| > Delta * floor(n / 2). The deficiency form (total <= Delta - 2)
// is computed alongside and must agree; a mismatch throws InternalRepairFailure.
bool is_overfull(const MultiGraph& g);

enum class RealizabilityCondition { OddSum, DominantDegree };

class NotRealizableError : public Error {
 public:
  NotRealizableError(const std::string& what, RealizabilityCondition failed)
      : Error(ErrorCode::NotRealizable, what), failed_(failed) {}
  RealizabilityCondition failed() const noexcept { return failed_; }

 private:
  RealizabilityCondition failed_;
};

// Loopless multigraph whose vertex i has degree degrees[i]. The sequence must
// be non-increasing and non-negative (PreconditionViolated). Repeatedly joins
// the two largest residual degrees with as many parallel edges as keep the
// rest realizable.
MultiGraph hakimi_realize(std::span<const int> degrees);

struct Augmentation {
  MultiGraph graph;  // g plus the multi-center x = g.order()
  VertexId x = kNoVertex;
  int x_neighbors = 0;
  int max_x_multiplicity = 0;
  std::vector<std::string> advisories;
};

// Adds x joined to the lowest-degree vertices by their deficiencies so that
// d(x) = delta(g), Delta is unchanged and at most one neighbor of x stays
// below Delta. Throws OverfullInput or DegenerateDeficiency.
Augmentation augment_with_star(const MultiGraph& g, double eta = 0.1);

// Greedy partition of E(h) into matchings: each edge copy goes to the first
// class that is compatible and below size_cap (0 means no cap).
std::vector<Matching> partition_deficiency_matchings(const MultiGraph& h, int size_cap = 0);

// Realizes the deficiency sequence of g' as a bipartite multigraph between
// two vertex classes of equal deficiency sum. Returns an empty graph of order
// 0 when no equal split exists.
MultiGraph bipartite_deficiency_graph(const MultiGraph& g_prime, Bipartition* sides = nullptr);

struct Peeling {
  MultiGraph g_k;
  std::vector<PathCover> forests;  // forests[i] covers matchings[i]
};

// Removes, for each matching, a spanning linear forest whose leaves are the
// matched vertices. Asserts d_{F_i} and the regularity of g_k exactly
// (InternalRepairFailure); throws NeighborShortage and CoverNotFound.
Peeling peel_linear_forests(const MultiGraph& g_prime, VertexId x, const std::vector<Matching>& matchings,
                            const PathCoverBudget& budget, std::mt19937_64& rng, PipelineReport* report = nullptr);

enum class Method { Pipeline, Overfull, Fallback };

std::string_view to_string(Method m);

enum class DeficiencyRealization { Bipartite, Hakimi };

struct PipelineParams {
  FactorizeParams factorize;
  PathCoverBudget cover;
  DeficiencyRealization realization = DeficiencyRealization::Bipartite;
  int matching_cap = 0;  // 0: no cap on matching sizes
  // Bipartite route: matching i gets a share of E(H) proportional to
  // (Delta - 2(i - 1))^matching_skew; 0 gives equal sizes.
  double matching_skew = 2.0;
};

struct ColoringResult {
  int chromatic_index = 0;  // colors used; equals Delta on Pipeline and Delta+1 on Overfull
  int max_degree = 0;
  Method method = Method::Fallback;
  EdgeColoring coloring;
  PipelineReport report;
  std::string fallback_reason;
  int forests = 0;          // k
  int factor_degree = 0;    // d = Delta - 2k
  bool repaired = false;    // factorization finished by Kempe repair
};

struct Regularization {
  Augmentation augmentation;
  std::vector<Matching> matchings;  // deficiency matchings, largest first
  Peeling peeling;                  // peeling.g_k is the d-regular star-multigraph
  int forests = 0;
  int factor_degree = 0;
};

// Augmentation, deficiency matchings and linear-forest peeling of a simple,
// non-overfull graph of odd order. Checks d + 2k = Delta(G') and the
// regularity of g_k, and throws DegenerateDeficiency when g_k has an
// overfull triangle at x; otherwise throws the errors of the stages it runs.
Regularization regularize(const MultiGraph& g, const PipelineParams& params, std::uint64_t seed,
                          PipelineReport& report);

// Chromatic index and a coloring of a simple graph. Never throws on graph
// content: every failure downgrades to a verified Delta+1 coloring.
ColoringResult chromatic_index(const MultiGraph& g, const PipelineParams& params, std::uint64_t seed);

}  // namespace chroma
