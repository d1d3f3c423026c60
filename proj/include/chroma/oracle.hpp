#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "chroma/coloring.hpp"
#include "chroma/multigraph.hpp"

namespace chroma {

inline constexpr VertexId kOracleLimit = 12;

// Exact chromatic index by backtracking. Edges are taken in descending
// degree-sum order and a new color is only opened as the lowest unused one.
// Throws TooLarge for more than kOracleLimit vertices.
int brute_force_chromatic_index(const MultiGraph& g, std::int64_t* nodes = nullptr);

// Proper coloring with exactly k colors, or an empty optional.
std::optional<EdgeColoring> brute_force_coloring(const MultiGraph& g, int k, std::int64_t* nodes = nullptr);

enum class Conditioning { None, NonOverfull, RegularizeToStar };

std::string_view to_string(Conditioning c);
Conditioning conditioning_from_string(std::string_view s);

struct GeneratorSpec {
  VertexId n = 0;
  double p = 0.5;
  std::uint64_t seed = 1;
  Conditioning conditioning = Conditioning::None;
};

struct Generated {
  MultiGraph graph;
  int attempts = 1;  // samples drawn (NonOverfull and RegularizeToStar resample)
};

// G(n, p) with a splitmix-style stream so that the edge list depends on the
// seed alone. NonOverfull resamples until the graph is not overfull.
// RegularizeToStar returns the regular star-multigraph g_k that the pipeline
// would hand to the 1-factorization, resampling when regularization fails.
Generated gen_quasirandom(const GeneratorSpec& spec);

struct RegularityReport {
  std::int64_t violations = 0;
  std::int64_t pairs = 0;
  double min_ratio = 1.0;
  bool exhaustive = false;
};

// Lower-(p, eps)-regularity: e(S, T) >= (p - eps)|S||T| for disjoint S, T of
// size ceil(eps n). Samples `samples` pairs; enumerates all pairs of subsets
// of every size >= ceil(eps n) when n <= 14. A sampler, not a certificate.
RegularityReport check_lower_regularity(const MultiGraph& g, double p, double eps, std::int64_t samples,
                                        std::uint64_t seed);

struct ParityEntry {
  Color color = kNoColor;
  int missing = 0;
  bool parity_ok = true;  // missing == n (mod 2)
};

struct ParityReport {
  std::vector<ParityEntry> per_color;
  int violations = 0;
};

// Throws NotTotal when c leaves an edge uncolored.
ParityReport parity_check(const MultiGraph& g, const EdgeColoring& c);

}  // namespace chroma
