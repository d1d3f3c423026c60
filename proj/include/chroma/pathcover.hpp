#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "chroma/multigraph.hpp"

namespace chroma {

using VertexPair = std::pair<VertexId, VertexId>;

// Vertex-disjoint paths; paths[i] runs from endpoints[i].first to
// endpoints[i].second.
struct PathCover {
  std::vector<std::vector<VertexId>> paths;
  std::vector<VertexPair> endpoints;

  std::size_t covered() const;
};

struct PathCoverBudget {
  int rotations_per_vertex = 50;  // rotation budget per restart is this times n
  int restarts = 20;
};

struct PathCoverStats {
  int restarts = 0;
  std::int64_t rotations = 0;
  std::int64_t insertions = 0;
};

struct CoverCheck {
  bool ok = true;
  std::string message;
};

// Independent validator: disjointness, coverage of V(g), endpoint
// correctness, and existence of every path edge in g.
CoverCheck validate_path_cover(const MultiGraph& g, std::span<const VertexPair> pairs,
                               const PathCover& cover);

class CoverNotFoundError : public Error {
 public:
  CoverNotFoundError(const std::string& what, PathCover partial)
      : Error(ErrorCode::CoverNotFound, what), partial_(std::move(partial)) {}
  // The attempt that covered the most vertices.
  const PathCover& partial() const noexcept { return partial_; }

 private:
  PathCover partial_;
};

// Spanning path cover of a simple graph with the prescribed endpoint pairs.
// Seeds each pair with a shortest path, then absorbs uncovered vertices by
// insertion and by segment reversals that keep both endpoints fixed, with
// random restarts. Throws CoverNotFoundError when the budget runs out and
// PreconditionViolated on an empty or overlapping pair list.
PathCover path_cover(const MultiGraph& g, std::span<const VertexPair> pairs,
                     const PathCoverBudget& budget, std::mt19937_64& rng,
                     PathCoverStats* stats = nullptr);

// Path cover of a star-multigraph with center x: reduces to g - x by
// replacing x with a neighbor (x an endpoint) or by splitting the last pair
// at two neighbors of x, then stitches x back in. Needs at least two
// neighbors of x outside the endpoints, or one when x is itself an endpoint
// (PreconditionViolated otherwise).
PathCover path_cover_star(const MultiGraph& g, VertexId x, std::span<const VertexPair> pairs,
                          const PathCoverBudget& budget, std::mt19937_64& rng,
                          PathCoverStats* stats = nullptr);

}  // namespace chroma
