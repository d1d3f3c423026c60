#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "chroma/error.hpp"

namespace chroma {

using VertexId = std::int32_t;
inline constexpr VertexId kNoVertex = -1;

// A vertex pair with its multiplicity, always reported with u < v.
struct EdgeBundle {
  VertexId u = 0;
  VertexId v = 0;
  int multiplicity = 0;

  friend bool operator==(const EdgeBundle&, const EdgeBundle&) = default;
};

// Loopless multigraph on a fixed vertex set [0, n). Parallel edges are only
// admitted at the declared multi-center, which makes every instance either a
// simple graph or a star-multigraph. Adjacency is kept as a dense
// multiplicity table plus distinct-neighbor lists, so neighbor scans cost
// O(degree) and multiplicity queries O(1).
class MultiGraph {
 public:
  MultiGraph() = default;
  explicit MultiGraph(VertexId n, std::optional<VertexId> multi_center = std::nullopt);

  // Multigraph without the star restriction: parallels allowed on any pair.
  // Only degree-sequence realizations are built this way.
  static MultiGraph unrestricted(VertexId n);
  bool is_unrestricted() const noexcept { return unrestricted_; }

  VertexId order() const noexcept { return n_; }
  std::optional<VertexId> multi_center() const noexcept { return center_; }

  // Number of edges counted with multiplicity.
  std::int64_t size() const noexcept { return edge_count_; }

  int multiplicity(VertexId u, VertexId v) const;
  bool adjacent(VertexId u, VertexId v) const { return multiplicity(u, v) > 0; }
  int degree(VertexId v) const;
  std::span<const VertexId> neighbors(VertexId v) const;

  int max_degree() const noexcept;
  int min_degree() const noexcept;
  int max_multiplicity() const noexcept;
  bool is_simple() const noexcept { return max_multiplicity() <= 1; }
  bool is_regular() const noexcept { return max_degree() == min_degree(); }

  // Throws LoopRejected / MultiplicityViolation / VertexOutOfRange.
  void add_edge(VertexId u, VertexId v, int count = 1);
  // Removes `count` parallel copies; throws PreconditionViolated if fewer exist.
  void remove_edge(VertexId u, VertexId v, int count = 1);

  // All vertex pairs with positive multiplicity, sorted by (u, v), u < v.
  std::vector<EdgeBundle> edges() const;

  // Same graph with the multi-center declaration replaced. Throws
  // MultiplicityViolation if some parallel class avoids the new center.
  MultiGraph with_center(std::optional<VertexId> center) const;

  friend bool operator==(const MultiGraph& a, const MultiGraph& b) {
    return a.n_ == b.n_ && a.center_ == b.center_ && a.unrestricted_ == b.unrestricted_ &&
           a.mult_ == b.mult_;
  }

 private:
  void check_vertex(VertexId v) const;
  std::size_t index(VertexId u, VertexId v) const {
    return static_cast<std::size_t>(u) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(v);
  }

  VertexId n_ = 0;
  std::optional<VertexId> center_;
  bool unrestricted_ = false;
  std::int64_t edge_count_ = 0;
  std::vector<int> mult_;
  std::vector<int> degree_;
  std::vector<std::vector<VertexId>> adj_;
};

struct Bipartition {
  std::vector<VertexId> left;
  std::vector<VertexId> right;
};

struct InducedSubgraph {
  MultiGraph graph;
  // to_parent[i] is the vertex of the host graph relabeled to i.
  std::vector<VertexId> to_parent;
};

// G[S] with vertices relabeled densely in ascending order of S.
InducedSubgraph induced_subgraph(const MultiGraph& g, std::span<const VertexId> s);

struct BipartiteSubgraph {
  MultiGraph graph;  // same vertex ids as the host; only crossing edges kept
  Bipartition sides;
};

// G[A, B]: keeps only edges with one end in each side. Throws OverlappingSides.
BipartiteSubgraph bipartite_between(const MultiGraph& g, std::span<const VertexId> a,
                                    std::span<const VertexId> b);

}  // namespace chroma
