#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "chroma/coloring.hpp"
#include "chroma/multigraph.hpp"

namespace chroma {

// Per-color statistics of a coloring, indexed by color (entry 0 unused).
struct ColorClassProfile {
  std::vector<int> class_size;
  std::vector<int> missing_a;  // |{v in A : c missing at v}|
  std::vector<int> missing_b;
};

ColorClassProfile color_class_profile(const MultiGraph& g, const EdgeColoring& c,
                                      std::span<const VertexId> a, std::span<const VertexId> b);

// Proper k-coloring whose class sizes differ by at most one. Starts from the
// Delta+1 colorer and moves edges from the largest to the smallest class by
// swapping odd alternating paths. Throws InfeasiblePalette if the base
// coloring needs more than k colors.
EdgeColoring equalized_coloring(const MultiGraph& g, Color k, std::int64_t* swaps = nullptr);

// Same, starting from a given proper coloring (palette extended to k).
void equalize(EdgeColoring& c, Color k, std::int64_t* swaps = nullptr);

bool is_equalized(const EdgeColoring& c);

// Moves color class sizes toward target[col] (entry 0 unused) by swapping
// odd Kempe paths whose end edges carry the oversized color. Stops when no
// swap reduces the total deviation; returns the number of swaps.
std::int64_t reshape_classes(EdgeColoring& c, std::span<const std::int64_t> target);

struct BalanceStats {
  std::int64_t phase1_swaps = 0;
  std::int64_t phase2_swaps = 0;
};

// Throws PreconditionViolated unless |A| = |B|, A and B partition V(g), the
// multi-center (if any) lies in A, e(A) = e(B), and every crossing edge is
// incident with the center.
void check_balance_preconditions(const MultiGraph& g, std::span<const VertexId> a,
                                 std::span<const VertexId> b);

// k-coloring with |missing_A(i)| = |missing_B(i)| for every color and
// pairwise gaps of missing_A at most 2. Palette must be at least Delta+1.
EdgeColoring balanced_star_coloring(const MultiGraph& g, std::span<const VertexId> a,
                                    std::span<const VertexId> b, Color k,
                                    BalanceStats* stats = nullptr);

// Balances an existing proper coloring in place (palette unchanged).
void balance_star_coloring(const MultiGraph& g, EdgeColoring& c, std::span<const VertexId> a,
                           std::span<const VertexId> b, BalanceStats* stats = nullptr);

struct VertexPartition {
  std::vector<VertexId> a;
  std::vector<VertexId> b;
  // |d_A(v) - d_B(v)| for every vertex of the graph.
  std::vector<int> imbalance;
  int max_imbalance = 0;
  int attempts = 0;
};

std::vector<int> partition_imbalance(const MultiGraph& g, std::span<const VertexId> a,
                                     std::span<const VertexId> b);

// Default bound n^{2/3} - 1 for a graph on 2n vertices.
double default_partition_bound(VertexId order);

class PartitionRetriesExhausted : public Error {
 public:
  PartitionRetriesExhausted(const std::string& what, VertexPartition best)
      : Error(ErrorCode::RetriesExhausted, what), best_(std::move(best)) {}
  const VertexPartition& best() const noexcept { return best_; }

 private:
  VertexPartition best_;
};

// Random equal split of V(g) with each registered pair split across sides;
// the remaining vertices are paired at random and each pair is oriented by a
// fair coin. Retries until every vertex has imbalance <= bound. Throws
// PartitionRetriesExhausted carrying the best attempt. Needs an even order.
VertexPartition balanced_partition(const MultiGraph& g,
                                   std::span<const std::pair<VertexId, VertexId>> pairs,
                                   double bound, int max_retries, std::mt19937_64& rng);

// Local search on a partition that keeps every registered pair split and the
// sides equal: flips the orientation of a registered pair or exchanges two
// unregistered vertices whenever the sum of squared imbalances drops.
// Vertices in `pinned` never move. If `anchor` lies in A, moves that would
// leave d_B(anchor) < d_A(anchor) are rejected.
void refine_partition(const MultiGraph& g, VertexPartition& part,
                      std::span<const std::pair<VertexId, VertexId>> pairs,
                      std::span<const VertexId> pinned = {}, VertexId anchor = kNoVertex,
                      int max_sweeps = 20);

}  // namespace chroma
