#pragma once

#include <utility>
#include <vector>

#include "chroma/coloring.hpp"
#include "chroma/multigraph.hpp"

namespace chroma {

struct Matching {
  // Matched pairs, (left, right) when produced from a bipartition.
  std::vector<std::pair<VertexId, VertexId>> edges;

  std::size_t size() const noexcept { return edges.size(); }
};

// Hopcroft-Karp over an explicit left->right adjacency (local indices).
// BFS layers and augmenting DFS visit neighbors in list order, so sorted
// lists give deterministic results. Returns mate_of_left (-1 if free).
std::vector<int> hopcroft_karp(const std::vector<std::vector<int>>& adj, int right_count);

// Augments `mate` (mate[v] = partner or -1, symmetric) to a maximum matching
// of the general graph given by symmetric adjacency lists, using Edmonds'
// blossom search rooted at each exposed vertex in ascending order. Edges of
// the starting matching must be present in adj. Returns the number of
// augmentations.
int augment_general_matching(const std::vector<std::vector<int>>& adj, std::vector<int>& mate);

// Throws NotBipartite if some edge is not between the two sides.
Matching max_bipartite_matching(const MultiGraph& g, const Bipartition& sides);

class NoPerfectMatchingError : public Error {
 public:
  NoPerfectMatchingError(const std::string& what, std::vector<VertexId> violator,
                         std::vector<VertexId> neighborhood, Matching best)
      : Error(ErrorCode::NoPerfectMatching, what),
        violator_(std::move(violator)),
        neighborhood_(std::move(neighborhood)),
        best_(std::move(best)) {}

  // A subset of the left side with fewer neighbors than members.
  const std::vector<VertexId>& violator() const noexcept { return violator_; }
  const std::vector<VertexId>& neighborhood() const noexcept { return neighborhood_; }
  const Matching& best() const noexcept { return best_; }

 private:
  std::vector<VertexId> violator_;
  std::vector<VertexId> neighborhood_;
  Matching best_;
};

// Hypotheses of the Hall-type matching lemma. They are only checked and
// reported; the matching itself is computed regardless.
struct HallContext {
  double min_degree_bound = 0.0;     // alpha*n/4
  double deleted_edge_budget = 0.0;  // gamma*n
  VertexId center = kNoVertex;
  const MultiGraph* ambient = nullptr;  // graph whose E(X,Y) h was cut from
};

struct HallAdvisory {
  bool min_degree_ok = true;
  bool deleted_budget_ok = true;
  int observed_min_degree = 0;
  int observed_max_deleted = 0;
};

HallAdvisory check_hall_hypotheses(const MultiGraph& h, const Bipartition& sides,
                                   const HallContext& ctx);

// Perfect matching of h between sides.left and sides.right (equal sizes).
// Throws NoPerfectMatchingError carrying a Hall violator extracted from the
// alternating-reachability cut of a maximum matching.
Matching hall_perfect_matching(const MultiGraph& h, const Bipartition& sides,
                               const HallContext& ctx = {}, HallAdvisory* advisory = nullptr);

// Proper coloring of a bipartite multigraph with exactly Delta(g) colors.
// Each color class saturates every maximum-degree vertex; on Delta-regular
// input every class is a perfect matching.
EdgeColoring konig_edge_coloring(const MultiGraph& g, const Bipartition& sides);

}  // namespace chroma
