#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "chroma/multigraph.hpp"

namespace chroma {

// Colors are 1-based; 0 means "no color".
using Color = std::int32_t;
inline constexpr Color kNoColor = 0;

// Partial proper edge coloring with palette [1, k].
//
// Stored as, for every vertex v and color c, the neighbor reached from v by
// the edge colored c. Properness at a vertex is therefore structural; the
// remaining invariants (symmetry, slot counts within multiplicity) are what
// verify_proper checks. Present colors are mirrored in per-vertex bitsets so
// that missing-color queries are word scans.
class EdgeColoring {
 public:
  EdgeColoring() = default;
  EdgeColoring(VertexId n, Color palette);

  VertexId order() const noexcept { return n_; }
  Color palette() const noexcept { return k_; }

  VertexId at(VertexId v, Color c) const {
    return at_[static_cast<std::size_t>(v) * stride() + static_cast<std::size_t>(c)];
  }
  bool is_present(VertexId v, Color c) const { return at(v, c) != kNoVertex; }
  bool is_missing(VertexId v, Color c) const { return at(v, c) == kNoVertex; }

  // Lowest missing color at v (or at both u and v), kNoColor if none.
  Color first_missing(VertexId v) const;
  Color first_common_missing(VertexId u, VertexId v) const;
  std::vector<Color> missing(VertexId v) const;
  std::vector<Color> present(VertexId v) const;
  int present_count(VertexId v) const { return present_count_[static_cast<std::size_t>(v)]; }
  int missing_count(VertexId v) const { return k_ - present_count(v); }

  int colored_count(VertexId u, VertexId v) const {
    return pair_count_[static_cast<std::size_t>(u) * static_cast<std::size_t>(n_) +
                       static_cast<std::size_t>(v)];
  }
  std::vector<Color> colors_between(VertexId u, VertexId v) const;
  std::int64_t colored_slots() const noexcept { return colored_; }

  // Colors one slot of {u, v} with c; c must be missing at both ends.
  void assign(VertexId u, VertexId v, Color c);
  // Uncolors the slot of {u, v} carrying c.
  void unassign(VertexId u, VertexId v, Color c);
  void extend_palette(Color k);

  void check_color(Color c) const;

 private:
  std::size_t stride() const noexcept { return static_cast<std::size_t>(k_) + 1; }
  std::size_t words() const noexcept { return (static_cast<std::size_t>(k_) + 64) / 64; }
  std::uint64_t* bits(VertexId v) { return present_bits_.data() + static_cast<std::size_t>(v) * words(); }
  const std::uint64_t* bits(VertexId v) const {
    return present_bits_.data() + static_cast<std::size_t>(v) * words();
  }

  VertexId n_ = 0;
  Color k_ = 0;
  std::int64_t colored_ = 0;
  std::vector<VertexId> at_;
  std::vector<std::uint64_t> present_bits_;  // bit c set iff c present
  std::vector<int> present_count_;
  std::vector<std::uint16_t> pair_count_;
};

// One colored edge slot in dump order. Slots of a vertex pair are numbered
// by ascending color.
struct ColoredSlot {
  VertexId u = 0;
  VertexId v = 0;
  int slot = 0;
  Color color = kNoColor;

  friend bool operator==(const ColoredSlot&, const ColoredSlot&) = default;
};

std::vector<ColoredSlot> to_slots(const MultiGraph& g, const EdgeColoring& c);

struct ColoringReport {
  bool proper = true;
  bool total = true;
  int colors_used = 0;
  std::int64_t uncolored = 0;
  VertexId offending_vertex = kNoVertex;
  std::string message;
};

// Independent check over an explicit slot list; never throws.
ColoringReport verify_slots(const MultiGraph& g, const std::vector<ColoredSlot>& slots);
ColoringReport verify_proper(const MultiGraph& g, const EdgeColoring& c);

enum class ChainShape { Path, EvenCycle };

// Maximal (alpha, beta)-alternating walk. For a path, vertices run from one
// end to the other and edge_colors[i] colors {vertices[i], vertices[i+1]};
// for a cycle the last edge closes back to vertices[0].
struct KempeChain {
  Color alpha = kNoColor;
  Color beta = kNoColor;
  std::vector<VertexId> vertices;
  std::vector<Color> edge_colors;
  ChainShape shape = ChainShape::Path;

  std::size_t edge_count() const { return edge_colors.size(); }
  VertexId front() const { return vertices.front(); }
  VertexId back() const { return vertices.back(); }
  bool contains(VertexId v) const;
};

KempeChain kempe_chain_at(const EdgeColoring& c, VertexId v, Color alpha, Color beta);
// Interchanges alpha and beta along the chain. Throws StaleChain if the chain
// no longer matches c.
void kempe_swap(EdgeColoring& c, const KempeChain& chain);

// Multifan centered at `center` w.r.t. the uncolored edge center-leaves[0].
// edge_colors[0] is kNoColor; parent[i] < i names a leaf missing
// edge_colors[i] (parent[0] == -1).
struct Multifan {
  VertexId center = kNoVertex;
  std::vector<VertexId> leaves;
  std::vector<Color> edge_colors;
  std::vector<int> parent;
};

// Maximal multifan grown greedily: lowest leaf index first, then lowest color.
Multifan build_multifan(const MultiGraph& g, const EdgeColoring& c, VertexId center,
                        VertexId first_leaf);
bool satisfies_fan_condition(const EdgeColoring& c, const Multifan& fan);

struct FanStats {
  std::int64_t direct = 0;
  std::int64_t shifts = 0;
  std::int64_t swaps = 0;
};

// Colors one uncolored slot of {center, leaf} without enlarging the palette,
// recoloring through multifan shifts and one Kempe swap where needed. Needs
// every edge at `center` to be simple and palette >= Delta + 1.
void fan_color_edge(const MultiGraph& g, EdgeColoring& c, VertexId center, VertexId leaf,
                    FanStats* stats = nullptr);

// Proper coloring of a star-multigraph (or simple graph) with palette
// Delta(g) + 1.
EdgeColoring star_multigraph_coloring(const MultiGraph& g, FanStats* stats = nullptr);

struct CompletionStats {
  std::int64_t direct = 0;
  std::int64_t chain_swaps = 0;
  std::int64_t perturbations = 0;
};

// Colors the remaining slots of a partial proper coloring without enlarging
// the palette. Each slot is colored directly when its ends share a missing
// color, else after a Kempe swap at one end; when every such swap would run
// into the other end, a random Kempe swap at one end perturbs the coloring.
// Returns false once `max_moves` swaps are spent (c stays proper). Needs
// palette >= Delta(g).
bool kempe_complete(const MultiGraph& g, EdgeColoring& c, std::mt19937_64& rng, std::int64_t max_moves,
                    CompletionStats* stats = nullptr);

// Number of distinct colors actually carried by edges.
int count_colors_used(const EdgeColoring& c);

}  // namespace chroma
