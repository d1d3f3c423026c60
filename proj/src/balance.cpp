#include "chroma/balance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace chroma {

namespace {

std::vector<char> side_marks(VertexId n, std::span<const VertexId> a, std::span<const VertexId> b) {
  std::vector<char> side(static_cast<std::size_t>(n), 0);
  for (VertexId v : a) side[static_cast<std::size_t>(v)] = 1;
  for (VertexId v : b) side[static_cast<std::size_t>(v)] = 2;
  return side;
}

VertexId other_end(const KempeChain& chain, VertexId v) {
  if (chain.shape != ChainShape::Path) return kNoVertex;
  return chain.front() == v ? chain.back() : chain.front();
}

}  // namespace

ColorClassProfile color_class_profile(const MultiGraph& g, const EdgeColoring& c,
                                      std::span<const VertexId> a, std::span<const VertexId> b) {
  const Color k = c.palette();
  ColorClassProfile p;
  p.class_size.assign(static_cast<std::size_t>(k) + 1, 0);
  p.missing_a.assign(static_cast<std::size_t>(k) + 1, 0);
  p.missing_b.assign(static_cast<std::size_t>(k) + 1, 0);
  for (VertexId v = 0; v < g.order(); ++v) {
    for (Color col = 1; col <= k; ++col) {
      if (c.at(v, col) > v) ++p.class_size[static_cast<std::size_t>(col)];
    }
  }
  for (VertexId v : a) {
    for (Color col = 1; col <= k; ++col) {
      if (c.is_missing(v, col)) ++p.missing_a[static_cast<std::size_t>(col)];
    }
  }
  for (VertexId v : b) {
    for (Color col = 1; col <= k; ++col) {
      if (c.is_missing(v, col)) ++p.missing_b[static_cast<std::size_t>(col)];
    }
  }
  return p;
}

bool is_equalized(const EdgeColoring& c) {
  std::vector<std::int64_t> size(static_cast<std::size_t>(c.palette()) + 1, 0);
  for (VertexId v = 0; v < c.order(); ++v) {
    for (Color col = 1; col <= c.palette(); ++col) {
      if (c.at(v, col) > v) ++size[static_cast<std::size_t>(col)];
    }
  }
  if (c.palette() == 0) return true;
  const auto [lo, hi] = std::minmax_element(size.begin() + 1, size.end());
  return *hi - *lo <= 1;
}

void equalize(EdgeColoring& c, Color k, std::int64_t* swaps) {
  if (k < c.palette()) {
    throw Error(ErrorCode::InfeasiblePalette, "equalize cannot shrink the palette");
  }
  c.extend_palette(k);
  if (k == 0) return;
  std::vector<std::int64_t> size(static_cast<std::size_t>(k) + 1, 0);
  for (VertexId v = 0; v < c.order(); ++v) {
    for (Color col = 1; col <= k; ++col) {
      if (c.at(v, col) > v) ++size[static_cast<std::size_t>(col)];
    }
  }
  for (;;) {
    Color big = 1;
    Color small = 1;
    for (Color col = 2; col <= k; ++col) {
      if (size[static_cast<std::size_t>(col)] > size[static_cast<std::size_t>(big)]) big = col;
      if (size[static_cast<std::size_t>(col)] < size[static_cast<std::size_t>(small)]) small = col;
    }
    if (size[static_cast<std::size_t>(big)] - size[static_cast<std::size_t>(small)] <= 1) return;
    // The (big, small)-subgraph has more big edges, so some component is a
    // path starting and ending with a big edge; its ends miss `small`.
    bool moved = false;
    for (VertexId v = 0; v < c.order() && !moved; ++v) {
      if (!c.is_present(v, big) || !c.is_missing(v, small)) continue;
      const KempeChain chain = kempe_chain_at(c, v, big, small);
      if (chain.shape == ChainShape::Path && chain.edge_count() % 2 == 1) {
        kempe_swap(c, chain);
        --size[static_cast<std::size_t>(big)];
        ++size[static_cast<std::size_t>(small)];
        if (swaps != nullptr) ++*swaps;
        moved = true;
      }
    }
    if (!moved) {
      throw Error(ErrorCode::InternalRepairFailure, "no odd alternating path between color classes " +
                                                        std::to_string(big) + " and " +
                                                        std::to_string(small));
    }
  }
}

std::int64_t reshape_classes(EdgeColoring& c, std::span<const std::int64_t> target) {
  const Color k = c.palette();
  if (target.size() != static_cast<std::size_t>(k) + 1) {
    throw Error(ErrorCode::PreconditionViolated, "one target per color required");
  }
  std::vector<std::int64_t> size(static_cast<std::size_t>(k) + 1, 0);
  for (VertexId v = 0; v < c.order(); ++v) {
    for (Color col = 1; col <= k; ++col) {
      if (c.at(v, col) > v) ++size[static_cast<std::size_t>(col)];
    }
  }
  auto excess = [&](Color col) { return size[static_cast<std::size_t>(col)] - target[static_cast<std::size_t>(col)]; };
  std::int64_t swaps = 0;
  for (;;) {
    bool moved = false;
    // Most oversized color first, paired with the most undersized one that
    // admits an odd path.
    std::vector<Color> over;
    std::vector<Color> under;
    for (Color col = 1; col <= k; ++col) {
      if (excess(col) > 0) over.push_back(col);
      if (excess(col) < 0) under.push_back(col);
    }
    std::sort(over.begin(), over.end(), [&](Color a, Color b) { return excess(a) > excess(b); });
    std::sort(under.begin(), under.end(), [&](Color a, Color b) { return excess(a) < excess(b); });
    for (Color big : over) {
      for (Color small : under) {
        for (VertexId v = 0; v < c.order(); ++v) {
          if (!c.is_present(v, big) || !c.is_missing(v, small)) continue;
          const KempeChain chain = kempe_chain_at(c, v, big, small);
          if (chain.shape != ChainShape::Path || chain.edge_count() % 2 == 0) continue;
          kempe_swap(c, chain);
          --size[static_cast<std::size_t>(big)];
          ++size[static_cast<std::size_t>(small)];
          ++swaps;
          moved = true;
          break;
        }
        if (moved) break;
      }
      if (moved) break;
    }
    if (!moved) return swaps;
  }
}

EdgeColoring equalized_coloring(const MultiGraph& g, Color k, std::int64_t* swaps) {
  EdgeColoring base = star_multigraph_coloring(g);
  if (k < base.palette()) {
    // Compact the colors actually used into [1, k] if they fit.
    std::vector<Color> used;
    for (Color col = 1; col <= base.palette(); ++col) {
      for (VertexId v = 0; v < g.order(); ++v) {
        if (base.is_present(v, col)) {
          used.push_back(col);
          break;
        }
      }
    }
    if (static_cast<Color>(used.size()) > k) {
      throw Error(ErrorCode::InfeasiblePalette, "base coloring needs " + std::to_string(used.size()) +
                                                    " colors, palette is " + std::to_string(k));
    }
    EdgeColoring compact(g.order(), k);
    for (std::size_t idx = 0; idx < used.size(); ++idx) {
      for (VertexId v = 0; v < g.order(); ++v) {
        const VertexId w = base.at(v, used[idx]);
        if (w > v) compact.assign(v, w, static_cast<Color>(idx + 1));
      }
    }
    base = std::move(compact);
  }
  equalize(base, k, swaps);
  return base;
}

void check_balance_preconditions(const MultiGraph& g, std::span<const VertexId> a,
                                 std::span<const VertexId> b) {
  auto fail = [](const std::string& why) { throw Error(ErrorCode::PreconditionViolated, why); };
  if (a.size() != b.size()) fail("sides differ in size");
  if (a.size() + b.size() != static_cast<std::size_t>(g.order())) fail("sides do not cover V(G)");
  for (VertexId v : a) {
    if (v < 0 || v >= g.order()) fail("vertex out of range");
  }
  for (VertexId v : b) {
    if (v < 0 || v >= g.order()) fail("vertex out of range");
  }
  const auto side = side_marks(g.order(), a, b);
  for (VertexId v : a) {
    if (side[static_cast<std::size_t>(v)] != 1) fail("sides overlap");
  }
  if (std::count(side.begin(), side.end(), 0) != 0) fail("sides do not cover V(G)");
  const auto center = g.multi_center();
  if (center && side[static_cast<std::size_t>(*center)] != 1) fail("multi-center not in A");
  std::int64_t ea = 0;
  std::int64_t eb = 0;
  for (const auto& e : g.edges()) {
    const char su = side[static_cast<std::size_t>(e.u)];
    const char sv = side[static_cast<std::size_t>(e.v)];
    if (su == sv) {
      (su == 1 ? ea : eb) += e.multiplicity;
    } else if (!center || (e.u != *center && e.v != *center)) {
      fail("crossing edge " + std::to_string(e.u) + "-" + std::to_string(e.v) + " avoids the center");
    }
  }
  if (ea != eb) fail("e(A) = " + std::to_string(ea) + " but e(B) = " + std::to_string(eb));
}

namespace {

struct Balancer {
  const MultiGraph& g;
  EdgeColoring& c;
  std::vector<char> side;  // 1 = A, 2 = B
  std::span<const VertexId> a;
  std::span<const VertexId> b;

  std::vector<VertexId> missing_in(std::span<const VertexId> vs, Color col) const {
    std::vector<VertexId> out;
    for (VertexId v : vs) {
      if (c.is_missing(v, col)) out.push_back(v);
    }
    return out;
  }

  bool in_side(VertexId v, char s) const { return v != kNoVertex && side[static_cast<std::size_t>(v)] == s; }

  // Swaps the (i,j)-chain at some u in `from` (missing i) whose other end
  // lies in side `to_side` and misses `end_color`.
  bool swap_linked(const std::vector<VertexId>& from, Color i, Color j, char to_side, Color end_color) {
    for (VertexId u : from) {
      if (!c.is_missing(u, i) || !c.is_present(u, j)) continue;
      const KempeChain chain = kempe_chain_at(c, u, i, j);
      const VertexId w = other_end(chain, u);
      if (w == kNoVertex || w == u) continue;
      if (in_side(w, to_side) && c.is_missing(w, end_color)) {
        kempe_swap(c, chain);
        return true;
      }
    }
    return false;
  }
};

}  // namespace

void balance_star_coloring(const MultiGraph& g, EdgeColoring& c, std::span<const VertexId> a,
                           std::span<const VertexId> b, BalanceStats* stats) {
  check_balance_preconditions(g, a, b);
  const Color k = c.palette();
  Balancer bal{g, c, side_marks(g.order(), a, b), a, b};

  // Phase 1: make missing_A(i) = missing_B(i) for every color.
  for (;;) {
    const auto p = color_class_profile(g, c, a, b);
    Color i = kNoColor;
    Color j = kNoColor;
    for (Color col = 1; col <= k; ++col) {
      const int diff = p.missing_a[static_cast<std::size_t>(col)] - p.missing_b[static_cast<std::size_t>(col)];
      if (i == kNoColor && diff >= 2) i = col;
      if (j == kNoColor && diff <= -2) j = col;
    }
    if (i == kNoColor) break;
    if (j == kNoColor) {
      throw Error(ErrorCode::InternalRepairFailure, "deficiency sums differ between sides");
    }
    const auto ai = bal.missing_in(a, i);
    const auto bj = bal.missing_in(b, j);
    bool done = bal.swap_linked(ai, i, j, 1, i);     // two A-vertices missing i
    if (!done) {
      // Two B-vertices missing j: walk the (j,i)-chain from the B side.
      for (VertexId u : bj) {
        if (!c.is_missing(u, j) || !c.is_present(u, i)) continue;
        const KempeChain chain = kempe_chain_at(c, u, j, i);
        const VertexId w = other_end(chain, u);
        if (w != u && bal.in_side(w, 2) && c.is_missing(w, j)) {
          kempe_swap(c, chain);
          done = true;
          break;
        }
      }
    }
    if (!done) done = bal.swap_linked(ai, i, j, 2, j);  // A missing i with B missing j
    if (!done) {
      throw Error(ErrorCode::InternalRepairFailure,
                  "no productive (" + std::to_string(i) + "," + std::to_string(j) + ")-swap in phase 1");
    }
    if (stats != nullptr) ++stats->phase1_swaps;
  }

  // Phase 2: shrink the largest pairwise gap of missing_A.
  for (;;) {
    const auto p = color_class_profile(g, c, a, b);
    Color i = 1;
    Color j = 1;
    for (Color col = 2; col <= k; ++col) {
      if (p.missing_a[static_cast<std::size_t>(col)] > p.missing_a[static_cast<std::size_t>(i)]) i = col;
      if (p.missing_a[static_cast<std::size_t>(col)] < p.missing_a[static_cast<std::size_t>(j)]) j = col;
    }
    if (k == 0 || p.missing_a[static_cast<std::size_t>(i)] - p.missing_a[static_cast<std::size_t>(j)] <= 2) break;
    const auto ai = bal.missing_in(a, i);
    // A chain pairing an A-vertex missing i with a B-vertex missing i.
    if (bal.swap_linked(ai, i, j, 2, i)) {
      if (stats != nullptr) ++stats->phase2_swaps;
      continue;
    }
    // Otherwise swap one A-A chain and one B-B chain; they are disjoint
    // because no (i,j)-chain crosses between the sides here.
    const auto bi = bal.missing_in(b, i);
    if (!bal.swap_linked(ai, i, j, 1, i) || !bal.swap_linked(bi, i, j, 2, i)) {
      throw Error(ErrorCode::InternalRepairFailure,
                  "no gap-reducing (" + std::to_string(i) + "," + std::to_string(j) + ")-swap in phase 2");
    }
    if (stats != nullptr) stats->phase2_swaps += 2;
  }
}

EdgeColoring balanced_star_coloring(const MultiGraph& g, std::span<const VertexId> a,
                                    std::span<const VertexId> b, Color k, BalanceStats* stats) {
  check_balance_preconditions(g, a, b);
  if (k < g.max_degree() + 1) {
    throw Error(ErrorCode::PreconditionViolated,
                "palette " + std::to_string(k) + " below Delta+1 = " + std::to_string(g.max_degree() + 1));
  }
  EdgeColoring c = star_multigraph_coloring(g);
  c.extend_palette(k);
  balance_star_coloring(g, c, a, b, stats);
  return c;
}

std::vector<int> partition_imbalance(const MultiGraph& g, std::span<const VertexId> a,
                                     std::span<const VertexId> b) {
  const auto side = side_marks(g.order(), a, b);
  std::vector<int> out(static_cast<std::size_t>(g.order()), 0);
  for (VertexId v = 0; v < g.order(); ++v) {
    int diff = 0;
    for (VertexId w : g.neighbors(v)) {
      const char s = side[static_cast<std::size_t>(w)];
      if (s == 1) diff += g.multiplicity(v, w);
      if (s == 2) diff -= g.multiplicity(v, w);
    }
    out[static_cast<std::size_t>(v)] = std::abs(diff);
  }
  return out;
}

double default_partition_bound(VertexId order) {
  return std::pow(static_cast<double>(order) / 2.0, 2.0 / 3.0) - 1.0;
}

namespace {

void validate_pairs(const MultiGraph& g, std::span<const std::pair<VertexId, VertexId>> pairs,
                    std::vector<char>& registered) {
  registered.assign(static_cast<std::size_t>(g.order()), 0);
  for (const auto& [u, v] : pairs) {
    if (u < 0 || v < 0 || u >= g.order() || v >= g.order()) {
      throw Error(ErrorCode::VertexOutOfRange, "registered pair outside the graph");
    }
    if (u == v || registered[static_cast<std::size_t>(u)] || registered[static_cast<std::size_t>(v)]) {
      throw Error(ErrorCode::PreconditionViolated, "registered pairs must be disjoint");
    }
    registered[static_cast<std::size_t>(u)] = 1;
    registered[static_cast<std::size_t>(v)] = 1;
  }
}

void finish(const MultiGraph& g, VertexPartition& p) {
  std::sort(p.a.begin(), p.a.end());
  std::sort(p.b.begin(), p.b.end());
  p.imbalance = partition_imbalance(g, p.a, p.b);
  p.max_imbalance = p.imbalance.empty() ? 0 : *std::max_element(p.imbalance.begin(), p.imbalance.end());
}

}  // namespace

VertexPartition balanced_partition(const MultiGraph& g,
                                   std::span<const std::pair<VertexId, VertexId>> pairs,
                                   double bound, int max_retries, std::mt19937_64& rng) {
  if (g.order() % 2 != 0) throw Error(ErrorCode::PreconditionViolated, "partition needs an even order");
  std::vector<char> registered;
  validate_pairs(g, pairs, registered);
  std::vector<VertexId> free;
  for (VertexId v = 0; v < g.order(); ++v) {
    if (!registered[static_cast<std::size_t>(v)]) free.push_back(v);
  }
  VertexPartition best;
  best.max_imbalance = std::numeric_limits<int>::max();
  const int tries = std::max(1, max_retries);
  for (int attempt = 1; attempt <= tries; ++attempt) {
    std::shuffle(free.begin(), free.end(), rng);
    VertexPartition p;
    auto place = [&](VertexId u, VertexId v) {
      if (rng() & 1U) std::swap(u, v);
      p.a.push_back(u);
      p.b.push_back(v);
    };
    for (const auto& [u, v] : pairs) place(u, v);
    for (std::size_t idx = 0; idx + 1 < free.size(); idx += 2) place(free[idx], free[idx + 1]);
    finish(g, p);
    p.attempts = attempt;
    if (p.max_imbalance < best.max_imbalance) best = p;
    if (p.max_imbalance <= bound) return p;
  }
  best.attempts = tries;
  throw PartitionRetriesExhausted("no partition within imbalance bound after " + std::to_string(tries) +
                                      " attempts; best max imbalance " +
                                      std::to_string(best.max_imbalance),
                                  std::move(best));
}

void refine_partition(const MultiGraph& g, VertexPartition& part,
                      std::span<const std::pair<VertexId, VertexId>> pairs,
                      std::span<const VertexId> pinned, VertexId anchor, int max_sweeps) {
  const VertexId n = g.order();
  std::vector<char> side = side_marks(n, part.a, part.b);
  std::vector<char> registered;
  validate_pairs(g, pairs, registered);
  std::vector<char> fixed(static_cast<std::size_t>(n), 0);
  for (VertexId v : pinned) fixed[static_cast<std::size_t>(v)] = 1;

  std::vector<int> diff(static_cast<std::size_t>(n), 0);  // d_A(v) - d_B(v)
  for (VertexId v = 0; v < n; ++v) {
    for (VertexId w : g.neighbors(v)) {
      const char s = side[static_cast<std::size_t>(w)];
      if (s == 1) diff[static_cast<std::size_t>(v)] += g.multiplicity(v, w);
      if (s == 2) diff[static_cast<std::size_t>(v)] -= g.multiplicity(v, w);
    }
  }
  std::vector<int> delta(static_cast<std::size_t>(n), 0);
  std::vector<VertexId> touched;

  // Gain of moving u (in A) to B and w (in B) to A; negative is better.
  auto evaluate = [&](VertexId u, VertexId w, bool apply) -> std::int64_t {
    touched.clear();
    for (VertexId v : g.neighbors(u)) {
      delta[static_cast<std::size_t>(v)] -= 2 * g.multiplicity(u, v);
      touched.push_back(v);
    }
    for (VertexId v : g.neighbors(w)) {
      if (delta[static_cast<std::size_t>(v)] == 0) touched.push_back(v);
      delta[static_cast<std::size_t>(v)] += 2 * g.multiplicity(w, v);
    }
    std::int64_t gain = 0;
    bool anchor_ok = true;
    for (VertexId v : touched) {
      const std::int64_t dv = delta[static_cast<std::size_t>(v)];
      const std::int64_t cur = diff[static_cast<std::size_t>(v)];
      gain += dv * (2 * cur + dv);
      if (v == anchor && cur + dv > 0) anchor_ok = false;
    }
    for (VertexId v : touched) {
      if (apply) diff[static_cast<std::size_t>(v)] += delta[static_cast<std::size_t>(v)];
      delta[static_cast<std::size_t>(v)] = 0;
    }
    if (anchor != kNoVertex && side[static_cast<std::size_t>(anchor)] == 1 && !anchor_ok) {
      return std::numeric_limits<std::int64_t>::max();
    }
    return gain;
  };
  auto swap_sides = [&](VertexId u, VertexId w) {
    evaluate(u, w, true);
    side[static_cast<std::size_t>(u)] = 2;
    side[static_cast<std::size_t>(w)] = 1;
  };

  std::vector<VertexId> free;
  for (VertexId v = 0; v < n; ++v) {
    if (side[static_cast<std::size_t>(v)] != 0 && !registered[static_cast<std::size_t>(v)] &&
        !fixed[static_cast<std::size_t>(v)]) {
      free.push_back(v);
    }
  }
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool improved = false;
    for (const auto& [p, q] : pairs) {
      if (fixed[static_cast<std::size_t>(p)] || fixed[static_cast<std::size_t>(q)]) continue;
      const VertexId u = side[static_cast<std::size_t>(p)] == 1 ? p : q;
      const VertexId w = u == p ? q : p;
      if (evaluate(u, w, false) < 0) {
        swap_sides(u, w);
        improved = true;
      }
    }
    for (std::size_t x = 0; x < free.size(); ++x) {
      for (std::size_t y = x + 1; y < free.size(); ++y) {
        VertexId u = free[x];
        VertexId w = free[y];
        if (side[static_cast<std::size_t>(u)] == side[static_cast<std::size_t>(w)]) continue;
        if (side[static_cast<std::size_t>(u)] == 2) std::swap(u, w);
        if (evaluate(u, w, false) < 0) {
          swap_sides(u, w);
          improved = true;
        }
      }
    }
    if (!improved) break;
  }
  part.a.clear();
  part.b.clear();
  for (VertexId v = 0; v < n; ++v) {
    if (side[static_cast<std::size_t>(v)] == 1) part.a.push_back(v);
    if (side[static_cast<std::size_t>(v)] == 2) part.b.push_back(v);
  }
  finish(g, part);
}

}  // namespace chroma
