#include "chroma/coloring.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <queue>
#include <set>
#include <tuple>

namespace chroma {

EdgeColoring::EdgeColoring(VertexId n, Color palette) : n_(n), k_(palette) {
  if (n < 0 || palette < 0) throw Error(ErrorCode::PreconditionViolated, "negative coloring size");
  at_.assign(static_cast<std::size_t>(n) * stride(), kNoVertex);
  present_bits_.assign(static_cast<std::size_t>(n) * words(), 0);
  present_count_.assign(static_cast<std::size_t>(n), 0);
  pair_count_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
}

void EdgeColoring::check_color(Color c) const {
  if (c < 1 || c > k_) {
    throw Error(ErrorCode::ColorOutOfPalette,
                "color " + std::to_string(c) + " outside [1," + std::to_string(k_) + "]");
  }
}

Color EdgeColoring::first_missing(VertexId v) const {
  const std::uint64_t* b = bits(v);
  for (std::size_t w = 0; w < words(); ++w) {
    std::uint64_t free = ~b[w];
    if (w == 0) free &= ~std::uint64_t{1};
    if (free != 0) {
      const Color c = static_cast<Color>(w * 64 + static_cast<std::size_t>(std::countr_zero(free)));
      return c <= k_ ? c : kNoColor;
    }
  }
  return kNoColor;
}

Color EdgeColoring::first_common_missing(VertexId u, VertexId v) const {
  const std::uint64_t* a = bits(u);
  const std::uint64_t* b = bits(v);
  for (std::size_t w = 0; w < words(); ++w) {
    std::uint64_t free = ~(a[w] | b[w]);
    if (w == 0) free &= ~std::uint64_t{1};
    if (free != 0) {
      const Color c = static_cast<Color>(w * 64 + static_cast<std::size_t>(std::countr_zero(free)));
      return c <= k_ ? c : kNoColor;
    }
  }
  return kNoColor;
}

std::vector<Color> EdgeColoring::missing(VertexId v) const {
  std::vector<Color> out;
  for (Color c = 1; c <= k_; ++c) {
    if (is_missing(v, c)) out.push_back(c);
  }
  return out;
}

std::vector<Color> EdgeColoring::present(VertexId v) const {
  std::vector<Color> out;
  for (Color c = 1; c <= k_; ++c) {
    if (is_present(v, c)) out.push_back(c);
  }
  return out;
}

std::vector<Color> EdgeColoring::colors_between(VertexId u, VertexId v) const {
  std::vector<Color> out;
  if (colored_count(u, v) == 0) return out;
  for (Color c = 1; c <= k_; ++c) {
    if (at(u, c) == v) out.push_back(c);
  }
  return out;
}

void EdgeColoring::assign(VertexId u, VertexId v, Color c) {
  check_color(c);
  if (u == v) throw Error(ErrorCode::LoopRejected, "assign on a loop");
  if (!is_missing(u, c) || !is_missing(v, c)) {
    throw Error(ErrorCode::InternalRepairFailure,
                "color " + std::to_string(c) + " not free at both " + std::to_string(u) + " and " +
                    std::to_string(v));
  }
  at_[static_cast<std::size_t>(u) * stride() + static_cast<std::size_t>(c)] = v;
  at_[static_cast<std::size_t>(v) * stride() + static_cast<std::size_t>(c)] = u;
  bits(u)[static_cast<std::size_t>(c) / 64] |= std::uint64_t{1} << (c % 64);
  bits(v)[static_cast<std::size_t>(c) / 64] |= std::uint64_t{1} << (c % 64);
  ++present_count_[static_cast<std::size_t>(u)];
  ++present_count_[static_cast<std::size_t>(v)];
  ++pair_count_[static_cast<std::size_t>(u) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(v)];
  ++pair_count_[static_cast<std::size_t>(v) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(u)];
  ++colored_;
}

void EdgeColoring::unassign(VertexId u, VertexId v, Color c) {
  check_color(c);
  if (at(u, c) != v) {
    throw Error(ErrorCode::InternalRepairFailure,
                "edge " + std::to_string(u) + "-" + std::to_string(v) + " does not carry color " +
                    std::to_string(c));
  }
  at_[static_cast<std::size_t>(u) * stride() + static_cast<std::size_t>(c)] = kNoVertex;
  at_[static_cast<std::size_t>(v) * stride() + static_cast<std::size_t>(c)] = kNoVertex;
  bits(u)[static_cast<std::size_t>(c) / 64] &= ~(std::uint64_t{1} << (c % 64));
  bits(v)[static_cast<std::size_t>(c) / 64] &= ~(std::uint64_t{1} << (c % 64));
  --present_count_[static_cast<std::size_t>(u)];
  --present_count_[static_cast<std::size_t>(v)];
  --pair_count_[static_cast<std::size_t>(u) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(v)];
  --pair_count_[static_cast<std::size_t>(v) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(u)];
  --colored_;
}

void EdgeColoring::extend_palette(Color k) {
  if (k <= k_) return;
  EdgeColoring wider(n_, k);
  for (VertexId u = 0; u < n_; ++u) {
    for (Color c = 1; c <= k_; ++c) {
      const VertexId w = at(u, c);
      if (w != kNoVertex && u < w) wider.assign(u, w, c);
    }
  }
  *this = std::move(wider);
}

std::vector<ColoredSlot> to_slots(const MultiGraph& g, const EdgeColoring& c) {
  std::vector<ColoredSlot> out;
  for (const auto& e : g.edges()) {
    const auto colors = c.colors_between(e.u, e.v);
    for (std::size_t s = 0; s < colors.size(); ++s) {
      out.push_back({e.u, e.v, static_cast<int>(s), colors[s]});
    }
  }
  return out;
}

ColoringReport verify_slots(const MultiGraph& g, const std::vector<ColoredSlot>& slots) {
  ColoringReport report;
  auto fail = [&report](VertexId v, std::string msg) {
    if (report.proper) {
      report.proper = false;
      report.offending_vertex = v;
      report.message = std::move(msg);
    }
  };
  std::set<std::tuple<VertexId, VertexId, int>> seen_slots;
  std::map<std::pair<VertexId, Color>, std::pair<VertexId, VertexId>> seen_color;
  std::set<Color> used;
  std::int64_t colored = 0;
  for (const auto& s : slots) {
    VertexId u = std::min(s.u, s.v);
    VertexId v = std::max(s.u, s.v);
    if (u < 0 || v >= g.order() || u == v) {
      fail(u, "slot references invalid pair " + std::to_string(s.u) + "-" + std::to_string(s.v));
      continue;
    }
    if (s.slot < 0 || s.slot >= g.multiplicity(u, v)) {
      fail(u, "slot " + std::to_string(s.slot) + " of " + std::to_string(u) + "-" +
                  std::to_string(v) + " does not exist");
      continue;
    }
    if (s.color < 1) {
      fail(u, "non-positive color on " + std::to_string(u) + "-" + std::to_string(v));
      continue;
    }
    if (!seen_slots.insert({u, v, s.slot}).second) {
      fail(u, "slot " + std::to_string(s.slot) + " of " + std::to_string(u) + "-" +
                  std::to_string(v) + " colored twice");
      continue;
    }
    ++colored;
    used.insert(s.color);
    for (VertexId end : {u, v}) {
      auto [it, fresh] = seen_color.insert({{end, s.color}, {u, v}});
      if (!fresh) {
        fail(end, "color " + std::to_string(s.color) + " repeated at vertex " + std::to_string(end) +
                      " (edges " + std::to_string(it->second.first) + "-" +
                      std::to_string(it->second.second) + " and " + std::to_string(u) + "-" +
                      std::to_string(v) + ")");
      }
    }
  }
  report.colors_used = static_cast<int>(used.size());
  report.uncolored = g.size() - colored;
  report.total = report.uncolored == 0;
  return report;
}

ColoringReport verify_proper(const MultiGraph& g, const EdgeColoring& c) {
  if (c.order() != g.order()) {
    ColoringReport r;
    r.proper = false;
    r.total = false;
    r.message = "coloring and graph have different vertex counts";
    return r;
  }
  // Symmetry of the color table is checked here; the slot-level check below
  // is independent of the table layout.
  for (VertexId v = 0; v < c.order(); ++v) {
    for (Color col = 1; col <= c.palette(); ++col) {
      const VertexId w = c.at(v, col);
      if (w != kNoVertex && (w < 0 || w >= c.order() || c.at(w, col) != v)) {
        ColoringReport r;
        r.proper = false;
        r.offending_vertex = v;
        r.message = "asymmetric color table at vertex " + std::to_string(v);
        return r;
      }
      if (w != kNoVertex && c.colored_count(v, w) > g.multiplicity(v, w)) {
        ColoringReport r;
        r.proper = false;
        r.offending_vertex = v;
        r.message = "more colored slots than edges between " + std::to_string(v) + " and " +
                    std::to_string(w);
        return r;
      }
    }
  }
  return verify_slots(g, to_slots(g, c));
}

bool KempeChain::contains(VertexId v) const {
  return std::find(vertices.begin(), vertices.end(), v) != vertices.end();
}

namespace {

// Follows the alternating walk from `start`, first using `first`. Returns true
// if it closed back on `start`.
bool walk(const EdgeColoring& c, VertexId start, Color first, Color other,
          std::vector<VertexId>& verts, std::vector<Color>& cols) {
  VertexId cur = start;
  Color col = first;
  while (true) {
    const VertexId next = c.at(cur, col);
    if (next == kNoVertex) return false;
    cols.push_back(col);
    if (next == start) return true;
    verts.push_back(next);
    cur = next;
    col = (col == first) ? other : first;
  }
}

}  // namespace

KempeChain kempe_chain_at(const EdgeColoring& c, VertexId v, Color alpha, Color beta) {
  c.check_color(alpha);
  c.check_color(beta);
  if (alpha == beta) throw Error(ErrorCode::ColorOutOfPalette, "chain colors must differ");
  KempeChain chain;
  chain.alpha = alpha;
  chain.beta = beta;
  const bool has_a = c.is_present(v, alpha);
  const bool has_b = c.is_present(v, beta);
  chain.vertices.push_back(v);
  if (!has_a && !has_b) return chain;
  if (has_a != has_b) {
    walk(c, v, has_a ? alpha : beta, has_a ? beta : alpha, chain.vertices, chain.edge_colors);
    return chain;
  }
  std::vector<VertexId> fwd;
  std::vector<Color> fwd_cols;
  if (walk(c, v, alpha, beta, fwd, fwd_cols)) {
    chain.shape = ChainShape::EvenCycle;
    chain.vertices.insert(chain.vertices.end(), fwd.begin(), fwd.end());
    chain.edge_colors = std::move(fwd_cols);
    return chain;
  }
  std::vector<VertexId> back;
  std::vector<Color> back_cols;
  walk(c, v, beta, alpha, back, back_cols);
  chain.vertices.assign(back.rbegin(), back.rend());
  chain.vertices.push_back(v);
  chain.vertices.insert(chain.vertices.end(), fwd.begin(), fwd.end());
  chain.edge_colors.assign(back_cols.rbegin(), back_cols.rend());
  chain.edge_colors.insert(chain.edge_colors.end(), fwd_cols.begin(), fwd_cols.end());
  return chain;
}

void kempe_swap(EdgeColoring& c, const KempeChain& chain) {
  const std::size_t m = chain.edge_count();
  const std::size_t nv = chain.vertices.size();
  auto endpoint = [&](std::size_t i) { return chain.vertices[(i + 1) % nv]; };
  // Staleness: every recorded edge must still carry its color, and path ends
  // must still be ends of the maximal walk.
  for (std::size_t i = 0; i < m; ++i) {
    const Color col = chain.edge_colors[i];
    if ((col != chain.alpha && col != chain.beta) || c.at(chain.vertices[i], col) != endpoint(i)) {
      throw Error(ErrorCode::StaleChain, "chain edge " + std::to_string(i) + " changed");
    }
  }
  if (chain.shape == ChainShape::Path) {
    if (m + 1 != nv) throw Error(ErrorCode::StaleChain, "path chain with inconsistent lengths");
    auto other = [&](Color col) { return col == chain.alpha ? chain.beta : chain.alpha; };
    if (m == 0) {
      if (c.is_present(chain.front(), chain.alpha) || c.is_present(chain.front(), chain.beta)) {
        throw Error(ErrorCode::StaleChain, "singleton chain vertex no longer misses both colors");
      }
      return;
    }
    if (c.is_present(chain.front(), other(chain.edge_colors.front())) ||
        c.is_present(chain.back(), other(chain.edge_colors.back()))) {
      throw Error(ErrorCode::StaleChain, "path chain is no longer maximal");
    }
  } else if (m != nv || m % 2 != 0) {
    throw Error(ErrorCode::StaleChain, "cycle chain with inconsistent lengths");
  }
  for (std::size_t i = 0; i < m; ++i) c.unassign(chain.vertices[i], endpoint(i), chain.edge_colors[i]);
  for (std::size_t i = 0; i < m; ++i) {
    const Color col = chain.edge_colors[i] == chain.alpha ? chain.beta : chain.alpha;
    c.assign(chain.vertices[i], endpoint(i), col);
  }
}

Multifan build_multifan(const MultiGraph& g, const EdgeColoring& c, VertexId center,
                        VertexId first_leaf) {
  if (g.multiplicity(center, first_leaf) <= c.colored_count(center, first_leaf)) {
    throw Error(ErrorCode::PreconditionViolated, "multifan needs an uncolored first edge");
  }
  Multifan fan;
  fan.center = center;
  std::vector<char> in_fan(static_cast<std::size_t>(g.order()), 0);
  // (leaf, color, parent index); lowest leaf then lowest color wins.
  using Candidate = std::tuple<VertexId, Color, int>;
  std::priority_queue<Candidate, std::vector<Candidate>, std::greater<>> queue;

  auto add_leaf = [&](VertexId leaf, Color col, int parent) {
    const int idx = static_cast<int>(fan.leaves.size());
    fan.leaves.push_back(leaf);
    fan.edge_colors.push_back(col);
    fan.parent.push_back(parent);
    in_fan[static_cast<std::size_t>(leaf)] = 1;
    for (Color m = 1; m <= c.palette(); ++m) {
      if (!c.is_missing(leaf, m)) continue;
      const VertexId w = c.at(center, m);
      if (w != kNoVertex && !in_fan[static_cast<std::size_t>(w)]) queue.emplace(w, m, idx);
    }
  };

  add_leaf(first_leaf, kNoColor, -1);
  while (!queue.empty()) {
    auto [leaf, col, parent] = queue.top();
    queue.pop();
    if (in_fan[static_cast<std::size_t>(leaf)]) continue;
    add_leaf(leaf, col, parent);
  }
  return fan;
}

bool satisfies_fan_condition(const EdgeColoring& c, const Multifan& fan) {
  std::set<VertexId> distinct(fan.leaves.begin(), fan.leaves.end());
  if (distinct.size() != fan.leaves.size() || distinct.count(fan.center)) return false;
  for (std::size_t i = 1; i < fan.leaves.size(); ++i) {
    const Color col = fan.edge_colors[i];
    if (c.at(fan.center, col) != fan.leaves[i]) return false;
    bool ok = false;
    for (std::size_t j = 0; j < i && !ok; ++j) ok = c.is_missing(fan.leaves[j], col);
    if (!ok) return false;
  }
  return true;
}

namespace {

// Indices from leaf 0 to `target` following parent links.
std::vector<int> parent_path(const Multifan& fan, int target) {
  std::vector<int> path;
  for (int i = target; i >= 0; i = fan.parent[static_cast<std::size_t>(i)]) path.push_back(i);
  std::reverse(path.begin(), path.end());
  return path;
}

bool path_still_valid(const EdgeColoring& c, const Multifan& fan, const std::vector<int>& path) {
  for (std::size_t j = 1; j < path.size(); ++j) {
    const auto idx = static_cast<std::size_t>(path[j]);
    const Color col = fan.edge_colors[idx];
    if (c.at(fan.center, col) != fan.leaves[idx]) return false;
    if (!c.is_missing(fan.leaves[static_cast<std::size_t>(path[j - 1])], col)) return false;
  }
  return true;
}

// Colors center-leaf[0] by rotating colors down the parent path to `target`
// and finishing with `gamma` on the last edge.
void shift_fan(EdgeColoring& c, const Multifan& fan, const std::vector<int>& path, Color gamma) {
  const VertexId r = fan.center;
  for (std::size_t j = 1; j < path.size(); ++j) {
    const auto idx = static_cast<std::size_t>(path[j]);
    c.unassign(r, fan.leaves[idx], fan.edge_colors[idx]);
  }
  for (std::size_t j = 1; j < path.size(); ++j) {
    const auto idx = static_cast<std::size_t>(path[j]);
    c.assign(r, fan.leaves[static_cast<std::size_t>(path[j - 1])], fan.edge_colors[idx]);
  }
  c.assign(r, fan.leaves[static_cast<std::size_t>(path.back())], gamma);
}

}  // namespace

void fan_color_edge(const MultiGraph& g, EdgeColoring& c, VertexId center, VertexId leaf,
                    FanStats* stats) {
  const VertexId u = center;
  for (int attempt = 0; attempt < 8; ++attempt) {
    if (const Color gamma = c.first_common_missing(u, leaf); gamma != kNoColor) {
      c.assign(u, leaf, gamma);
      if (stats) ++stats->direct;
      return;
    }
    const Multifan fan = build_multifan(g, c, u, leaf);
    const int p = static_cast<int>(fan.leaves.size());

    for (int i = 1; i < p; ++i) {
      const Color gamma = c.first_common_missing(u, fan.leaves[static_cast<std::size_t>(i)]);
      if (gamma != kNoColor) {
        shift_fan(c, fan, parent_path(fan, i), gamma);
        if (stats) ++stats->shifts;
        return;
      }
    }

    // First collision of missing colors among leaves: leaves before `later`
    // are pairwise disjoint, so only `earlier` among them misses gamma.
    std::vector<int> first_missing_leaf(static_cast<std::size_t>(c.palette()) + 1, -1);
    int earlier = -1;
    int later = -1;
    Color gamma = kNoColor;
    for (int i = 0; i < p && later < 0; ++i) {
      const VertexId s = fan.leaves[static_cast<std::size_t>(i)];
      for (Color m = 1; m <= c.palette(); ++m) {
        if (!c.is_missing(s, m)) continue;
        int& owner = first_missing_leaf[static_cast<std::size_t>(m)];
        if (owner >= 0) {
          earlier = owner;
          later = i;
          gamma = m;
          break;
        }
        owner = i;
      }
    }
    if (later < 0) {
      throw Error(ErrorCode::InternalRepairFailure,
                  "maximal multifan at " + std::to_string(u) + " is elementary");
    }
    const Color alpha = c.first_missing(u);
    if (alpha == kNoColor) {
      throw Error(ErrorCode::InternalRepairFailure, "no missing color at fan center");
    }
    const KempeChain from_center = kempe_chain_at(c, u, alpha, gamma);
    const VertexId linked = from_center.back();
    const VertexId s_early = fan.leaves[static_cast<std::size_t>(earlier)];
    const int target = (s_early != linked) ? earlier : later;
    const VertexId s_target = fan.leaves[static_cast<std::size_t>(target)];
    kempe_swap(c, kempe_chain_at(c, s_target, alpha, gamma));
    if (stats) ++stats->swaps;

    const auto path = parent_path(fan, target);
    if (c.is_missing(u, alpha) && c.is_missing(s_target, alpha) && path_still_valid(c, fan, path)) {
      shift_fan(c, fan, path, alpha);
      if (stats) ++stats->shifts;
      return;
    }
  }
  throw Error(ErrorCode::InternalRepairFailure,
              "could not color edge " + std::to_string(u) + "-" + std::to_string(leaf));
}

namespace {

void color_all_slots(const MultiGraph& g, EdgeColoring& c, VertexId center, VertexId leaf,
                     FanStats* stats) {
  const int need = g.multiplicity(center, leaf) - c.colored_count(center, leaf);
  for (int s = 0; s < need; ++s) fan_color_edge(g, c, center, leaf, stats);
}

}  // namespace

EdgeColoring star_multigraph_coloring(const MultiGraph& g, FanStats* stats) {
  const Color k = static_cast<Color>(g.max_degree()) + 1;
  EdgeColoring c(g.order(), k);
  std::vector<char> closed(static_cast<std::size_t>(g.order()), 0);

  if (auto x = g.multi_center()) {
    // Underlying simple graph of G[N[x]] first, with palette Delta(H) + 1.
    closed[static_cast<std::size_t>(*x)] = 1;
    for (VertexId y : g.neighbors(*x)) closed[static_cast<std::size_t>(y)] = 1;
    MultiGraph h(g.order());
    for (VertexId u = 0; u < g.order(); ++u) {
      if (!closed[static_cast<std::size_t>(u)]) continue;
      for (VertexId w : g.neighbors(u)) {
        if (u < w && closed[static_cast<std::size_t>(w)]) h.add_edge(u, w);
      }
    }
    EdgeColoring ch(g.order(), static_cast<Color>(h.max_degree()) + 1);
    for (const auto& e : h.edges()) fan_color_edge(h, ch, e.u, e.v, stats);
    for (const auto& e : h.edges()) {
      for (Color col : ch.colors_between(e.u, e.v)) c.assign(e.u, e.v, col);
    }
    // Remaining parallel copies at x: a color unused by H is always free.
    for (VertexId y : g.neighbors(*x)) {
      for (int s = c.colored_count(*x, y); s < g.multiplicity(*x, y); ++s) {
        const Color col = c.first_common_missing(*x, y);
        if (col == kNoColor) {
          throw Error(ErrorCode::InternalRepairFailure, "no free color for a parallel edge at center");
        }
        c.assign(*x, y, col);
        if (stats) ++stats->direct;
      }
    }
  }

  for (const auto& e : g.edges()) {
    if (closed[static_cast<std::size_t>(e.u)] && closed[static_cast<std::size_t>(e.v)]) continue;
    // The fan center must avoid N[x] so that all its edges are simple.
    const VertexId center = closed[static_cast<std::size_t>(e.u)] ? e.v : e.u;
    const VertexId leaf = center == e.u ? e.v : e.u;
    color_all_slots(g, c, center, leaf, stats);
  }
  return c;
}

int count_colors_used(const EdgeColoring& c) {
  std::vector<char> used(static_cast<std::size_t>(c.palette()) + 1, 0);
  for (VertexId v = 0; v < c.order(); ++v) {
    for (Color col = 1; col <= c.palette(); ++col) {
      if (c.is_present(v, col)) used[static_cast<std::size_t>(col)] = 1;
    }
  }
  return static_cast<int>(std::count(used.begin(), used.end(), 1));
}

bool kempe_complete(const MultiGraph& g, EdgeColoring& c, std::mt19937_64& rng, std::int64_t max_moves,
                    CompletionStats* stats) {
  if (c.palette() < g.max_degree()) {
    throw Error(ErrorCode::InfeasiblePalette, "palette smaller than the maximum degree");
  }
  CompletionStats local;
  std::vector<std::pair<VertexId, VertexId>> open;
  for (const auto& e : g.edges()) {
    for (int r = c.colored_count(e.u, e.v); r < e.multiplicity; ++r) open.emplace_back(e.u, e.v);
  }
  auto pick = [&rng](const std::vector<Color>& v) {
    return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
  };
  std::int64_t moves = 0;
  while (!open.empty()) {
    const std::size_t slot = std::uniform_int_distribution<std::size_t>(0, open.size() - 1)(rng);
    auto [u, v] = open[slot];
    if (rng() & 1) std::swap(u, v);
    bool colored = false;
    const Color common = c.first_common_missing(u, v);
    if (common != kNoColor) {
      c.assign(u, v, common);
      ++local.direct;
      colored = true;
    } else {
      // alpha is missing at u and present at v; the (alpha, beta) chain from
      // v frees alpha at v unless it ends at u.
      const auto mu = c.missing(u);
      auto mv = c.missing(v);
      std::shuffle(mv.begin(), mv.end(), rng);
      const Color alpha = pick(mu);
      for (Color beta : mv) {
        const KempeChain chain = kempe_chain_at(c, v, alpha, beta);
        if (chain.contains(u)) continue;
        kempe_swap(c, chain);
        c.assign(u, v, alpha);
        ++local.chain_swaps;
        ++moves;
        colored = true;
        break;
      }
      if (!colored) {
        const VertexId w = (rng() & 1) ? u : v;
        const Color a = pick(c.missing(w));
        const auto present = c.present(w);
        if (!present.empty()) {
          kempe_swap(c, kempe_chain_at(c, w, a, pick(present)));
          ++local.perturbations;
          ++moves;
        }
      }
    }
    if (colored) {
      open[slot] = open.back();
      open.pop_back();
    }
    if (moves >= max_moves) break;
  }
  if (stats) {
    stats->direct += local.direct;
    stats->chain_swaps += local.chain_swaps;
    stats->perturbations += local.perturbations;
  }
  return open.empty();
}

}  // namespace chroma
