#include "chroma/factorize.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace chroma {

Thresholds resolve_thresholds(const FactorizeParams& params, VertexId half_order) {
  const double n = static_cast<double>(half_order);
  const double e2 = std::sqrt(params.eta);
  const double e4 = std::sqrt(e2);
  Thresholds t;
  t.tau1 = params.tau1 > 0 ? params.tau1 : e2 * n;
  t.tau2 = params.tau2 > 0 ? params.tau2 : e2 * n * n + e2 * n;
  t.tau3 = params.tau3 > 0 ? params.tau3 : e4 * n + 1.0;
  t.tau4 = params.tau4 > 0 ? params.tau4 : 2.0 * e4 * n;
  return t;
}

namespace {

void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) throw Error(code, what);
}

// Record for a stage, reusing the one opened by a StageTimer.
StageRecord& stage_record(PipelineReport& report, const std::string& name) {
  if (!report.stages.empty() && report.stages.back().name == name) return report.stages.back();
  return report.add(name);
}

int side_degree(const MultiGraph& g, const std::vector<char>& side, VertexId v, char s) {
  int total = 0;
  for (VertexId w : g.neighbors(v)) {
    if (side[static_cast<std::size_t>(w)] == s) total += g.multiplicity(v, w);
  }
  return total;
}

}  // namespace

FactorizeContext prepare_partition(const MultiGraph& g, const FactorizeParams& params) {
  const VertexId order = g.order();
  require(order >= 2 && order % 2 == 0, ErrorCode::PreconditionViolated, "factorization needs an even order");
  require(g.is_regular(), ErrorCode::PreconditionViolated, "factorization needs a regular graph");
  require(!g.is_unrestricted(), ErrorCode::PreconditionViolated, "factorization needs a star-multigraph");

  FactorizeContext ctx;
  ctx.g = g;
  ctx.params = params;
  ctx.d = g.max_degree();
  ctx.x = g.multi_center().value_or(0);
  ctx.tau = resolve_thresholds(params, order / 2);
  const VertexId x = ctx.x;

  std::vector<VertexId> nbrs(g.neighbors(x).begin(), g.neighbors(x).end());
  std::sort(nbrs.begin(), nbrs.end(), [&](VertexId p, VertexId q) {
    const int mp = g.multiplicity(x, p);
    const int mq = g.multiplicity(x, q);
    return mp != mq ? mp > mq : p < q;
  });
  if (static_cast<VertexId>(nbrs.size()) == order - 1) {
    if (params.strict_non_neighbor) {
      throw Error(ErrorCode::NoNonNeighbor, "x is adjacent to every other vertex");
    }
    // Every vertex is a neighbor; the unpaired one (or the last) plays y.
    ctx.y = nbrs.back();
    nbrs.pop_back();
    ctx.report.advisories.push_back("x adjacent to all vertices; y taken from N(x)");
  } else {
    for (VertexId v = 0; v < order; ++v) {
      if (v != x && g.multiplicity(x, v) == 0) {
        ctx.y = v;
        break;
      }
    }
  }
  const VertexId y = ctx.y;
  std::vector<std::pair<VertexId, VertexId>> pairs;
  for (std::size_t i = 0; i + 1 < nbrs.size(); i += 2) pairs.emplace_back(nbrs[i], nbrs[i + 1]);

  std::vector<VertexId> rest;
  for (VertexId v = 0; v < order; ++v) {
    if (v != x && v != y) rest.push_back(v);
  }
  const InducedSubgraph sub = induced_subgraph(g, rest);
  std::vector<VertexId> to_sub(static_cast<std::size_t>(order), kNoVertex);
  for (std::size_t i = 0; i < sub.to_parent.size(); ++i) {
    to_sub[static_cast<std::size_t>(sub.to_parent[i])] = static_cast<VertexId>(i);
  }
  std::vector<std::pair<VertexId, VertexId>> sub_pairs;
  for (const auto& [p, q] : pairs) {
    sub_pairs.emplace_back(to_sub[static_cast<std::size_t>(p)], to_sub[static_cast<std::size_t>(q)]);
  }

  std::mt19937_64 rng(params.seed);
  VertexPartition sub_part;
  try {
    sub_part = balanced_partition(sub.graph, sub_pairs, default_partition_bound(sub.graph.order()),
                                  params.partition_retries, rng);
  } catch (const PartitionRetriesExhausted& e) {
    if (!params.refine_partition) throw;
    sub_part = e.best();
    ctx.report.advisories.push_back("partition bound missed; refining best attempt");
  }

  std::vector<char> side(static_cast<std::size_t>(order), 0);
  for (VertexId v : sub_part.a) side[static_cast<std::size_t>(sub.to_parent[static_cast<std::size_t>(v)])] = 1;
  for (VertexId v : sub_part.b) side[static_cast<std::size_t>(sub.to_parent[static_cast<std::size_t>(v)])] = 2;
  side[static_cast<std::size_t>(x)] = 1;
  side[static_cast<std::size_t>(y)] = 2;
  if (side_degree(g, side, x, 2) < side_degree(g, side, x, 1)) {
    for (VertexId v : rest) side[static_cast<std::size_t>(v)] = side[static_cast<std::size_t>(v)] == 1 ? 2 : 1;
  }

  VertexPartition part;
  for (VertexId v = 0; v < order; ++v) (side[static_cast<std::size_t>(v)] == 1 ? part.a : part.b).push_back(v);
  part.attempts = sub_part.attempts;
  if (params.refine_partition) {
    const std::vector<VertexId> pinned{x, y};
    refine_partition(g, part, pairs, pinned, x);
  } else {
    part.imbalance = partition_imbalance(g, part.a, part.b);
    part.max_imbalance = *std::max_element(part.imbalance.begin(), part.imbalance.end());
  }
  ctx.partition = part;
  ctx.a = part.a;
  ctx.b = part.b;
  ctx.side.assign(static_cast<std::size_t>(order), 0);
  for (VertexId v : ctx.a) ctx.side[static_cast<std::size_t>(v)] = 1;
  for (VertexId v : ctx.b) ctx.side[static_cast<std::size_t>(v)] = 2;

  const int dax = side_degree(g, ctx.side, x, 1);
  const int dbx = side_degree(g, ctx.side, x, 2);
  require(dbx >= dax, ErrorCode::InternalRepairFailure, "d_B(x) < d_A(x) after partition");

  // G_{A,B}: both sides plus floor((d_B(x) - d_A(x)) / 2) edges from x into
  // B, spread over the B-neighbors with the smallest within-side degree.
  ctx.g_ab = MultiGraph(order, x);
  for (const auto& e : g.edges()) {
    if (ctx.side[static_cast<std::size_t>(e.u)] == ctx.side[static_cast<std::size_t>(e.v)]) {
      ctx.g_ab.add_edge(e.u, e.v, e.multiplicity);
    }
  }
  int extra = (dbx - dax) / 2;
  std::vector<int> used(static_cast<std::size_t>(order), 0);
  while (extra > 0) {
    VertexId best = kNoVertex;
    for (VertexId w : g.neighbors(x)) {
      if (!ctx.in_b(w) || used[static_cast<std::size_t>(w)] >= g.multiplicity(x, w)) continue;
      if (best == kNoVertex || ctx.g_ab.degree(w) < ctx.g_ab.degree(best) ||
          (ctx.g_ab.degree(w) == ctx.g_ab.degree(best) && w < best)) {
        best = w;
      }
    }
    ctx.g_ab.add_edge(x, best, 1);
    ++used[static_cast<std::size_t>(best)];
    ctx.x_b_edges.push_back(best);
    --extra;
  }
  ctx.residual_degree.assign(static_cast<std::size_t>(order), 0);
  ctx.crossing_colored.assign(static_cast<std::size_t>(order), 0);

  auto& rec = ctx.report.add("prepare_partition");
  rec.counters["order"] = order;
  rec.counters["degree"] = ctx.d;
  rec.counters["x"] = x;
  rec.counters["y"] = y;
  rec.counters["neighbor_pairs"] = static_cast<double>(pairs.size());
  rec.counters["partition_attempts"] = part.attempts;
  rec.counters["max_imbalance"] = part.max_imbalance;
  rec.counters["d_A(x)"] = dax;
  rec.counters["d_B(x)"] = dbx;
  rec.counters["x_B_edges"] = static_cast<double>(ctx.x_b_edges.size());
  if (g.neighbors(x).size() < 2 || static_cast<VertexId>(g.neighbors(x).size()) > order - 2) {
    ctx.report.advisories.push_back("|N(x)| outside [2, 2n-2]");
  }
  return ctx;
}

EdgeColoring step1_near_equalized(FactorizeContext& ctx) {
  ctx.k = ctx.g_ab.max_degree() + 1;
  BalanceStats stats;
  EdgeColoring c = balanced_star_coloring(ctx.g_ab, ctx.a, ctx.b, ctx.k, &stats);
  ctx.counters.balance_phase1 = stats.phase1_swaps;
  ctx.counters.balance_phase2 = stats.phase2_swaps;
  for (VertexId w : ctx.x_b_edges) ++ctx.crossing_colored[static_cast<std::size_t>(w)];
  ctx.crossing_colored[static_cast<std::size_t>(ctx.x)] += static_cast<int>(ctx.x_b_edges.size());

  const auto profile = color_class_profile(ctx.g_ab, c, ctx.a, ctx.b);
  int worst = 0;
  for (Color i = 1; i <= ctx.k; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    require(profile.missing_a[ui] == profile.missing_b[ui], ErrorCode::InternalRepairFailure,
            "Step 1 profile differs between sides at color " + std::to_string(i));
    worst = std::max(worst, profile.missing_a[ui]);
  }
  auto& rec = stage_record(ctx.report, "step1");
  rec.counters["k"] = ctx.k;
  rec.counters["phase1_swaps"] = static_cast<double>(stats.phase1_swaps);
  rec.counters["phase2_swaps"] = static_cast<double>(stats.phase2_swaps);
  rec.counters["max_missing_per_color"] = worst;
  rec.counters["tau1"] = ctx.tau.tau1;
  if (worst >= ctx.tau.tau1) {
    rec.status = "advisory";
    ctx.report.advisories.push_back("Step 1 missing count reaches tau1");
  }
  return c;
}

namespace {

class Step2 {
 public:
  Step2(FactorizeContext& ctx, EdgeColoring& c) : ctx_(ctx), c_(c), g_(ctx.g) {
    good_limit_ = ctx.tau.tau3 - 1.0;
  }

  void run() {
    for (Color i = 1; i <= ctx_.k; ++i) {
      if (c_.is_missing(ctx_.x, i)) handle_x_color(i);
    }
    for (Color i = 1; i <= ctx_.k; ++i) handle_color(i);
  }

 private:
  int& rdeg(VertexId v) { return ctx_.residual_degree[static_cast<std::size_t>(v)]; }
  int rdeg_of(VertexId v) const { return ctx_.residual_degree[static_cast<std::size_t>(v)]; }

  // Colored within-side edge of color i at v that may be uncolored.
  VertexId good_partner(VertexId v, Color i, char s) const {
    const VertexId w = c_.at(v, i);
    if (w == kNoVertex || ctx_.side[static_cast<std::size_t>(w)] != s) return kNoVertex;
    if (s == 1 && (v == ctx_.x || w == ctx_.x)) return kNoVertex;
    if (rdeg_of(v) >= good_limit_ || rdeg_of(w) >= good_limit_) return kNoVertex;
    return w;
  }

  void uncolor_within(VertexId u, VertexId v, Color i) {
    c_.unassign(u, v, i);
    ++rdeg(u);
    ++rdeg(v);
  }
  void color_crossing(VertexId u, VertexId v, Color i) {
    c_.assign(u, v, i);
    ++ctx_.crossing_colored[static_cast<std::size_t>(u)];
    ++ctx_.crossing_colored[static_cast<std::size_t>(v)];
  }

  // Best good i-edge (v, partner) over candidates v, ranked by the larger
  // residual degree, then by index.
  std::pair<VertexId, VertexId> pick(const std::vector<VertexId>& cand, Color i, char s) const {
    std::pair<VertexId, VertexId> best{kNoVertex, kNoVertex};
    int best_score = std::numeric_limits<int>::max();
    for (VertexId v : cand) {
      const VertexId w = good_partner(v, i, s);
      if (w == kNoVertex) continue;
      const int score = std::max(rdeg_of(v), rdeg_of(w));
      if (score < best_score) {
        best_score = score;
        best = {v, w};
      }
    }
    return best;
  }

  void handle_x_color(Color i) {
    const VertexId x = ctx_.x;
    std::vector<VertexId> open_b;  // B-neighbors joined to x by an uncolored edge
    for (VertexId w : g_.neighbors(x)) {
      if (ctx_.in_b(w) && ctx_.uncolored(c_, x, w) > 0) open_b.push_back(w);
    }
    std::sort(open_b.begin(), open_b.end());
    for (VertexId w : open_b) {
      if (c_.is_missing(w, i)) {
        color_crossing(x, w, i);
        ++ctx_.counters.x_direct;
        return;
      }
    }
    const auto [b1, b2] = pick(open_b, i, 2);
    if (b1 == kNoVertex) {
      throw NoAlternatingPathError("no good color-" + std::to_string(i) + " edge behind an open x-B edge", i, 0,
                                   0, 0, 0);
    }
    for (VertexId b : ctx_.b) {
      if (!c_.is_missing(b, i)) continue;
      std::vector<VertexId> open_a;
      for (VertexId u : g_.neighbors(b)) {
        if (ctx_.in_a(u) && u != x && ctx_.uncolored(c_, u, b) > 0) open_a.push_back(u);
      }
      std::sort(open_a.begin(), open_a.end());
      const auto [a1, a2] = pick(open_a, i, 1);
      if (a1 == kNoVertex) continue;
      uncolor_within(b1, b2, i);
      color_crossing(x, b1, i);
      uncolor_within(a1, a2, i);
      color_crossing(b, a1, i);
      ++ctx_.counters.x_shifts;
      return;
    }
    // Left to the per-color pass, where x is one more vertex missing i.
    ++ctx_.counters.x_deferred;
  }

  void handle_color(Color i) {
    std::vector<VertexId> sa;
    std::vector<VertexId> sb;
    for (VertexId v : ctx_.a) {
      if (c_.is_missing(v, i)) sa.push_back(v);
    }
    for (VertexId v : ctx_.b) {
      if (c_.is_missing(v, i)) sb.push_back(v);
    }
    if (sa.size() != sb.size()) {
      throw Error(ErrorCode::InternalRepairFailure,
                  "color " + std::to_string(i) + " is missed unevenly across the sides");
    }
    if (sa.empty()) return;

    // Pairs joined by an uncolored edge are colored directly; a maximum
    // matching keeps as many of them as possible.
    std::vector<int> b_index(static_cast<std::size_t>(g_.order()), -1);
    for (std::size_t j = 0; j < sb.size(); ++j) b_index[static_cast<std::size_t>(sb[j])] = static_cast<int>(j);
    std::vector<std::vector<int>> adj(sa.size());
    for (std::size_t j = 0; j < sa.size(); ++j) {
      for (VertexId w : g_.neighbors(sa[j])) {
        const int bi = b_index[static_cast<std::size_t>(w)];
        if (bi >= 0 && ctx_.uncolored(c_, sa[j], w) > 0) adj[j].push_back(bi);
      }
      std::sort(adj[j].begin(), adj[j].end());
    }
    const auto mate = hopcroft_karp(adj, static_cast<int>(sb.size()));
    std::vector<VertexId> rest_a;
    std::vector<char> b_taken(sb.size(), 0);
    for (std::size_t j = 0; j < sa.size(); ++j) {
      if (mate[j] >= 0) {
        color_crossing(sa[j], sb[static_cast<std::size_t>(mate[j])], i);
        b_taken[static_cast<std::size_t>(mate[j])] = 1;
        ++ctx_.counters.direct_pairs;
      } else {
        rest_a.push_back(sa[j]);
      }
    }
    std::vector<VertexId> rest_b;
    for (std::size_t j = 0; j < sb.size(); ++j) {
      if (!b_taken[j]) rest_b.push_back(sb[j]);
    }

    // Remaining pairs: ascending order, trying later partners when the
    // first has no alternating path.
    while (!rest_a.empty()) {
      bool progress = false;
      for (std::size_t ia = 0; ia < rest_a.size() && !progress; ++ia) {
        for (std::size_t ib = 0; ib < rest_b.size(); ++ib) {
          if (exchange(rest_a[ia], rest_b[ib], i)) {
            rest_a.erase(rest_a.begin() + static_cast<std::ptrdiff_t>(ia));
            rest_b.erase(rest_b.begin() + static_cast<std::ptrdiff_t>(ib));
            progress = true;
            break;
          }
        }
      }
      if (!progress) {
        if (ctx_.params.general_augment && augment(i)) return;
        throw NoAlternatingPathError("no five-edge alternating path for color " + std::to_string(i) + " (" +
                                         std::to_string(rest_a.size()) + " pairs left; |N_A|=" +
                                         std::to_string(last_sizes_[0]) + " |N_B|=" +
                                         std::to_string(last_sizes_[1]) + " |M_A|=" +
                                         std::to_string(last_sizes_[2]) + " |M_B|=" +
                                         std::to_string(last_sizes_[3]) + ")",
                                     i, last_sizes_[0], last_sizes_[1], last_sizes_[2], last_sizes_[3]);
      }
    }
  }

  // a - b1 - b2 - a2 - a1 - b with ab1, b2a2, a1b uncolored and b1b2, a2a1
  // good edges of color i.
  bool exchange(VertexId a, VertexId b, Color i) {
    const VertexId x = ctx_.x;
    std::vector<VertexId> nb_set;  // N_B
    for (VertexId w : g_.neighbors(a)) {
      if (ctx_.in_b(w) && ctx_.uncolored(c_, a, w) > 0 && good_partner(w, i, 2) != kNoVertex) nb_set.push_back(w);
    }
    std::vector<VertexId> na_set;  // N_A, never containing x
    for (VertexId u : g_.neighbors(b)) {
      if (ctx_.in_a(u) && u != x && ctx_.uncolored(c_, u, b) > 0 && good_partner(u, i, 1) != kNoVertex) {
        na_set.push_back(u);
      }
    }
    last_sizes_ = {static_cast<int>(na_set.size()), static_cast<int>(nb_set.size()),
                   static_cast<int>(na_set.size()), static_cast<int>(nb_set.size())};
    if (na_set.empty() || nb_set.empty()) return false;
    std::sort(na_set.begin(), na_set.end(), [&](VertexId p, VertexId q) { return c_.at(p, i) < c_.at(q, i); });
    std::sort(nb_set.begin(), nb_set.end(), [&](VertexId p, VertexId q) { return c_.at(p, i) < c_.at(q, i); });

    VertexId best_a1 = kNoVertex;
    VertexId best_b1 = kNoVertex;
    int best_score = std::numeric_limits<int>::max();
    for (VertexId a1 : na_set) {
      const VertexId a2 = c_.at(a1, i);  // in M_A
      for (VertexId b1 : nb_set) {
        const VertexId b2 = c_.at(b1, i);  // in M_B
        if (g_.multiplicity(a2, b2) - c_.colored_count(a2, b2) <= 0) continue;
        const int score = std::max({rdeg_of(a1), rdeg_of(a2), rdeg_of(b1), rdeg_of(b2)});
        if (score < best_score) {
          best_score = score;
          best_a1 = a1;
          best_b1 = b1;
        }
      }
    }
    if (best_a1 == kNoVertex) return false;
    const VertexId a2 = c_.at(best_a1, i);
    const VertexId b2 = c_.at(best_b1, i);
    uncolor_within(best_b1, b2, i);
    uncolor_within(best_a1, a2, i);
    color_crossing(a, best_b1, i);
    color_crossing(b2, a2, i);
    color_crossing(best_a1, b, i);
    ++ctx_.counters.exchanges;
    return true;
  }

  // Completes color i to a perfect matching through augmenting paths that
  // alternate between uncolored edges and i-edges. An i-edge at x inside A
  // is frozen so that x never gains residual degree.
  bool augment(Color i) {
    const VertexId order = g_.order();
    const VertexId x = ctx_.x;
    std::vector<int> mate(static_cast<std::size_t>(order), -1);
    for (VertexId v = 0; v < order; ++v) {
      const VertexId w = c_.at(v, i);
      if (w != kNoVertex) mate[static_cast<std::size_t>(v)] = w;
    }
    const VertexId x_mate = c_.at(x, i);
    const bool x_frozen = x_mate != kNoVertex && ctx_.in_a(x_mate);
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(order));
    for (VertexId u = 0; u < order; ++u) {
      auto& list = adj[static_cast<std::size_t>(u)];
      for (VertexId v : g_.neighbors(u)) {
        if ((u == x || v == x) && x_frozen) {
          if (c_.at(u, i) == v) list.push_back(v);
          continue;
        }
        if (c_.at(u, i) == v || ctx_.uncolored(c_, u, v) > 0) list.push_back(v);
      }
      // Crossing edges first, then partners of low residual degree.
      std::sort(list.begin(), list.end(), [&](int p, int q) {
        const bool cp = ctx_.side[static_cast<std::size_t>(p)] != ctx_.side[static_cast<std::size_t>(u)];
        const bool cq = ctx_.side[static_cast<std::size_t>(q)] != ctx_.side[static_cast<std::size_t>(u)];
        if (cp != cq) return cp;
        if (rdeg_of(p) != rdeg_of(q)) return rdeg_of(p) < rdeg_of(q);
        return p < q;
      });
    }
    augment_general_matching(adj, mate);
    for (VertexId v = 0; v < order; ++v) {
      if (mate[static_cast<std::size_t>(v)] < 0) return false;
    }
    for (VertexId v = 0; v < order; ++v) {
      const VertexId w = c_.at(v, i);
      if (w > v && mate[static_cast<std::size_t>(v)] != w) {
        if (ctx_.side[static_cast<std::size_t>(v)] == ctx_.side[static_cast<std::size_t>(w)]) {
          uncolor_within(v, w, i);
        } else {
          c_.unassign(v, w, i);
          --ctx_.crossing_colored[static_cast<std::size_t>(v)];
          --ctx_.crossing_colored[static_cast<std::size_t>(w)];
        }
      }
    }
    for (VertexId v = 0; v < order; ++v) {
      const VertexId w = mate[static_cast<std::size_t>(v)];
      if (w > v && c_.at(v, i) != w) {
        if (ctx_.side[static_cast<std::size_t>(v)] == ctx_.side[static_cast<std::size_t>(w)]) {
          c_.assign(v, w, i);
          --rdeg(v);
          --rdeg(w);
        } else {
          color_crossing(v, w, i);
        }
      }
    }
    ++ctx_.counters.augmented_colors;
    return true;
  }

  FactorizeContext& ctx_;
  EdgeColoring& c_;
  const MultiGraph& g_;
  double good_limit_ = 0.0;
  std::array<int, 4> last_sizes_{0, 0, 0, 0};
};

}  // namespace

void step2_make_factors(FactorizeContext& ctx, EdgeColoring& c) {
  Step2(ctx, c).run();
  for (Color i = 1; i <= ctx.k; ++i) {
    for (VertexId v = 0; v < ctx.g.order(); ++v) {
      require(c.is_present(v, i), ErrorCode::InternalRepairFailure,
              "color " + std::to_string(i) + " still missing at vertex " + std::to_string(v));
    }
  }
  std::int64_t ra = 0;
  std::int64_t rb = 0;
  int max_rdeg = 0;
  int max_cross = 0;
  for (VertexId v = 0; v < ctx.g.order(); ++v) {
    (ctx.in_a(v) ? ra : rb) += ctx.residual_degree[static_cast<std::size_t>(v)];
    max_rdeg = std::max(max_rdeg, ctx.residual_degree[static_cast<std::size_t>(v)]);
    if (v != ctx.x) max_cross = std::max(max_cross, ctx.crossing_colored[static_cast<std::size_t>(v)]);
  }
  require(ra == rb, ErrorCode::InternalRepairFailure, "residual sides differ in size");
  auto& rec = stage_record(ctx.report, "step2");
  rec.counters["x_direct"] = static_cast<double>(ctx.counters.x_direct);
  rec.counters["x_shifts"] = static_cast<double>(ctx.counters.x_shifts);
  rec.counters["direct_pairs"] = static_cast<double>(ctx.counters.direct_pairs);
  rec.counters["exchanges"] = static_cast<double>(ctx.counters.exchanges);
  rec.counters["x_deferred"] = static_cast<double>(ctx.counters.x_deferred);
  rec.counters["augmented_colors"] = static_cast<double>(ctx.counters.augmented_colors);
  rec.counters["residual_edges"] = static_cast<double>(ra / 2);
  rec.counters["residual_max_degree"] = max_rdeg;
  rec.counters["max_colored_crossing"] = max_cross;
  rec.counters["tau2"] = ctx.tau.tau2;
  rec.counters["tau3"] = ctx.tau.tau3;
  rec.counters["tau4"] = ctx.tau.tau4;
  if (static_cast<double>(ra / 2) >= ctx.tau.tau2 || max_rdeg >= ctx.tau.tau3 || max_cross >= ctx.tau.tau4) {
    rec.status = "advisory";
    ctx.report.advisories.push_back("Step 2 thresholds exceeded");
  }
}

void step3_residual_factors(FactorizeContext& ctx, EdgeColoring& c) {
  const MultiGraph& g = ctx.g;
  const VertexId order = g.order();
  MultiGraph ra(order);
  MultiGraph rb(order);
  for (VertexId u = 0; u < order; ++u) {
    for (VertexId v : g.neighbors(u)) {
      if (v <= u || ctx.side[static_cast<std::size_t>(u)] != ctx.side[static_cast<std::size_t>(v)]) continue;
      const int open = ctx.uncolored(c, u, v);
      if (open == 0) continue;
      if (ctx.in_a(u) && (u == ctx.x || v == ctx.x)) {
        throw Error(ErrorCode::InternalRepairFailure, "R_A contains the multi-center");
      }
      (ctx.in_a(u) ? ra : rb).add_edge(u, v, open);
    }
  }
  require(ra.size() == rb.size(), ErrorCode::InternalRepairFailure, "R_A and R_B differ in size");
  ctx.ell = ra.size() == 0 ? 0 : std::max(ra.max_degree(), rb.max_degree()) + 1;
  auto& rec = stage_record(ctx.report, "step3");
  rec.counters["ell"] = ctx.ell;
  rec.counters["residual_edges"] = static_cast<double>(ra.size());
  if (ctx.k + ctx.ell > ctx.d) {
    rec.status = "failed";
    throw Error(ErrorCode::InfeasiblePalette, "k + ell = " + std::to_string(ctx.k + ctx.ell) + " exceeds d = " +
                                                  std::to_string(ctx.d));
  }
  c.extend_palette(ctx.d);
  if (ctx.ell == 0) return;

  std::int64_t swaps = 0;
  const EdgeColoring ca = equalized_coloring(ra, ctx.ell, &swaps);
  const EdgeColoring cb = equalized_coloring(rb, ctx.ell, &swaps);
  ctx.counters.equalize_swaps = swaps;

  // Rename classes so that matching colors have equal sizes on both sides.
  auto classes = [&](const EdgeColoring& col) {
    std::vector<std::vector<std::pair<VertexId, VertexId>>> out(static_cast<std::size_t>(ctx.ell) + 1);
    for (VertexId v = 0; v < order; ++v) {
      for (Color i = 1; i <= ctx.ell; ++i) {
        const VertexId w = col.at(v, i);
        if (w > v) out[static_cast<std::size_t>(i)].emplace_back(v, w);
      }
    }
    return out;
  };
  const auto class_a = classes(ca);
  const auto class_b = classes(cb);
  std::vector<Color> order_a(static_cast<std::size_t>(ctx.ell));
  std::vector<Color> order_b(static_cast<std::size_t>(ctx.ell));
  std::iota(order_a.begin(), order_a.end(), 1);
  std::iota(order_b.begin(), order_b.end(), 1);
  auto by_size = [](const auto& cls) {
    return [&cls](Color p, Color q) {
      const auto sp = cls[static_cast<std::size_t>(p)].size();
      const auto sq = cls[static_cast<std::size_t>(q)].size();
      return sp != sq ? sp > sq : p < q;
    };
  };
  std::sort(order_a.begin(), order_a.end(), by_size(class_a));
  std::sort(order_b.begin(), order_b.end(), by_size(class_b));
  for (std::size_t j = 0; j < order_a.size(); ++j) {
    if (class_a[static_cast<std::size_t>(order_a[j])].size() != class_b[static_cast<std::size_t>(order_b[j])].size()) {
      throw Error(ErrorCode::RenameInfeasible, "class sizes of R_A and R_B differ");
    }
  }
  for (std::size_t j = 0; j < order_a.size(); ++j) {
    const Color col = ctx.k + 1 + static_cast<Color>(j);
    for (const auto& [u, v] : class_a[static_cast<std::size_t>(order_a[j])]) c.assign(u, v, col);
    for (const auto& [u, v] : class_b[static_cast<std::size_t>(order_b[j])]) c.assign(u, v, col);
  }

  // Complete each new color to a perfect matching through H_i. A failed
  // matching restarts the whole round with a shuffled color order.
  const EdgeColoring snapshot = c;
  std::vector<Color> colors(static_cast<std::size_t>(ctx.ell));
  std::iota(colors.begin(), colors.end(), ctx.k + 1);
  std::mt19937_64 rng(ctx.params.seed ^ 0x5eedULL);
  int min_h_degree = std::numeric_limits<int>::max();
  const int rounds = std::max(1, ctx.params.matching_retries);
  for (int round = 0; round < rounds; ++round) {
    if (round > 0) {
      c = snapshot;
      std::shuffle(colors.begin(), colors.end(), rng);
      ++ctx.counters.matching_retries;
    }
    try {
      for (Color col : colors) {
        Bipartition sides;
        for (VertexId v : ctx.a) {
          if (c.is_missing(v, col)) sides.left.push_back(v);
        }
        for (VertexId v : ctx.b) {
          if (c.is_missing(v, col)) sides.right.push_back(v);
        }
        MultiGraph h(order);
        for (VertexId u : sides.left) {
          for (VertexId v : g.neighbors(u)) {
            if (ctx.in_b(v) && c.is_missing(v, col) && ctx.uncolored(c, u, v) > 0) h.add_edge(u, v);
          }
        }
        for (VertexId v : sides.left) min_h_degree = std::min(min_h_degree, h.degree(v));
        for (VertexId v : sides.right) min_h_degree = std::min(min_h_degree, h.degree(v));
        Matching m;
        try {
          m = hall_perfect_matching(h, sides);
        } catch (const NoPerfectMatchingError& e) {
          throw NoPerfectMatchingError("color " + std::to_string(col) + ": " + e.detail(), e.violator(),
                                       e.neighborhood(), e.best());
        }
        for (const auto& [u, v] : m.edges) c.assign(u, v, col);
        ++ctx.counters.matchings;
      }
      break;
    } catch (const NoPerfectMatchingError&) {
      if (round + 1 == rounds) {
        rec.status = "failed";
        throw;
      }
    }
  }
  rec.counters["equalize_swaps"] = static_cast<double>(swaps);
  rec.counters["matching_retries"] = static_cast<double>(ctx.counters.matching_retries);
  rec.counters["min_H_degree"] = min_h_degree == std::numeric_limits<int>::max() ? 0 : min_h_degree;
  rec.counters["alpha_n_over_2"] = ctx.params.alpha * (order / 2) / 2.0;
}

void step4_finish(FactorizeContext& ctx, EdgeColoring& c) {
  const MultiGraph& g = ctx.g;
  const VertexId order = g.order();
  const int r = ctx.d - ctx.k - ctx.ell;
  MultiGraph residual(order, ctx.x);
  for (const auto& e : g.edges()) {
    const int open = e.multiplicity - c.colored_count(e.u, e.v);
    if (open == 0) continue;
    if (ctx.side[static_cast<std::size_t>(e.u)] == ctx.side[static_cast<std::size_t>(e.v)]) {
      throw Error(ErrorCode::ResidualNotRegular, "uncolored within-side edge " + std::to_string(e.u) + "-" +
                                                     std::to_string(e.v) + " before Step 4");
    }
    residual.add_edge(e.u, e.v, open);
  }
  for (VertexId v = 0; v < order; ++v) {
    if (residual.degree(v) != r) {
      throw Error(ErrorCode::ResidualNotRegular, "vertex " + std::to_string(v) + " has residual degree " +
                                                     std::to_string(residual.degree(v)) + ", expected " +
                                                     std::to_string(r));
    }
  }
  auto& rec = stage_record(ctx.report, "step4");
  rec.counters["residual_degree"] = r;
  if (r == 0) return;
  const EdgeColoring kc = konig_edge_coloring(residual, Bipartition{ctx.a, ctx.b});
  const Color offset = ctx.k + ctx.ell;
  for (VertexId v = 0; v < order; ++v) {
    for (Color i = 1; i <= kc.palette(); ++i) {
      const VertexId w = kc.at(v, i);
      if (w > v) c.assign(v, w, offset + i);
    }
  }
}

bool is_one_factorization(const MultiGraph& g, const EdgeColoring& c) {
  const ColoringReport rep = verify_proper(g, c);
  if (!rep.proper || !rep.total) return false;
  for (Color i = 1; i <= c.palette(); ++i) {
    for (VertexId v = 0; v < g.order(); ++v) {
      if (c.is_missing(v, i)) return false;
    }
  }
  return true;
}

namespace {

Factorization assemble(const MultiGraph& g, EdgeColoring c, FactorizeContext& ctx) {
  if (!is_one_factorization(g, c) || c.palette() != ctx.d) {
    throw Error(ErrorCode::InternalRepairFailure, "assembled coloring is not a 1-factorization");
  }
  Factorization out;
  out.factors.resize(static_cast<std::size_t>(ctx.d));
  for (VertexId v = 0; v < g.order(); ++v) {
    for (Color i = 1; i <= ctx.d; ++i) {
      const VertexId w = c.at(v, i);
      if (w > v) out.factors[static_cast<std::size_t>(i - 1)].edges.emplace_back(v, w);
    }
  }
  out.coloring = std::move(c);
  out.counters = ctx.counters;
  out.report = std::move(ctx.report);
  return out;
}

}  // namespace

Factorization one_factorize(const MultiGraph& g, const FactorizeParams& params) {
  if (g.order() == 0 || g.max_degree() == 0) {
    require(g.is_regular(), ErrorCode::PreconditionViolated, "factorization needs a regular graph");
    return Factorization{EdgeColoring(g.order(), 0), {}, {}, {}};
  }
  FactorizeContext ctx;
  EdgeColoring c;
  const char* stage = "prepare_partition";
  try {
    const auto start = std::chrono::steady_clock::now();
    ctx = prepare_partition(g, params);
    stage_record(ctx.report, "prepare_partition").millis =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    stage = "step1";
    {
      StageTimer t(ctx.report, stage);
      c = step1_near_equalized(ctx);
    }
    stage = "step2";
    {
      StageTimer t(ctx.report, stage);
      step2_make_factors(ctx, c);
    }
    stage = "step3";
    {
      StageTimer t(ctx.report, stage);
      step3_residual_factors(ctx, c);
    }
    stage = "step4";
    {
      StageTimer t(ctx.report, stage);
      step4_finish(ctx, c);
    }
    stage = "validate";
    return assemble(g, std::move(c), ctx);
  } catch (const Error& e) {
    {
      auto& rec = stage_record(ctx.report, stage);
      rec.status = "failed";
      rec.message = e.detail();
    }
    const bool repairable = e.code() != ErrorCode::PreconditionViolated && e.code() != ErrorCode::NoNonNeighbor &&
                            std::string(stage) != "prepare_partition" && std::string(stage) != "validate";
    if (!params.kempe_repair || !repairable) {
      throw FactorizationFailedError(std::string(stage) + " failed: " + e.detail(), e.code(), ctx.report);
    }
    // Finish the partial coloring left by the failed step with d colors.
    ctx.d = g.max_degree();
    if (c.order() != g.order()) c = EdgeColoring(g.order(), ctx.d);
    c.extend_palette(ctx.d);
    std::mt19937_64 rng(params.seed ^ 0x9e3779b97f4a7c15ULL);
    const std::int64_t budget = params.repair_budget > 0 ? params.repair_budget : 200 * g.size();
    CompletionStats stats;
    const std::int64_t open_before = g.size() - c.colored_slots();
    bool done = false;
    {
      StageTimer t(ctx.report, "repair");
      done = kempe_complete(g, c, rng, budget, &stats);
      auto& rec = t.record();
      rec.counters["open_slots"] = static_cast<double>(open_before);
      rec.counters["direct"] = static_cast<double>(stats.direct);
      rec.counters["chain_swaps"] = static_cast<double>(stats.chain_swaps);
      rec.counters["perturbations"] = static_cast<double>(stats.perturbations);
      if (!done) t.fail("move budget spent");
    }
    if (!done) {
      throw FactorizationFailedError(std::string(stage) + " failed and repair ran out of moves: " + e.detail(),
                                     e.code(), ctx.report);
    }
    ctx.counters.repaired = 1;
    ctx.report.advisories.push_back(std::string(stage) + " failed; completed by Kempe repair");
    return assemble(g, std::move(c), ctx);
  }
}

}  // namespace chroma
