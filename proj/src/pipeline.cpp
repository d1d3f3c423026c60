#include "chroma/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <set>

#include "chroma/balance.hpp"

namespace chroma {

DeficiencyProfile deficiency_profile(const MultiGraph& g) {
  DeficiencyProfile p;
  p.max_degree = g.max_degree();
  p.min_degree = g.min_degree();
  p.df.resize(static_cast<std::size_t>(g.order()));
  for (VertexId v = 0; v < g.order(); ++v) {
    p.df[static_cast<std::size_t>(v)] = p.max_degree - g.degree(v);
    p.total += p.df[static_cast<std::size_t>(v)];
  }
  return p;
}

bool is_overfull(const MultiGraph& g) {
  const VertexId n = g.order();
  const std::int64_t delta = g.max_degree();
  const bool by_edges = g.size() > delta * (n / 2);
  const DeficiencyProfile p = deficiency_profile(g);
  const bool by_deficiency = n % 2 == 1 && p.total <= delta - 2;
  if ((n % 2 == 1 && by_edges) != by_deficiency) {
    throw Error(ErrorCode::InternalRepairFailure, "overfull tests disagree");
  }
  return by_deficiency;
}

MultiGraph hakimi_realize(std::span<const int> degrees) {
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    if (degrees[i] < 0 || (i > 0 && degrees[i] > degrees[i - 1])) {
      throw Error(ErrorCode::PreconditionViolated, "degree sequence must be non-increasing and non-negative");
    }
  }
  const std::int64_t total = std::accumulate(degrees.begin(), degrees.end(), std::int64_t{0});
  if (total % 2 != 0) {
    throw NotRealizableError("degree sum " + std::to_string(total) + " is odd", RealizabilityCondition::OddSum);
  }
  if (!degrees.empty() && total - degrees[0] < degrees[0]) {
    throw NotRealizableError("sum of the other degrees " + std::to_string(total - degrees[0]) + " < d_1 = " +
                                 std::to_string(degrees[0]),
                             RealizabilityCondition::DominantDegree);
  }
  const auto n = static_cast<VertexId>(degrees.size());
  MultiGraph h = MultiGraph::unrestricted(n);
  std::vector<int> rest(degrees.begin(), degrees.end());
  std::vector<VertexId> order(degrees.size());
  std::iota(order.begin(), order.end(), 0);
  std::int64_t left = total;
  while (left > 0) {
    std::sort(order.begin(), order.end(), [&](VertexId a, VertexId b) {
      const int ra = rest[static_cast<std::size_t>(a)];
      const int rb = rest[static_cast<std::size_t>(b)];
      return ra != rb ? ra > rb : a < b;
    });
    const VertexId u = order[0];
    const VertexId v = order[1];
    const int d2 = rest[static_cast<std::size_t>(v)];
    const int d3 = n > 2 ? rest[static_cast<std::size_t>(order[2])] : 0;
    // Largest t keeping the third-largest degree within the rest.
    const auto t = static_cast<int>(std::min<std::int64_t>(d2, (left - 2 * std::int64_t{d3}) / 2));
    h.add_edge(u, v, t);
    rest[static_cast<std::size_t>(u)] -= t;
    rest[static_cast<std::size_t>(v)] -= t;
    left -= 2 * t;
  }
  return h;
}

Augmentation augment_with_star(const MultiGraph& g, double eta) {
  if (is_overfull(g)) throw Error(ErrorCode::OverfullInput, "graph is overfull");
  const VertexId n = g.order();
  const DeficiencyProfile p = deficiency_profile(g);
  const int delta_min = p.min_degree;
  if (p.total < delta_min) {
    throw Error(ErrorCode::DegenerateDeficiency, "total deficiency " + std::to_string(p.total) + " < delta = " +
                                                     std::to_string(delta_min));
  }
  std::vector<VertexId> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](VertexId a, VertexId b) { return g.degree(a) < g.degree(b); });

  Augmentation out;
  out.x = n;
  out.graph = MultiGraph(n + 1, n);
  for (const auto& e : g.edges()) out.graph.add_edge(e.u, e.v, e.multiplicity);
  int need = delta_min;
  for (VertexId v : order) {
    if (need == 0) break;
    const int take = std::min(need, p.df[static_cast<std::size_t>(v)]);
    if (take == 0) continue;
    out.graph.add_edge(n, v, take);
    need -= take;
    out.max_x_multiplicity = std::max(out.max_x_multiplicity, take);
  }
  out.x_neighbors = static_cast<int>(out.graph.neighbors(n).size());

  int below = 0;
  for (VertexId v : out.graph.neighbors(n)) {
    if (out.graph.degree(v) < p.max_degree) ++below;
  }
  if (out.graph.degree(n) != delta_min || out.graph.max_degree() != p.max_degree || below > 1) {
    throw Error(ErrorCode::InternalRepairFailure, "augmentation broke d(x) = delta, Delta or the neighbor rule");
  }
  if (out.x_neighbors < 3) out.advisories.push_back("x has fewer than 3 neighbors");
  if (out.max_x_multiplicity > eta * n) out.advisories.push_back("e(x, v) exceeds eta * n");
  return out;
}

std::vector<Matching> partition_deficiency_matchings(const MultiGraph& h, int size_cap) {
  std::vector<Matching> classes;
  std::vector<std::set<VertexId>> touched;
  for (const auto& e : h.edges()) {
    for (int r = 0; r < e.multiplicity; ++r) {
      std::size_t i = 0;
      for (; i < classes.size(); ++i) {
        const bool full = size_cap > 0 && classes[i].size() >= static_cast<std::size_t>(size_cap);
        if (!full && !touched[i].count(e.u) && !touched[i].count(e.v)) break;
      }
      if (i == classes.size()) {
        classes.emplace_back();
        touched.emplace_back();
      }
      classes[i].edges.emplace_back(e.u, e.v);
      touched[i].insert(e.u);
      touched[i].insert(e.v);
    }
  }
  return classes;
}

MultiGraph bipartite_deficiency_graph(const MultiGraph& g_prime, Bipartition* sides) {
  const DeficiencyProfile p = deficiency_profile(g_prime);
  const VertexId n = g_prime.order();
  std::vector<VertexId> carriers;
  for (VertexId v = 0; v < n; ++v) {
    if (p.df[static_cast<std::size_t>(v)] > 0) carriers.push_back(v);
  }
  std::stable_sort(carriers.begin(), carriers.end(), [&](VertexId a, VertexId b) {
    return p.df[static_cast<std::size_t>(a)] > p.df[static_cast<std::size_t>(b)];
  });
  const std::int64_t half = p.total / 2;
  if (p.total % 2 != 0) return MultiGraph();

  // Subset-sum table: reach[i][s] says a subset of the first i carriers sums to s.
  const std::size_t m = carriers.size();
  const auto width = static_cast<std::size_t>(half) + 1;
  std::vector<std::vector<char>> reach(m + 1, std::vector<char>(width, 0));
  reach[0][0] = 1;
  for (std::size_t i = 0; i < m; ++i) {
    const auto w = static_cast<std::size_t>(p.df[static_cast<std::size_t>(carriers[i])]);
    for (std::size_t s = 0; s < width; ++s) {
      if (!reach[i][s]) continue;
      reach[i + 1][s] = 1;
      if (s + w < width) reach[i + 1][s + w] = 1;
    }
  }
  if (!reach[m][static_cast<std::size_t>(half)]) return MultiGraph();
  std::vector<char> left(static_cast<std::size_t>(n), 0);
  for (std::size_t i = m, s = static_cast<std::size_t>(half); i > 0; --i) {
    if (reach[i - 1][s]) continue;
    left[static_cast<std::size_t>(carriers[i - 1])] = 1;
    s -= static_cast<std::size_t>(p.df[static_cast<std::size_t>(carriers[i - 1])]);
  }
  Bipartition b;
  for (VertexId v : carriers) (left[static_cast<std::size_t>(v)] ? b.left : b.right).push_back(v);

  // Each left vertex spreads its demand over the right vertices with the
  // largest residual demand, one copy per vertex per round.
  MultiGraph h = MultiGraph::unrestricted(n);
  std::vector<int> rest = p.df;
  std::vector<VertexId> right = b.right;
  for (VertexId u : b.left) {
    while (rest[static_cast<std::size_t>(u)] > 0) {
      std::stable_sort(right.begin(), right.end(), [&](VertexId a, VertexId c) {
        return rest[static_cast<std::size_t>(a)] > rest[static_cast<std::size_t>(c)];
      });
      for (VertexId w : right) {
        if (rest[static_cast<std::size_t>(u)] == 0 || rest[static_cast<std::size_t>(w)] == 0) break;
        h.add_edge(u, w);
        --rest[static_cast<std::size_t>(u)];
        --rest[static_cast<std::size_t>(w)];
      }
    }
  }
  if (sides) *sides = std::move(b);
  return h;
}

Peeling peel_linear_forests(const MultiGraph& g_prime, VertexId x, const std::vector<Matching>& matchings,
                            const PathCoverBudget& budget, std::mt19937_64& rng, PipelineReport* report) {
  Peeling out;
  out.g_k = g_prime;
  const VertexId n = g_prime.order();
  PathCoverStats stats;
  for (std::size_t i = 0; i < matchings.size(); ++i) {
    const auto& pairs = matchings[i].edges;
    std::vector<char> is_end(static_cast<std::size_t>(n), 0);
    for (const auto& [u, v] : pairs) is_end[static_cast<std::size_t>(u)] = is_end[static_cast<std::size_t>(v)] = 1;
    int free_nbrs = 0;
    for (VertexId w : out.g_k.neighbors(x)) free_nbrs += is_end[static_cast<std::size_t>(w)] ? 0 : 1;
    if (free_nbrs < (is_end[static_cast<std::size_t>(x)] ? 1 : 2)) {
      throw Error(ErrorCode::NeighborShortage, "x has " + std::to_string(free_nbrs) +
                                                   " neighbors outside the endpoints of matching " +
                                                   std::to_string(i + 1));
    }
    PathCover cover;
    try {
      cover = path_cover_star(out.g_k, x, pairs, budget, rng, &stats);
    } catch (const CoverNotFoundError& e) {
      throw CoverNotFoundError("forest " + std::to_string(i + 1) + " of " + std::to_string(matchings.size()) +
                                   " (degree " + std::to_string(out.g_k.max_degree()) + "): " + e.detail(),
                               e.partial());
    }
    std::vector<int> forest_degree(static_cast<std::size_t>(n), 0);
    for (const auto& path : cover.paths) {
      for (std::size_t j = 0; j + 1 < path.size(); ++j) {
        out.g_k.remove_edge(path[j], path[j + 1]);
        ++forest_degree[static_cast<std::size_t>(path[j])];
        ++forest_degree[static_cast<std::size_t>(path[j + 1])];
      }
    }
    for (VertexId v = 0; v < n; ++v) {
      const int want = is_end[static_cast<std::size_t>(v)] ? 1 : 2;
      if (forest_degree[static_cast<std::size_t>(v)] != want) {
        throw Error(ErrorCode::InternalRepairFailure, "forest " + std::to_string(i + 1) + " has degree " +
                                                          std::to_string(forest_degree[static_cast<std::size_t>(v)]) +
                                                          " at vertex " + std::to_string(v));
      }
    }
    out.forests.push_back(std::move(cover));
  }
  const int target = g_prime.max_degree() - 2 * static_cast<int>(matchings.size());
  for (VertexId v = 0; v < n; ++v) {
    if (out.g_k.degree(v) != target) {
      throw Error(ErrorCode::InternalRepairFailure, "G_k has degree " + std::to_string(out.g_k.degree(v)) +
                                                        " at vertex " + std::to_string(v) + ", expected " +
                                                        std::to_string(target));
    }
  }
  if (report) {
    auto& rec = report->stages.back();
    rec.counters["forests"] = static_cast<double>(matchings.size());
    rec.counters["cover_restarts"] = stats.restarts;
    rec.counters["cover_rotations"] = static_cast<double>(stats.rotations);
    rec.counters["cover_insertions"] = static_cast<double>(stats.insertions);
    rec.counters["g_k_degree"] = target;
  }
  return out;
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::Pipeline:
      return "pipeline";
    case Method::Overfull:
      return "overfull";
    case Method::Fallback:
      return "fallback";
  }
  return "unknown";
}

namespace {

EdgeColoring restrict_to(const MultiGraph& g, const EdgeColoring& c, Color palette) {
  EdgeColoring out(g.order(), palette);
  for (VertexId v = 0; v < g.order(); ++v) {
    for (Color i = 1; i <= c.palette(); ++i) {
      const VertexId w = c.at(v, i);
      if (w > v && w < g.order()) out.assign(v, w, i);
    }
  }
  return out;
}

// Colors the paths of every forest with two fresh colors each, alternating
// along each path, on top of the factorization of G_k.
void color_forests(EdgeColoring& c, const std::vector<PathCover>& forests, Color d) {
  for (std::size_t i = 0; i < forests.size(); ++i) {
    const Color first = d + 2 * static_cast<Color>(i) + 1;
    for (const auto& path : forests[i].paths) {
      for (std::size_t j = 0; j + 1 < path.size(); ++j) {
        c.assign(path[j], path[j + 1], j % 2 == 0 ? first : first + 1);
      }
    }
  }
}

// Target size of matching i (1-based), peeled from a graph of order n and
// degree delta - 2(i - 1) = rho * n. Shares follow that degree to the power
// `skew`, capped at 0.8 * n / (3 - rho): beyond it the non-adjacent pairs
// outnumber the vertices left for path interiors.
std::vector<std::int64_t> matching_targets(std::int64_t edges, Color k, int delta, VertexId n, double skew) {
  std::vector<double> w(static_cast<std::size_t>(k) + 1, 0.0);
  std::vector<double> cap(static_cast<std::size_t>(k) + 1, 0.0);
  for (Color i = 1; i <= k; ++i) {
    const double deg = std::max(1, delta - 2 * (i - 1));
    w[static_cast<std::size_t>(i)] = std::pow(deg, skew);
    cap[static_cast<std::size_t>(i)] = 0.8 * n / (3.0 - deg / n);
  }
  std::vector<double> share(static_cast<std::size_t>(k) + 1, 0.0);
  std::vector<char> fixed(static_cast<std::size_t>(k) + 1, 0);
  double left = static_cast<double>(edges);
  for (bool changed = true; changed;) {
    changed = false;
    double wsum = 0.0;
    for (Color i = 1; i <= k; ++i) {
      if (!fixed[static_cast<std::size_t>(i)]) wsum += w[static_cast<std::size_t>(i)];
    }
    if (wsum == 0.0) break;
    for (Color i = 1; i <= k; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      if (fixed[ui]) continue;
      share[ui] = left * w[ui] / wsum;
      if (share[ui] > cap[ui]) {
        share[ui] = cap[ui];
        fixed[ui] = 1;
        left -= cap[ui];
        changed = true;
      }
    }
  }
  std::vector<std::int64_t> target(static_cast<std::size_t>(k) + 1, 0);
  std::int64_t assigned = 0;
  for (Color i = 1; i <= k; ++i) {
    target[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(std::floor(share[static_cast<std::size_t>(i)]));
    assigned += target[static_cast<std::size_t>(i)];
  }
  for (Color i = k; assigned < edges; i = i == 1 ? k : i - 1, ++assigned) ++target[static_cast<std::size_t>(i)];
  return target;
}

ColoringResult fallback(const MultiGraph& g, ColoringResult r, const std::string& reason) {
  {
    StageTimer t(r.report, "fallback");
    r.method = Method::Fallback;
    r.fallback_reason = reason;
    r.coloring = star_multigraph_coloring(g);
    r.chromatic_index = count_colors_used(r.coloring);
    t.record().message = reason;
    t.record().counters["colors"] = r.chromatic_index;
  }
  return r;
}

void verify_or_throw(const MultiGraph& g, const EdgeColoring& c, int colors) {
  const ColoringReport rep = verify_proper(g, c);
  if (!rep.proper || !rep.total) throw Error(ErrorCode::InternalRepairFailure, "assembled coloring: " + rep.message);
  if (count_colors_used(c) > colors) {
    throw Error(ErrorCode::InternalRepairFailure, "assembled coloring uses more than " + std::to_string(colors) +
                                                      " colors");
  }
}

}  // namespace

Regularization regularize(const MultiGraph& g, const PipelineParams& params, std::uint64_t seed,
                        PipelineReport& report) {
  const int delta = g.max_degree();
  Regularization out;
  std::mt19937_64 rng(seed);
  {
    StageTimer t(report, "augment");
    out.augmentation = augment_with_star(g, params.factorize.eta);
    t.record().counters["x_neighbors"] = out.augmentation.x_neighbors;
    t.record().counters["max_x_multiplicity"] = out.augmentation.max_x_multiplicity;
    for (const auto& a : out.augmentation.advisories) report.advisories.push_back(a);
  }
  {
    StageTimer t(report, "deficiency");
    MultiGraph h;
    if (params.realization == DeficiencyRealization::Bipartite) {
      Bipartition sides;
      h = bipartite_deficiency_graph(out.augmentation.graph, &sides);
      if (h.order() > 0) {
        EdgeColoring kc = konig_edge_coloring(h, sides);
        const std::vector<std::int64_t> target =
            matching_targets(h.size(), kc.palette(), delta, out.augmentation.graph.order(),
                             params.matching_skew);
        t.record().counters["reshape_swaps"] = static_cast<double>(reshape_classes(kc, target));
        out.matchings.resize(static_cast<std::size_t>(kc.palette()));
        for (VertexId v = 0; v < h.order(); ++v) {
          for (Color i = 1; i <= kc.palette(); ++i) {
            const VertexId w = kc.at(v, i);
            if (w > v) out.matchings[static_cast<std::size_t>(i - 1)].edges.emplace_back(v, w);
          }
        }
        t.record().counters["bipartite"] = 1;
      } else {
        report.advisories.push_back("no equal-sum split of the deficiencies; using Hakimi realization");
      }
    }
    if (h.order() == 0) {
      const DeficiencyProfile p = deficiency_profile(out.augmentation.graph);
      std::vector<VertexId> order(p.df.size());
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](VertexId a, VertexId b) {
        return p.df[static_cast<std::size_t>(a)] > p.df[static_cast<std::size_t>(b)];
      });
      std::vector<int> seq;
      for (VertexId v : order) seq.push_back(p.df[static_cast<std::size_t>(v)]);
      const MultiGraph hs = hakimi_realize(seq);
      h = MultiGraph::unrestricted(out.augmentation.graph.order());
      for (const auto& e : hs.edges()) {
        h.add_edge(order[static_cast<std::size_t>(e.u)], order[static_cast<std::size_t>(e.v)], e.multiplicity);
      }
      out.matchings = partition_deficiency_matchings(h, params.matching_cap);
      t.record().counters["bipartite"] = 0;
    }
    // Larger matchings are peeled while the graph is still dense.
    std::stable_sort(out.matchings.begin(), out.matchings.end(),
                     [](const Matching& a, const Matching& b) { return a.size() > b.size(); });
    t.record().counters["deficiency_edges"] = static_cast<double>(h.size());
    t.record().counters["deficiency_max_degree"] = h.max_degree();
    t.record().counters["matchings"] = static_cast<double>(out.matchings.size());
  }
  const int k = static_cast<int>(out.matchings.size());
  const int d = delta - 2 * k;
  if (d < 0) throw Error(ErrorCode::InfeasiblePalette, "2k = " + std::to_string(2 * k) + " exceeds Delta");
  {
    StageTimer t(report, "peel");
    const Augmentation& aug = out.augmentation;
    out.peeling = peel_linear_forests(aug.graph, aug.x, out.matchings, params.cover, rng, &report);
    const MultiGraph& g_k = out.peeling.g_k;
    if (d + 2 * k != aug.graph.max_degree() || !g_k.is_regular() || g_k.max_degree() != d) {
      throw Error(ErrorCode::InternalRepairFailure, "d + 2k != Delta(G')");
    }
    // A triangle x v w with e(x,v) + e(x,w) + 1 > d is an overfull
    // subgraph, so g_k would have no 1-factorization.
    const auto nx = g_k.neighbors(aug.x);
    for (std::size_t i = 0; i < nx.size(); ++i) {
      for (std::size_t j = i + 1; j < nx.size(); ++j) {
        if (g_k.adjacent(nx[i], nx[j]) && g_k.multiplicity(aug.x, nx[i]) + g_k.multiplicity(aug.x, nx[j]) + 1 > d) {
          throw Error(ErrorCode::DegenerateDeficiency, "g_k has an overfull triangle at x through " +
                                                           std::to_string(nx[i]) + " and " + std::to_string(nx[j]));
        }
      }
    }
  }
  out.forests = k;
  out.factor_degree = d;
  return out;
}

ColoringResult chromatic_index(const MultiGraph& g, const PipelineParams& params, std::uint64_t seed) {
  ColoringResult r;
  r.max_degree = g.max_degree();
  const int delta = r.max_degree;
  if (!g.is_simple()) return fallback(g, std::move(r), "input is not simple");
  if (delta == 0) {
    r.method = Method::Pipeline;
    r.coloring = EdgeColoring(g.order(), 0);
    r.report.add("trivial");
    return r;
  }
  bool over = false;
  {
    StageTimer t(r.report, "overfull");
    over = is_overfull(g);
    t.record().counters["overfull"] = over ? 1 : 0;
    t.record().counters["edges"] = static_cast<double>(g.size());
    t.record().counters["max_degree"] = delta;
    if (over) {
      r.method = Method::Overfull;
      r.coloring = star_multigraph_coloring(g);
      r.chromatic_index = count_colors_used(r.coloring);
    }
  }
  if (over) return r;
  if (g.order() % 2 == 0) return fallback(g, std::move(r), "even order");

  try {
    Regularization reg = regularize(g, params, seed, r.report);
    r.forests = reg.forests;
    r.factor_degree = reg.factor_degree;
    const int d = reg.factor_degree;
    const Augmentation& aug = reg.augmentation;
    const Peeling& peel = reg.peeling;
    EdgeColoring full;
    {
      StageTimer t(r.report, "factorize");
      FactorizeParams fp = params.factorize;
      fp.seed = seed ^ 0xa5a5a5a5a5a5a5a5ULL;
      Factorization f;
      try {
        f = one_factorize(peel.g_k, fp);
      } catch (const FactorizationFailedError& e) {
        r.report.append(e.report());
        throw;
      }
      r.repaired = f.counters.repaired != 0;
      t.record().counters["factor_degree"] = d;
      t.record().counters["repaired"] = r.repaired ? 1 : 0;
      full = f.coloring;
      // Stage records of the factorization follow this one.
      PipelineReport inner = std::move(f.report);
      full.extend_palette(delta);
      color_forests(full, peel.forests, d);
      r.report.append(inner);
    }
    {
      StageTimer t(r.report, "assemble");
      verify_or_throw(aug.graph, full, delta);
      r.coloring = restrict_to(g, full, delta);
      verify_or_throw(g, r.coloring, delta);
      r.chromatic_index = count_colors_used(r.coloring);
      if (r.chromatic_index != delta) {
        throw Error(ErrorCode::InternalRepairFailure, "restricted coloring uses " +
                                                          std::to_string(r.chromatic_index) + " colors");
      }
    }
    r.method = Method::Pipeline;
    return r;
  } catch (const Error& e) {
    return fallback(g, std::move(r), e.what());
  }
}

}  // namespace chroma
