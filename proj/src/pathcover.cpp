#include "chroma/pathcover.hpp"

#include <algorithm>
#include <memory>
#include <queue>
#include <set>

namespace chroma {

std::size_t PathCover::covered() const {
  std::size_t total = 0;
  for (const auto& p : paths) total += p.size();
  return total;
}

CoverCheck validate_path_cover(const MultiGraph& g, std::span<const VertexPair> pairs,
                               const PathCover& cover) {
  auto bad = [](std::string why) { return CoverCheck{false, std::move(why)}; };
  if (cover.paths.size() != pairs.size()) return bad("path count differs from pair count");
  std::set<VertexId> seen;
  for (std::size_t i = 0; i < cover.paths.size(); ++i) {
    const auto& p = cover.paths[i];
    if (p.empty()) return bad("path " + std::to_string(i) + " is empty");
    if (p.front() != pairs[i].first || p.back() != pairs[i].second) {
      return bad("path " + std::to_string(i) + " has wrong endpoints");
    }
    if (p.size() < 2) return bad("path " + std::to_string(i) + " has no edge");
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (p[j] < 0 || p[j] >= g.order()) return bad("vertex out of range");
      if (!seen.insert(p[j]).second) return bad("vertex " + std::to_string(p[j]) + " repeated");
      if (j + 1 < p.size() && g.multiplicity(p[j], p[j + 1]) == 0) {
        return bad("missing edge " + std::to_string(p[j]) + "-" + std::to_string(p[j + 1]));
      }
    }
  }
  if (seen.size() != static_cast<std::size_t>(g.order())) {
    return bad("covers " + std::to_string(seen.size()) + " of " + std::to_string(g.order()) + " vertices");
  }
  return {};
}

namespace {

class CoverSearch {
 public:
  CoverSearch(const MultiGraph& g, std::span<const VertexPair> pairs, std::mt19937_64& rng)
      : n_(g.order()), pairs_(pairs), rng_(rng) {
    adj_.assign(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_), 0);
    nbrs_.resize(static_cast<std::size_t>(n_));
    for (VertexId v = 0; v < n_; ++v) {
      for (VertexId w : g.neighbors(v)) {
        adj_[idx(v, w)] = 1;
        nbrs_[static_cast<std::size_t>(v)].push_back(w);
      }
    }
  }

  // One restart; returns true when every vertex is covered.
  bool run(std::int64_t rotation_budget, PathCoverStats& stats) {
    paths_.assign(pairs_.size(), {});
    owner_.assign(static_cast<std::size_t>(n_), -1);
    for (std::size_t i = 0; i < pairs_.size(); ++i) {
      owner_[static_cast<std::size_t>(pairs_[i].first)] = static_cast<int>(i);
      owner_[static_cast<std::size_t>(pairs_[i].second)] = static_cast<int>(i);
    }
    if (!seed_all()) return false;
    uncovered_.clear();
    for (VertexId v = 0; v < n_; ++v) {
      if (owner_[static_cast<std::size_t>(v)] < 0) uncovered_.push_back(v);
    }
    std::int64_t rotations = 0;
    while (!uncovered_.empty()) {
      std::shuffle(uncovered_.begin(), uncovered_.end(), rng_);
      bool progress = false;
      for (std::size_t k = 0; k < uncovered_.size();) {
        const VertexId u = uncovered_[k];
        if (insert(u) || insert_reversing(u) || insert_with_partner(u) || insert_by_ejection(u)) {
          ++stats.insertions;
          progress = true;
          // insert_with_partner may have consumed another uncovered vertex.
          uncovered_.erase(std::remove_if(uncovered_.begin(), uncovered_.end(),
                                          [&](VertexId v) { return owner_[static_cast<std::size_t>(v)] >= 0; }),
                           uncovered_.end());
          k = 0;
          continue;
        }
        ++k;
      }
      if (uncovered_.empty()) break;
      if (progress) continue;
      if (rotations >= rotation_budget) return false;
      perturb();
      ++rotations;
      ++stats.rotations;
    }
    return true;
  }

  PathCover snapshot() const {
    PathCover c;
    c.paths = paths_;
    c.endpoints.assign(pairs_.begin(), pairs_.end());
    return c;
  }

 private:
  std::size_t idx(VertexId u, VertexId v) const {
    return static_cast<std::size_t>(u) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(v);
  }
  bool adj(VertexId u, VertexId v) const { return adj_[idx(u, v)] != 0; }

  void claim(std::size_t path, const std::vector<VertexId>& vs) {
    for (VertexId v : vs) owner_[static_cast<std::size_t>(v)] = static_cast<int>(path);
  }

  // Adjacent pairs first, then the pair with the fewest unowned common
  // neighbors; a length-two connection uses the common neighbor wanted by
  // the fewest other open pairs.
  bool seed_all() {
    std::vector<std::size_t> open;
    for (std::size_t i = 0; i < pairs_.size(); ++i) {
      if (adj(pairs_[i].first, pairs_[i].second)) {
        paths_[i] = {pairs_[i].first, pairs_[i].second};
      } else {
        open.push_back(i);
      }
    }
    std::shuffle(open.begin(), open.end(), rng_);
    std::vector<int> demand(static_cast<std::size_t>(n_), 0);
    while (!open.empty()) {
      std::fill(demand.begin(), demand.end(), 0);
      std::size_t pick = 0;
      int fewest = n_ + 1;
      for (std::size_t t = 0; t < open.size(); ++t) {
        const auto [a, b] = pairs_[open[t]];
        int common = 0;
        for (VertexId w : nbrs_[static_cast<std::size_t>(a)]) {
          if (owner_[static_cast<std::size_t>(w)] < 0 && adj(w, b)) {
            ++common;
            ++demand[static_cast<std::size_t>(w)];
          }
        }
        if (common < fewest) {
          fewest = common;
          pick = t;
        }
      }
      const std::size_t i = open[pick];
      open.erase(open.begin() + static_cast<std::ptrdiff_t>(pick));
      const auto [a, b] = pairs_[i];
      if (fewest > 0) {
        VertexId best = kNoVertex;
        for (VertexId w : nbrs_[static_cast<std::size_t>(a)]) {
          if (owner_[static_cast<std::size_t>(w)] >= 0 || !adj(w, b)) continue;
          if (best == kNoVertex || demand[static_cast<std::size_t>(w)] < demand[static_cast<std::size_t>(best)]) {
            best = w;
          }
        }
        paths_[i] = {a, best, b};
        claim(i, paths_[i]);
        continue;
      }
      if (!seed(i) && !seed_stealing(i)) return false;
    }
    return true;
  }

  // Interior vertex whose removal keeps its path intact.
  bool stealable(VertexId w) const {
    const int q = owner_[static_cast<std::size_t>(w)];
    if (q < 0) return false;
    const auto& p = paths_[static_cast<std::size_t>(q)];
    if (p.size() < 3 || p.front() == w || p.back() == w) return false;
    const auto it = std::find(p.begin(), p.end(), w);
    return adj(*(it - 1), *(it + 1));
  }

  // Like seed, but may route through stealable vertices of other paths.
  bool seed_stealing(std::size_t i) {
    const auto [a, b] = pairs_[i];
    std::vector<VertexId> parent(static_cast<std::size_t>(n_), kNoVertex);
    std::vector<char> seen(static_cast<std::size_t>(n_), 0);
    std::queue<VertexId> q;
    q.push(a);
    seen[static_cast<std::size_t>(a)] = 1;
    std::vector<VertexId> found;
    while (!q.empty() && found.empty()) {
      const VertexId v = q.front();
      q.pop();
      for (VertexId w : nbrs_[static_cast<std::size_t>(v)]) {
        if (seen[static_cast<std::size_t>(w)]) continue;
        if (w == b) {
          found.push_back(b);
          for (VertexId cur = v; cur != kNoVertex; cur = parent[static_cast<std::size_t>(cur)]) found.push_back(cur);
          std::reverse(found.begin(), found.end());
          break;
        }
        const int own = owner_[static_cast<std::size_t>(w)];
        if (own == static_cast<int>(i) || (own >= 0 && !stealable(w))) continue;
        seen[static_cast<std::size_t>(w)] = 1;
        parent[static_cast<std::size_t>(w)] = v;
        q.push(w);
      }
    }
    if (found.empty()) return false;
    const auto saved_paths = paths_;
    const auto saved_owner = owner_;
    for (std::size_t t = 1; t + 1 < found.size(); ++t) {
      const VertexId w = found[t];
      if (owner_[static_cast<std::size_t>(w)] < 0) continue;
      if (!stealable(w)) {
        paths_ = saved_paths;
        owner_ = saved_owner;
        return false;
      }
      auto& p = paths_[static_cast<std::size_t>(owner_[static_cast<std::size_t>(w)])];
      p.erase(std::find(p.begin(), p.end(), w));
    }
    paths_[i] = found;
    claim(i, found);
    return true;
  }

  // Shortest a-b path through unowned vertices, random tie-breaks.
  bool seed(std::size_t i) {
    const auto [a, b] = pairs_[i];
    if (adj(a, b)) {
      paths_[i] = {a, b};
      return true;
    }
    std::vector<VertexId> parent(static_cast<std::size_t>(n_), kNoVertex);
    std::vector<char> seen(static_cast<std::size_t>(n_), 0);
    std::queue<VertexId> q;
    q.push(a);
    seen[static_cast<std::size_t>(a)] = 1;
    std::vector<VertexId> nb;
    while (!q.empty()) {
      const VertexId v = q.front();
      q.pop();
      nb = nbrs_[static_cast<std::size_t>(v)];
      std::shuffle(nb.begin(), nb.end(), rng_);
      for (VertexId w : nb) {
        if (seen[static_cast<std::size_t>(w)]) continue;
        if (w == b) {
          std::vector<VertexId> path{b};
          for (VertexId cur = v; cur != kNoVertex; cur = parent[static_cast<std::size_t>(cur)]) path.push_back(cur);
          std::reverse(path.begin(), path.end());
          paths_[i] = path;
          claim(i, path);
          return true;
        }
        if (owner_[static_cast<std::size_t>(w)] >= 0) continue;
        seen[static_cast<std::size_t>(w)] = 1;
        parent[static_cast<std::size_t>(w)] = v;
        q.push(w);
      }
    }
    paths_[i] = {a};
    return false;
  }

  bool insert(VertexId u) {
    const std::size_t start = rng_() % paths_.size();
    for (std::size_t s = 0; s < paths_.size(); ++s) {
      const std::size_t i = (start + s) % paths_.size();
      auto& p = paths_[i];
      for (std::size_t j = 0; j + 1 < p.size(); ++j) {
        if (adj(u, p[j]) && adj(u, p[j + 1])) {
          p.insert(p.begin() + static_cast<std::ptrdiff_t>(j) + 1, u);
          owner_[static_cast<std::size_t>(u)] = static_cast<int>(i);
          return true;
        }
      }
    }
    return false;
  }

  // p[j] ~ u ~ p[m] with p[j+1] ~ p[m+1]: a..p[j] u p[m]..p[j+1] p[m+1]..b.
  bool insert_reversing(VertexId u) {
    for (std::size_t i = 0; i < paths_.size(); ++i) {
      auto& p = paths_[i];
      const std::size_t len = p.size();
      for (std::size_t j = 0; j + 2 < len; ++j) {
        if (!adj(u, p[j])) continue;
        for (std::size_t m = j + 1; m + 1 < len; ++m) {
          if (adj(u, p[m]) && adj(p[j + 1], p[m + 1])) {
            std::reverse(p.begin() + static_cast<std::ptrdiff_t>(j) + 1, p.begin() + static_cast<std::ptrdiff_t>(m) + 1);
            p.insert(p.begin() + static_cast<std::ptrdiff_t>(j) + 1, u);
            owner_[static_cast<std::size_t>(u)] = static_cast<int>(i);
            return true;
          }
        }
      }
    }
    return false;
  }

  // p[j] ~ u ~ w ~ p[j+1] for another uncovered w.
  bool insert_with_partner(VertexId u) {
    for (VertexId w : nbrs_[static_cast<std::size_t>(u)]) {
      if (owner_[static_cast<std::size_t>(w)] >= 0) continue;
      for (std::size_t i = 0; i < paths_.size(); ++i) {
        auto& p = paths_[i];
        for (std::size_t j = 0; j + 1 < p.size(); ++j) {
          if (adj(p[j], u) && adj(w, p[j + 1])) {
            p.insert(p.begin() + static_cast<std::ptrdiff_t>(j) + 1, {u, w});
            owner_[static_cast<std::size_t>(u)] = static_cast<int>(i);
            owner_[static_cast<std::size_t>(w)] = static_cast<int>(i);
            return true;
          }
        }
      }
    }
    return false;
  }

  // u takes the place of p[j] (u ~ p[j-1], p[j+1]) and p[j] is inserted
  // somewhere else.
  bool insert_by_ejection(VertexId u) {
    for (std::size_t i = 0; i < paths_.size(); ++i) {
      for (std::size_t j = 1; j + 1 < paths_[i].size(); ++j) {
        auto& p = paths_[i];
        if (!adj(u, p[j - 1]) || !adj(u, p[j + 1])) continue;
        const VertexId out = p[j];
        p[j] = u;
        owner_[static_cast<std::size_t>(u)] = static_cast<int>(i);
        owner_[static_cast<std::size_t>(out)] = -1;
        if (insert(out) || insert_reversing(out)) return true;
        paths_[i][j] = out;
        owner_[static_cast<std::size_t>(out)] = static_cast<int>(i);
        owner_[static_cast<std::size_t>(u)] = -1;
      }
    }
    return false;
  }

  // Moves an interior vertex whose neighbors on the path are adjacent to a
  // random slot elsewhere.
  bool relocate() {
    const std::size_t i = rng_() % paths_.size();
    auto& p = paths_[i];
    if (p.size() < 3) return false;
    const std::size_t j = 1 + rng_() % (p.size() - 2);
    if (!adj(p[j - 1], p[j + 1])) return false;
    const VertexId v = p[j];
    std::vector<std::pair<std::size_t, std::size_t>> slots;
    for (std::size_t q = 0; q < paths_.size(); ++q) {
      const auto& r = paths_[q];
      for (std::size_t m = 0; m + 1 < r.size(); ++m) {
        if (r[m] == v || r[m + 1] == v) continue;
        if (adj(v, r[m]) && adj(v, r[m + 1])) slots.emplace_back(q, m);
      }
    }
    if (slots.empty()) return false;
    const auto [q, m] = slots[rng_() % slots.size()];
    p.erase(p.begin() + static_cast<std::ptrdiff_t>(j));
    auto& r = paths_[q];
    std::size_t at = m + 1;
    if (q == i && m >= j) --at;
    r.insert(r.begin() + static_cast<std::ptrdiff_t>(at), v);
    owner_[static_cast<std::size_t>(v)] = static_cast<int>(q);
    return true;
  }

  // Neutral move: relocate an interior vertex, reverse a segment of a path
  // (endpoints fixed) or let an uncovered vertex take the place of an
  // interior vertex.
  void perturb() {
    if (rng_() % 3 == 0 && relocate()) return;
    if (rng_() & 1U) {
      const VertexId u = uncovered_[rng_() % uncovered_.size()];
      std::vector<std::pair<std::size_t, std::size_t>> spots;
      for (std::size_t i = 0; i < paths_.size(); ++i) {
        const auto& p = paths_[i];
        for (std::size_t j = 1; j + 1 < p.size(); ++j) {
          if (adj(u, p[j - 1]) && adj(u, p[j + 1])) spots.emplace_back(i, j);
        }
      }
      if (!spots.empty()) {
        const auto [i, j] = spots[rng_() % spots.size()];
        const VertexId out = paths_[i][j];
        paths_[i][j] = u;
        owner_[static_cast<std::size_t>(u)] = static_cast<int>(i);
        owner_[static_cast<std::size_t>(out)] = -1;
        std::replace(uncovered_.begin(), uncovered_.end(), u, out);
        return;
      }
    }
    std::vector<std::size_t> long_paths;
    for (std::size_t i = 0; i < paths_.size(); ++i) {
      if (paths_[i].size() >= 4) long_paths.push_back(i);
    }
    if (long_paths.empty()) return;
    auto& p = paths_[long_paths[rng_() % long_paths.size()]];
    const std::size_t j = rng_() % (p.size() - 3);
    std::vector<std::size_t> ms;
    for (std::size_t m = j + 2; m + 1 < p.size(); ++m) {
      if (adj(p[j], p[m]) && adj(p[j + 1], p[m + 1])) ms.push_back(m);
    }
    if (ms.empty()) return;
    const std::size_t m = ms[rng_() % ms.size()];
    std::reverse(p.begin() + static_cast<std::ptrdiff_t>(j) + 1, p.begin() + static_cast<std::ptrdiff_t>(m) + 1);
  }

  VertexId n_;
  std::span<const VertexPair> pairs_;
  std::mt19937_64& rng_;
  std::vector<char> adj_;
  std::vector<std::vector<VertexId>> nbrs_;
  std::vector<std::vector<VertexId>> paths_;
  std::vector<int> owner_;
  std::vector<VertexId> uncovered_;
};

void check_pairs(const MultiGraph& g, std::span<const VertexPair> pairs) {
  if (pairs.empty()) throw Error(ErrorCode::PreconditionViolated, "path cover needs at least one pair");
  std::vector<char> used(static_cast<std::size_t>(g.order()), 0);
  for (const auto& [a, b] : pairs) {
    if (a < 0 || b < 0 || a >= g.order() || b >= g.order()) {
      throw Error(ErrorCode::VertexOutOfRange, "pair endpoint outside the graph");
    }
    if (a == b || used[static_cast<std::size_t>(a)] || used[static_cast<std::size_t>(b)]) {
      throw Error(ErrorCode::PreconditionViolated, "pair endpoints must be distinct");
    }
    used[static_cast<std::size_t>(a)] = used[static_cast<std::size_t>(b)] = 1;
  }
}

}  // namespace

PathCover path_cover(const MultiGraph& g, std::span<const VertexPair> pairs,
                     const PathCoverBudget& budget, std::mt19937_64& rng, PathCoverStats* stats) {
  check_pairs(g, pairs);
  PathCoverStats local;
  PathCoverStats& st = stats != nullptr ? *stats : local;
  PathCover best;
  best.endpoints.assign(pairs.begin(), pairs.end());
  best.paths.assign(pairs.size(), {});

  // Degree obstructions make every restart futile.
  std::vector<char> endpoint(static_cast<std::size_t>(g.order()), 0);
  for (const auto& [a, b] : pairs) endpoint[static_cast<std::size_t>(a)] = endpoint[static_cast<std::size_t>(b)] = 1;
  for (VertexId v = 0; v < g.order(); ++v) {
    const auto distinct = static_cast<int>(g.neighbors(v).size());
    if (distinct < (endpoint[static_cast<std::size_t>(v)] ? 1 : 2)) {
      throw CoverNotFoundError("vertex " + std::to_string(v) + " has too few neighbors", best);
    }
  }

  CoverSearch search(g, pairs, rng);
  const std::int64_t rotation_budget = static_cast<std::int64_t>(budget.rotations_per_vertex) * g.order();
  const int restarts = std::max(1, budget.restarts);
  for (int r = 0; r < restarts; ++r) {
    ++st.restarts;
    const bool ok = search.run(rotation_budget, st);
    PathCover attempt = search.snapshot();
    if (ok) {
      const CoverCheck check = validate_path_cover(g, pairs, attempt);
      if (!check.ok) throw Error(ErrorCode::InternalRepairFailure, "path cover invalid: " + check.message);
      return attempt;
    }
    if (attempt.covered() > best.covered()) best = std::move(attempt);
  }
  const std::string what = "no spanning path cover after " + std::to_string(restarts) + " restarts; best covers " +
                           std::to_string(best.covered()) + " of " + std::to_string(g.order()) + " vertices";
  throw CoverNotFoundError(what, std::move(best));
}

PathCover path_cover_star(const MultiGraph& g, VertexId x, std::span<const VertexPair> pairs,
                          const PathCoverBudget& budget, std::mt19937_64& rng, PathCoverStats* stats) {
  check_pairs(g, pairs);
  if (x < 0 || x >= g.order()) throw Error(ErrorCode::VertexOutOfRange, "center outside the graph");
  std::vector<char> endpoint(static_cast<std::size_t>(g.order()), 0);
  std::size_t x_pair = pairs.size();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    endpoint[static_cast<std::size_t>(pairs[i].first)] = 1;
    endpoint[static_cast<std::size_t>(pairs[i].second)] = 1;
    if (pairs[i].first == x || pairs[i].second == x) x_pair = i;
  }
  std::vector<VertexId> free_nbrs;
  for (VertexId w : g.neighbors(x)) {
    if (!endpoint[static_cast<std::size_t>(w)]) free_nbrs.push_back(w);
  }
  // Replacing x needs one free neighbor; splitting a pair at x needs two.
  const std::size_t needed = x_pair < pairs.size() ? 1 : 2;
  if (free_nbrs.size() < needed) {
    throw Error(ErrorCode::PreconditionViolated,
                "center has " + std::to_string(free_nbrs.size()) + " neighbors outside the endpoints");
  }
  std::sort(free_nbrs.begin(), free_nbrs.end(), [&](VertexId p, VertexId q) {
    const int mp = g.multiplicity(x, p);
    const int mq = g.multiplicity(x, q);
    return mp != mq ? mp > mq : p < q;
  });

  std::vector<VertexId> rest;
  for (VertexId v = 0; v < g.order(); ++v) {
    if (v != x) rest.push_back(v);
  }
  const InducedSubgraph sub = induced_subgraph(g, rest);
  std::vector<VertexId> to_sub(static_cast<std::size_t>(g.order()), kNoVertex);
  for (std::size_t i = 0; i < sub.to_parent.size(); ++i) {
    to_sub[static_cast<std::size_t>(sub.to_parent[i])] = static_cast<VertexId>(i);
  }
  auto lift = [&](const std::vector<VertexId>& p) {
    std::vector<VertexId> out;
    out.reserve(p.size() + 2);
    for (VertexId v : p) out.push_back(sub.to_parent[static_cast<std::size_t>(v)]);
    return out;
  };
  auto sub_pair = [&](VertexId a, VertexId b) {
    return VertexPair{to_sub[static_cast<std::size_t>(a)], to_sub[static_cast<std::size_t>(b)]};
  };

  const int attempts = static_cast<int>(std::min<std::size_t>(3, free_nbrs.size() + 1 - needed));
  std::unique_ptr<CoverNotFoundError> last;
  for (int t = 0; t < attempts; ++t) {
    std::vector<VertexPair> reduced;
    PathCover out;
    out.endpoints.assign(pairs.begin(), pairs.end());
    try {
      if (x_pair < pairs.size()) {
        // x is an endpoint; orient its pair as (x, b_t) and replace x by a
        // neighbor a_t' outside the endpoints.
        const VertexId a_prime = free_nbrs[static_cast<std::size_t>(t)];
        for (std::size_t i = 0; i < pairs.size(); ++i) {
          if (i == x_pair) continue;
          reduced.push_back(sub_pair(pairs[i].first, pairs[i].second));
        }
        const bool x_first = pairs[x_pair].first == x;
        const VertexId b_t = x_first ? pairs[x_pair].second : pairs[x_pair].first;
        reduced.push_back(sub_pair(a_prime, b_t));
        const PathCover inner = path_cover(sub.graph, reduced, budget, rng, stats);
        std::size_t r = 0;
        out.paths.resize(pairs.size());
        for (std::size_t i = 0; i < pairs.size(); ++i) {
          if (i == x_pair) continue;
          out.paths[i] = lift(inner.paths[r++]);
        }
        std::vector<VertexId> pt{x};
        for (VertexId v : lift(inner.paths[r])) pt.push_back(v);
        if (!x_first) std::reverse(pt.begin(), pt.end());
        out.paths[x_pair] = std::move(pt);
      } else {
        // Split the last pair (a_t, b_t) into (a_t, x1) and (x2, b_t).
        const VertexId x1 = free_nbrs[static_cast<std::size_t>(t)];
        const VertexId x2 = free_nbrs[static_cast<std::size_t>(t) + 1];
        const std::size_t last = pairs.size() - 1;
        for (std::size_t i = 0; i < last; ++i) reduced.push_back(sub_pair(pairs[i].first, pairs[i].second));
        reduced.push_back(sub_pair(pairs[last].first, x1));
        reduced.push_back(sub_pair(x2, pairs[last].second));
        const PathCover inner = path_cover(sub.graph, reduced, budget, rng, stats);
        out.paths.resize(pairs.size());
        for (std::size_t i = 0; i < last; ++i) out.paths[i] = lift(inner.paths[i]);
        std::vector<VertexId> pt = lift(inner.paths[last]);
        pt.push_back(x);
        for (VertexId v : lift(inner.paths[last + 1])) pt.push_back(v);
        out.paths[last] = std::move(pt);
      }
    } catch (const CoverNotFoundError& e) {
      last = std::make_unique<CoverNotFoundError>(e);
      continue;
    }
    const CoverCheck check = validate_path_cover(g, pairs, out);
    if (!check.ok) throw Error(ErrorCode::InternalRepairFailure, "stitched cover invalid: " + check.message);
    return out;
  }
  throw CoverNotFoundError(last ? last->detail() : "no path cover", last ? last->partial() : PathCover{});
}

}  // namespace chroma
