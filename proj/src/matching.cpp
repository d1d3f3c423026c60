#include "chroma/matching.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace chroma {

std::vector<int> hopcroft_karp(const std::vector<std::vector<int>>& adj, int right_count) {
  const int left_count = static_cast<int>(adj.size());
  constexpr int kInf = std::numeric_limits<int>::max();
  std::vector<int> mate_l(static_cast<std::size_t>(left_count), -1);
  std::vector<int> mate_r(static_cast<std::size_t>(right_count), -1);
  std::vector<int> dist(static_cast<std::size_t>(left_count), kInf);
  std::vector<std::size_t> it(static_cast<std::size_t>(left_count), 0);

  auto bfs = [&]() {
    std::queue<int> q;
    bool found = false;
    for (int u = 0; u < left_count; ++u) {
      if (mate_l[static_cast<std::size_t>(u)] < 0) {
        dist[static_cast<std::size_t>(u)] = 0;
        q.push(u);
      } else {
        dist[static_cast<std::size_t>(u)] = kInf;
      }
    }
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int w : adj[static_cast<std::size_t>(u)]) {
        const int m = mate_r[static_cast<std::size_t>(w)];
        if (m < 0) {
          found = true;
        } else if (dist[static_cast<std::size_t>(m)] == kInf) {
          dist[static_cast<std::size_t>(m)] = dist[static_cast<std::size_t>(u)] + 1;
          q.push(m);
        }
      }
    }
    return found;
  };

  // Iterative DFS along layered edges.
  auto augment = [&](int root) {
    std::vector<int> stack{root};
    std::vector<int> via;  // right vertex used to descend from stack[i]
    while (!stack.empty()) {
      const int u = stack.back();
      auto& pos = it[static_cast<std::size_t>(u)];
      const auto& nbrs = adj[static_cast<std::size_t>(u)];
      bool descended = false;
      while (pos < nbrs.size()) {
        const int w = nbrs[pos++];
        const int m = mate_r[static_cast<std::size_t>(w)];
        if (m < 0) {
          // Flip the alternating path root..u..w.
          via.push_back(w);
          for (std::size_t i = 0; i < stack.size(); ++i) {
            const int l = stack[i];
            const int r = via[i];
            mate_l[static_cast<std::size_t>(l)] = r;
            mate_r[static_cast<std::size_t>(r)] = l;
          }
          return true;
        }
        if (dist[static_cast<std::size_t>(m)] == dist[static_cast<std::size_t>(u)] + 1) {
          via.push_back(w);
          stack.push_back(m);
          descended = true;
          break;
        }
      }
      if (!descended) {
        dist[static_cast<std::size_t>(u)] = kInf;
        stack.pop_back();
        if (!via.empty()) via.pop_back();
      }
    }
    return false;
  };

  while (bfs()) {
    std::fill(it.begin(), it.end(), 0);
    for (int u = 0; u < left_count; ++u) {
      if (mate_l[static_cast<std::size_t>(u)] < 0) augment(u);
    }
  }
  return mate_l;
}

namespace {

struct LocalBipartite {
  std::vector<VertexId> left;
  std::vector<VertexId> right;
  std::vector<int> right_index;  // host vertex -> right local index
  std::vector<std::vector<int>> adj;
};

LocalBipartite localize(const MultiGraph& g, const Bipartition& sides) {
  LocalBipartite lb;
  lb.left = sides.left;
  lb.right = sides.right;
  std::sort(lb.left.begin(), lb.left.end());
  std::sort(lb.right.begin(), lb.right.end());
  std::vector<char> side(static_cast<std::size_t>(g.order()), 0);
  lb.right_index.assign(static_cast<std::size_t>(g.order()), -1);
  for (VertexId v : lb.left) side[static_cast<std::size_t>(v)] = 1;
  for (std::size_t i = 0; i < lb.right.size(); ++i) {
    const VertexId v = lb.right[i];
    if (side[static_cast<std::size_t>(v)] == 1) {
      throw Error(ErrorCode::OverlappingSides, "vertex " + std::to_string(v) + " on both sides");
    }
    side[static_cast<std::size_t>(v)] = 2;
    lb.right_index[static_cast<std::size_t>(v)] = static_cast<int>(i);
  }
  for (VertexId v = 0; v < g.order(); ++v) {
    for (VertexId w : g.neighbors(v)) {
      const char a = side[static_cast<std::size_t>(v)];
      const char b = side[static_cast<std::size_t>(w)];
      if (a == 0 || b == 0 || a == b) {
        throw Error(ErrorCode::NotBipartite, "edge " + std::to_string(v) + "-" + std::to_string(w) +
                                                 " is not between the sides");
      }
    }
  }
  lb.adj.resize(lb.left.size());
  for (std::size_t i = 0; i < lb.left.size(); ++i) {
    for (VertexId w : g.neighbors(lb.left[i])) lb.adj[i].push_back(lb.right_index[static_cast<std::size_t>(w)]);
    std::sort(lb.adj[i].begin(), lb.adj[i].end());
  }
  return lb;
}

}  // namespace

Matching max_bipartite_matching(const MultiGraph& g, const Bipartition& sides) {
  const LocalBipartite lb = localize(g, sides);
  const auto mate = hopcroft_karp(lb.adj, static_cast<int>(lb.right.size()));
  Matching m;
  for (std::size_t i = 0; i < mate.size(); ++i) {
    if (mate[i] >= 0) m.edges.emplace_back(lb.left[i], lb.right[static_cast<std::size_t>(mate[i])]);
  }
  return m;
}

HallAdvisory check_hall_hypotheses(const MultiGraph& h, const Bipartition& sides,
                                   const HallContext& ctx) {
  HallAdvisory adv;
  adv.observed_min_degree = std::numeric_limits<int>::max();
  for (const auto* side : {&sides.left, &sides.right}) {
    for (VertexId v : *side) {
      adv.observed_min_degree = std::min(adv.observed_min_degree, h.degree(v));
      if (ctx.ambient != nullptr && v != ctx.center) {
        const auto& other = (side == &sides.left) ? sides.right : sides.left;
        int deleted = 0;
        for (VertexId w : other) deleted += ctx.ambient->multiplicity(v, w) - h.multiplicity(v, w);
        adv.observed_max_deleted = std::max(adv.observed_max_deleted, deleted);
      }
    }
  }
  if (adv.observed_min_degree == std::numeric_limits<int>::max()) adv.observed_min_degree = 0;
  adv.min_degree_ok = adv.observed_min_degree > ctx.min_degree_bound;
  adv.deleted_budget_ok = ctx.ambient == nullptr || adv.observed_max_deleted <= ctx.deleted_edge_budget;
  return adv;
}

Matching hall_perfect_matching(const MultiGraph& h, const Bipartition& sides, const HallContext& ctx,
                               HallAdvisory* advisory) {
  if (sides.left.size() != sides.right.size()) {
    throw Error(ErrorCode::PreconditionViolated, "perfect matching needs |X| = |Y|");
  }
  if (advisory != nullptr) *advisory = check_hall_hypotheses(h, sides, ctx);
  const LocalBipartite lb = localize(h, sides);
  const auto mate = hopcroft_karp(lb.adj, static_cast<int>(lb.right.size()));
  Matching m;
  for (std::size_t i = 0; i < mate.size(); ++i) {
    if (mate[i] >= 0) m.edges.emplace_back(lb.left[i], lb.right[static_cast<std::size_t>(mate[i])]);
  }
  if (m.size() == lb.left.size()) return m;

  // Alternating reachability from free left vertices: the reached left set
  // has exactly (reached right set + free roots) members.
  std::vector<int> mate_r(lb.right.size(), -1);
  for (std::size_t i = 0; i < mate.size(); ++i) {
    if (mate[i] >= 0) mate_r[static_cast<std::size_t>(mate[i])] = static_cast<int>(i);
  }
  std::vector<char> seen_l(lb.left.size(), 0);
  std::vector<char> seen_r(lb.right.size(), 0);
  std::queue<int> q;
  for (std::size_t i = 0; i < mate.size(); ++i) {
    if (mate[i] < 0) {
      seen_l[i] = 1;
      q.push(static_cast<int>(i));
    }
  }
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (int w : lb.adj[static_cast<std::size_t>(u)]) {
      if (seen_r[static_cast<std::size_t>(w)]) continue;
      seen_r[static_cast<std::size_t>(w)] = 1;
      const int nxt = mate_r[static_cast<std::size_t>(w)];
      if (nxt >= 0 && !seen_l[static_cast<std::size_t>(nxt)]) {
        seen_l[static_cast<std::size_t>(nxt)] = 1;
        q.push(nxt);
      }
    }
  }
  std::vector<VertexId> violator;
  std::vector<VertexId> hood;
  for (std::size_t i = 0; i < lb.left.size(); ++i) {
    if (seen_l[i]) violator.push_back(lb.left[i]);
  }
  for (std::size_t i = 0; i < lb.right.size(); ++i) {
    if (seen_r[i]) hood.push_back(lb.right[i]);
  }
  std::string what =
      "maximum matching has " + std::to_string(m.size()) + " of " + std::to_string(lb.left.size()) + " edges";
  throw NoPerfectMatchingError(what, std::move(violator), std::move(hood), std::move(m));
}

EdgeColoring konig_edge_coloring(const MultiGraph& g, const Bipartition& sides) {
  const LocalBipartite lb = localize(g, sides);
  const int delta = g.max_degree();
  EdgeColoring coloring(g.order(), delta);
  if (delta == 0) return coloring;

  // Pad to a Delta-regular bipartite multigraph on m + m vertices; dummy
  // copies are tracked separately and never colored.
  const std::size_t m = std::max(lb.left.size(), lb.right.size());
  std::vector<int> real(m * m, 0);
  std::vector<int> dummy(m * m, 0);
  std::vector<int> def_l(m, delta);
  std::vector<int> def_r(m, delta);
  for (std::size_t i = 0; i < lb.left.size(); ++i) {
    for (int j : lb.adj[i]) {
      const int mult = g.multiplicity(lb.left[i], lb.right[static_cast<std::size_t>(j)]);
      real[i * m + static_cast<std::size_t>(j)] = mult;
      def_l[i] -= mult;
      def_r[static_cast<std::size_t>(j)] -= mult;
    }
  }
  for (std::size_t i = 0, j = 0; i < m && j < m;) {
    if (def_l[i] == 0) {
      ++i;
      continue;
    }
    if (def_r[j] == 0) {
      ++j;
      continue;
    }
    const int take = std::min(def_l[i], def_r[j]);
    dummy[i * m + j] += take;
    def_l[i] -= take;
    def_r[j] -= take;
  }

  for (Color col = 1; col <= delta; ++col) {
    std::vector<std::vector<int>> adj(m);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        if (real[i * m + j] + dummy[i * m + j] > 0) adj[i].push_back(static_cast<int>(j));
      }
    }
    const auto mate = hopcroft_karp(adj, static_cast<int>(m));
    for (std::size_t i = 0; i < m; ++i) {
      const int j = mate[i];
      if (j < 0) throw Error(ErrorCode::InternalRepairFailure, "regular bipartite padding lost a perfect matching");
      const std::size_t cell = i * m + static_cast<std::size_t>(j);
      if (real[cell] > 0) {
        --real[cell];
        coloring.assign(lb.left[i], lb.right[static_cast<std::size_t>(j)], col);
      } else {
        --dummy[cell];
      }
    }
  }
  return coloring;
}

namespace {

class Blossom {
 public:
  Blossom(const std::vector<std::vector<int>>& adj, std::vector<int>& mate)
      : adj_(adj), mate_(mate), n_(static_cast<int>(adj.size())), parent_(adj.size()), base_(adj.size()),
        used_(adj.size()), in_blossom_(adj.size()), on_path_(adj.size()) {}

  bool augment_from(int root) {
    const int end = find_path(root);
    if (end < 0) return false;
    for (int v = end; v >= 0;) {
      const int pv = parent_[static_cast<std::size_t>(v)];
      const int next = mate_[static_cast<std::size_t>(pv)];
      mate_[static_cast<std::size_t>(v)] = pv;
      mate_[static_cast<std::size_t>(pv)] = v;
      v = next;
    }
    return true;
  }

 private:
  int lca(int a, int b) {
    std::fill(on_path_.begin(), on_path_.end(), 0);
    for (;;) {
      a = base_[static_cast<std::size_t>(a)];
      on_path_[static_cast<std::size_t>(a)] = 1;
      if (mate_[static_cast<std::size_t>(a)] < 0) break;
      a = parent_[static_cast<std::size_t>(mate_[static_cast<std::size_t>(a)])];
    }
    for (;;) {
      b = base_[static_cast<std::size_t>(b)];
      if (on_path_[static_cast<std::size_t>(b)]) return b;
      b = parent_[static_cast<std::size_t>(mate_[static_cast<std::size_t>(b)])];
    }
  }

  void mark_path(int v, int b, int child) {
    while (base_[static_cast<std::size_t>(v)] != b) {
      const int m = mate_[static_cast<std::size_t>(v)];
      in_blossom_[static_cast<std::size_t>(base_[static_cast<std::size_t>(v)])] = 1;
      in_blossom_[static_cast<std::size_t>(base_[static_cast<std::size_t>(m)])] = 1;
      parent_[static_cast<std::size_t>(v)] = child;
      child = m;
      v = parent_[static_cast<std::size_t>(m)];
    }
  }

  int find_path(int root) {
    std::fill(used_.begin(), used_.end(), 0);
    std::fill(parent_.begin(), parent_.end(), -1);
    for (int i = 0; i < n_; ++i) base_[static_cast<std::size_t>(i)] = i;
    used_[static_cast<std::size_t>(root)] = 1;
    std::queue<int> q;
    q.push(root);
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (int to : adj_[static_cast<std::size_t>(v)]) {
        const auto ut = static_cast<std::size_t>(to);
        if (base_[static_cast<std::size_t>(v)] == base_[ut] || mate_[static_cast<std::size_t>(v)] == to) continue;
        if (to == root || (mate_[ut] >= 0 && parent_[static_cast<std::size_t>(mate_[ut])] >= 0)) {
          const int cur = lca(v, to);
          std::fill(in_blossom_.begin(), in_blossom_.end(), 0);
          mark_path(v, cur, to);
          mark_path(to, cur, v);
          for (int i = 0; i < n_; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            if (in_blossom_[static_cast<std::size_t>(base_[ui])]) {
              base_[ui] = cur;
              if (!used_[ui]) {
                used_[ui] = 1;
                q.push(i);
              }
            }
          }
        } else if (parent_[ut] < 0) {
          parent_[ut] = v;
          if (mate_[ut] < 0) return to;
          const int m = mate_[ut];
          used_[static_cast<std::size_t>(m)] = 1;
          q.push(m);
        }
      }
    }
    return -1;
  }

  const std::vector<std::vector<int>>& adj_;
  std::vector<int>& mate_;
  int n_;
  std::vector<int> parent_;
  std::vector<int> base_;
  std::vector<char> used_;
  std::vector<char> in_blossom_;
  std::vector<char> on_path_;
};

}  // namespace

int augment_general_matching(const std::vector<std::vector<int>>& adj, std::vector<int>& mate) {
  if (mate.size() != adj.size()) throw Error(ErrorCode::PreconditionViolated, "mate and adjacency sizes differ");
  Blossom search(adj, mate);
  int count = 0;
  for (int v = 0; v < static_cast<int>(adj.size()); ++v) {
    if (mate[static_cast<std::size_t>(v)] < 0 && search.augment_from(v)) ++count;
  }
  return count;
}

}  // namespace chroma
