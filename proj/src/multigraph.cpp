#include "chroma/multigraph.hpp"

#include <algorithm>
#include <string>

namespace chroma {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::LoopRejected: return "LoopRejected";
    case ErrorCode::MultiplicityViolation: return "MultiplicityViolation";
    case ErrorCode::OverlappingSides: return "OverlappingSides";
    case ErrorCode::VertexOutOfRange: return "VertexOutOfRange";
    case ErrorCode::ColorOutOfPalette: return "ColorOutOfPalette";
    case ErrorCode::StaleChain: return "StaleChain";
    case ErrorCode::InternalRepairFailure: return "InternalRepairFailure";
    case ErrorCode::InfeasiblePalette: return "InfeasiblePalette";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::RetriesExhausted: return "RetriesExhausted";
    case ErrorCode::NotBipartite: return "NotBipartite";
    case ErrorCode::NoPerfectMatching: return "NoPerfectMatching";
    case ErrorCode::CoverNotFound: return "CoverNotFound";
    case ErrorCode::NoNonNeighbor: return "NoNonNeighbor";
    case ErrorCode::NoAlternatingPath: return "NoAlternatingPath";
    case ErrorCode::RenameInfeasible: return "RenameInfeasible";
    case ErrorCode::ResidualNotRegular: return "ResidualNotRegular";
    case ErrorCode::FactorizationFailed: return "FactorizationFailed";
    case ErrorCode::NotRealizable: return "NotRealizable";
    case ErrorCode::OverfullInput: return "OverfullInput";
    case ErrorCode::DegenerateDeficiency: return "DegenerateDeficiency";
    case ErrorCode::NeighborShortage: return "NeighborShortage";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::NotTotal: return "NotTotal";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

MultiGraph::MultiGraph(VertexId n, std::optional<VertexId> multi_center)
    : n_(n), center_(multi_center) {
  if (n < 0) throw Error(ErrorCode::VertexOutOfRange, "negative vertex count");
  if (center_) check_vertex(*center_);
  mult_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
  degree_.assign(static_cast<std::size_t>(n), 0);
  adj_.resize(static_cast<std::size_t>(n));
}

MultiGraph MultiGraph::unrestricted(VertexId n) {
  MultiGraph g(n);
  g.unrestricted_ = true;
  return g;
}

void MultiGraph::check_vertex(VertexId v) const {
  if (v < 0 || v >= n_) {
    throw Error(ErrorCode::VertexOutOfRange,
                "vertex " + std::to_string(v) + " not in [0," + std::to_string(n_) + ")");
  }
}

int MultiGraph::multiplicity(VertexId u, VertexId v) const {
  check_vertex(u);
  check_vertex(v);
  return mult_[index(u, v)];
}

int MultiGraph::degree(VertexId v) const {
  check_vertex(v);
  return degree_[static_cast<std::size_t>(v)];
}

std::span<const VertexId> MultiGraph::neighbors(VertexId v) const {
  check_vertex(v);
  return adj_[static_cast<std::size_t>(v)];
}

int MultiGraph::max_degree() const noexcept {
  return degree_.empty() ? 0 : *std::max_element(degree_.begin(), degree_.end());
}

int MultiGraph::min_degree() const noexcept {
  return degree_.empty() ? 0 : *std::min_element(degree_.begin(), degree_.end());
}

int MultiGraph::max_multiplicity() const noexcept {
  return mult_.empty() ? 0 : *std::max_element(mult_.begin(), mult_.end());
}

void MultiGraph::add_edge(VertexId u, VertexId v, int count) {
  check_vertex(u);
  check_vertex(v);
  if (u == v) throw Error(ErrorCode::LoopRejected, "loop at vertex " + std::to_string(u));
  if (count <= 0) return;
  const int current = mult_[index(u, v)];
  if (!unrestricted_ && current + count > 1 && (!center_ || (*center_ != u && *center_ != v))) {
    throw Error(ErrorCode::MultiplicityViolation,
                "parallel edge " + std::to_string(u) + "-" + std::to_string(v) +
                    " avoids the multi-center");
  }
  if (current == 0) {
    adj_[static_cast<std::size_t>(u)].push_back(v);
    adj_[static_cast<std::size_t>(v)].push_back(u);
  }
  mult_[index(u, v)] += count;
  mult_[index(v, u)] += count;
  degree_[static_cast<std::size_t>(u)] += count;
  degree_[static_cast<std::size_t>(v)] += count;
  edge_count_ += count;
}

void MultiGraph::remove_edge(VertexId u, VertexId v, int count) {
  check_vertex(u);
  check_vertex(v);
  if (count <= 0) return;
  int& m = mult_[index(u, v)];
  if (m < count) {
    throw Error(ErrorCode::PreconditionViolated,
                "removing " + std::to_string(count) + " copies of " + std::to_string(u) + "-" +
                    std::to_string(v) + " but only " + std::to_string(m) + " exist");
  }
  m -= count;
  mult_[index(v, u)] -= count;
  degree_[static_cast<std::size_t>(u)] -= count;
  degree_[static_cast<std::size_t>(v)] -= count;
  edge_count_ -= count;
  if (m == 0) {
    auto erase = [](std::vector<VertexId>& list, VertexId w) {
      list.erase(std::find(list.begin(), list.end(), w));
    };
    erase(adj_[static_cast<std::size_t>(u)], v);
    erase(adj_[static_cast<std::size_t>(v)], u);
  }
}

std::vector<EdgeBundle> MultiGraph::edges() const {
  std::vector<EdgeBundle> out;
  out.reserve(static_cast<std::size_t>(edge_count_));
  for (VertexId u = 0; u < n_; ++u) {
    for (VertexId v = u + 1; v < n_; ++v) {
      const int m = mult_[index(u, v)];
      if (m > 0) out.push_back({u, v, m});
    }
  }
  return out;
}

MultiGraph MultiGraph::with_center(std::optional<VertexId> center) const {
  MultiGraph out(n_, center);
  out.unrestricted_ = unrestricted_;
  for (const auto& e : edges()) out.add_edge(e.u, e.v, e.multiplicity);
  return out;
}

InducedSubgraph induced_subgraph(const MultiGraph& g, std::span<const VertexId> s) {
  std::vector<VertexId> members(s.begin(), s.end());
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  std::vector<VertexId> relabel(static_cast<std::size_t>(g.order()), kNoVertex);
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (members[i] < 0 || members[i] >= g.order()) {
      throw Error(ErrorCode::VertexOutOfRange, "induced_subgraph: vertex outside host");
    }
    relabel[static_cast<std::size_t>(members[i])] = static_cast<VertexId>(i);
  }
  std::optional<VertexId> center;
  if (auto c = g.multi_center(); c && relabel[static_cast<std::size_t>(*c)] != kNoVertex) {
    center = relabel[static_cast<std::size_t>(*c)];
  }
  const auto size = static_cast<VertexId>(members.size());
  MultiGraph sub = g.is_unrestricted() ? MultiGraph::unrestricted(size) : MultiGraph(size, center);
  for (VertexId u : members) {
    for (VertexId w : g.neighbors(u)) {
      if (u < w && relabel[static_cast<std::size_t>(w)] != kNoVertex) {
        sub.add_edge(relabel[static_cast<std::size_t>(u)], relabel[static_cast<std::size_t>(w)],
                     g.multiplicity(u, w));
      }
    }
  }
  return {std::move(sub), std::move(members)};
}

BipartiteSubgraph bipartite_between(const MultiGraph& g, std::span<const VertexId> a,
                                    std::span<const VertexId> b) {
  std::vector<char> side(static_cast<std::size_t>(g.order()), 0);
  for (VertexId v : a) {
    if (v < 0 || v >= g.order()) throw Error(ErrorCode::VertexOutOfRange, "bipartite_between");
    side[static_cast<std::size_t>(v)] = 1;
  }
  for (VertexId v : b) {
    if (v < 0 || v >= g.order()) throw Error(ErrorCode::VertexOutOfRange, "bipartite_between");
    if (side[static_cast<std::size_t>(v)] == 1) {
      throw Error(ErrorCode::OverlappingSides, "vertex " + std::to_string(v) + " on both sides");
    }
    side[static_cast<std::size_t>(v)] = 2;
  }
  BipartiteSubgraph out{g.is_unrestricted() ? MultiGraph::unrestricted(g.order())
                                             : MultiGraph(g.order(), g.multi_center()),
                        {}};
  out.sides.left.assign(a.begin(), a.end());
  out.sides.right.assign(b.begin(), b.end());
  for (VertexId u : a) {
    for (VertexId w : g.neighbors(u)) {
      if (side[static_cast<std::size_t>(w)] == 2) out.graph.add_edge(u, w, g.multiplicity(u, w));
    }
  }
  return out;
}

}  // namespace chroma
