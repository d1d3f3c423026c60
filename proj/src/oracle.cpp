#include "chroma/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "chroma/pipeline.hpp"

namespace chroma {
namespace {

class Backtracker {
 public:
  Backtracker(const MultiGraph& g, int k) : n_(g.order()), k_(k), used_(static_cast<std::size_t>(n_), 0) {
    for (const auto& e : g.edges()) {
      for (int s = 0; s < e.multiplicity; ++s) slots_.push_back({e.u, e.v, s});
    }
    std::stable_sort(slots_.begin(), slots_.end(), [&](const Slot& a, const Slot& b) {
      return g.degree(a.u) + g.degree(a.v) > g.degree(b.u) + g.degree(b.v);
    });
    // Keep parallel copies adjacent so their colors can be forced increasing.
    std::vector<Slot> grouped;
    std::vector<char> taken(slots_.size(), 0);
    for (std::size_t i = 0; i < slots_.size(); ++i) {
      if (taken[i]) continue;
      for (std::size_t j = i; j < slots_.size(); ++j) {
        if (!taken[j] && slots_[j].u == slots_[i].u && slots_[j].v == slots_[i].v) {
          grouped.push_back(slots_[j]);
          taken[j] = 1;
        }
      }
    }
    slots_ = std::move(grouped);
    left_.assign(static_cast<std::size_t>(n_), 0);
    for (const auto& s : slots_) {
      ++left_[static_cast<std::size_t>(s.u)];
      ++left_[static_cast<std::size_t>(s.v)];
    }
    class_size_.assign(static_cast<std::size_t>(k_) + 1, 0);
    color_.assign(slots_.size(), 0);
  }

  bool run() { return slots_.empty() || search(0, 0); }
  std::int64_t nodes() const { return nodes_; }

  EdgeColoring coloring() const {
    EdgeColoring c(n_, k_);
    for (std::size_t i = 0; i < slots_.size(); ++i) c.assign(slots_[i].u, slots_[i].v, color_[i]);
    return c;
  }

 private:
  struct Slot {
    VertexId u;
    VertexId v;
    int copy;
  };

  // Picks the open slot with the fewest admissible colors; ties keep the
  // degree-sum order. Only the lowest open copy of a parallel class is
  // eligible. Returns slots_.size() when a slot has no admissible color.
  std::size_t pick(int opened, int& best_count) const {
    std::size_t best = slots_.size();
    best_count = k_ + 1;
    for (std::size_t j = 0; j < slots_.size(); ++j) {
      if (color_[j] != 0) continue;
      if (slots_[j].copy > 0 && color_[j - 1] == 0) continue;
      const std::uint64_t busy =
          used_[static_cast<std::size_t>(slots_[j].u)] | used_[static_cast<std::size_t>(slots_[j].v)];
      const int from = slots_[j].copy > 0 ? color_[j - 1] + 1 : 1;
      const int top = std::min(k_, opened + 1);
      int count = 0;
      for (int c = from; c <= top; ++c) count += (busy >> c) & 1 ? 0 : 1;
      if (count < best_count) {
        best_count = count;
        best = j;
        if (count == 0) return slots_.size();
      }
    }
    return best;
  }

  bool search(std::size_t depth, int opened) {
    ++nodes_;
    if (depth == slots_.size()) return true;
    // Every color class is a matching of at most floor(n/2) edges.
    std::int64_t room = 0;
    for (int c = 1; c <= k_; ++c) room += n_ / 2 - class_size_[static_cast<std::size_t>(c)];
    if (static_cast<std::int64_t>(slots_.size() - depth) > room) return false;

    int count = 0;
    const std::size_t i = pick(opened, count);
    if (i == slots_.size()) return false;
    const Slot& s = slots_[i];
    const auto uu = static_cast<std::size_t>(s.u);
    const auto vv = static_cast<std::size_t>(s.v);
    const int from = s.copy > 0 ? color_[i - 1] + 1 : 1;
    const int top = std::min(k_, opened + 1);
    for (int c = from; c <= top; ++c) {
      const std::uint64_t bit = std::uint64_t{1} << c;
      if ((used_[uu] | used_[vv]) & bit) continue;
      used_[uu] |= bit;
      used_[vv] |= bit;
      --left_[uu];
      --left_[vv];
      ++class_size_[static_cast<std::size_t>(c)];
      color_[i] = c;
      const bool fits = left_[uu] <= k_ - std::popcount(used_[uu]) && left_[vv] <= k_ - std::popcount(used_[vv]);
      if (fits && search(depth + 1, std::max(opened, c))) return true;
      used_[uu] &= ~bit;
      used_[vv] &= ~bit;
      ++left_[uu];
      ++left_[vv];
      --class_size_[static_cast<std::size_t>(c)];
    }
    color_[i] = 0;
    return false;
  }

  VertexId n_;
  int k_;
  std::vector<Slot> slots_;
  std::vector<std::uint64_t> used_;
  std::vector<int> left_;
  std::vector<int> class_size_;
  std::vector<int> color_;
  std::int64_t nodes_ = 0;
};

void check_oracle_size(const MultiGraph& g) {
  if (g.order() > kOracleLimit) {
    throw Error(ErrorCode::TooLarge, "oracle handles at most " + std::to_string(kOracleLimit) + " vertices, got " +
                                         std::to_string(g.order()));
  }
}

std::uint64_t splitmix(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double unit(std::uint64_t& state) { return static_cast<double>(splitmix(state) >> 11) * 0x1.0p-53; }

MultiGraph sample_gnp(VertexId n, double p, std::uint64_t seed) {
  MultiGraph g(n);
  std::uint64_t state = seed;
  for (VertexId u = 0; u < n; ++u) {
    for (VertexId v = u + 1; v < n; ++v) {
      if (unit(state) < p) g.add_edge(u, v);
    }
  }
  return g;
}

bool counting_overfull(const MultiGraph& g) {
  return g.order() % 2 == 1 && g.size() > static_cast<std::int64_t>(g.max_degree()) * (g.order() / 2);
}

}  // namespace

std::optional<EdgeColoring> brute_force_coloring(const MultiGraph& g, int k, std::int64_t* nodes) {
  check_oracle_size(g);
  if (k < g.max_degree()) return std::nullopt;
  if (k > 62) throw Error(ErrorCode::TooLarge, "oracle handles at most 62 colors");
  Backtracker bt(g, k);
  const bool ok = bt.run();
  if (nodes != nullptr) *nodes += bt.nodes();
  if (!ok) return std::nullopt;
  return bt.coloring();
}

int brute_force_chromatic_index(const MultiGraph& g, std::int64_t* nodes) {
  check_oracle_size(g);
  const int delta = g.max_degree();
  if (delta == 0) return 0;
  for (int k = delta;; ++k) {
    if (brute_force_coloring(g, k, nodes)) return k;
  }
}

std::string_view to_string(Conditioning c) {
  switch (c) {
    case Conditioning::None: return "none";
    case Conditioning::NonOverfull: return "non_overfull";
    case Conditioning::RegularizeToStar: return "regularize_to_star";
  }
  return "none";
}

Conditioning conditioning_from_string(std::string_view s) {
  if (s == "none") return Conditioning::None;
  if (s == "non_overfull") return Conditioning::NonOverfull;
  if (s == "regularize_to_star") return Conditioning::RegularizeToStar;
  throw Error(ErrorCode::PreconditionViolated, "unknown conditioning '" + std::string(s) + "'");
}

Generated gen_quasirandom(const GeneratorSpec& spec) {
  if (spec.n < 0) throw Error(ErrorCode::PreconditionViolated, "negative vertex count");
  if (!(spec.p >= 0.0 && spec.p <= 1.0)) throw Error(ErrorCode::PreconditionViolated, "p must lie in [0, 1]");
  constexpr int kMaxAttempts = 1000;
  Generated out;
  if (spec.conditioning == Conditioning::None) {
    out.graph = sample_gnp(spec.n, spec.p, spec.seed);
    return out;
  }
  if (spec.conditioning == Conditioning::RegularizeToStar && spec.n % 2 == 0) {
    throw Error(ErrorCode::PreconditionViolated, "regularize_to_star needs odd n");
  }
  std::uint64_t stream = spec.seed;
  for (int attempt = 1; attempt <= kMaxAttempts; ++attempt) {
    const std::uint64_t sample_seed = attempt == 1 ? spec.seed : splitmix(stream);
    MultiGraph g = sample_gnp(spec.n, spec.p, sample_seed);
    out.attempts = attempt;
    if (counting_overfull(g)) continue;
    if (spec.conditioning == Conditioning::NonOverfull) {
      out.graph = std::move(g);
      return out;
    }
    if (g.max_degree() == 0) continue;
    try {
      PipelineReport report;
      Regularization reg = regularize(g, PipelineParams{}, sample_seed, report);
      out.graph = std::move(reg.peeling.g_k);
      return out;
    } catch (const Error&) {
      continue;
    }
  }
  throw Error(ErrorCode::RetriesExhausted, "no acceptable sample in " + std::to_string(kMaxAttempts) + " attempts");
}

RegularityReport check_lower_regularity(const MultiGraph& g, double p, double eps, std::int64_t samples,
                                        std::uint64_t seed) {
  RegularityReport rep;
  const VertexId n = g.order();
  const int s = std::max(1, static_cast<int>(std::ceil(eps * n - 1e-9)));
  if (2 * s > n) return rep;
  auto score = [&](double edges, double size) {
    const double ratio = edges / size;
    ++rep.pairs;
    rep.min_ratio = std::min(rep.min_ratio, ratio);
    if (ratio < p - eps) ++rep.violations;
  };
  if (n <= 14) {
    rep.exhaustive = true;
    std::vector<std::uint32_t> nbr(static_cast<std::size_t>(n), 0);
    for (const auto& e : g.edges()) {
      nbr[static_cast<std::size_t>(e.u)] |= 1u << e.v;
      nbr[static_cast<std::size_t>(e.v)] |= 1u << e.u;
    }
    const std::uint32_t full = (1u << n) - 1;
    for (std::uint32_t sm = 1; sm <= full; ++sm) {
      const int ss = std::popcount(sm);
      if (ss < s) continue;
      const std::uint32_t rest = full & ~sm;
      // T runs over subsets of the complement; count each unordered pair once.
      for (std::uint32_t tm = rest; tm != 0; tm = (tm - 1) & rest) {
        const int ts = std::popcount(tm);
        if (ts < s || tm < sm) continue;
        int edges = 0;
        for (std::uint32_t b = sm; b != 0; b &= b - 1) edges += std::popcount(nbr[std::countr_zero(b)] & tm);
        score(edges, static_cast<double>(ss) * ts);
      }
    }
    return rep;
  }
  std::uint64_t state = seed;
  std::vector<VertexId> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  for (std::int64_t t = 0; t < samples; ++t) {
    // Partial Fisher-Yates: the first 2s entries give S and T.
    for (int i = 0; i < 2 * s; ++i) {
      const std::uint64_t span = static_cast<std::uint64_t>(n - i);
      const auto j = static_cast<std::size_t>(i) + static_cast<std::size_t>(splitmix(state) % span);
      std::swap(perm[static_cast<std::size_t>(i)], perm[j]);
    }
    int edges = 0;
    for (int i = 0; i < s; ++i) {
      for (int j = s; j < 2 * s; ++j) {
        edges += g.adjacent(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]) ? 1 : 0;
      }
    }
    score(edges, static_cast<double>(s) * s);
  }
  return rep;
}

ParityReport parity_check(const MultiGraph& g, const EdgeColoring& c) {
  std::int64_t colored = 0;
  for (const auto& e : g.edges()) {
    const int cc = c.colored_count(e.u, e.v);
    if (cc < e.multiplicity) {
      throw Error(ErrorCode::NotTotal, "edge " + std::to_string(e.u) + "-" + std::to_string(e.v) + " has " +
                                           std::to_string(e.multiplicity - cc) + " uncolored slot(s)");
    }
    colored += cc;
  }
  if (c.colored_slots() != colored) throw Error(ErrorCode::NotTotal, "coloring carries edges outside the graph");
  ParityReport rep;
  const VertexId n = g.order();
  for (Color col = 1; col <= c.palette(); ++col) {
    ParityEntry e;
    e.color = col;
    for (VertexId v = 0; v < n; ++v) e.missing += c.is_missing(v, col) ? 1 : 0;
    e.parity_ok = (e.missing % 2) == (n % 2);
    if (!e.parity_ok) ++rep.violations;
    rep.per_color.push_back(e);
  }
  return rep;
}

}  // namespace chroma
