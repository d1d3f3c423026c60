#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chroma/balance.hpp"
#include "chroma/coloring.hpp"
#include "chroma/matching.hpp"
#include "chroma/multigraph.hpp"
#include "chroma/report.hpp"

namespace chroma {

struct FactorizeParams {
  double p = 0.5;
  double eps = 0.01;
  double eta = 0.1;
  double alpha = 0.25;
  std::uint64_t seed = 1;
  int partition_retries = 64;
  bool refine_partition = true;
  // Require y outside N(x); otherwise fall back to a neighbor of x.
  bool strict_non_neighbor = false;
  // Step 3 retries with a shuffled color order when a matching fails.
  int matching_retries = 8;
  // Step 2 falls back to general augmenting paths when no five-edge
  // exchange is left for a color.
  bool general_augment = true;
  // A step failing after the partition hands its partial coloring to
  // kempe_complete; the budget counts Kempe swaps (0 means 200 * |E|).
  bool kempe_repair = true;
  std::int64_t repair_budget = 0;
  // Thresholds; a non-positive value selects the formula default.
  double tau1 = 0.0;  // per-color missing count after Step 1
  double tau2 = 0.0;  // residual edge count after Step 2
  double tau3 = 0.0;  // residual max degree after Step 2
  double tau4 = 0.0;  // colored crossing edges per vertex after Step 2
};

// Resolved thresholds for a graph on 2n vertices.
struct Thresholds {
  double tau1 = 0.0;
  double tau2 = 0.0;
  double tau3 = 0.0;
  double tau4 = 0.0;
};

Thresholds resolve_thresholds(const FactorizeParams& params, VertexId half_order);

struct StepCounters {
  std::int64_t balance_phase1 = 0;
  std::int64_t balance_phase2 = 0;
  std::int64_t x_direct = 0;
  std::int64_t x_shifts = 0;
  std::int64_t direct_pairs = 0;
  std::int64_t exchanges = 0;
  std::int64_t x_deferred = 0;
  std::int64_t augmented_colors = 0;
  std::int64_t repaired = 0;  // 1 when a failed step was finished by Kempe repair
  std::int64_t matchings = 0;
  std::int64_t matching_retries = 0;
  std::int64_t equalize_swaps = 0;
};

struct FactorizeContext {
  MultiGraph g;
  VertexId x = kNoVertex;
  VertexId y = kNoVertex;
  FactorizeParams params;
  Thresholds tau;
  int d = 0;
  std::vector<VertexId> a;
  std::vector<VertexId> b;
  std::vector<char> side;  // 1 for A, 2 for B
  VertexPartition partition;
  MultiGraph g_ab;               // G_A + G_B + the assigned x-B edges
  std::vector<VertexId> x_b_edges;  // B-ends of those edges, with repetition
  Color k = 0;
  Color ell = 0;
  // Residual degrees inside A and B, and colored crossing edges per vertex.
  std::vector<int> residual_degree;
  std::vector<int> crossing_colored;
  StepCounters counters;
  PipelineReport report;

  bool in_a(VertexId v) const { return side[static_cast<std::size_t>(v)] == 1; }
  bool in_b(VertexId v) const { return side[static_cast<std::size_t>(v)] == 2; }
  int uncolored(const EdgeColoring& c, VertexId u, VertexId v) const {
    return g.multiplicity(u, v) - c.colored_count(u, v);
  }
};

// Picks y, pairs up neighbors of x, splits V(g) - {x, y} with the balanced
// partition, and builds G_{A,B}. Throws NoNonNeighbor (strict mode) when x
// is adjacent to everything, RetriesExhausted from the partition, and
// PreconditionViolated when g is not a regular star-multigraph of even order.
FactorizeContext prepare_partition(const MultiGraph& g, const FactorizeParams& params);

// Balanced coloring of G_{A,B} with k = Delta(G_{A,B}) + 1 colors.
EdgeColoring step1_near_equalized(FactorizeContext& ctx);

class NoAlternatingPathError : public Error {
 public:
  NoAlternatingPathError(const std::string& what, Color color, int n_a, int n_b, int m_a, int m_b)
      : Error(ErrorCode::NoAlternatingPath, what), color_(color), sizes_{n_a, n_b, m_a, m_b} {}
  Color color() const noexcept { return color_; }
  // |N_A|, |N_B|, |M_A|, |M_B| of the last attempt.
  const std::array<int, 4>& set_sizes() const noexcept { return sizes_; }

 private:
  Color color_;
  std::array<int, 4> sizes_;
};

// Makes every color in [1, k] a perfect matching of g.
void step2_make_factors(FactorizeContext& ctx, EdgeColoring& c);

// Colors the residual within-side edges with ell further colors and
// completes each of them to a perfect matching.
void step3_residual_factors(FactorizeContext& ctx, EdgeColoring& c);

// Konig coloring of the remaining (d - k - ell)-regular crossing edges.
void step4_finish(FactorizeContext& ctx, EdgeColoring& c);

struct Factorization {
  EdgeColoring coloring;
  std::vector<Matching> factors;  // factors[i] carries color i + 1
  PipelineReport report;
  StepCounters counters;
};

class FactorizationFailedError : public Error {
 public:
  FactorizationFailedError(const std::string& what, ErrorCode cause, PipelineReport report)
      : Error(ErrorCode::FactorizationFailed, what), cause_(cause), report_(std::move(report)) {}
  ErrorCode cause() const noexcept { return cause_; }
  const PipelineReport& report() const noexcept { return report_; }

 private:
  ErrorCode cause_;
  PipelineReport report_;
};

// 1-factorization of a regular star-multigraph of even order. Each returned
// factor is validated as a perfect matching and the factors partition E(g).
Factorization one_factorize(const MultiGraph& g, const FactorizeParams& params);

// True iff every color class of the total coloring c is a perfect matching.
bool is_one_factorization(const MultiGraph& g, const EdgeColoring& c);

}  // namespace chroma
