#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "chroma/oracle.hpp"
#include "chroma/pipeline.hpp"

namespace chroma::cli {

enum ExitCode : int { kOptimal = 0, kError = 1, kFallback = 2 };

inline constexpr std::uint64_t kDefaultSeed = 20240601;

struct RunConfig {
  std::string subcommand;
  std::string input;
  std::string output;
  std::string coloring;  // verify: coloring dump to check
  std::uint64_t seed = kDefaultSeed;
  double p = 0.5;
  double eps = 0.01;
  double eta = 0.1;
  int retries = 64;
  int rotations = 50;
  int restarts = 20;
  bool json = false;
  bool timings = true;  // false zeroes every duration so reruns are byte-identical

  // gen
  VertexId n = 0;
  std::string conditioning = "none";

  // stats
  std::vector<VertexId> sizes;
  std::vector<double> densities;
  int seeds = 50;
  int workers = 1;
};

// CHROMA_SEED when set and numeric, otherwise kDefaultSeed.
std::uint64_t default_seed();

// Positivity and range checks; returns an empty string when valid.
std::string validate(const RunConfig& cfg);

PipelineParams pipeline_params(const RunConfig& cfg);

// JSON object for a pipeline run; `verified` is the independent slot check.
std::string result_json(const MultiGraph& g, const ColoringResult& r, bool verified, bool timings, int indent = 2);

int cmd_color(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_gen(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_oracle(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_stats(const RunConfig& cfg, std::ostream& out, std::ostream& err);

int dispatch(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace chroma::cli
