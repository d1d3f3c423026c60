#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  using chroma::cli::RunConfig;
  RunConfig cfg;
  cfg.seed = chroma::cli::default_seed();

  CLI::App app{"chroma: chromatic index and optimal edge colorings of dense graphs"};
  app.require_subcommand(1);

  auto common = [&cfg](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "random seed (default: CHROMA_SEED or a fixed constant)");
    sub->add_flag("--json", cfg.json, "print JSON instead of text");
  };
  auto tuning = [&cfg](CLI::App* sub) {
    sub->add_option("--eps", cfg.eps, "regularity slack");
    sub->add_option("--eta", cfg.eta, "augmentation and residual parameter");
    sub->add_option("--retries", cfg.retries, "balanced partition retry cap");
    sub->add_option("--rotations", cfg.rotations, "path-cover rotations per vertex");
    sub->add_option("--restarts", cfg.restarts, "path-cover restarts");
    sub->add_flag_callback("--no-timings", [&cfg] { cfg.timings = false; }, "report every duration as 0");
  };

  auto* color = app.add_subcommand("color", "color the edges of a graph");
  color->add_option("--input,-i", cfg.input, "edge-list file")->required();
  color->add_option("--output,-o", cfg.output, "coloring dump path; the JSON result goes to <path>.json");
  color->add_option("--p", cfg.p, "density parameter used for thresholds");
  common(color);
  tuning(color);

  auto* verify = app.add_subcommand("verify", "check a coloring dump against a graph");
  verify->add_option("--input,-i", cfg.input, "edge-list file")->required();
  verify->add_option("--coloring,-c", cfg.coloring, "coloring dump")->required();
  verify->add_flag("--json", cfg.json, "print JSON instead of text");

  auto* gen = app.add_subcommand("gen", "sample G(n, p)");
  gen->add_option("--n", cfg.n, "vertex count")->required();
  gen->add_option("--p", cfg.p, "edge probability");
  gen->add_option("--conditioning", cfg.conditioning, "none | non_overfull | regularize_to_star");
  gen->add_option("--output,-o", cfg.output, "edge-list path (default stdout)");
  gen->add_option("--seed", cfg.seed, "random seed (default: CHROMA_SEED or a fixed constant)");

  auto* oracle = app.add_subcommand("oracle", "exact chromatic index by backtracking (n <= 12)");
  oracle->add_option("--input,-i", cfg.input, "edge-list file")->required();
  oracle->add_flag("--json", cfg.json, "print JSON instead of text");

  auto* stats = app.add_subcommand("stats", "seed sweep over non-overfull G(n, p)");
  stats->add_option("--n", cfg.sizes, "vertex counts")->expected(1, -1);
  stats->add_option("--p", cfg.densities, "edge probabilities")->expected(1, -1);
  stats->add_option("--seeds", cfg.seeds, "seeds per cell");
  stats->add_option("--workers,-j", cfg.workers, "worker threads");
  stats->add_option("--output,-o", cfg.output, "prefix for <prefix>.csv and <prefix>.json");
  common(stats);
  tuning(stats);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : chroma::cli::kError;
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();
  return chroma::cli::dispatch(cfg, std::cout, std::cerr);
}
