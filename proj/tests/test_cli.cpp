#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "chroma/io.hpp"
#include "commands.hpp"
#include "json.hpp"
#include "support.hpp"

using namespace chroma;
namespace fs = std::filesystem;

namespace {

struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() / ("chroma_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string file(const std::string& name, const std::string& text = {}) const {
    const fs::path p = dir / name;
    if (!text.empty() || !fs::exists(p)) std::ofstream(p) << text;
    return p.string();
  }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const cli::RunConfig& cfg) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::dispatch(cfg, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("color K5") {
  Scratch s;
  cli::RunConfig cfg;
  cfg.subcommand = "color";
  cfg.input = s.file("k5.txt", format_edge_list(testing::complete(5)));
  cfg.json = true;
  const Run r = run(cfg);
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["chromatic_index"] == 5);
  CHECK(j["method"] == "overfull");
  CHECK(j["schema"] == 1);
}

TEST_CASE("color then verify round-trip") {
  Scratch s;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const Generated gen = gen_quasirandom(GeneratorSpec{41, 0.6, seed, Conditioning::NonOverfull});
    cli::RunConfig cfg;
    cfg.subcommand = "color";
    cfg.input = s.file("g.txt", format_edge_list(gen.graph));
    cfg.output = s.file("g.col");
    cfg.seed = seed;
    const Run c = run(cfg);
    CHECK((c.code == 0 || c.code == 2));
    CHECK(fs::exists(cfg.output + ".json"));

    cli::RunConfig v;
    v.subcommand = "verify";
    v.input = cfg.input;
    v.coloring = cfg.output;
    const Run ok = run(v);
    CHECK(ok.code == 0);
    CHECK(ok.out.find("colors_used") != std::string::npos);
  }
}

TEST_CASE("verify catches corrupted and partial colorings") {
  Scratch s;
  const MultiGraph g = testing::complete(6);
  std::vector<ColoredSlot> slots = to_slots(g, star_multigraph_coloring(g));
  cli::RunConfig v;
  v.subcommand = "verify";
  v.input = s.file("k6.txt", format_edge_list(g));

  // Give the first edge the color of another edge at the same vertex.
  std::vector<ColoredSlot> bad = slots;
  for (const auto& other : slots) {
    if (other.u == bad[0].u && !(other.v == bad[0].v)) {
      bad[0].color = other.color;
      break;
    }
  }
  v.coloring = s.file("bad.col", format_coloring(bad));
  const Run r1 = run(v);
  CHECK(r1.code != 0);
  CHECK(r1.out.find("improper at vertex") != std::string::npos);

  std::vector<ColoredSlot> missing(slots.begin() + 1, slots.end());
  v.coloring = s.file("missing.col", format_coloring(missing));
  const Run r2 = run(v);
  CHECK(r2.code != 0);
  CHECK(r2.out.find("not total") != std::string::npos);

  v.coloring = s.file("mismatch.col", "0 9 0 1\n");
  CHECK(run(v).code != 0);
}

TEST_CASE("malformed and empty inputs exit 1") {
  Scratch s;
  cli::RunConfig cfg;
  cfg.subcommand = "color";
  cfg.input = s.file("empty.txt");
  CHECK(run(cfg).code == 1);
  cfg.input = s.file("bad.txt", "3\n0 1\n1 q\n");
  const Run r = run(cfg);
  CHECK(r.code == 1);
  CHECK(r.err.find("line 3") != std::string::npos);
  cfg.input = s.file("nope/missing.txt");
  CHECK(run(cfg).code == 1);
}

TEST_CASE("gen and oracle") {
  Scratch s;
  cli::RunConfig gen;
  gen.subcommand = "gen";
  gen.n = 9;
  gen.p = 1.0;
  const Run g = run(gen);
  CHECK(g.code == 0);
  CHECK(parse_edge_list(g.out) == testing::complete(9));
  CHECK(run(gen).out == g.out);

  cli::RunConfig orc;
  orc.subcommand = "oracle";
  orc.input = s.file("c5.txt", format_edge_list(testing::cycle(5)));
  const Run o = run(orc);
  CHECK(o.code == 0);
  CHECK(o.out == "3\n");
  orc.input = s.file("k13.txt", format_edge_list(testing::complete(13)));
  CHECK(run(orc).code == 1);
}

TEST_CASE("identical configs give identical files") {
  Scratch s;
  const Generated gen = gen_quasirandom(GeneratorSpec{51, 0.6, 8, Conditioning::NonOverfull});
  cli::RunConfig cfg;
  cfg.subcommand = "color";
  cfg.input = s.file("g.txt", format_edge_list(gen.graph));
  cfg.timings = false;
  cfg.output = s.file("a.col");
  run(cfg);
  cfg.output = s.file("b.col");
  run(cfg);
  CHECK(slurp(s.file("a.col")) == slurp(s.file("b.col")));
  CHECK(slurp(s.file("a.col") + ".json") == slurp(s.file("b.col") + ".json"));
}

TEST_CASE("stats sweep") {
  Scratch s;
  cli::RunConfig cfg;
  cfg.subcommand = "stats";
  cfg.sizes = {121};
  cfg.densities = {0.5};
  cfg.seeds = 50;
  cfg.workers = 2;
  cfg.output = (s.dir / "sweep").string();
  const Run r = run(cfg);
  CHECK(r.code == 0);
  std::ifstream csv(cfg.output + ".csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header.find("pipeline") != std::string::npos);
  int rows = 0;
  for (std::string line; std::getline(csv, line);) ++rows;
  CHECK(rows >= 50);
  const auto j = nlohmann::json::parse(slurp(cfg.output + ".json"));
  CHECK(j["cells"][0]["runs"] == 50);
  CHECK(j["cells"][0]["verified_rate"] == 1.0);
}

TEST_CASE("parameter validation and seed default") {
  cli::RunConfig cfg;
  cfg.subcommand = "color";
  cfg.input = "unused";
  cfg.retries = 0;
  CHECK(run(cfg).code == 1);
  cfg.retries = 64;
  cfg.eta = -1;
  CHECK(run(cfg).code == 1);

  ::setenv("CHROMA_SEED", "777", 1);
  CHECK(cli::default_seed() == 777);
  ::setenv("CHROMA_SEED", "x", 1);
  CHECK(cli::default_seed() == cli::kDefaultSeed);
  ::unsetenv("CHROMA_SEED");
  CHECK(cli::default_seed() == cli::kDefaultSeed);
}
