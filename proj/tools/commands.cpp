#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "chroma/io.hpp"
#include "json.hpp"

namespace chroma::cli {
namespace {

using json = nlohmann::ordered_json;

bool write_file(const std::string& path, const std::string& text, std::ostream& err) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    err << "error: cannot write " << path << "\n";
    return false;
  }
  f << text;
  return static_cast<bool>(f);
}

json report_json(const PipelineReport& report, bool timings) {
  json j = json::parse(report.to_json(-1));
  if (!timings) {
    for (auto& st : j["stages"]) st["ms"] = 0.0;
  }
  return j;
}

bool load_graph(const RunConfig& cfg, MultiGraph& g, std::ostream& err) {
  if (cfg.input.empty()) {
    err << "error: --input is required\n";
    return false;
  }
  try {
    g = load_edge_list(cfg.input);
    return true;
  } catch (const Error& e) {
    err << "error: " << cfg.input << ": " << e.detail() << "\n";
    return false;
  }
}

EdgeColoring from_slots(VertexId n, const std::vector<ColoredSlot>& slots) {
  Color top = 0;
  for (const auto& s : slots) top = std::max(top, s.color);
  EdgeColoring c(n, top);
  for (const auto& s : slots) c.assign(s.u, s.v, s.color);
  return c;
}

struct StatsRow {
  VertexId n = 0;
  double p = 0.0;
  std::uint64_t seed = 0;
  std::int64_t edges = 0;
  int max_degree = 0;
  int colors_used = 0;
  std::string method;
  bool verified = false;
  bool repaired = false;
  int forests = 0;
  int factor_degree = 0;
  int attempts = 0;
  double millis = 0.0;
  std::string error;
};

StatsRow stats_run(const RunConfig& cfg, VertexId n, double p, std::uint64_t seed) {
  StatsRow row;
  row.n = n;
  row.p = p;
  row.seed = seed;
  try {
    const Generated gen = gen_quasirandom(GeneratorSpec{n, p, seed, Conditioning::NonOverfull});
    row.attempts = gen.attempts;
    row.edges = gen.graph.size();
    const auto t0 = std::chrono::steady_clock::now();
    const ColoringResult r = chromatic_index(gen.graph, pipeline_params(cfg), seed);
    row.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    const ColoringReport v = verify_slots(gen.graph, to_slots(gen.graph, r.coloring));
    row.max_degree = r.max_degree;
    row.colors_used = v.colors_used;
    row.method = std::string(to_string(r.method));
    row.verified = v.proper && v.total;
    row.repaired = r.repaired;
    row.forests = r.forests;
    row.factor_degree = r.factor_degree;
  } catch (const Error& e) {
    row.method = "error";
    row.error = e.what();
  }
  if (!cfg.timings) row.millis = 0.0;
  return row;
}

}  // namespace

std::uint64_t default_seed() {
  if (const char* env = std::getenv("CHROMA_SEED"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != nullptr && *end == '\0') return v;
  }
  return kDefaultSeed;
}

std::string validate(const RunConfig& cfg) {
  if (!(cfg.p > 0.0 && cfg.p <= 1.0) && cfg.subcommand != "gen") return "--p must lie in (0, 1]";
  if (cfg.subcommand == "gen" && !(cfg.p >= 0.0 && cfg.p <= 1.0)) return "--p must lie in [0, 1]";
  if (!(cfg.eps > 0.0)) return "--eps must be positive";
  if (!(cfg.eta > 0.0)) return "--eta must be positive";
  if (cfg.retries <= 0) return "--retries must be positive";
  if (cfg.rotations <= 0 || cfg.restarts <= 0) return "path-cover budgets must be positive";
  if (cfg.seeds <= 0) return "--seeds must be positive";
  if (cfg.workers <= 0) return "--workers must be positive";
  for (VertexId n : cfg.sizes) {
    if (n <= 0) return "--n values must be positive";
  }
  for (double p : cfg.densities) {
    if (!(p > 0.0 && p < 1.0)) return "stats densities must lie in (0, 1)";
  }
  return {};
}

PipelineParams pipeline_params(const RunConfig& cfg) {
  PipelineParams params;
  params.factorize.p = cfg.p;
  params.factorize.eps = cfg.eps;
  params.factorize.eta = cfg.eta;
  params.factorize.partition_retries = cfg.retries;
  params.cover.rotations_per_vertex = cfg.rotations;
  params.cover.restarts = cfg.restarts;
  return params;
}

std::string result_json(const MultiGraph& g, const ColoringResult& r, bool verified, bool timings, int indent) {
  json j;
  j["schema"] = 1;
  j["n"] = g.order();
  j["edges"] = g.size();
  j["max_degree"] = r.max_degree;
  j["chromatic_index"] = r.chromatic_index;
  j["method"] = std::string(to_string(r.method));
  j["verified"] = verified;
  j["forests"] = r.forests;
  j["factor_degree"] = r.factor_degree;
  j["repaired"] = r.repaired;
  if (!r.fallback_reason.empty()) j["fallback_reason"] = r.fallback_reason;
  j["report"] = report_json(r.report, timings);
  return j.dump(indent);
}

int cmd_color(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  MultiGraph g;
  if (!load_graph(cfg, g, err)) return kError;
  const ColoringResult r = chromatic_index(g, pipeline_params(cfg), cfg.seed);
  const std::vector<ColoredSlot> slots = to_slots(g, r.coloring);
  const ColoringReport v = verify_slots(g, slots);
  const bool verified = v.proper && v.total;
  const std::string js = result_json(g, r, verified, cfg.timings);
  if (!cfg.output.empty()) {
    if (!write_file(cfg.output, format_coloring(slots), err)) return kError;
    if (!write_file(cfg.output + ".json", js + "\n", err)) return kError;
  }
  if (cfg.json) {
    out << js << "\n";
  } else {
    out << "chromatic_index " << r.chromatic_index << "\nmax_degree " << r.max_degree << "\nmethod "
        << to_string(r.method) << "\n";
    if (!r.fallback_reason.empty()) out << "fallback_reason " << r.fallback_reason << "\n";
  }
  if (!verified) {
    err << "error: produced coloring failed verification: " << v.message << "\n";
    return kError;
  }
  return r.method == Method::Fallback ? kFallback : kOptimal;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  MultiGraph g;
  if (!load_graph(cfg, g, err)) return kError;
  if (cfg.coloring.empty()) {
    err << "error: --coloring is required\n";
    return kError;
  }
  std::vector<ColoredSlot> slots;
  {
    std::ifstream in(cfg.coloring);
    if (!in) {
      err << "error: cannot open " << cfg.coloring << "\n";
      return kError;
    }
    try {
      slots = read_coloring(in);
    } catch (const Error& e) {
      err << "error: " << cfg.coloring << ": " << e.detail() << "\n";
      return kError;
    }
  }
  const ColoringReport v = verify_slots(g, slots);
  json j;
  j["schema"] = 1;
  j["proper"] = v.proper;
  j["total"] = v.total;
  j["colors_used"] = v.colors_used;
  j["uncolored"] = v.uncolored;
  if (!v.proper) {
    j["offending_vertex"] = v.offending_vertex;
    j["message"] = v.message;
  }
  int parity_violations = 0;
  json parity = json::array();
  if (v.proper && v.total) {
    const ParityReport pr = parity_check(g, from_slots(g.order(), slots));
    parity_violations = pr.violations;
    for (const auto& e : pr.per_color) {
      parity.push_back(json{{"color", e.color}, {"missing", e.missing}, {"parity_ok", e.parity_ok}});
    }
  }
  j["parity_violations"] = parity_violations;
  j["parity"] = parity;
  if (cfg.json) {
    out << j.dump(2) << "\n";
  } else {
    out << "colors_used " << v.colors_used << "\n";
    if (!v.proper) out << "improper at vertex " << v.offending_vertex << ": " << v.message << "\n";
    if (!v.total) out << "not total: " << v.uncolored << " uncolored edge(s)\n";
    for (const auto& e : parity) {
      out << "color " << e["color"].get<int>() << " missing " << e["missing"].get<int>()
          << (e["parity_ok"].get<bool>() ? "" : " PARITY VIOLATION") << "\n";
    }
  }
  return v.proper && v.total && parity_violations == 0 ? kOptimal : kError;
}

int cmd_gen(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.n <= 0) {
    err << "error: --n must be positive\n";
    return kError;
  }
  try {
    const GeneratorSpec spec{cfg.n, cfg.p, cfg.seed, conditioning_from_string(cfg.conditioning)};
    const Generated gen = gen_quasirandom(spec);
    std::ostringstream text;
    text << "# gen n=" << cfg.n << " p=" << cfg.p << " seed=" << cfg.seed << " conditioning=" << cfg.conditioning
         << " attempts=" << gen.attempts << "\n";
    write_edge_list(text, gen.graph);
    if (cfg.output.empty()) {
      out << text.str();
    } else if (!write_file(cfg.output, text.str(), err)) {
      return kError;
    }
    return kOptimal;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }
}

int cmd_oracle(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  MultiGraph g;
  if (!load_graph(cfg, g, err)) return kError;
  try {
    std::int64_t nodes = 0;
    const int chi = brute_force_chromatic_index(g, &nodes);
    if (cfg.json) {
      out << json{{"schema", 1}, {"chromatic_index", chi}, {"max_degree", g.max_degree()}, {"nodes", nodes}}.dump(2)
          << "\n";
    } else {
      out << chi << "\n";
    }
    return kOptimal;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }
}

int cmd_stats(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const std::vector<VertexId> sizes = cfg.sizes.empty() ? std::vector<VertexId>{101} : cfg.sizes;
  const std::vector<double> densities = cfg.densities.empty() ? std::vector<double>{0.5} : cfg.densities;
  struct Job {
    VertexId n;
    double p;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (VertexId n : sizes) {
    for (double p : densities) {
      for (int s = 0; s < cfg.seeds; ++s) jobs.push_back({n, p, cfg.seed + static_cast<std::uint64_t>(s)});
    }
  }
  std::vector<StatsRow> rows(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) rows[i] = stats_run(cfg, jobs[i].n, jobs[i].p, jobs[i].seed);
  };
  std::vector<std::thread> pool;
  const int w = std::min<int>(cfg.workers, static_cast<int>(std::max<std::size_t>(1, jobs.size())));
  for (int i = 1; i < w; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::ostringstream csv;
  csv << "n,p,seed,edges,max_degree,colors_used,method,verified,pipeline,repaired,forests,factor_degree,"
         "attempts,ms\n";
  for (const auto& r : rows) {
    csv << r.n << ',' << r.p << ',' << r.seed << ',' << r.edges << ',' << r.max_degree << ',' << r.colors_used << ','
        << r.method << ',' << (r.verified ? 1 : 0) << ',' << (r.method == "pipeline" ? 1 : 0) << ','
        << (r.repaired ? 1 : 0) << ',' << r.forests << ',' << r.factor_degree << ',' << r.attempts << ','
        << std::fixed << std::setprecision(3) << r.millis << std::defaultfloat << '\n';
  }
  json cells = json::array();
  bool all_verified = true;
  for (VertexId n : sizes) {
    for (double p : densities) {
      int runs = 0;
      int verified = 0;
      int pipeline = 0;
      int repaired = 0;
      double total_ms = 0.0;
      double max_ms = 0.0;
      for (const auto& r : rows) {
        if (r.n != n || r.p != p) continue;
        ++runs;
        verified += r.verified ? 1 : 0;
        pipeline += r.method == "pipeline" ? 1 : 0;
        repaired += r.repaired ? 1 : 0;
        total_ms += r.millis;
        max_ms = std::max(max_ms, r.millis);
      }
      all_verified = all_verified && verified == runs;
      cells.push_back(json{{"n", n},
                           {"p", p},
                           {"runs", runs},
                           {"verified_rate", runs ? static_cast<double>(verified) / runs : 0.0},
                           {"pipeline_rate", runs ? static_cast<double>(pipeline) / runs : 0.0},
                           {"repaired", repaired},
                           {"total_ms", total_ms},
                           {"max_ms", max_ms}});
    }
  }
  const json summary{{"schema", 1}, {"seed", cfg.seed}, {"seeds", cfg.seeds}, {"cells", cells}};
  const std::string prefix = cfg.output.empty() ? "stats" : cfg.output;
  if (!write_file(prefix + ".csv", csv.str(), err)) return kError;
  if (!write_file(prefix + ".json", summary.dump(2) + "\n", err)) return kError;
  if (cfg.json) {
    out << summary.dump(2) << "\n";
  } else {
    for (const auto& c : cells) {
      out << "n=" << c["n"].get<int>() << " p=" << c["p"].get<double>() << " runs=" << c["runs"].get<int>()
          << " verified=" << c["verified_rate"].get<double>() << " pipeline=" << c["pipeline_rate"].get<double>()
          << "\n";
    }
  }
  return all_verified ? kOptimal : kError;
}

int dispatch(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (const std::string msg = validate(cfg); !msg.empty()) {
    err << "error: " << msg << "\n";
    return kError;
  }
  if (cfg.subcommand == "color") return cmd_color(cfg, out, err);
  if (cfg.subcommand == "verify") return cmd_verify(cfg, out, err);
  if (cfg.subcommand == "gen") return cmd_gen(cfg, out, err);
  if (cfg.subcommand == "oracle") return cmd_oracle(cfg, out, err);
  if (cfg.subcommand == "stats") return cmd_stats(cfg, out, err);
  err << "error: unknown subcommand '" << cfg.subcommand << "'\n";
  return kError;
}

}  // namespace chroma::cli
