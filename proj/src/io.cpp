#include "chroma/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string_view>

namespace chroma {
namespace {

std::vector<std::string_view> tokens_of(std::string_view line) {
  if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

long long to_int(std::string_view tok, int line, const char* what) {
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(line, std::string("expected integer ") + what + ", got '" + std::string(tok) + "'");
  }
  return value;
}

}  // namespace

MultiGraph read_edge_list(std::istream& in) {
  std::string raw;
  int line = 0;
  MultiGraph g;
  bool header = false;
  while (std::getline(in, raw)) {
    ++line;
    const auto tok = tokens_of(raw);
    if (tok.empty()) continue;
    if (!header) {
      if (tok.size() > 2) throw ParseError(line, "header takes n and an optional multi-center");
      const long long n = to_int(tok[0], line, "vertex count");
      if (n < 0 || n > 1'000'000) throw ParseError(line, "vertex count out of range");
      std::optional<VertexId> center;
      if (tok.size() == 2) {
        const long long x = to_int(tok[1], line, "multi-center");
        if (x < 0 || x >= n) throw ParseError(line, "multi-center out of range");
        center = static_cast<VertexId>(x);
      }
      g = MultiGraph(static_cast<VertexId>(n), center);
      header = true;
      continue;
    }
    if (tok.size() < 2 || tok.size() > 3) throw ParseError(line, "edge line takes u v [multiplicity]");
    const long long u = to_int(tok[0], line, "endpoint");
    const long long v = to_int(tok[1], line, "endpoint");
    const long long m = tok.size() == 3 ? to_int(tok[2], line, "multiplicity") : 1;
    if (u < 0 || v < 0 || u >= g.order() || v >= g.order()) throw ParseError(line, "endpoint out of range");
    if (m < 1 || m > 65535) throw ParseError(line, "multiplicity must be in [1, 65535]");
    try {
      g.add_edge(static_cast<VertexId>(u), static_cast<VertexId>(v), static_cast<int>(m));
    } catch (const Error& e) {
      throw ParseError(line, e.what());
    }
  }
  if (!header) throw ParseError(line, "empty input");
  return g;
}

MultiGraph parse_edge_list(const std::string& text) {
  std::istringstream in(text);
  return read_edge_list(in);
}

MultiGraph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  return read_edge_list(in);
}

void write_edge_list(std::ostream& out, const MultiGraph& g) {
  out << g.order();
  if (g.multi_center()) out << ' ' << *g.multi_center();
  out << '\n';
  for (const auto& e : g.edges()) {
    out << e.u << ' ' << e.v;
    if (e.multiplicity > 1) out << ' ' << e.multiplicity;
    out << '\n';
  }
}

std::string format_edge_list(const MultiGraph& g) {
  std::ostringstream out;
  write_edge_list(out, g);
  return out.str();
}

void write_coloring(std::ostream& out, const std::vector<ColoredSlot>& slots) {
  for (const auto& s : slots) out << s.u << ' ' << s.v << ' ' << s.slot << ' ' << s.color << '\n';
}

std::string format_coloring(const std::vector<ColoredSlot>& slots) {
  std::ostringstream out;
  write_coloring(out, slots);
  return out.str();
}

std::vector<ColoredSlot> read_coloring(std::istream& in) {
  std::vector<ColoredSlot> slots;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto tok = tokens_of(raw);
    if (tok.empty()) continue;
    if (tok.size() != 4) throw ParseError(line, "coloring line takes u v slot color");
    ColoredSlot s;
    s.u = static_cast<VertexId>(to_int(tok[0], line, "endpoint"));
    s.v = static_cast<VertexId>(to_int(tok[1], line, "endpoint"));
    s.slot = static_cast<int>(to_int(tok[2], line, "slot"));
    s.color = static_cast<Color>(to_int(tok[3], line, "color"));
    slots.push_back(s);
  }
  return slots;
}

std::vector<ColoredSlot> parse_coloring(const std::string& text) {
  std::istringstream in(text);
  return read_coloring(in);
}

int read_chi_prime_sidecar(const std::string& path) {
  std::ifstream in(path);
  std::string raw;
  while (std::getline(in, raw)) {
    const auto tok = tokens_of(raw);
    if (tok.size() == 2 && tok[0] == "chi_prime:") return static_cast<int>(to_int(tok[1], 1, "chi_prime"));
  }
  return -1;
}

}  // namespace chroma
