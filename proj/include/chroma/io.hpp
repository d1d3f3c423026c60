#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "chroma/coloring.hpp"
#include "chroma/multigraph.hpp"

namespace chroma {

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

// Edge-list format:
//   n [multi_center]
//   u v [multiplicity]
// '#' starts a comment, blank lines are skipped, vertices are 0-indexed.
// Repeated pairs accumulate.
MultiGraph read_edge_list(std::istream& in);
MultiGraph parse_edge_list(const std::string& text);
MultiGraph load_edge_list(const std::string& path);

// Canonical form: header, then one line per pair in (u, v) order, with the
// multiplicity only when it exceeds 1.
void write_edge_list(std::ostream& out, const MultiGraph& g);
std::string format_edge_list(const MultiGraph& g);

// Coloring dump: one `u v slot color` line per colored slot.
void write_coloring(std::ostream& out, const std::vector<ColoredSlot>& slots);
std::string format_coloring(const std::vector<ColoredSlot>& slots);
std::vector<ColoredSlot> read_coloring(std::istream& in);
std::vector<ColoredSlot> parse_coloring(const std::string& text);

// Sidecar `chi_prime: k`; returns -1 when the key is absent.
int read_chi_prime_sidecar(const std::string& path);

}  // namespace chroma
