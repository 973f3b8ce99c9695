#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ldpcq {

struct Rational {
  long num = 0;
  long den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
};

Rational parse_rational(const std::string& s);

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Protograph matrix of cyclic shift values. -1 marks a missing edge.
struct BaseGraph {
  int rows = 0;
  int cols = 0;
  int info_cols = 0;
  int z_max = 0;
  std::vector<int> shifts;  // rows*cols row-major
  std::vector<int> punctured_cols;

  int at(int r, int c) const { return shifts[static_cast<size_t>(r) * cols + c]; }
  int& at(int r, int c) { return shifts[static_cast<size_t>(r) * cols + c]; }
  int row_degree(int r) const;
  int col_degree(int c) const;
  int edge_count() const;
  int num_transmitted_cols() const { return cols - static_cast<int>(punctured_cols.size()); }

  void validate() const;  // throws on invariant violation
  std::string canonical_text() const;
};

// Asset format: header "rows cols info_cols Z_max", optional "punctured i j ..."
// line, then one row of space-separated shifts per line.
BaseGraph parse_base_graph(const std::string& text, bool strict = false,
                           std::vector<std::string>* warnings = nullptr);
BaseGraph load_base_graph(const std::string& path, bool strict = false,
                          std::vector<std::string>* warnings = nullptr);

// Keeps the leading rows/columns of a rate-compatible base graph so that
// info / (cols - punctured) is as close as possible to the target (always
// within one base column). Throws with the achievable range when the target
// is outside it.
BaseGraph rate_adapt(const BaseGraph& bg, Rational target);

uint64_t fnv1a64(const void* data, size_t len, uint64_t seed = 0xcbf29ce484222325ull);
uint64_t code_hash(const BaseGraph& bg, int z, Rational rate);

}  // namespace ldpcq
