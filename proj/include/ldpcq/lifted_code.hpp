#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "ldpcq/base_graph.hpp"
#include "ldpcq/gf2.hpp"

namespace ldpcq {

// Quasi-cyclic code lifted from a base graph. Edges are enumerated at base
// granularity: edge m covers Z parallel messages. Slot z of edge m lives on
// the lifted edge between check (row(m), z) and variable (col(m), (z+shift)%Z).
struct LiftedCode {
  BaseGraph bg;
  int z = 1;
  int n = 0;           // code length cols*Z
  int k = 0;           // info length info_cols*Z
  int edge_count = 0;  // base edges

  std::vector<int> edge_row, edge_col, edge_shift;    // per base edge
  std::vector<std::vector<int>> row_edges, col_edges; // base row/col -> edge ids
  std::vector<uint8_t> punctured;                     // per base col

  int lifted_vn(int edge, int slot) const {
    int s = edge_shift[edge];
    int zz = slot + s;
    if (zz >= z) zz -= z;
    return edge_col[edge] * z + zz;
  }
  int lifted_cn(int edge, int slot) const { return edge_row[edge] * z + slot; }
  int num_checks() const { return bg.rows * z; }
  int transmitted_length() const { return bg.num_transmitted_cols() * z; }
};

LiftedCode lift(const BaseGraph& bg, int z);

// H * bits over GF(2); |bits| = n.
std::vector<uint8_t> syndrome(const LiftedCode& code, const std::vector<uint8_t>& bits);

// Dense lifted parity-check matrix (tests and toy-scale oracles only).
Gf2Matrix dense_parity_matrix(const LiftedCode& code);

// Systematic encoder. 5G-style graphs (double-diagonal core plus degree-1
// identity extension columns) are encoded with a precomputed core inverse and
// forward substitution; anything else falls back to a dense GF(2) solve,
// which is limited to small instances.
class Encoder {
 public:
  explicit Encoder(const LiftedCode& code);
  std::vector<uint8_t> encode(const std::vector<uint8_t>& info) const;
  bool structured() const { return structured_; }

 private:
  const LiftedCode& code_;
  bool structured_ = false;
  int core_rows_ = 0;  // base rows covered by the core inverse
  Gf2Matrix core_inv_; // (core_rows*Z)^2
  Gf2Matrix parity_inv_;  // generic fallback: inverse of full parity block
};

}  // namespace ldpcq
