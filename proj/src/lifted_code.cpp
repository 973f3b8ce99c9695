#include "ldpcq/lifted_code.hpp"

#include <stdexcept>

namespace ldpcq {

LiftedCode lift(const BaseGraph& bg, int z) {
  if (z < 1) throw std::invalid_argument("lifting factor must be >= 1");
  LiftedCode code;
  code.bg = bg;
  code.z = z;
  code.n = bg.cols * z;
  code.k = bg.info_cols * z;
  code.row_edges.resize(bg.rows);
  code.col_edges.resize(bg.cols);
  code.punctured.assign(bg.cols, 0);
  for (int c : bg.punctured_cols) code.punctured[c] = 1;
  for (int r = 0; r < bg.rows; ++r)
    for (int c = 0; c < bg.cols; ++c) {
      int s = bg.at(r, c);
      if (s < 0) continue;
      int m = code.edge_count++;
      code.edge_row.push_back(r);
      code.edge_col.push_back(c);
      code.edge_shift.push_back(s % z);
      code.row_edges[r].push_back(m);
      code.col_edges[c].push_back(m);
    }
  for (int r = 0; r < bg.rows; ++r)
    if (code.row_edges[r].size() < 2)
      throw std::invalid_argument("degenerate graph: check row " + std::to_string(r) +
                                  " has degree < 2");
  return code;
}

std::vector<uint8_t> syndrome(const LiftedCode& code, const std::vector<uint8_t>& bits) {
  if (bits.size() != static_cast<size_t>(code.n))
    throw std::invalid_argument("syndrome: bit vector length mismatch");
  std::vector<uint8_t> syn(code.num_checks(), 0);
  for (int m = 0; m < code.edge_count; ++m) {
    int base_cn = code.edge_row[m] * code.z;
    for (int zz = 0; zz < code.z; ++zz) syn[base_cn + zz] ^= bits[code.lifted_vn(m, zz)];
  }
  return syn;
}

Gf2Matrix dense_parity_matrix(const LiftedCode& code) {
  Gf2Matrix h(code.num_checks(), code.n);
  for (int m = 0; m < code.edge_count; ++m)
    for (int zz = 0; zz < code.z; ++zz) h.set(code.lifted_cn(m, zz), code.lifted_vn(m, zz), true);
  return h;
}

namespace {

// Detects the 5G layout: core rows confined to systematic+core columns and
// each later row adding exactly one degree-1 shift-0 identity column.
int detect_core_rows(const BaseGraph& bg) {
  for (int cr = 1; cr <= bg.rows; ++cr) {
    if (bg.info_cols + bg.rows != bg.cols) break;
    int first_ext = bg.info_cols + cr;
    bool ok = true;
    for (int r = 0; r < cr && ok; ++r)
      for (int c = first_ext; c < bg.cols; ++c)
        if (bg.at(r, c) >= 0) ok = false;
    for (int r = cr; r < bg.rows && ok; ++r) {
      for (int c = first_ext; c < bg.cols; ++c) {
        int want = (c == first_ext + (r - cr)) ? 0 : -1;
        if ((bg.at(r, c) >= 0) != (want == 0)) ok = false;
        if (want == 0 && bg.at(r, c) != 0) ok = false;
      }
    }
    if (ok && cr < bg.rows) return cr;
    if (ok && cr == bg.rows) return cr;  // no extension rows at all
  }
  return -1;
}

}  // namespace

Encoder::Encoder(const LiftedCode& code) : code_(code) {
  const BaseGraph& bg = code.bg;
  int z = code.z;
  core_rows_ = detect_core_rows(bg);
  if (core_rows_ > 0 && core_rows_ * z > 4096) core_rows_ = -1;
  if (core_rows_ > 0) {
    int cz = core_rows_ * z;
    Gf2Matrix core(cz, cz);
    for (int r = 0; r < core_rows_; ++r)
      for (int j = 0; j < core_rows_; ++j) {
        int s = bg.at(r, bg.info_cols + j);
        if (s < 0) continue;
        s %= z;
        for (int zz = 0; zz < z; ++zz) core.set(r * z + zz, j * z + (zz + s) % z, true);
      }
    if (core.invert(core_inv_)) {
      structured_ = true;
      return;
    }
  }
  // Generic dense fallback for toy graphs.
  int pz = (bg.cols - bg.info_cols) * z;
  if (bg.rows * z != pz)
    throw std::runtime_error("encoder: parity block not square (rows != cols - info_cols)");
  if (pz > 4096)
    throw std::runtime_error("encoder: graph lacks 5G structure and is too large for the dense fallback");
  Gf2Matrix parity(pz, pz);
  for (int m = 0; m < code.edge_count; ++m) {
    int c = code.edge_col[m];
    if (c < bg.info_cols) continue;
    for (int zz = 0; zz < z; ++zz)
      parity.set(code.lifted_cn(m, zz), (c - bg.info_cols) * z + (zz + code.edge_shift[m]) % z,
                 true);
  }
  if (!parity.invert(parity_inv_))
    throw std::runtime_error("encoder: rank-deficient parity block, graph is not encodable");
}

std::vector<uint8_t> Encoder::encode(const std::vector<uint8_t>& info) const {
  const BaseGraph& bg = code_.bg;
  int z = code_.z;
  if (info.size() != static_cast<size_t>(code_.k))
    throw std::invalid_argument("encode: info length mismatch");
  std::vector<uint8_t> bits(code_.n, 0);
  std::copy(info.begin(), info.end(), bits.begin());

  // Partial syndromes over systematic columns.
  std::vector<uint8_t> lam(code_.num_checks(), 0);
  for (int m = 0; m < code_.edge_count; ++m) {
    if (code_.edge_col[m] >= bg.info_cols) continue;
    int base_cn = code_.edge_row[m] * z;
    for (int zz = 0; zz < z; ++zz) lam[base_cn + zz] ^= bits[code_.lifted_vn(m, zz)];
  }

  if (structured_) {
    std::vector<uint8_t> rhs(lam.begin(), lam.begin() + core_rows_ * z);
    std::vector<uint8_t> p = core_inv_.multiply(rhs);
    for (int j = 0; j < core_rows_; ++j)
      for (int zz = 0; zz < z; ++zz) bits[(bg.info_cols + j) * z + zz] = p[j * z + zz];
    // Each extension row determines its own identity column.
    for (int r = core_rows_; r < bg.rows; ++r) {
      int ext_col = bg.info_cols + core_rows_ + (r - core_rows_);
      for (int zz = 0; zz < z; ++zz) {
        uint8_t acc = lam[r * z + zz];
        for (int m : code_.row_edges[r]) {
          int c = code_.edge_col[m];
          if (c < bg.info_cols || c == ext_col) continue;
          acc ^= bits[code_.lifted_vn(m, zz)];
        }
        bits[ext_col * z + zz] = acc;  // identity column, shift 0
      }
    }
  } else {
    std::vector<uint8_t> p = parity_inv_.multiply(lam);
    for (int j = 0; j < bg.cols - bg.info_cols; ++j)
      for (int zz = 0; zz < z; ++zz) bits[(bg.info_cols + j) * z + zz] = p[j * z + zz];
  }
  return bits;
}

}  // namespace ldpcq
