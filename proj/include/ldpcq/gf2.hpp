#pragma once

#include <cstdint>
#include <vector>

namespace ldpcq {

// Dense GF(2) matrix with 64-bit packed rows. Used for encoder precomputation
// and as an independent oracle in tests; not on the per-frame hot path.
class Gf2Matrix {
 public:
  Gf2Matrix() = default;
  Gf2Matrix(int rows, int cols)
      : rows_(rows), cols_(cols), words_((cols + 63) / 64), bits_(static_cast<size_t>(rows) * words_, 0) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  bool get(int r, int c) const { return (bits_[idx(r, c)] >> (c & 63)) & 1u; }
  void set(int r, int c, bool v) {
    uint64_t m = uint64_t{1} << (c & 63);
    if (v)
      bits_[idx(r, c)] |= m;
    else
      bits_[idx(r, c)] &= ~m;
  }
  void flip(int r, int c) { bits_[idx(r, c)] ^= uint64_t{1} << (c & 63); }

  // row[r] ^= row[src]
  void xor_row(int r, int src) {
    uint64_t* a = &bits_[static_cast<size_t>(r) * words_];
    const uint64_t* b = &bits_[static_cast<size_t>(src) * words_];
    for (int w = 0; w < words_; ++w) a[w] ^= b[w];
  }
  void swap_rows(int r1, int r2) {
    if (r1 == r2) return;
    uint64_t* a = &bits_[static_cast<size_t>(r1) * words_];
    uint64_t* b = &bits_[static_cast<size_t>(r2) * words_];
    for (int w = 0; w < words_; ++w) std::swap(a[w], b[w]);
  }

  // y = this * x over GF(2)
  std::vector<uint8_t> multiply(const std::vector<uint8_t>& x) const;

  // Inverse of a square matrix; returns false if singular.
  bool invert(Gf2Matrix& out) const;

 private:
  size_t idx(int r, int c) const { return static_cast<size_t>(r) * words_ + (c >> 6); }
  int rows_ = 0, cols_ = 0, words_ = 0;
  std::vector<uint64_t> bits_;
};

}  // namespace ldpcq
