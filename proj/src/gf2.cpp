#include "ldpcq/gf2.hpp"

#include <bit>

namespace ldpcq {

std::vector<uint8_t> Gf2Matrix::multiply(const std::vector<uint8_t>& x) const {
  std::vector<uint8_t> y(rows_, 0);
  // pack x
  std::vector<uint64_t> xp(words_, 0);
  for (int c = 0; c < cols_; ++c)
    if (x[c]) xp[c >> 6] |= uint64_t{1} << (c & 63);
  for (int r = 0; r < rows_; ++r) {
    const uint64_t* row = &bits_[static_cast<size_t>(r) * words_];
    uint64_t acc = 0;
    for (int w = 0; w < words_; ++w) acc ^= row[w] & xp[w];
    y[r] = static_cast<uint8_t>(std::popcount(acc) & 1);
  }
  return y;
}

bool Gf2Matrix::invert(Gf2Matrix& out) const {
  if (rows_ != cols_) return false;
  Gf2Matrix a = *this;
  out = Gf2Matrix(rows_, cols_);
  for (int i = 0; i < rows_; ++i) out.set(i, i, true);
  for (int col = 0; col < cols_; ++col) {
    int pivot = -1;
    for (int r = col; r < rows_; ++r)
      if (a.get(r, col)) {
        pivot = r;
        break;
      }
    if (pivot < 0) return false;
    a.swap_rows(col, pivot);
    out.swap_rows(col, pivot);
    for (int r = 0; r < rows_; ++r)
      if (r != col && a.get(r, col)) {
        a.xor_row(r, col);
        out.xor_row(r, col);
      }
  }
  return true;
}

}  // namespace ldpcq
