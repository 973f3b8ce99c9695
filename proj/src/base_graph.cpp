#include "ldpcq/base_graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace ldpcq {

Rational parse_rational(const std::string& s) {
  auto slash = s.find('/');
  Rational r;
  try {
    if (slash == std::string::npos) {
      r.num = std::stol(s);
      r.den = 1;
    } else {
      r.num = std::stol(s.substr(0, slash));
      r.den = std::stol(s.substr(slash + 1));
    }
  } catch (const std::exception&) {
    throw ParseError("bad rational: '" + s + "'");
  }
  if (r.den <= 0) throw ParseError("bad rational denominator: '" + s + "'");
  return r;
}

int BaseGraph::row_degree(int r) const {
  int d = 0;
  for (int c = 0; c < cols; ++c)
    if (at(r, c) >= 0) ++d;
  return d;
}

int BaseGraph::col_degree(int c) const {
  int d = 0;
  for (int r = 0; r < rows; ++r)
    if (at(r, c) >= 0) ++d;
  return d;
}

int BaseGraph::edge_count() const {
  int e = 0;
  for (int v : shifts)
    if (v >= 0) ++e;
  return e;
}

void BaseGraph::validate() const {
  if (rows <= 0 || cols <= 0 || info_cols <= 0 || z_max <= 0)
    throw ParseError("base graph dimensions must be positive");
  if (info_cols >= cols) throw ParseError("info_cols must be < cols");
  if (shifts.size() != static_cast<size_t>(rows) * cols)
    throw ParseError("shift matrix size mismatch");
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      int v = at(r, c);
      if (v < -1 || v >= z_max)
        throw ParseError("shift out of range at row " + std::to_string(r) + " col " +
                         std::to_string(c));
    }
  for (int c : punctured_cols)
    if (c < 0 || c >= cols) throw ParseError("punctured column out of range");
}

std::string BaseGraph::canonical_text() const {
  std::ostringstream os;
  os << rows << ' ' << cols << ' ' << info_cols << ' ' << z_max << '\n';
  if (!punctured_cols.empty()) {
    os << "punctured";
    for (int c : punctured_cols) os << ' ' << c;
    os << '\n';
  }
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) os << (c ? " " : "") << at(r, c);
    os << '\n';
  }
  return os.str();
}

BaseGraph parse_base_graph(const std::string& text, bool strict,
                           std::vector<std::string>* warnings) {
  std::istringstream in(text);
  std::string line;
  auto next_line = [&](std::string& out) {
    while (std::getline(in, out)) {
      if (out.find_first_not_of(" \t\r") != std::string::npos && out[0] != '#') return true;
    }
    return false;
  };

  BaseGraph bg;
  if (!next_line(line)) throw ParseError("empty base graph asset");
  {
    std::istringstream hs(line);
    if (!(hs >> bg.rows >> bg.cols >> bg.info_cols >> bg.z_max))
      throw ParseError("bad header line, expected 'rows cols info_cols Z_max'");
  }
  if (bg.rows <= 0 || bg.cols <= 0 || bg.z_max <= 0)
    throw ParseError("bad header dimensions");

  bg.shifts.assign(static_cast<size_t>(bg.rows) * bg.cols, -1);
  int r = 0;
  bool punct_seen = false;
  while (r < bg.rows) {
    if (!next_line(line))
      throw ParseError("unexpected end of asset at row " + std::to_string(r));
    std::istringstream ls(line);
    std::string first;
    ls >> first;
    if (!punct_seen && r == 0 && first == "punctured") {
      int c;
      while (ls >> c) bg.punctured_cols.push_back(c);
      punct_seen = true;
      continue;
    }
    ls.clear();
    ls.seekg(0);
    for (int c = 0; c < bg.cols; ++c) {
      long v;
      if (!(ls >> v))
        throw ParseError("row " + std::to_string(r) + ": expected " + std::to_string(bg.cols) +
                         " entries, failed at col " + std::to_string(c));
      if (v < -1 || v >= bg.z_max) {
        if (v < -1)
          throw ParseError("row " + std::to_string(r) + " col " + std::to_string(c) +
                           ": invalid shift " + std::to_string(v));
        if (strict)
          throw ParseError("row " + std::to_string(r) + " col " + std::to_string(c) + ": shift " +
                           std::to_string(v) + " out of range [0," + std::to_string(bg.z_max - 1) +
                           "]");
        long reduced = v % bg.z_max;
        if (warnings)
          warnings->push_back("row " + std::to_string(r) + " col " + std::to_string(c) +
                              ": shift " + std::to_string(v) + " reduced to " +
                              std::to_string(reduced) + " mod " + std::to_string(bg.z_max));
        v = reduced;
      }
      bg.at(r, c) = static_cast<int>(v);
    }
    long extra;
    if (ls >> extra)
      throw ParseError("row " + std::to_string(r) + ": more than " + std::to_string(bg.cols) +
                       " entries");
    ++r;
  }
  bg.validate();
  return bg;
}

BaseGraph load_base_graph(const std::string& path, bool strict,
                          std::vector<std::string>* warnings) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open base graph asset: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_base_graph(ss.str(), strict, warnings);
}

BaseGraph rate_adapt(const BaseGraph& bg, Rational target) {
  // Sub-graph of the first rows_kept rows and info_cols + rows_kept columns.
  int np = static_cast<int>(bg.punctured_cols.size());
  auto rate_of = [&](int rows_kept) {
    return static_cast<double>(bg.info_cols) / (bg.info_cols + rows_kept - np);
  };
  // A row prefix is usable only if every kept row keeps degree >= 2 and no
  // kept column becomes isolated.
  auto usable = [&](int rows_kept) {
    int cols_kept = bg.info_cols + rows_kept;
    for (int r = 0; r < rows_kept; ++r) {
      int d = 0;
      for (int c = 0; c < cols_kept; ++c)
        if (bg.at(r, c) >= 0) ++d;
      if (d < 2) return false;
    }
    for (int c = 0; c < cols_kept; ++c) {
      int d = 0;
      for (int r = 0; r < rows_kept; ++r)
        if (bg.at(r, c) >= 0) ++d;
      if (d < 1) return false;
    }
    return true;
  };

  int best = -1;
  double best_err = 0;
  double lo = 1.0, hi = 0.0;
  for (int rows_kept = np + 1; rows_kept <= bg.rows; ++rows_kept) {
    if (bg.info_cols + rows_kept > bg.cols) break;
    if (!usable(rows_kept)) continue;
    double rt = rate_of(rows_kept);
    lo = std::min(lo, rt);
    hi = std::max(hi, rt);
    double err = std::abs(rt - target.value());
    if (best < 0 || err < best_err) {
      best = rows_kept;
      best_err = err;
    }
  }
  if (best < 0) throw ParseError("base graph has no usable row prefix");
  // Accept the closest prefix only for targets inside the achievable span
  // (one-column granularity); extrapolation beyond the span is an error.
  double slack = std::abs(rate_of(best) - target.value());
  double neighbor_gap = 0.0;
  if (best > np + 1) neighbor_gap = std::max(neighbor_gap, std::abs(rate_of(best) - rate_of(best - 1)));
  if (best < bg.rows) neighbor_gap = std::max(neighbor_gap, std::abs(rate_of(best) - rate_of(best + 1)));
  if (target.value() < lo - 1e-12 || target.value() > hi + 1e-12 || slack > neighbor_gap + 1e-12) {
    std::ostringstream os;
    os << "target rate " << target.str() << " not achievable; achievable range [" << lo << ", "
       << hi << "]";
    throw ParseError(os.str());
  }

  BaseGraph out;
  out.rows = best;
  out.cols = bg.info_cols + best;
  out.info_cols = bg.info_cols;
  out.z_max = bg.z_max;
  out.punctured_cols = bg.punctured_cols;
  out.shifts.resize(static_cast<size_t>(out.rows) * out.cols);
  for (int r = 0; r < out.rows; ++r)
    for (int c = 0; c < out.cols; ++c) out.at(r, c) = bg.at(r, c);
  out.validate();
  return out;
}

uint64_t fnv1a64(const void* data, size_t len, uint64_t seed) {
  const auto* p = static_cast<const unsigned char*>(data);
  uint64_t h = seed;
  for (size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

uint64_t code_hash(const BaseGraph& bg, int z, Rational rate) {
  std::string t = bg.canonical_text() + "|Z=" + std::to_string(z) + "|rate=" + rate.str();
  return fnv1a64(t.data(), t.size());
}

}  // namespace ldpcq
