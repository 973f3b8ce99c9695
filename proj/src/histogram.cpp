#include "ldpcq/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ldpcq {

namespace {
constexpr double kLog2e = 1.4426950408889634074;  // 1/ln(2)
}

double JointHistogram::total() const { return std::accumulate(p.begin(), p.end(), 0.0); }

void JointHistogram::normalize() {
  double t = total();
  if (t <= 0.0) throw std::runtime_error("histogram has zero mass");
  for (double& v : p) v /= t;
}

JointHistogram JointHistogram::symmetrized() const {
  JointHistogram out = *this;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < ny; ++y)
      for (int s = 0; s < ns; ++s)
        out.at(x, y, s) = 0.5 * (at(x, y, s) + at(1 - x, ny - 1 - y, ns - 1 - s));
  return out;
}

bool JointHistogram::is_symmetric(double tol) const {
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < ny; ++y)
      for (int s = 0; s < ns; ++s)
        if (std::abs(at(x, y, s) - at(1 - x, ny - 1 - y, ns - 1 - s)) > tol) return false;
  return true;
}

double JointHistogram::y_llr(int y) const {
  double p0 = 0, p1 = 0;
  for (int s = 0; s < ns; ++s) {
    p0 += at(0, y, s);
    p1 += at(1, y, s);
  }
  if (p0 == 0.0 && p1 == 0.0) return 0.0;
  if (p1 == 0.0) return kInfBits;
  if (p0 == 0.0) return -kInfBits;
  return std::log2(p0 / p1);
}

double mutual_information(const JointHistogram& h) {
  std::vector<double> px(2, 0.0), py(h.ny, 0.0);
  std::vector<double> pxy(static_cast<size_t>(2) * h.ny, 0.0);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < h.ny; ++y) {
      double m = 0;
      for (int s = 0; s < h.ns; ++s) m += h.at(x, y, s);
      pxy[static_cast<size_t>(x) * h.ny + y] = m;
      px[x] += m;
      py[y] += m;
    }
  double mi = 0;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < h.ny; ++y) {
      double m = pxy[static_cast<size_t>(x) * h.ny + y];
      if (m > 0) mi += m * std::log(m / (px[x] * py[y]));
    }
  return mi * kLog2e;
}

double conditional_mutual_information(const JointHistogram& h) {
  double mi = 0;
  for (int s = 0; s < h.ns; ++s) {
    double ps = 0;
    std::vector<double> px(2, 0.0), py(h.ny, 0.0);
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < h.ny; ++y) {
        double m = h.at(x, y, s);
        ps += m;
        px[x] += m;
        py[y] += m;
      }
    if (ps == 0) continue;
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < h.ny; ++y) {
        double m = h.at(x, y, s);
        if (m > 0) mi += m * std::log(m * ps / (px[x] * py[y]));
      }
  }
  return mi * kLog2e;
}

double binary_entropy(double q) {
  if (q <= 0.0 || q >= 1.0) return 0.0;
  return -(q * std::log2(q) + (1 - q) * std::log2(1 - q));
}

double kl_divergence_bits(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size()) throw std::invalid_argument("kl: size mismatch");
  double d = 0;
  for (size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) return kInfBits;
    d += p[i] * std::log(p[i] / q[i]);
  }
  return d * kLog2e;
}

JointHistogram sort_by_llr(const JointHistogram& h, std::vector<int>* perm) {
  std::vector<int> idx(h.ny);
  for (int i = 0; i < h.ny; ++i) idx[i] = i;
  std::vector<double> llr(h.ny);
  for (int i = 0; i < h.ny; ++i) llr[i] = h.y_llr(i);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return llr[a] < llr[b]; });
  JointHistogram out(h.ny, h.ns);
  out.s_value = h.s_value;
  for (int i = 0; i < h.ny; ++i) {
    out.y_value[i] = h.y_value[idx[i]];
    for (int x = 0; x < 2; ++x)
      for (int s = 0; s < h.ns; ++s) out.at(x, i, s) = h.at(x, idx[i], s);
  }
  if (perm) *perm = idx;
  return out;
}

}  // namespace ldpcq
