#pragma once

#include <limits>
#include <vector>

namespace ldpcq {

// Joint distribution p(x, y, s) with binary x, an ordered observation
// alphabet y and a side-information alphabet s (ns == 1 for the plain
// two-variable case). y_value/s_value carry the underlying LLR or integer
// label of each index; the math only uses the index order.
struct JointHistogram {
  int ny = 0;
  int ns = 1;
  std::vector<double> p;        // 2*ny*ns, layout [x][y][s]
  std::vector<double> y_value;  // size ny
  std::vector<double> s_value;  // size ns

  JointHistogram() = default;
  JointHistogram(int ny_, int ns_)
      : ny(ny_), ns(ns_), p(static_cast<size_t>(2) * ny_ * ns_, 0.0), y_value(ny_, 0.0),
        s_value(ns_, 0.0) {}

  double& at(int x, int y, int s) { return p[(static_cast<size_t>(x) * ny + y) * ns + s]; }
  double at(int x, int y, int s) const { return p[(static_cast<size_t>(x) * ny + y) * ns + s]; }

  double total() const;
  void normalize();  // throws if total mass is zero

  // Enforces p(x,y,s) = p(1-x, ny-1-y, ns-1-s) by averaging with the
  // mirrored tensor.
  JointHistogram symmetrized() const;
  bool is_symmetric(double tol = 1e-12) const;

  // Marginal log-ratio log2 p(x=0,y)/p(x=1,y), summed over s. Zero-mass
  // labels report 0, one-sided zeros report +/-inf.
  double y_llr(int y) const;
};

constexpr double kInfBits = std::numeric_limits<double>::infinity();

// I(X;Y) in bits, side alphabet marginalized out.
double mutual_information(const JointHistogram& h);

// I(X;Y|S) in bits.
double conditional_mutual_information(const JointHistogram& h);

// Binary entropy of q in bits.
double binary_entropy(double q);

// sum_x p[x] log2(p[x]/q[x]); returns +inf when p>0 meets q==0.
double kl_divergence_bits(const std::vector<double>& p, const std::vector<double>& q);

// Permutes the y axis so y_llr is nondecreasing, ties keeping original
// order. perm[i] = source index of output position i.
JointHistogram sort_by_llr(const JointHistogram& h, std::vector<int>* perm = nullptr);

}  // namespace ldpcq
