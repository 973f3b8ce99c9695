#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "ldpcq/histogram.hpp"

namespace ldpcq {

// Symmetric threshold clustering of an ordered alphabet: cluster k covers
// indices [tau[k], tau[k+1]), tau[0] = 0, tau[T] = ny, and
// tau[k] + tau[T-k] = ny for all k.
struct Clustering {
  std::vector<int> tau;
  int num_clusters() const { return static_cast<int>(tau.size()) - 1; }
  int assign(int y) const;
  bool symmetric(int ny) const;
};

struct CompressionResult {
  Clustering clustering;
  JointHistogram joint;  // p(x, t, s)
  double preserved = 0;  // I(X;T|S) bits
  int winner_init = -1;
};

// Working state of one sequential sweep: a symmetric clustering extended by
// two singleton clusters that hold a boundary element and its mirror while
// the cheaper merge target is decided.
class SeqIbEngine {
 public:
  SeqIbEngine(const JointHistogram& p, int num_clusters);

  void init_identity();
  void init_random(std::mt19937_64& rng);
  void set_boundaries(const std::vector<int>& tau);

  // Sequential sweeps until the clustering is stable. Returns false when a
  // merge emptied a cluster and the state was discarded.
  bool run(int max_outer = 1000);

  double preserved() const;  // I(X;T|S) of the current clustering
  const std::vector<int>& boundaries() const { return tau_; }
  std::vector<int> assignment() const;
  JointHistogram compressed() const;
  bool discarded() const { return discarded_; }

  // Extraction interface (used internally by the sweep and directly by
  // tests). dir 0 pulls the rightmost element of the cluster left of
  // `boundary`, dir 1 the leftmost element right of it. The mirror element
  // moves into the second singleton at the same time.
  void extract(int boundary, int dir);
  bool extraction_active() const { return ey_ >= 0; }
  int extracted_y() const { return ey_; }

  // C(y,t|s): information loss of merging the held element (singleton 0) or
  // its mirror (singleton 1) into cluster `target`, conditioned on side
  // index s.
  double merge_cost(int singleton, int target, int s) const;
  // C_sym(y,k), k in {1,2}: option 1 returns the element to its source
  // cluster, option 2 moves it across the boundary.
  double sym_merge_cost(int k) const;
  void merge(int k);

  bool debug_checks = false;  // verify incremental p(x,t,s) after every merge
  double debug_tol = 1e-12;
  double max_incremental_error = 0.0;
  std::vector<double> preserved_trace;  // after each completed sweep

 private:
  double folded_cost(int singleton, int target) const;  // sum_s p(s) C(.|s)
  bool sweep();  // returns true if any boundary moved; may set discarded_
  void rebuild();
  void verify_incremental();
  double& q(int x, int c, int s) { return q_[(static_cast<size_t>(x) * (T_ + 2) + c) * ns_ + s]; }
  double q(int x, int c, int s) const {
    return q_[(static_cast<size_t>(x) * (T_ + 2) + c) * ns_ + s];
  }

  const JointHistogram* src_;
  int T_, ny_, ns_;
  std::vector<int> tau_;
  std::vector<double> q_;  // joint over clusters 0..T-1 plus singletons T, T+1
  int ey_ = -1;            // extracted element (singleton 0); mirror implied
  int eb_ = -1, edir_ = 0;
  int c_src_ = -1, c_other_ = -1;
  bool discarded_ = false;
};

// Best-of-`inits` random-restart optimization of a symmetric threshold
// quantizer maximizing I(X;T|S). Deterministic in (seed, inits); the winner
// does not depend on `threads`. Ties pick the lowest init index. Discarded
// inits are substituted by a fresh draw from the same substream.
CompressionResult sequential_ib_side(const JointHistogram& p, int num_clusters, int inits,
                                     uint64_t seed, int threads = 1);

// Enumerates every symmetric threshold placement and returns the best; the
// independent oracle for sequential_ib_side. Throws when the instance has
// more than max_combos placements.
CompressionResult exhaustive_symmetric_search(const JointHistogram& p, int num_clusters,
                                              uint64_t max_combos = 2000000);

// Mirror-exact LLR sort for symmetric histograms with even ny: the output
// alphabet satisfies perm[ny-1-i] = mirror(perm[i]) structurally, which a
// plain value sort cannot guarantee under floating-point ties.
JointHistogram sort_by_llr_mirror(const JointHistogram& h, std::vector<int>* perm = nullptr);

uint64_t splitmix64(uint64_t x);

}  // namespace ldpcq
