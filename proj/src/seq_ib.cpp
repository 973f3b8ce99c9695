#include "ldpcq/seq_ib.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace ldpcq {

namespace {
constexpr double kLog2e = 1.4426950408889634074;
}

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

int Clustering::assign(int y) const {
  int t = 0;
  while (t + 1 < static_cast<int>(tau.size()) - 1 && y >= tau[t + 1]) ++t;
  return t;
}

bool Clustering::symmetric(int ny) const {
  int T = num_clusters();
  for (int k = 0; k <= T; ++k)
    if (tau[k] + tau[T - k] != ny) return false;
  return true;
}

SeqIbEngine::SeqIbEngine(const JointHistogram& p, int num_clusters)
    : src_(&p), T_(num_clusters), ny_(p.ny), ns_(p.ns) {
  if (T_ < 2 || T_ % 2 != 0) throw std::invalid_argument("cluster count must be even and >= 2");
  if (ny_ % 2 != 0) throw std::invalid_argument("observation alphabet size must be even");
  if (ny_ < T_) throw std::invalid_argument("|Y| < |T|: nothing to design");
  q_.assign(static_cast<size_t>(2) * (T_ + 2) * ns_, 0.0);
}

void SeqIbEngine::init_identity() {
  if (ny_ != T_) throw std::logic_error("identity init requires |Y| == |T|");
  tau_.resize(T_ + 1);
  for (int k = 0; k <= T_; ++k) tau_[k] = k;
  rebuild();
}

void SeqIbEngine::init_random(std::mt19937_64& rng) {
  // T/2-1 distinct interior boundaries on the left half; the midpoint and the
  // right half follow from symmetry.
  int picks = T_ / 2 - 1;
  int pool_size = ny_ / 2 - 1;
  std::vector<int> pool(pool_size);
  for (int i = 0; i < pool_size; ++i) pool[i] = i + 1;
  for (int i = 0; i < picks; ++i) {
    // partial Fisher-Yates with an explicit modulo draw, pinned across
    // platforms
    int j = i + static_cast<int>(rng() % static_cast<uint64_t>(pool_size - i));
    std::swap(pool[i], pool[j]);
  }
  std::vector<int> b(pool.begin(), pool.begin() + picks);
  std::sort(b.begin(), b.end());
  tau_.assign(T_ + 1, 0);
  for (int i = 0; i < picks; ++i) tau_[i + 1] = b[i];
  tau_[T_ / 2] = ny_ / 2;
  for (int k = 0; k <= T_; ++k)
    if (k > T_ / 2) tau_[k] = ny_ - tau_[T_ - k];
  tau_[T_] = ny_;
  rebuild();
}

void SeqIbEngine::set_boundaries(const std::vector<int>& tau) {
  if (static_cast<int>(tau.size()) != T_ + 1) throw std::invalid_argument("bad boundary vector");
  Clustering c{tau};
  if (!c.symmetric(ny_)) throw std::invalid_argument("boundaries are not symmetric");
  for (int k = 0; k < T_; ++k)
    if (tau[k] >= tau[k + 1]) throw std::invalid_argument("empty cluster in boundary vector");
  tau_ = tau;
  rebuild();
}

void SeqIbEngine::rebuild() {
  std::fill(q_.begin(), q_.end(), 0.0);
  for (int c = 0; c < T_; ++c)
    for (int y = tau_[c]; y < tau_[c + 1]; ++y)
      for (int x = 0; x < 2; ++x)
        for (int s = 0; s < ns_; ++s) q(x, c, s) += src_->at(x, y, s);
  ey_ = -1;
}

void SeqIbEngine::extract(int boundary, int dir) {
  if (ey_ >= 0) throw std::logic_error("extraction already active");
  eb_ = boundary;
  edir_ = dir;
  if (dir == 0) {
    ey_ = tau_[boundary] - 1;
    c_src_ = boundary - 1;
    c_other_ = boundary;
  } else {
    ey_ = tau_[boundary];
    c_src_ = boundary;
    c_other_ = boundary - 1;
  }
  int ym = ny_ - 1 - ey_;
  int c_src_m = T_ - 1 - c_src_;
  for (int x = 0; x < 2; ++x)
    for (int s = 0; s < ns_; ++s) {
      double v = src_->at(x, ey_, s);
      q(x, c_src_, s) -= v;
      q(x, T_, s) = v;
      double vm = src_->at(x, ym, s);
      q(x, c_src_m, s) -= vm;
      q(x, T_ + 1, s) = vm;
    }
}

double SeqIbEngine::folded_cost(int singleton, int target) const {
  double sum = 0;
  for (int s = 0; s < ns_; ++s) {
    double a0 = q(0, target, s), a1 = q(1, target, s);
    double b0 = q(0, T_ + singleton, s), b1 = q(1, T_ + singleton, s);
    double A = a0 + a1, B = b0 + b1;
    double M = A + B;
    if (M <= 0.0) continue;
    if (a0 > 0) sum += a0 * std::log(a0 * M / (A * (a0 + b0)));
    if (a1 > 0) sum += a1 * std::log(a1 * M / (A * (a1 + b1)));
    if (b0 > 0) sum += b0 * std::log(b0 * M / (B * (a0 + b0)));
    if (b1 > 0) sum += b1 * std::log(b1 * M / (B * (a1 + b1)));
  }
  return sum * kLog2e;
}

double SeqIbEngine::merge_cost(int singleton, int target, int s) const {
  if (ey_ < 0) throw std::logic_error("no active extraction");
  double ps = 0;
  for (int x = 0; x < 2; ++x)
    for (int c = 0; c < T_ + 2; ++c) ps += q(x, c, s);
  if (ps <= 0.0) return 0.0;
  double a0 = q(0, target, s), a1 = q(1, target, s);
  double b0 = q(0, T_ + singleton, s), b1 = q(1, T_ + singleton, s);
  double A = a0 + a1, B = b0 + b1;
  double M = A + B;
  if (M <= 0.0) return 0.0;
  double sum = 0;
  if (a0 > 0) sum += a0 * std::log(a0 * M / (A * (a0 + b0)));
  if (a1 > 0) sum += a1 * std::log(a1 * M / (A * (a1 + b1)));
  if (b0 > 0) sum += b0 * std::log(b0 * M / (B * (a0 + b0)));
  if (b1 > 0) sum += b1 * std::log(b1 * M / (B * (a1 + b1)));
  return sum * kLog2e / ps;
}

double SeqIbEngine::sym_merge_cost(int k) const {
  if (ey_ < 0) throw std::logic_error("no active extraction");
  int t = (k == 1) ? c_src_ : c_other_;
  int tm = T_ - 1 - t;
  return folded_cost(0, t) + folded_cost(1, tm);
}

void SeqIbEngine::merge(int k) {
  if (ey_ < 0) throw std::logic_error("no active extraction");
  int t = (k == 1) ? c_src_ : c_other_;
  int tm = T_ - 1 - t;
  for (int x = 0; x < 2; ++x)
    for (int s = 0; s < ns_; ++s) {
      q(x, t, s) += q(x, T_, s);
      q(x, T_, s) = 0;
      q(x, tm, s) += q(x, T_ + 1, s);
      q(x, T_ + 1, s) = 0;
    }
  if (k == 2) {
    if (edir_ == 0)
      tau_[eb_] -= 1;
    else
      tau_[eb_] += 1;
    tau_[T_ - eb_] = ny_ - tau_[eb_];
  }
  ey_ = -1;
  if (debug_checks) verify_incremental();
}

void SeqIbEngine::verify_incremental() {
  std::vector<double> saved = q_;
  std::vector<int> saved_tau = tau_;
  rebuild();
  double err = 0;
  for (size_t i = 0; i < q_.size(); ++i) err = std::max(err, std::abs(q_[i] - saved[i]));
  max_incremental_error = std::max(max_incremental_error, err);
  q_ = saved;
  tau_ = saved_tau;
  if (err > debug_tol)
    throw std::runtime_error("incremental p(x,t,s) drifted beyond tolerance: " +
                             std::to_string(err));
}

bool SeqIbEngine::sweep() {
  bool changed = false;
  for (int j = 1; j <= T_ / 2 - 1; ++j) {
    for (int dir = 0; dir < 2; ++dir) {
      for (;;) {
        extract(j, dir);
        double c_stay = sym_merge_cost(1);
        double c_move = sym_merge_cost(2);
        if (c_move < c_stay) {
          bool empties = (dir == 0) ? (tau_[j] - 1 == tau_[j - 1]) : (tau_[j] + 1 == tau_[j + 1]);
          if (empties) {
            discarded_ = true;
            merge(1);  // restore a consistent state before bailing out
            return changed;
          }
          merge(2);
          changed = true;
        } else {
          merge(1);
          break;
        }
      }
      rebuild();  // bound floating-point drift per boundary pass
    }
  }
  return changed;
}

bool SeqIbEngine::run(int max_outer) {
  discarded_ = false;
  for (int it = 0; it < max_outer; ++it) {
    std::vector<int> old_tau = tau_;
    sweep();
    if (discarded_) return false;
    preserved_trace.push_back(preserved());
    if (tau_ == old_tau) return true;
  }
  return true;  // moves strictly improve I(X;T|S); the cap is unreachable in practice
}

double SeqIbEngine::preserved() const {
  double mi = 0;
  for (int s = 0; s < ns_; ++s) {
    double ps = 0;
    double px[2] = {0, 0};
    std::vector<double> pt(T_, 0.0);
    for (int x = 0; x < 2; ++x)
      for (int c = 0; c < T_; ++c) {
        double m = q(x, c, s);
        ps += m;
        px[x] += m;
        pt[c] += m;
      }
    if (ps == 0) continue;
    for (int x = 0; x < 2; ++x)
      for (int c = 0; c < T_; ++c) {
        double m = q(x, c, s);
        if (m > 0) mi += m * std::log(m * ps / (px[x] * pt[c]));
      }
  }
  return mi * kLog2e;
}

std::vector<int> SeqIbEngine::assignment() const {
  std::vector<int> a(ny_);
  for (int c = 0; c < T_; ++c)
    for (int y = tau_[c]; y < tau_[c + 1]; ++y) a[y] = c;
  return a;
}

JointHistogram SeqIbEngine::compressed() const {
  JointHistogram out(T_, ns_);
  out.s_value = src_->s_value;
  for (int c = 0; c < T_; ++c) out.y_value[c] = (c < T_ / 2) ? c - T_ / 2 : c - T_ / 2 + 1;
  for (int x = 0; x < 2; ++x)
    for (int c = 0; c < T_; ++c)
      for (int s = 0; s < ns_; ++s) out.at(x, c, s) = q(x, c, s);
  return out;
}

namespace {

void validate_ib_input(const JointHistogram& p, int num_clusters) {
  if (num_clusters < 2 || num_clusters % 2)
    throw std::invalid_argument("cluster count must be even and >= 2");
  if (p.ny < num_clusters)
    throw std::invalid_argument("|Y| < |T|: observation alphabet too small");
  int positive = 0;
  for (int y = 0; y < p.ny; ++y) {
    double m = 0;
    for (int x = 0; x < 2; ++x)
      for (int s = 0; s < p.ns; ++s) m += p.at(x, y, s);
    if (m > 0) ++positive;
  }
  if (positive < 2)
    throw std::invalid_argument("degenerate input: fewer than two observation labels carry mass");
}

CompressionResult result_from(const SeqIbEngine& e, int winner) {
  CompressionResult r;
  r.clustering.tau = e.boundaries();
  r.joint = e.compressed();
  r.preserved = conditional_mutual_information(r.joint);
  r.winner_init = winner;
  return r;
}

}  // namespace

CompressionResult sequential_ib_side(const JointHistogram& p_in, int num_clusters, int inits,
                                     uint64_t seed, int threads) {
  JointHistogram p = p_in;
  p.normalize();
  validate_ib_input(p, num_clusters);

  if (p.ny == num_clusters) {
    SeqIbEngine e(p, num_clusters);
    e.init_identity();
    return result_from(e, -1);
  }

  struct Candidate {
    double preserved = -1;
    std::vector<int> tau;
    int init = -1;
  };
  auto run_range = [&](int lo, int hi, Candidate& best) {
    for (int i = lo; i < hi; ++i) {
      std::mt19937_64 rng(splitmix64(seed ^ (0x9e3779b97f4a7c15ull * (uint64_t)(i + 1))));
      SeqIbEngine e(p, num_clusters);
      bool ok = false;
      for (int attempt = 0; attempt < 100 && !ok; ++attempt) {
        e.init_random(rng);
        ok = e.run();
      }
      if (!ok) continue;  // persistently degenerate; skip this slot
      double val = e.preserved();
      if (val > best.preserved ||
          (val == best.preserved && best.init >= 0 && i < best.init)) {
        best.preserved = val;
        best.tau = e.boundaries();
        best.init = i;
      }
    }
  };

  int nth = std::max(1, threads);
  std::vector<Candidate> cand(nth);
  if (nth == 1) {
    run_range(0, inits, cand[0]);
  } else {
    std::vector<std::thread> pool;
    int chunk = (inits + nth - 1) / nth;
    for (int t = 0; t < nth; ++t) {
      int lo = t * chunk, hi = std::min(inits, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back([&, lo, hi, t] { run_range(lo, hi, cand[t]); });
    }
    for (auto& th : pool) th.join();
  }
  Candidate best;
  for (const auto& c : cand) {
    if (c.init < 0) continue;
    if (c.preserved > best.preserved ||
        (c.preserved == best.preserved && (best.init < 0 || c.init < best.init))) {
      best = c;
    }
  }
  if (best.init < 0) throw std::runtime_error("sequential IB: every init was discarded");

  SeqIbEngine e(p, num_clusters);
  e.set_boundaries(best.tau);
  return result_from(e, best.init);
}

CompressionResult exhaustive_symmetric_search(const JointHistogram& p_in, int num_clusters,
                                              uint64_t max_combos) {
  JointHistogram p = p_in;
  p.normalize();
  validate_ib_input(p, num_clusters);
  int picks = num_clusters / 2 - 1;
  int pool = p.ny / 2 - 1;

  // C(pool, picks) placements
  double combos = 1;
  for (int i = 0; i < picks; ++i) combos = combos * (pool - i) / (i + 1);
  if (combos > static_cast<double>(max_combos))
    throw std::runtime_error("exhaustive search too large: " + std::to_string(combos) +
                             " placements exceed bound " + std::to_string(max_combos));

  SeqIbEngine best(p, num_clusters);
  double best_val = -1;
  std::vector<int> best_tau;

  std::vector<int> sel(picks);
  for (int i = 0; i < picks; ++i) sel[i] = i + 1;
  for (;;) {
    std::vector<int> tau(num_clusters + 1, 0);
    for (int i = 0; i < picks; ++i) tau[i + 1] = sel[i];
    tau[num_clusters / 2] = p.ny / 2;
    for (int kk = num_clusters / 2 + 1; kk <= num_clusters; ++kk)
      tau[kk] = p.ny - tau[num_clusters - kk];
    SeqIbEngine e(p, num_clusters);
    e.set_boundaries(tau);
    double v = e.preserved();
    if (v > best_val) {
      best_val = v;
      best_tau = tau;
    }
    if (picks == 0) break;
    // next combination
    int i = picks - 1;
    while (i >= 0 && sel[i] == pool - (picks - 1 - i)) --i;
    if (i < 0) break;
    ++sel[i];
    for (int j = i + 1; j < picks; ++j) sel[j] = sel[j - 1] + 1;
  }
  SeqIbEngine e(p, num_clusters);
  e.set_boundaries(best_tau);
  return result_from(e, -1);
}

JointHistogram sort_by_llr_mirror(const JointHistogram& h, std::vector<int>* perm) {
  if (h.ny % 2) throw std::invalid_argument("mirror sort requires even |Y|");
  int half = h.ny / 2;
  struct Rep {
    int label;
    double key;
  };
  std::vector<Rep> reps;
  reps.reserve(half);
  for (int a = 0; a < half; ++a) {
    int b = h.ny - 1 - a;
    double pa0 = 0, pa1 = 0;
    for (int s = 0; s < h.ns; ++s) {
      pa0 += h.at(0, a, s);
      pa1 += h.at(1, a, s);
    }
    double pb0 = 0, pb1 = 0;
    for (int s = 0; s < h.ns; ++s) {
      pb0 += h.at(0, b, s);
      pb1 += h.at(1, b, s);
    }
    // pick the representative with nonnegative llr (ties: the higher index)
    int rep = (pa0 > pa1) ? a : b;
    double r0 = (rep == a) ? pa0 : pb0;
    double r1 = (rep == a) ? pa1 : pb1;
    double key;
    if (r0 == 0 && r1 == 0)
      key = 0.0;
    else if (r1 == 0)
      key = kInfBits;
    else
      key = std::log(r0 / r1);
    reps.push_back({rep, key});
  }
  std::stable_sort(reps.begin(), reps.end(), [](const Rep& x, const Rep& y) {
    if (x.key != y.key) return x.key < y.key;
    return x.label < y.label;
  });
  std::vector<int> order(h.ny);
  for (int i = 0; i < half; ++i) {
    order[half + i] = reps[i].label;
    order[half - 1 - i] = h.ny - 1 - reps[i].label;
  }
  JointHistogram out(h.ny, h.ns);
  out.s_value = h.s_value;
  for (int i = 0; i < h.ny; ++i) {
    out.y_value[i] = h.y_value[order[i]];
    for (int x = 0; x < 2; ++x)
      for (int s = 0; s < h.ns; ++s) out.at(x, i, s) = h.at(x, order[i], s);
  }
  if (perm) *perm = order;
  return out;
}

}  // namespace ldpcq
