#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ldpcq/decoder.hpp"
#include "ldpcq/design.hpp"
#include "ldpcq/lifted_code.hpp"
#include "ldpcq/pipeline.hpp"

namespace ldpcq {

struct FerOptions {
  uint64_t min_frame_errors = 100;
  uint64_t max_frames = 2000000;
  int batch = 1024;  // stop checks happen on batch boundaries, so results do
                     // not depend on the worker count
  int threads = 1;
  uint64_t seed = 1;
  bool noiseless = false;
  int max_iter = -1;
  bool early_term = true;
};

struct FerPoint {
  double ebn0_db = 0;
  uint64_t frames = 0, frame_errors = 0, bit_errors = 0;
  double fer = 0, ber = 0;
  double fer_lo95 = 0, fer_hi95 = 0;  // Clopper-Pearson
  double avg_iterations = 0;
  bool capped = false;  // frame cap hit before the frame-error floor
  double wall_s = 0;
};

// design == nullptr runs the 32-bit box-plus BP baseline (bp_max_iter).
FerPoint run_fer_point(const LiftedCode& code, const DecoderDesign* design, double ebn0_db,
                       const FerOptions& opt, int bp_max_iter = 30);

struct MiTrack {
  std::vector<double> mi;  // [0] = channel hard decision, [i] = after iteration i
  uint64_t frames = 0;
};

MiTrack run_mi_track(const LiftedCode& code, const DecoderDesign* design, double ebn0_db,
                     uint64_t frames, int threads, uint64_t seed, int bp_max_iter = 30);

// 95% Clopper-Pearson interval helpers (regularized incomplete beta).
double clopper_pearson_lo(uint64_t k, uint64_t n, double conf = 0.95);
double clopper_pearson_hi(uint64_t k, uint64_t n, double conf = 0.95);
double incomplete_beta(double a, double b, double x);

// Minimal design Eb/N0 whose final tracked I(X;X_hat) reaches target_mi,
// found by bisection over [lo, hi]; every probe runs a full design.
double bisect_design_ebn0(const LiftedCode& code, Rational rate, DesignParams params, double lo,
                          double hi, double target_mi, double tol_db,
                          const std::function<void(const std::string&)>& log = nullptr);

std::string fer_csv_header();
std::string fer_csv_row(const FerPoint& p);
std::string mi_csv_header();
std::string mi_csv_rows(double ebn0_db, const MiTrack& t);

int env_threads();  // LDPCQ_THREADS, default hardware_concurrency

}  // namespace ldpcq
