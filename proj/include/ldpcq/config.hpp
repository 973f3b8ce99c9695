#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ldpcq/base_graph.hpp"
#include "ldpcq/design.hpp"
#include "ldpcq/pipeline.hpp"

namespace ldpcq {

// Configuration of a design/evaluation run. Defaults follow the evaluation
// setup: 30 flooding / 15 layered iterations, 10000 training frames, 500 IB
// initializations, w_ch = 5, w' = 8.
struct ExperimentConfig {
  std::string base_graph = "assets/bg5g_46x68.txt";
  int z = 32;
  Rational rate{1, 3};
  std::string schedule = "flooding";
  std::string alignment = "row";
  std::string variant = "mem";  // conv | mem | merged | bp
  int w = 2;
  int w_ch = 5;
  int w_prime = 8;
  int w_ups = 3;
  int w_psi = 2;
  int max_iter = -1;  // -1: 30 flooding, 15 layered
  double design_ebn0_db = 2.0;
  bool design_auto = false;
  double design_auto_target = 0.9999;
  double design_auto_lo = 0.0;
  double design_auto_hi = 6.0;
  double design_auto_tol_db = 0.05;
  int train_frames = 10000;
  int ib_inits = 500;
  int grid_bins = 2000;
  uint64_t seed = 1;
  std::vector<double> sweep_ebn0_db;
  uint64_t min_frame_errors = 100;
  uint64_t max_frames = 2000000;
  int batch = 1024;
  uint64_t mi_frames = 10000;
  double mi_ebn0_db = -1e30;  // sentinel: use design_ebn0_db
  bool noiseless = false;
  bool strict_assets = false;

  int resolved_max_iter() const {
    if (max_iter >= 0) return max_iter;
    return schedule == "layered" ? 15 : 30;
  }
  void validate() const;
  DesignParams design_params(int threads) const;
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& json_text);

struct BuiltCode {
  BaseGraph full;
  BaseGraph adapted;
  LiftedCode code;
};
BuiltCode build_code(const ExperimentConfig& cfg);

}  // namespace ldpcq
