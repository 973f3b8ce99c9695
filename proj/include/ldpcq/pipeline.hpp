#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "ldpcq/decoder.hpp"
#include "ldpcq/design.hpp"
#include "ldpcq/histogram.hpp"
#include "ldpcq/lifted_code.hpp"

namespace ldpcq {

struct DesignParams {
  Schedule schedule = Schedule::flooding;
  Alignment alignment = Alignment::row;
  int w = 2;
  int w_ch = 5;
  int w_prime = 8;
  bool memory_assist = true;
  bool merged = false;
  int w_ups = 3, w_psi = 2;
  double design_ebn0_db = 1.0;
  int max_iter = 30;
  int frames = 10000;
  int inits = 500;
  int grid_bins = 2000;
  uint64_t seed = 1;
  int threads = 1;
  std::string checkpoint_path;
  std::function<void(const std::string&)> log;
};

// Region histograms of one design step: symmetrized, normalized, with the
// zero LLR bin split into a -0/+0 label pair so the alphabet stays even and
// mirror-symmetric.
struct SampleBatch {
  int iteration = 0;
  int update = 0;
  std::vector<int> region_ids;
  std::vector<JointHistogram> hists;
};

// Designs the quantizer and tables of one region from its histogram.
// llr_scale converts natural-log LLRs to the integer grid.
RegionTables design_region_tables(const JointHistogram& hist, int w, int w_prime,
                                  double llr_scale, int inits, uint64_t seed, int threads,
                                  bool merged, int w_ups, int w_psi);

// Monte-Carlo training set plus the iteration-by-iteration designer. Frame
// states persist at the current design frontier so each step costs one
// decoder advance over the training set.
class DesignPipeline {
 public:
  DesignPipeline(const LiftedCode& code, Rational rate, const DesignParams& params);
  ~DesignPipeline();

  SampleBatch collect(int iteration, int update);
  void design_step(const SampleBatch& batch);
  void advance(int iteration, int update);
  DecoderDesign run();  // the full loop with per-iteration checkpoints

  const DecoderDesign& design() const { return design_; }

 private:
  void generate_frames();
  const LiftedCode& code_;
  DesignParams params_;
  DecoderDesign design_;
  std::unique_ptr<Encoder> encoder_;
  std::unique_ptr<QuantizedDecoder> decoder_;
  std::vector<MsgState> states_;
  std::vector<std::vector<uint8_t>> codewords_;
};

DecoderDesign design_full(const LiftedCode& code, Rational rate, const DesignParams& params);

uint64_t mix_seed(uint64_t seed, uint64_t a, uint64_t b = 0, uint64_t c = 0);

}  // namespace ldpcq
