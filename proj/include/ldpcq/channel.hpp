#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "ldpcq/histogram.hpp"
#include "ldpcq/lifted_code.hpp"

namespace ldpcq {

// BPSK over AWGN with unit symbol energy; sigma is per-dimension.
struct ChannelModel {
  double sigma = 1.0;
  double ebn0_db = 0.0;
  double rate = 1.0;
  static ChannelModel from_ebn0(double ebn0_db, double rate);
};

// Gaussian draws via Box-Muller on the raw 64-bit stream; pinned here so
// design files reproduce across standard libraries.
class GaussianSource {
 public:
  explicit GaussianSource(uint64_t seed) : rng_(seed) {}
  double next();
  double uniform();  // in [0,1)
  std::mt19937_64& raw() { return rng_; }

 private:
  std::mt19937_64 rng_;
  bool have_spare_ = false;
  double spare_ = 0;
};

// Per transmitted bit: L = 2y/sigma^2 with y = (1-2b) + noise. Punctured
// positions carry exactly zero. noiseless mode emits the +-2/sigma^2 means
// (test hook).
std::vector<double> transmit(const LiftedCode& code, const std::vector<uint8_t>& bits,
                             const ChannelModel& ch, GaussianSource& rng,
                             bool noiseless = false);

// Mutual-information-maximizing symmetric quantizer of the channel LLR.
struct ChannelQuantizer {
  int w_ch = 5;
  std::vector<double> thresholds;  // 2^{w_ch-1}-1 ascending positive reals
  std::vector<int> recon;          // positive levels 1..2^{w_ch-1}, w'-bit ints
  double llr_scale = 1.0;          // integer-LLR units per natural-log LLR
  double preserved = 0;            // I(B;T^ch) bits
  double finegrid_mi = 0;          // I(B;L^ch) on the design grid

  int num_levels() const { return static_cast<int>(recon.size()); }
  // label in {-2^{w_ch-1},..,-1, +1,..}; L == 0 maps to +1
  int quantize(double llr) const;
  int recon_of(int label) const {
    return label > 0 ? recon[label - 1] : -recon[-label - 1];
  }
};

// Discretizes the conditional Gaussian LLR densities on a symmetric grid and
// compresses with the sequential IB engine (singleton side alphabet).
// w_prime fixes the integer reconstruction width; the scale maps the largest
// channel reconstruction magnitude to 2^{w_prime-1}-1.
ChannelQuantizer design_channel_quantizer(const ChannelModel& ch, int w_ch, int grid_bins,
                                          int w_prime, int inits, uint64_t seed,
                                          int threads = 1);

// The fine-grid histogram used by the designer; exposed for oracles.
JointHistogram channel_llr_histogram(const ChannelModel& ch, int grid_bins);

}  // namespace ldpcq
