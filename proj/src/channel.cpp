#include "ldpcq/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ldpcq/seq_ib.hpp"

namespace ldpcq {

ChannelModel ChannelModel::from_ebn0(double ebn0_db, double rate) {
  ChannelModel ch;
  ch.ebn0_db = ebn0_db;
  ch.rate = rate;
  double ebn0 = std::pow(10.0, ebn0_db / 10.0);
  ch.sigma = std::sqrt(1.0 / (2.0 * rate * ebn0));
  return ch;
}

double GaussianSource::uniform() {
  return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
}

double GaussianSource::next() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform(), u2 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double a = 6.283185307179586476925287 * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

std::vector<double> transmit(const LiftedCode& code, const std::vector<uint8_t>& bits,
                             const ChannelModel& ch, GaussianSource& rng, bool noiseless) {
  if (bits.size() != static_cast<size_t>(code.n))
    throw std::invalid_argument("transmit: codeword length mismatch");
  std::vector<double> llr(code.n, 0.0);
  double s2 = ch.sigma * ch.sigma;
  for (int c = 0; c < code.bg.cols; ++c) {
    if (code.punctured[c]) continue;
    for (int zz = 0; zz < code.z; ++zz) {
      int v = c * code.z + zz;
      double x = bits[v] ? -1.0 : 1.0;
      double y = noiseless ? x : x + ch.sigma * rng.next();
      llr[v] = 2.0 * y / s2;
    }
  }
  return llr;
}

int ChannelQuantizer::quantize(double llr) const {
  double mag = std::abs(llr);
  int level = 1;
  for (double t : thresholds)
    if (mag >= t)
      ++level;
    else
      break;
  return llr < 0 ? -level : level;  // zero ties map positive
}

JointHistogram channel_llr_histogram(const ChannelModel& ch, int grid_bins) {
  if (grid_bins < 2 || grid_bins % 2) throw std::invalid_argument("grid_bins must be even >= 2");
  double s2 = ch.sigma * ch.sigma;
  double mu = 2.0 / s2;                // mean of L | b=0
  double sd = 2.0 / ch.sigma;          // std of L
  double range = mu + 8.0 * sd;
  JointHistogram h(grid_bins, 1);
  auto qfun = [](double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); };
  // Tail-safe N(0,1) interval mass.
  auto interval = [&](double za, double zb) {
    if (za >= 0) return qfun(za) - qfun(zb);
    if (zb <= 0) return qfun(-zb) - qfun(-za);
    return 1.0 - qfun(-za) - qfun(zb);
  };
  double lo = -range, step = 2.0 * range / grid_bins;
  for (int i = 0; i < grid_bins; ++i) {
    double a = lo + i * step, b = a + step;
    double za = (i == 0) ? -40.0 : (a - mu) / sd;
    double zb = (i == grid_bins - 1) ? 40.0 : (b - mu) / sd;
    // conditional on b=0 (mean +mu); the b=1 side is the exact mirror
    double m0 = interval(za, zb);
    h.at(0, i, 0) = 0.5 * m0;
    h.at(1, grid_bins - 1 - i, 0) = 0.5 * m0;
    h.y_value[i] = 0.5 * (a + b);
  }
  h.normalize();
  return h;
}

ChannelQuantizer design_channel_quantizer(const ChannelModel& ch, int w_ch, int grid_bins,
                                          int w_prime, int inits, uint64_t seed, int threads) {
  if (w_ch < 1) throw std::invalid_argument("w_ch must be >= 1");
  if (grid_bins < 1000) throw std::invalid_argument("grid must have at least 1000 bins");
  if (ch.sigma <= 0 || !std::isfinite(ch.sigma))
    throw std::invalid_argument("degenerate channel sigma");

  JointHistogram h = channel_llr_histogram(ch, grid_bins);
  int num_t = 1 << w_ch;
  CompressionResult res = sequential_ib_side(h, num_t, inits, seed, threads);

  ChannelQuantizer q;
  q.w_ch = w_ch;
  q.preserved = res.preserved;
  q.finegrid_mi = mutual_information(h);
  if (q.preserved <= 0)
    throw std::runtime_error("channel quantizer collapsed: no information preserved");

  // Positive-side cluster boundaries translate to bin-edge magnitudes.
  double lo = -(2.0 / (ch.sigma * ch.sigma) + 8.0 * 2.0 / ch.sigma);
  double step = -2.0 * lo / grid_bins;
  int half = num_t / 2;
  for (int j = 1; j < half; ++j) {
    int idx = res.clustering.tau[half + j];
    q.thresholds.push_back(lo + idx * step);
  }

  // Real reconstructions of the positive clusters, then the integer scale.
  std::vector<double> real_rec(half);
  double max_mag = 0;
  for (int j = 0; j < half; ++j) {
    double p0 = res.joint.at(0, half + j, 0);
    double p1 = res.joint.at(1, half + j, 0);
    if (p0 <= 0 || p1 <= 0)
      throw std::runtime_error("channel quantizer collapsed: empty reconstruction cell");
    real_rec[j] = std::log(p0 / p1);
    max_mag = std::max(max_mag, std::abs(real_rec[j]));
  }
  if (max_mag <= 0) throw std::runtime_error("channel quantizer collapsed: zero dynamic range");
  int limit = (1 << (w_prime - 1)) - 1;
  q.llr_scale = limit / max_mag;
  q.recon.resize(half);
  for (int j = 0; j < half; ++j) {
    long v = std::lround(real_rec[j] * q.llr_scale);
    q.recon[j] = static_cast<int>(std::clamp<long>(v, -limit, limit));
  }
  return q;
}

}  // namespace ldpcq
