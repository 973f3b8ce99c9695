#include <doctest.h>

#include <cmath>

#include "ldpcq/channel.hpp"
#include "ldpcq/design.hpp"
#include "ldpcq/seq_ib.hpp"

using namespace ldpcq;

namespace {

const char* kToy =
    "2 4 2 4\n"
    "punctured 0\n"
    "0 -1 0 0\n"
    "-1 1 0 -1\n";

double qfunc(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

}  // namespace

TEST_CASE("sigma follows the Eb/N0 conversion") {
  ChannelModel ch = ChannelModel::from_ebn0(1.0, 1.0 / 3.0);
  double expect = std::sqrt(1.0 / (2.0 * (1.0 / 3.0) * std::pow(10.0, 0.1)));
  CHECK(ch.sigma == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("noiseless transmission gives the +-2/sigma^2 means, punctured gives zero") {
  BaseGraph bg = parse_base_graph(kToy);
  LiftedCode code = lift(bg, 2);
  ChannelModel ch = ChannelModel::from_ebn0(2.0, 0.5);
  GaussianSource rng(1);
  std::vector<uint8_t> bits(code.n, 0);
  bits[4] = 1;  // col 2, z 0
  auto llr = transmit(code, bits, ch, rng, true);
  double mag = 2.0 / (ch.sigma * ch.sigma);
  CHECK(llr[0] == 0.0);  // punctured col 0
  CHECK(llr[1] == 0.0);
  CHECK(llr[2] == doctest::Approx(mag));
  CHECK(llr[4] == doctest::Approx(-mag));
}

TEST_CASE("empirical LLR mean matches the Gaussian moment oracle") {
  BaseGraph bg = parse_base_graph("1 3 1 2\n0 0 0\n");
  LiftedCode code = lift(bg, 64);
  ChannelModel ch = ChannelModel::from_ebn0(1.0, 0.5);
  GaussianSource rng(7);
  std::vector<uint8_t> bits(code.n, 0);
  double sum = 0;
  int count = 0;
  for (int rep = 0; rep < 600; ++rep) {
    auto llr = transmit(code, bits, ch, rng);
    for (double v : llr) sum += v;
    count += code.n;
  }
  double mean = sum / count;  // expect 2/sigma^2
  double expect = 2.0 / (ch.sigma * ch.sigma);
  double std_llr = 2.0 / ch.sigma;
  double se = std_llr / std::sqrt(double(count));
  CHECK(std::abs(mean - expect) < 3 * se);
}

TEST_CASE("w_ch=1 design reduces to the hard-decision BSC capacity") {
  ChannelModel ch = ChannelModel::from_ebn0(1.0, 1.0 / 3.0);
  ChannelQuantizer q = design_channel_quantizer(ch, 1, 2000, 8, 8, 1);
  CHECK(q.thresholds.empty());  // single sign threshold at zero
  double crossover = qfunc(1.0 / ch.sigma);
  double capacity = 1.0 - binary_entropy(crossover);
  CHECK(q.preserved == doctest::Approx(capacity).epsilon(1e-4));
}

TEST_CASE("5-bit design preserves at least 99 percent of the fine-grid information") {
  ChannelModel ch = ChannelModel::from_ebn0(1.0, 1.0 / 3.0);
  ChannelQuantizer q = design_channel_quantizer(ch, 5, 2000, 8, 50, 1);
  CHECK(q.preserved >= 0.99 * q.finegrid_mi);
  CHECK(q.preserved <= q.finegrid_mi + 1e-12);  // data processing
  SUBCASE("thresholds ascend and reconstructions are odd-symmetric by construction") {
    for (size_t i = 1; i < q.thresholds.size(); ++i) CHECK(q.thresholds[i] > q.thresholds[i - 1]);
    CHECK(q.thresholds.size() == 15);
    CHECK(q.recon.size() == 16);
    for (size_t i = 1; i < q.recon.size(); ++i) CHECK(q.recon[i] >= q.recon[i - 1]);
    CHECK(q.recon.back() == 127);  // scale pins the largest magnitude to the w' bound
    CHECK(q.recon_of(-3) == -q.recon_of(3));
  }
}

TEST_CASE("MI is monotone in the quantizer width") {
  ChannelModel ch = ChannelModel::from_ebn0(0.5, 1.0 / 3.0);
  double prev = 0;
  for (int w : {1, 2, 3, 4, 5}) {
    ChannelQuantizer q = design_channel_quantizer(ch, w, 2000, 8, 30, 1);
    CHECK(q.preserved >= prev - 1e-12);
    prev = q.preserved;
  }
}

TEST_CASE("quantizer symmetry and saturation") {
  ChannelModel ch = ChannelModel::from_ebn0(1.0, 1.0 / 3.0);
  ChannelQuantizer q = design_channel_quantizer(ch, 5, 2000, 8, 30, 1);
  SUBCASE("odd symmetry away from zero, zero maps positive") {
    for (double l : {0.1, 0.5, 1.7, 3.0, 9.9}) CHECK(q.quantize(-l) == -q.quantize(l));
    CHECK(q.quantize(0.0) == 1);
  }
  SUBCASE("saturation at the outermost level") {
    CHECK(q.quantize(-1e9) == -16);
    CHECK(q.quantize(1e9) == 16);
  }
  SUBCASE("values below the first threshold map to the smallest level") {
    CHECK(q.quantize(q.thresholds[0] * 0.5) == 1);
  }
}

TEST_CASE("quantized bucket masses match the fine-grid integration oracle") {
  ChannelModel ch = ChannelModel::from_ebn0(1.0, 1.0 / 3.0);
  ChannelQuantizer q = design_channel_quantizer(ch, 3, 2000, 8, 30, 1);
  // oracle: bucket masses of p(y | b=0) integrated on a much finer grid
  JointHistogram fine = channel_llr_histogram(ch, 20000);
  std::vector<double> oracle(2 * q.num_levels(), 0.0);
  for (int i = 0; i < fine.ny; ++i) {
    int t = q.quantize(fine.y_value[i]);
    oracle[label_index(t, q.num_levels())] += fine.at(0, i, 0) * 2;
  }
  GaussianSource rng(3);
  const int kDraws = 200000;
  std::vector<double> emp(2 * q.num_levels(), 0.0);
  double s2 = ch.sigma * ch.sigma;
  for (int i = 0; i < kDraws; ++i) {
    double y = 1.0 + ch.sigma * rng.next();
    int t = q.quantize(2.0 * y / s2);
    emp[label_index(t, q.num_levels())] += 1.0 / kDraws;
  }
  for (size_t i = 0; i < emp.size(); ++i) {
    double se = std::sqrt(oracle[i] * (1 - oracle[i]) / kDraws);
    CHECK(std::abs(emp[i] - oracle[i]) < 3 * se + 1e-4);
  }
}

TEST_CASE("degenerate sigma is rejected") {
  ChannelModel ch;
  ch.sigma = 0.0;
  CHECK_THROWS(design_channel_quantizer(ch, 5, 2000, 8, 10, 1));
  ChannelModel ok = ChannelModel::from_ebn0(1.0, 0.5);
  CHECK_THROWS(design_channel_quantizer(ok, 5, 500, 8, 10, 1));  // grid too coarse
}
