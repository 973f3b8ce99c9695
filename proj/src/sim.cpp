#include "ldpcq/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "ldpcq/channel.hpp"
#include "ldpcq/seq_ib.hpp"
#include "ldpcq/sim.hpp"

namespace ldpcq {

int env_threads() {
  if (const char* e = std::getenv("LDPCQ_THREADS")) {
    int v = std::atoi(e);
    if (v >= 1) return v;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

namespace {

struct BatchStats {
  uint64_t frame_errors = 0, bit_errors = 0, iterations = 0;
};

// One frame: draw info bits, encode, transmit, decode, compare info bits.
template <typename DecodeFn>
BatchStats run_frames(const LiftedCode& code, const Encoder& enc, const ChannelModel& ch,
                      uint64_t seed, uint64_t lo, uint64_t hi, bool noiseless, DecodeFn&& dec) {
  BatchStats st;
  for (uint64_t f = lo; f < hi; ++f) {
    GaussianSource rng(mix_seed(seed, 0xfe5ull, f));
    std::vector<uint8_t> info(code.k);
    uint64_t word = 0;
    int have = 0;
    for (int i = 0; i < code.k; ++i) {
      if (!have) {
        word = rng.raw()();
        have = 64;
      }
      info[i] = word & 1;
      word >>= 1;
      --have;
    }
    std::vector<uint8_t> bits = enc.encode(info);
    std::vector<double> llr = transmit(code, bits, ch, rng, noiseless);
    DecodeResult res = dec(llr);
    uint64_t be = 0;
    for (int i = 0; i < code.k; ++i) be += res.bits[i] != info[i];
    st.bit_errors += be;
    st.frame_errors += be != 0;
    st.iterations += static_cast<uint64_t>(res.iterations);
  }
  return st;
}

}  // namespace

FerPoint run_fer_point(const LiftedCode& code, const DecoderDesign* design, double ebn0_db,
                       const FerOptions& opt, int bp_max_iter) {
  auto t0 = std::chrono::steady_clock::now();
  double rate = static_cast<double>(code.k) / code.transmitted_length();
  ChannelModel ch = ChannelModel::from_ebn0(ebn0_db, rate);
  Encoder enc(code);

  FerPoint pt;
  pt.ebn0_db = ebn0_db;
  int nth = std::max(1, opt.threads);

  uint64_t done = 0;
  while (pt.frame_errors < opt.min_frame_errors && done < opt.max_frames) {
    uint64_t batch = std::min<uint64_t>(opt.batch, opt.max_frames - done);
    std::vector<BatchStats> parts(nth);
    std::vector<std::thread> pool;
    uint64_t chunk = (batch + nth - 1) / nth;
    for (int t = 0; t < nth; ++t) {
      uint64_t lo = done + t * chunk;
      uint64_t hi = std::min(done + batch, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back([&, t, lo, hi] {
        if (design) {
          QuantizedDecoder dec(code, *design);
          DecodeOptions dopt;
          dopt.max_iter = opt.max_iter;
          dopt.early_term = opt.early_term;
          parts[t] = run_frames(code, enc, ch, opt.seed, lo, hi, opt.noiseless,
                                [&](const std::vector<double>& llr) { return dec.decode(llr, dopt); });
        } else {
          DecodeOptions dopt;
          dopt.early_term = opt.early_term;
          int iters = opt.max_iter > 0 ? opt.max_iter : bp_max_iter;
          parts[t] = run_frames(code, enc, ch, opt.seed, lo, hi, opt.noiseless,
                                [&](const std::vector<double>& llr) {
                                  return decode_bp(code, llr, iters, dopt);
                                });
        }
      });
    }
    for (auto& th : pool) th.join();
    for (const auto& p : parts) {
      pt.frame_errors += p.frame_errors;
      pt.bit_errors += p.bit_errors;
      pt.avg_iterations += static_cast<double>(p.iterations);
    }
    done += batch;
  }
  pt.frames = done;
  pt.capped = pt.frame_errors < opt.min_frame_errors;
  pt.fer = pt.frames ? static_cast<double>(pt.frame_errors) / pt.frames : 0.0;
  pt.ber = pt.frames ? static_cast<double>(pt.bit_errors) / (pt.frames * (uint64_t)code.k) : 0.0;
  pt.fer_lo95 = clopper_pearson_lo(pt.frame_errors, pt.frames);
  pt.fer_hi95 = clopper_pearson_hi(pt.frame_errors, pt.frames);
  pt.avg_iterations = pt.frames ? pt.avg_iterations / pt.frames : 0.0;
  pt.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return pt;
}

MiTrack run_mi_track(const LiftedCode& code, const DecoderDesign* design, double ebn0_db,
                     uint64_t frames, int threads, uint64_t seed, int bp_max_iter) {
  double rate = static_cast<double>(code.k) / code.transmitted_length();
  ChannelModel ch = ChannelModel::from_ebn0(ebn0_db, rate);
  Encoder enc(code);
  int max_iter = design ? design->max_iter : bp_max_iter;

  int nth = std::max(1, threads);
  std::vector<std::vector<uint64_t>> errs(nth, std::vector<uint64_t>(max_iter + 1, 0));
  std::vector<std::thread> pool;
  uint64_t chunk = (frames + nth - 1) / nth;
  for (int t = 0; t < nth; ++t) {
    uint64_t lo = t * chunk, hi = std::min(frames, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, t, lo, hi] {
      DecodeOptions dopt;
      dopt.early_term = true;
      dopt.track_hard = true;
      QuantizedDecoder* qd = nullptr;
      if (design) qd = new QuantizedDecoder(code, *design);
      for (uint64_t f = lo; f < hi; ++f) {
        GaussianSource rng(mix_seed(seed, 0xfe5ull, f));
        std::vector<uint8_t> info(code.k);
        uint64_t word = 0;
        int have = 0;
        for (int i = 0; i < code.k; ++i) {
          if (!have) {
            word = rng.raw()();
            have = 64;
          }
          info[i] = word & 1;
          word >>= 1;
          --have;
        }
        std::vector<uint8_t> bits = enc.encode(info);
        std::vector<double> llr = transmit(code, bits, ch, rng);
        DecodeResult res = design ? qd->decode(llr, dopt) : decode_bp(code, llr, max_iter, dopt);
        for (int it = 0; it <= max_iter; ++it) {
          uint64_t e = 0;
          const auto& hd = res.iter_hard[it];
          for (int v = 0; v < code.n; ++v) e += hd[v] != bits[v];
          errs[t][it] += e;
        }
      }
      delete qd;
    });
  }
  for (auto& th : pool) th.join();

  MiTrack out;
  out.frames = frames;
  out.mi.resize(max_iter + 1);
  for (int it = 0; it <= max_iter; ++it) {
    uint64_t e = 0;
    for (int t = 0; t < nth; ++t) e += errs[t][it];
    double p = static_cast<double>(e) / (static_cast<double>(frames) * code.n);
    out.mi[it] = 1.0 - binary_entropy(p);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Clopper-Pearson via the regularized incomplete beta function

namespace {

double betacf(double a, double b, double x) {
  const int kMaxIt = 300;
  const double kEps = 3e-14, kFpmin = 1e-300;
  double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0, d = 1.0 - qab * x / qap;
  if (std::abs(d) < kFpmin) d = kFpmin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIt; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpmin) d = kFpmin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpmin) c = kFpmin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpmin) d = kFpmin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpmin) c = kFpmin;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double bt = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                       b * std::log1p(-x));
  if (x < (a + 1.0) / (a + b + 2.0)) return bt * betacf(a, b, x) / a;
  return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

namespace {

double beta_inv(double p, double a, double b) {
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (incomplete_beta(a, b, mid) < p)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double clopper_pearson_lo(uint64_t k, uint64_t n, double conf) {
  if (n == 0 || k == 0) return 0.0;
  double alpha = 1.0 - conf;
  return beta_inv(alpha / 2.0, static_cast<double>(k), static_cast<double>(n - k + 1));
}

double clopper_pearson_hi(uint64_t k, uint64_t n, double conf) {
  if (n == 0) return 1.0;
  if (k >= n) return 1.0;
  double alpha = 1.0 - conf;
  return beta_inv(1.0 - alpha / 2.0, static_cast<double>(k + 1), static_cast<double>(n - k));
}

double bisect_design_ebn0(const LiftedCode& code, Rational rate, DesignParams params, double lo,
                          double hi, double target_mi, double tol_db,
                          const std::function<void(const std::string&)>& log) {
  auto feasible = [&](double ebn0) {
    DesignParams p = params;
    p.design_ebn0_db = ebn0;
    p.checkpoint_path.clear();
    DecoderDesign d = design_full(code, rate, p);
    MiTrack t = run_mi_track(code, &d, ebn0, params.frames, params.threads,
                             mix_seed(params.seed, 0xb15ec7ull));
    double final_mi = t.mi.back();
    if (log) {
      std::ostringstream os;
      os << "probe design Eb/N0 " << ebn0 << " dB -> final MI " << final_mi;
      log(os.str());
    }
    return final_mi >= target_mi;
  };
  if (!feasible(hi)) return hi;  // even the upper end falls short; report it
  while (hi - lo > tol_db) {
    double mid = 0.5 * (lo + hi);
    if (feasible(mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

std::string fer_csv_header() {
  return "ebn0_db,frames,frame_errors,bit_errors,fer,ber,fer_lo95,fer_hi95,avg_iterations,capped,"
         "wall_s";
}

namespace {
std::string g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}
}  // namespace

std::string fer_csv_row(const FerPoint& p) {
  std::ostringstream os;
  os << g(p.ebn0_db) << ',' << p.frames << ',' << p.frame_errors << ',' << p.bit_errors << ','
     << g(p.fer) << ',' << g(p.ber) << ',' << g(p.fer_lo95) << ',' << g(p.fer_hi95) << ','
     << g(p.avg_iterations) << ',' << (p.capped ? 1 : 0) << ',';
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", p.wall_s);
  os << buf;
  return os.str();
}

std::string mi_csv_header() { return "ebn0_db,iteration,mi_bits,frames"; }

std::string mi_csv_rows(double ebn0_db, const MiTrack& t) {
  std::ostringstream os;
  for (size_t i = 0; i < t.mi.size(); ++i)
    os << g(ebn0_db) << ',' << i << ',' << g(t.mi[i]) << ',' << t.frames << '\n';
  return os.str();
}

}  // namespace ldpcq
