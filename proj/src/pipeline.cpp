#include "ldpcq/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <thread>

#include "ldpcq/seq_ib.hpp"

namespace ldpcq {

uint64_t mix_seed(uint64_t seed, uint64_t a, uint64_t b, uint64_t c) {
  uint64_t h = splitmix64(seed ^ (a * 0x9e3779b97f4a7c15ull));
  h = splitmix64(h ^ (b * 0xbf58476d1ce4e5b9ull));
  if (c) h = splitmix64(h ^ (c * 0x94d049bb133111ebull));
  return h;
}

namespace {

void parallel_chunks(int total, int threads, const std::function<void(int, int, int)>& fn) {
  int nth = std::max(1, std::min(threads, total));
  if (nth == 1) {
    fn(0, 0, total);
    return;
  }
  std::vector<std::thread> pool;
  int chunk = (total + nth - 1) / nth;
  for (int t = 0; t < nth; ++t) {
    int lo = t * chunk, hi = std::min(total, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&fn, t, lo, hi] { fn(t, lo, hi); });
  }
  for (auto& th : pool) th.join();
}

int psi_out_levels(const MergeTables& mt) {
  int m = 0;
  for (int8_t v : mt.psi) m = std::max(m, static_cast<int>(v < 0 ? -v : v));
  return m;
}

// Raw y^c values arrive in the signed-zero encoding sign*(2*mag+1); index
// (enc + 2^w' - 1)/2 lays them out as the even, exactly mirrored alphabet
// {-max..-1, -0, +0, +1..+max}.
JointHistogram counts_to_histogram(const std::vector<uint64_t>& counts, int ns, int w_prime) {
  int ny = 1 << w_prime;  // 256 for w' = 8
  JointHistogram h(ny, ns);
  for (int s = 0; s < ns; ++s) h.s_value[s] = s;
  auto cnt = [&](int x, int j, int s) {
    return static_cast<double>(counts[(static_cast<size_t>(x) * ny + j) * ns + s]);
  };
  for (int x = 0; x < 2; ++x)
    for (int j = 0; j < ny; ++j)
      for (int s = 0; s < ns; ++s)
        h.at(x, j, s) = 0.5 * (cnt(x, j, s) + cnt(1 - x, ny - 1 - j, ns - 1 - s));
  int half = ny / 2;
  for (int i = 0; i < ny; ++i) h.y_value[i] = i < half ? i - (half - 1) : i - half;
  h.normalize();
  return h;
}

std::vector<int> clustering_thresholds(const Clustering& cl, int ny) {
  int T = cl.num_clusters();
  std::vector<int> th;
  for (int j = 1; j <= T / 2 - 1; ++j) {
    int idx = cl.tau[T / 2 + j];
    th.push_back(idx - ny / 2);  // label value of the first element of the upper cluster
  }
  return th;
}

int16_t scaled_llr(double p0, double p1, double scale, int limit) {
  if (p0 <= 0.0 && p1 <= 0.0) return 0;
  if (p1 <= 0.0) return static_cast<int16_t>(limit);
  if (p0 <= 0.0) return static_cast<int16_t>(-limit);
  long v = std::lround(std::log(p0 / p1) * scale);
  return static_cast<int16_t>(std::clamp<long>(v, -limit, limit));
}

}  // namespace

RegionTables design_region_tables(const JointHistogram& hist, int w, int w_prime,
                                  double llr_scale, int inits, uint64_t seed, int threads,
                                  bool merged, int w_ups, int w_psi) {
  RegionTables rt;
  int num_t = 1 << w;
  int limit = (1 << (w_prime - 1)) - 1;
  CompressionResult res = sequential_ib_side(hist, num_t, inits, seed, threads);
  rt.q.thresholds = clustering_thresholds(res.clustering, hist.ny);

  int t_levels = num_t / 2;
  if (!merged) {
    rt.recon.t_levels = t_levels;
    rt.recon.s_levels = hist.ns == 1 ? 0 : hist.ns / 2;
    int cols = hist.ns == 1 ? 1 : hist.ns;
    rt.recon.v.assign(static_cast<size_t>(num_t) * cols, 0);
    for (int ti = 0; ti < num_t; ++ti)
      for (int si = 0; si < cols; ++si)
        rt.recon.v[static_cast<size_t>(ti) * cols + si] =
            scaled_llr(res.joint.at(0, ti, si), res.joint.at(1, ti, si), llr_scale, limit);
    return rt;
  }

  // Merged tables: flatten (s^psi, t^c) into one mirror-laid-out alphabet,
  // sort by LLR, compress twice.
  rt.recon.t_levels = t_levels;
  rt.recon.s_levels = 0;
  rt.recon.v.assign(num_t, 0);

  MergeTables mt;
  mt.t_levels = t_levels;
  mt.s_levels = hist.ns == 1 ? 0 : hist.ns / 2;
  int flat = hist.ns * num_t;
  JointHistogram flat_h(flat, 1);
  for (int si = 0; si < hist.ns; ++si)
    for (int ti = 0; ti < num_t; ++ti) {
      int f = si * num_t + ti;
      flat_h.y_value[f] = f;
      for (int x = 0; x < 2; ++x) flat_h.at(x, f, 0) = res.joint.at(x, ti, si);
    }
  std::vector<int> perm;
  JointHistogram sorted = sort_by_llr_mirror(flat_h, &perm);
  int u_count = std::min(1 << w_ups, flat);
  CompressionResult ups_res = sequential_ib_side(sorted, u_count, inits,
                                                 mix_seed(seed, 0x75707331ull), threads);
  mt.u_levels = u_count / 2;
  mt.ups.assign(static_cast<size_t>(hist.ns) * num_t, 0);
  std::vector<int> assign = [&] {
    SeqIbEngine e(sorted, u_count);
    e.set_boundaries(ups_res.clustering.tau);
    return e.assignment();
  }();
  for (int pos = 0; pos < flat; ++pos) {
    int f = perm[pos];  // original flat index at sorted position pos
    int u_label = index_label(assign[pos], mt.u_levels);
    mt.ups[f] = static_cast<int8_t>(u_label);
  }
  mt.phi.assign(2 * mt.u_levels, 0);
  for (int ui = 0; ui < 2 * mt.u_levels; ++ui)
    mt.phi[ui] =
        scaled_llr(ups_res.joint.at(0, ui, 0), ups_res.joint.at(1, ui, 0), llr_scale, limit);

  // psi: compress t^ups to the retained side message
  int s_count = std::min(1 << w_psi, 2 * mt.u_levels);
  CompressionResult psi_res = sequential_ib_side(ups_res.joint, s_count, inits,
                                                 mix_seed(seed, 0x70736931ull), threads);
  mt.psi.assign(2 * mt.u_levels, 0);
  {
    SeqIbEngine e(ups_res.joint, s_count);
    e.set_boundaries(psi_res.clustering.tau);
    std::vector<int> pa = e.assignment();
    for (int ui = 0; ui < 2 * mt.u_levels; ++ui)
      mt.psi[ui] = static_cast<int8_t>(index_label(pa[ui], s_count / 2));
  }
  rt.merge = std::move(mt);
  return rt;
}

DesignPipeline::DesignPipeline(const LiftedCode& code, Rational rate, const DesignParams& params)
    : code_(code), params_(params) {
  design_.code_hash = code_hash(code.bg, code.z, rate);
  design_.z = code.z;
  design_.rate = rate;
  design_.schedule = params.schedule;
  design_.alignment = params.alignment;
  design_.w = params.w;
  design_.w_ch = params.w_ch;
  design_.w_prime = params.w_prime;
  design_.memory_assist = params.memory_assist || params.merged;
  design_.merged = params.merged;
  design_.w_ups = params.merged ? params.w_ups : 0;
  design_.w_psi = params.merged ? params.w_psi : 0;
  design_.design_ebn0_db = params.design_ebn0_db;
  design_.max_iter = params.max_iter;
  design_.updates_per_iter = params.schedule == Schedule::layered ? code.bg.rows : 1;
  design_.seed = params.seed;

  ChannelModel ch = ChannelModel::from_ebn0(params.design_ebn0_db, rate.value());
  design_.chq = design_channel_quantizer(ch, params.w_ch, params.grid_bins, params.w_prime,
                                         params.inits, mix_seed(params.seed, 0xc4a11ull),
                                         params.threads);
  encoder_ = std::make_unique<Encoder>(code);
  decoder_ = std::make_unique<QuantizedDecoder>(code, design_);
  generate_frames();
}

DesignPipeline::~DesignPipeline() = default;

void DesignPipeline::generate_frames() {
  int F = params_.frames;
  states_.resize(F);
  codewords_.resize(F);
  ChannelModel ch = ChannelModel::from_ebn0(params_.design_ebn0_db, design_.rate.value());
  parallel_chunks(F, params_.threads, [&](int, int lo, int hi) {
    for (int f = lo; f < hi; ++f) {
      GaussianSource rng(mix_seed(params_.seed, 0xf4a3e5ull, f));
      std::vector<uint8_t> info(code_.k);
      uint64_t word = 0;
      int have = 0;
      for (int i = 0; i < code_.k; ++i) {
        if (!have) {
          word = rng.raw()();
          have = 64;
        }
        info[i] = word & 1;
        word >>= 1;
        --have;
      }
      codewords_[f] = encoder_->encode(info);
      std::vector<double> llr = transmit(code_, codewords_[f], ch, rng);
      decoder_->init_state(states_[f], llr);
    }
  });
}

SampleBatch DesignPipeline::collect(int iteration, int update) {
  SampleBatch batch;
  batch.iteration = iteration;
  batch.update = update;

  // side alphabet of this step
  int ns = 1;
  if (iteration > 0) {
    if (design_.merged) {
      const StepTables* prev = nullptr;
      if (design_.schedule == Schedule::flooding) {
        prev = &design_.step(iteration - 1, 0);
      } else {
        int row = decoder_->row_of_update(iteration, update);
        int u_prev = iteration - 1 == 0
                         ? static_cast<int>(std::find(decoder_->init_order().begin(),
                                                      decoder_->init_order().end(), row) -
                                            decoder_->init_order().begin())
                         : row;
        prev = &design_.step(iteration - 1, u_prev);
      }
      ns = 2 * psi_out_levels(*prev->regions[0].merge);
    } else if (design_.memory_assist) {
      ns = 1 << design_.w;
    }
  }

  // regions of this step
  std::vector<int> region_ids;
  if (design_.schedule == Schedule::flooding) {
    if (design_.alignment == Alignment::row) {
      for (int r = 0; r < code_.bg.rows; ++r) region_ids.push_back(r);
    } else {
      region_ids.push_back(0);
    }
  } else {
    region_ids.push_back(design_.region_of_row(decoder_->row_of_update(iteration, update)));
  }
  int nregions = static_cast<int>(region_ids.size());
  std::vector<int> region_index(code_.bg.rows, 0);
  if (design_.alignment == Alignment::row)
    for (int i = 0; i < nregions; ++i) region_index[region_ids[i]] = i;

  int ybins = 1 << design_.w_prime;
  size_t tensor = static_cast<size_t>(nregions) * 2 * ybins * ns;
  int nth = std::max(1, params_.threads);
  std::vector<std::vector<uint64_t>> counts(nth, std::vector<uint64_t>(tensor, 0));

  int s_levels = ns / 2;  // 0 when singleton
  parallel_chunks(params_.frames, nth, [&](int tid, int lo, int hi) {
    std::vector<int16_t> yc;
    std::vector<int8_t> sv;
    std::vector<int> slots;
    QuantizedDecoder dec(code_, design_);
    auto& cnt = counts[tid];
    for (int f = lo; f < hi; ++f) {
      dec.peek_step(states_[f], iteration, update, yc, sv, slots);
      const auto& bits = codewords_[f];
      for (int slot : slots) {
        int m = slot / code_.z;
        int zz = slot - m * code_.z;
        int region = region_index[code_.edge_row[m]];
        int x = bits[code_.lifted_vn(m, zz)];
        int j = (yc[slot] + ybins - 1) / 2;  // signed-zero encoding to alphabet index
        int si = ns == 1 ? 0 : label_index(sv[slot], s_levels);
        cnt[(static_cast<size_t>(region) * 2 + x) * ybins * ns + static_cast<size_t>(j) * ns +
            si]++;
      }
    }
  });
  for (int t = 1; t < nth; ++t)
    for (size_t i = 0; i < tensor; ++i) counts[0][i] += counts[t][i];

  for (int ri = 0; ri < nregions; ++ri) {
    std::vector<uint64_t> region_counts(static_cast<size_t>(2) * ybins * ns);
    std::memcpy(region_counts.data(), counts[0].data() + static_cast<size_t>(ri) * 2 * ybins * ns,
                region_counts.size() * sizeof(uint64_t));
    uint64_t total = 0;
    for (uint64_t v : region_counts) total += v;
    if (total == 0)
      throw std::runtime_error(
          "design step has an empty region histogram; lower the design SNR or keep early "
          "termination disabled during collection");
    batch.region_ids.push_back(region_ids[ri]);
    batch.hists.push_back(counts_to_histogram(region_counts, ns, design_.w_prime));
  }
  return batch;
}

void DesignPipeline::design_step(const SampleBatch& batch) {
  StepTables st;
  st.iteration = batch.iteration;
  st.update = batch.update;
  for (size_t i = 0; i < batch.region_ids.size(); ++i) {
    uint64_t seed = mix_seed(params_.seed, 0xde51673ull,
                             static_cast<uint64_t>(batch.iteration) * 4096 + batch.update,
                             batch.region_ids[i] + 1);
    st.region_ids.push_back(batch.region_ids[i]);
    st.regions.push_back(design_region_tables(batch.hists[i], design_.w, design_.w_prime,
                                              design_.chq.llr_scale, params_.inits, seed,
                                              params_.threads, design_.merged, design_.w_ups,
                                              design_.w_psi));
  }
  design_.steps.push_back(std::move(st));
}

void DesignPipeline::advance(int iteration, int update) {
  parallel_chunks(params_.frames, params_.threads, [&](int, int lo, int hi) {
    QuantizedDecoder dec(code_, design_);
    for (int f = lo; f < hi; ++f) {
      if (design_.schedule == Schedule::flooding)
        dec.advance_flood(states_[f], iteration);
      else
        dec.advance_layer(states_[f], iteration, update);
    }
  });
}

DecoderDesign DesignPipeline::run() {
  for (int it = 0; it < params_.max_iter; ++it) {
    for (int u = 0; u < design_.updates_per_iter; ++u) {
      SampleBatch batch = collect(it, u);
      design_step(batch);
      advance(it, u);
    }
    if (params_.log)
      params_.log("designed iteration " + std::to_string(it + 1) + "/" +
                  std::to_string(params_.max_iter));
    if (!params_.checkpoint_path.empty()) {
      DecoderDesign partial = design_;
      partial.max_iter = it + 1;
      save_design(partial, params_.checkpoint_path);
    }
  }
  design_.validate();
  return design_;
}

DecoderDesign design_full(const LiftedCode& code, Rational rate, const DesignParams& params) {
  DesignPipeline p(code, rate, params);
  return p.run();
}

}  // namespace ldpcq
