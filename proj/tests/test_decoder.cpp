#include <doctest.h>

#include <cmath>
#include <random>

#include "ldpcq/channel.hpp"
#include "ldpcq/decoder.hpp"
#include "ldpcq/design.hpp"

using namespace ldpcq;

namespace {

const char* kToy =
    "3 6 3 8\n"
    "0 2 -1 1 -1 -1\n"
    "1 -1 3 0 1 -1\n"
    "-1 4 1 -1 0 2\n";

DecoderDesign toy_design(const LiftedCode& code, Schedule sched, bool mem, int iters) {
  DecoderDesign d;
  d.code_hash = code_hash(code.bg, code.z, {1, 2});
  d.z = code.z;
  d.rate = {1, 2};
  d.schedule = sched;
  d.alignment = Alignment::row;
  d.w = 2;
  d.w_ch = 4;
  d.w_prime = 8;
  d.memory_assist = mem;
  d.design_ebn0_db = 1.0;
  d.max_iter = iters;
  d.updates_per_iter = sched == Schedule::layered ? code.bg.rows : 1;
  d.seed = 7;
  d.chq.w_ch = 4;
  d.chq.llr_scale = 8.0;
  d.chq.thresholds = {1.0, 2.0, 3.0, 4.5, 6.0, 8.0, 11.0};
  d.chq.recon = {4, 11, 19, 28, 38, 52, 70, 90};

  int steps = iters * d.updates_per_iter;
  for (int sidx = 0; sidx < steps; ++sidx) {
    int it = sidx / d.updates_per_iter;
    int u = sidx % d.updates_per_iter;
    StepTables st;
    st.iteration = it;
    st.update = u;
    for (int r = 0; r < code.bg.rows; ++r) {
      RegionTables rt;
      rt.q.thresholds = {20 + 3 * it + 2 * r};
      rt.recon.t_levels = 2;
      bool sided = mem && it > 0;
      rt.recon.s_levels = sided ? 2 : 0;
      int cols = sided ? 4 : 1;
      rt.recon.v.assign(4 * cols, 0);
      for (int ti = 0; ti < 2; ++ti)
        for (int si = 0; si < cols; ++si) {
          int val = 9 + 14 * ti + 3 * si + it + r;
          rt.recon.v[static_cast<size_t>(2 + ti) * cols + si] = static_cast<int16_t>(val);
          rt.recon.v[static_cast<size_t>(1 - ti) * cols + (cols - 1 - si)] =
              static_cast<int16_t>(-val);
        }
      st.region_ids.push_back(r);
      st.regions.push_back(std::move(rt));
    }
    d.steps.push_back(std::move(st));
  }
  return d;
}

int sat8(int v) { return v > 127 ? 127 : (v < -127 ? -127 : v); }

// Explicit-extrinsic reference decoder (no sum-minus-self, no two-minima).
// quantize_before selects the runtime placement (Fig. 2b) vs the design
// placement (Fig. 2a: min-sign on raw values, quantize the output).
struct Naive {
  const LiftedCode& c;
  const DecoderDesign& d;
  bool quantize_before;
  std::vector<int> chan;
  std::vector<int8_t> cn, side;
  std::vector<int> rec_store;  // reconstruction added when the slot was written
  std::vector<int> app;

  Naive(const LiftedCode& code, const DecoderDesign& design, bool before)
      : c(code), d(design), quantize_before(before) {}

  const RegionTables& tables(int it, int row) const {
    int u = 0;
    if (d.schedule == Schedule::layered) {
      if (it == 0) {
        auto order = initialization_row_order(c);
        u = static_cast<int>(std::find(order.begin(), order.end(), row) - order.begin());
      } else {
        u = row;
      }
    }
    return *d.step(it, u).find(row);
  }

  void init(const std::vector<double>& llr) {
    chan.assign(c.n, 0);
    for (int col = 0; col < c.bg.cols; ++col)
      for (int zz = 0; zz < c.z; ++zz) {
        int v = col * c.z + zz;
        chan[v] = c.punctured[col] ? 0 : d.chq.recon_of(d.chq.quantize(llr[v]));
      }
    app = chan;
    cn.assign(static_cast<size_t>(c.edge_count) * c.z, 0);
    side.assign(cn.size(), 0);
    rec_store.assign(cn.size(), 0);
  }

  // min-sign over the extrinsic inputs of edge e in a row, with optional
  // quantization before/after
  int extrinsic(const std::vector<int>& vals, const ThresholdQuantizer& q, size_t skip) const {
    int sign = 1, mn = 1 << 30;
    for (size_t i = 0; i < vals.size(); ++i) {
      if (i == skip) continue;
      int v = quantize_before ? q.quantize(vals[i]) : vals[i];
      if (v < 0) sign = -sign;
      mn = std::min(mn, std::abs(v));
    }
    int out = sign * mn;
    return quantize_before ? out : q.quantize(out);
  }

  void process_row(int it, int row) {
    const RegionTables& rt = tables(it, row);
    const auto& edges = c.row_edges[row];
    std::vector<int> lv(edges.size() * c.z);
    for (size_t e = 0; e < edges.size(); ++e)
      for (int zz = 0; zz < c.z; ++zz) {
        size_t slot = static_cast<size_t>(edges[e]) * c.z + zz;
        lv[e * c.z + zz] = sat8(app[c.lifted_vn(edges[e], zz)] - rec_store[slot]);
      }
    std::vector<int> vals(edges.size());
    for (int zz = 0; zz < c.z; ++zz) {
      std::vector<int8_t> out(edges.size());
      for (size_t e = 0; e < edges.size(); ++e) {
        for (size_t e2 = 0; e2 < edges.size(); ++e2) vals[e2] = lv[e2 * c.z + zz];
        out[e] = static_cast<int8_t>(extrinsic(vals, rt.q, e));
      }
      for (size_t e = 0; e < edges.size(); ++e) {
        size_t slot = static_cast<size_t>(edges[e]) * c.z + zz;
        if (d.memory_assist) side[slot] = cn[slot];
        cn[slot] = out[e];
        int rec = rt.recon.value(cn[slot], rt.recon.s_levels == 0 ? 0 : side[slot]);
        rec_store[slot] = rec;
        app[c.lifted_vn(edges[e], zz)] = sat8(lv[e * c.z + zz] + rec);
      }
    }
  }

  void process_rows_first_iteration() {
    for (int row : initialization_row_order(c)) process_row(0, row);
  }

  // flooding iteration >= 1: explicit Eq.-style totals per edge
  void flood_iter(int it) {
    std::vector<int8_t> new_cn(cn.size());
    std::vector<int> yv(cn.size());
    for (int m = 0; m < c.edge_count; ++m)
      for (int zz = 0; zz < c.z; ++zz) {
        int vn = c.lifted_vn(m, zz);
        int col = c.edge_col[m];
        long total = chan[vn];
        for (int m2 : c.col_edges[col]) {
          if (m2 == m) continue;
          int z2 = (vn % c.z) - c.edge_shift[m2];
          if (z2 < 0) z2 += c.z;
          size_t slot2 = static_cast<size_t>(m2) * c.z + z2;
          const RegionTables& rt2 = tables(it - 1, c.edge_row[m2]);
          if (cn[slot2] != 0)
            total += rt2.recon.value(cn[slot2], rt2.recon.s_levels == 0 ? 0 : side[slot2]);
        }
        yv[static_cast<size_t>(m) * c.z + zz] = sat8(static_cast<int>(total));
      }
    for (int row = 0; row < c.bg.rows; ++row) {
      const RegionTables& rt = tables(it, row);
      const auto& edges = c.row_edges[row];
      std::vector<int> vals(edges.size());
      for (int zz = 0; zz < c.z; ++zz) {
        for (size_t e = 0; e < edges.size(); ++e)
          vals[e] = yv[static_cast<size_t>(edges[e]) * c.z + zz];
        for (size_t e = 0; e < edges.size(); ++e) {
          size_t slot = static_cast<size_t>(edges[e]) * c.z + zz;
          new_cn[slot] = static_cast<int8_t>(extrinsic(vals, rt.q, e));
        }
      }
    }
    for (size_t i = 0; i < cn.size(); ++i) {
      if (d.memory_assist) side[i] = cn[i];
      cn[i] = new_cn[i];
    }
  }

  std::vector<uint8_t> hard(int it) const {
    std::vector<uint8_t> bits(c.n);
    for (int v = 0; v < c.n; ++v) {
      long total = chan[v];
      int col = v / c.z;
      for (int m : c.col_edges[col]) {
        int z2 = (v % c.z) - c.edge_shift[m];
        if (z2 < 0) z2 += c.z;
        size_t slot = static_cast<size_t>(m) * c.z + z2;
        if (cn[slot] != 0) {
          const RegionTables& rt = tables(it, c.edge_row[m]);
          total += rt.recon.value(cn[slot], rt.recon.s_levels == 0 ? 0 : side[slot]);
        }
      }
      bits[v] = total < 0 ? 1 : 0;
    }
    return bits;
  }
};

std::vector<double> random_llr(const LiftedCode& c, std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> g(0.0, scale);
  std::vector<double> llr(c.n);
  for (int v = 0; v < c.n; ++v) llr[v] = c.punctured[v / c.z] ? 0.0 : g(rng);
  return llr;
}

}  // namespace

TEST_CASE("two-minima min-sign matches its definition") {
  BaseGraph bg = parse_base_graph(kToy);
  LiftedCode code = lift(bg, 2);
  std::mt19937_64 rng(3);
  std::vector<int8_t> in(static_cast<size_t>(code.edge_count) * code.z);
  std::vector<int8_t> out(in.size());
  for (int trial = 0; trial < 200; ++trial) {
    for (auto& v : in) v = static_cast<int8_t>(static_cast<int>(rng() % 255) - 127);
    for (int row = 0; row < bg.rows; ++row) {
      cn_minsign(code, row, in.data(), out.data());
      const auto& edges = code.row_edges[row];
      for (int zz = 0; zz < code.z; ++zz)
        for (size_t e = 0; e < edges.size(); ++e) {
          int sign = 1, mn = 1 << 30;
          for (size_t e2 = 0; e2 < edges.size(); ++e2) {
            if (e2 == e) continue;
            int v = in[static_cast<size_t>(edges[e2]) * code.z + zz];
            if (v < 0) sign = -sign;
            mn = std::min(mn, std::abs(v));
          }
          REQUIRE(out[static_cast<size_t>(edges[e]) * code.z + zz] == sign * mn);
        }
    }
  }
}

TEST_CASE("all-positive inputs give all-positive outputs") {
  BaseGraph bg = parse_base_graph(kToy);
  LiftedCode code = lift(bg, 2);
  std::vector<int8_t> in(static_cast<size_t>(code.edge_count) * code.z, 5);
  std::vector<int8_t> out(in.size());
  for (int row = 0; row < bg.rows; ++row) {
    cn_minsign(code, row, in.data(), out.data());
    for (int m : code.row_edges[row])
      for (int zz = 0; zz < code.z; ++zz)
        CHECK(out[static_cast<size_t>(m) * code.z + zz] == 5);
  }
}

TEST_CASE("initialization order defers punctured-adjacent rows") {
  // col 0 punctured, touched by rows 1 and 3 only
  const char* asset =
      "4 8 4 16\n"
      "punctured 0\n"
      "-1 0 1 -1 0 -1 -1 -1\n"
      "2 -1 0 1 -1 0 -1 -1\n"
      "-1 1 -1 0 -1 -1 0 -1\n"
      "3 -1 1 -1 -1 -1 -1 0\n";
  LiftedCode code = lift(parse_base_graph(asset), 4);
  auto order = initialization_row_order(code);
  CHECK(order == std::vector<int>{0, 2, 1, 3});
}

TEST_CASE("flooding decoder matches the explicit-extrinsic reference bit-exactly") {
  BaseGraph bg = parse_base_graph(kToy);
  LiftedCode code = lift(bg, 4);
  std::mt19937_64 rng(17);
  for (bool mem : {false, true}) {
    DecoderDesign d = toy_design(code, Schedule::flooding, mem, 4);
    QuantizedDecoder dec(code, d);
    for (int trial = 0; trial < 25; ++trial) {
      auto llr = random_llr(code, rng, 4.0);
      MsgState st;
      dec.init_state(st, llr);
      Naive nv(code, d, true);
      nv.init(llr);
      for (int it = 0; it < 4; ++it) {
        dec.advance_flood(st, it);
        if (it == 0)
          nv.process_rows_first_iteration();
        else
          nv.flood_iter(it);
        REQUIRE(std::equal(st.cn.begin(), st.cn.end(), nv.cn.begin()));
        if (mem) REQUIRE(std::equal(st.side.begin(), st.side.end(), nv.side.begin()));
        std::vector<uint8_t> bits;
        dec.hard_decision(st, it, bits);
        REQUIRE(bits == nv.hard(it));
      }
    }
  }
}

TEST_CASE("quantizer placement equivalence on random frames (Fig. 2a vs 2b)") {
  BaseGraph bg = parse_base_graph(kToy);
  LiftedCode code = lift(bg, 4);
  std::mt19937_64 rng(23);
  DecoderDesign d = toy_design(code, Schedule::flooding, true, 4);
  for (int trial = 0; trial < 25; ++trial) {
    auto llr = random_llr(code, rng, 4.0);
    Naive before(code, d, true), after(code, d, false);
    before.init(llr);
    after.init(llr);
    for (int it = 0; it < 4; ++it) {
      if (it == 0) {
        before.process_rows_first_iteration();
        after.process_rows_first_iteration();
      } else {
        before.flood_iter(it);
        after.flood_iter(it);
      }
      REQUIRE(std::equal(before.cn.begin(), before.cn.end(), after.cn.begin()));
    }
  }
}

TEST_CASE("layered decoder matches the explicit reference and the APP identity") {
  BaseGraph bg = parse_base_graph(kToy);
  LiftedCode code = lift(bg, 4);
  std::mt19937_64 rng(29);
  DecoderDesign d = toy_design(code, Schedule::layered, true, 3);
  QuantizedDecoder dec(code, d);
  for (int trial = 0; trial < 25; ++trial) {
    auto llr = random_llr(code, rng, 2.0);
    MsgState st;
    dec.init_state(st, llr);
    Naive nv(code, d, true);
    nv.init(llr);
    auto order = initialization_row_order(code);
    for (int it = 0; it < 3; ++it) {
      for (int u = 0; u < code.bg.rows; ++u) {
        dec.advance_layer(st, it, u);
        nv.process_row(it, it == 0 ? order[u] : u);
      }
      REQUIRE(std::equal(st.cn.begin(), st.cn.end(), nv.cn.begin()));
      for (int v = 0; v < code.n; ++v) REQUIRE(int(st.app[v]) == nv.app[v]);
    }
  }
}

TEST_CASE("noiseless input converges in the first iteration") {
  BaseGraph bg = parse_base_graph(kToy);
  LiftedCode code = lift(bg, 4);
  Encoder enc(code);
  std::mt19937_64 rng(31);
  std::vector<uint8_t> info(code.k);
  for (auto& b : info) b = rng() & 1;
  auto cw = enc.encode(info);
  ChannelModel ch = ChannelModel::from_ebn0(3.0, 0.5);
  GaussianSource g(5);
  auto llr = transmit(code, cw, ch, g, true);
  for (Schedule s : {Schedule::flooding, Schedule::layered}) {
    DecoderDesign d = toy_design(code, s, true, 4);
    QuantizedDecoder dec(code, d);
    DecodeResult res = dec.decode(llr);
    CHECK(res.converged);
    CHECK(res.iterations == 1);
    CHECK(res.bits == cw);
  }
}

TEST_CASE("max_iter = 0 returns the channel hard decision") {
  BaseGraph bg = parse_base_graph(kToy);
  LiftedCode code = lift(bg, 4);
  DecoderDesign d = toy_design(code, Schedule::flooding, true, 4);
  QuantizedDecoder dec(code, d);
  std::mt19937_64 rng(37);
  auto llr = random_llr(code, rng, 3.0);
  DecodeOptions opt;
  opt.max_iter = 0;
  DecodeResult res = dec.decode(llr, opt);
  CHECK(res.iterations == 0);
  for (int v = 0; v < code.n; ++v) CHECK(res.bits[v] == (llr[v] < 0 ? 1 : 0));
}

TEST_CASE("converged results are valid codewords") {
  BaseGraph bg = parse_base_graph(kToy);
  LiftedCode code = lift(bg, 4);
  DecoderDesign d = toy_design(code, Schedule::flooding, true, 6);
  QuantizedDecoder dec(code, d);
  Encoder enc(code);
  std::mt19937_64 rng(43);
  ChannelModel ch = ChannelModel::from_ebn0(6.0, 0.5);
  int converged = 0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<uint8_t> info(code.k);
    for (auto& b : info) b = rng() & 1;
    auto cw = enc.encode(info);
    GaussianSource g(trial);
    auto llr = transmit(code, cw, ch, g);
    DecodeOptions opt;
    opt.check_widths = true;
    DecodeResult res = dec.decode(llr, opt);
    if (res.converged) {
      ++converged;
      auto syn = syndrome(code, res.bits);
      for (auto s : syn) REQUIRE(s == 0);
    }
  }
  CHECK(converged > 0);
}

TEST_CASE("single-layer Z=1 layered sweep equals one flooding iteration") {
  const char* one_row = "1 3 2 4\n0 1 0\n";
  LiftedCode code = lift(parse_base_graph(one_row), 1);
  DecoderDesign fl = toy_design(code, Schedule::flooding, false, 1);
  DecoderDesign la = toy_design(code, Schedule::layered, false, 1);
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 50; ++trial) {
    auto llr = random_llr(code, rng, 4.0);
    QuantizedDecoder df(code, fl), dl(code, la);
    DecodeOptions opt;
    opt.max_iter = 1;
    opt.early_term = false;
    CHECK(df.decode(llr, opt).bits == dl.decode(llr, opt).bits);
  }
}

TEST_CASE("hard-decision tie maps to bit 0") {
  BaseGraph bg = parse_base_graph(kToy);
  LiftedCode code = lift(bg, 1);
  DecoderDesign d = toy_design(code, Schedule::flooding, false, 1);
  QuantizedDecoder dec(code, d);
  std::vector<double> llr(code.n, 0.0);
  DecodeOptions opt;
  opt.max_iter = 0;
  DecodeResult res = dec.decode(llr, opt);
  for (auto b : res.bits) CHECK(b == 0);
}

TEST_CASE("box-plus identities and high-precision oracle") {
  SUBCASE("infinity is the identity element") {
    CHECK(box_plus(1.7, 1e9) == doctest::Approx(1.7).epsilon(1e-12));
    CHECK(box_plus(-0.4, 1e9) == doctest::Approx(-0.4).epsilon(1e-12));
  }
  SUBCASE("grid comparison against the direct tanh formula") {
    double max_err = 0;
    for (double a = -20; a <= 20; a += 0.37)
      for (double b = -20; b <= 20; b += 0.41) {
        long double t = 2.0L * atanhl(tanhl((long double)a / 2) * tanhl((long double)b / 2));
        max_err = std::max(max_err, std::abs(box_plus(a, b) - (double)t));
      }
    CHECK(max_err < 1e-9);
  }
  SUBCASE("zero annihilates") { CHECK(box_plus(0.0, 3.0) == doctest::Approx(0.0)); }
}

TEST_CASE("BP decodes the noiseless channel immediately") {
  BaseGraph bg = parse_base_graph(kToy);
  LiftedCode code = lift(bg, 4);
  Encoder enc(code);
  std::mt19937_64 rng(53);
  std::vector<uint8_t> info(code.k);
  for (auto& b : info) b = rng() & 1;
  auto cw = enc.encode(info);
  ChannelModel ch = ChannelModel::from_ebn0(3.0, 0.5);
  GaussianSource g(5);
  auto llr = transmit(code, cw, ch, g, true);
  DecodeResult res = decode_bp(code, llr, 10);
  CHECK(res.converged);
  CHECK(res.iterations == 1);
  CHECK(res.bits == cw);
}
