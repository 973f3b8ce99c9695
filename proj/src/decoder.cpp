#include "ldpcq/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ldpcq {

std::vector<int> initialization_row_order(const LiftedCode& code) {
  const BaseGraph& bg = code.bg;
  std::vector<uint8_t> informed(bg.cols, 1);
  for (int c : bg.punctured_cols)
    if (c < bg.cols) informed[c] = 0;
  std::vector<uint8_t> done(bg.rows, 0);
  std::vector<int> order;
  order.reserve(bg.rows);
  auto blocked = [&](int r) {
    for (int m : code.row_edges[r])
      if (!informed[code.edge_col[m]]) return true;
    return false;
  };
  auto process = [&](int r) {
    done[r] = 1;
    order.push_back(r);
    for (int m : code.row_edges[r]) informed[code.edge_col[m]] = 1;
  };
  while (static_cast<int>(order.size()) < bg.rows) {
    bool progressed = false;
    for (int r = 0; r < bg.rows; ++r) {
      if (done[r] || blocked(r)) continue;
      process(r);
      progressed = true;
    }
    if (!progressed) {
      for (int r = 0; r < bg.rows; ++r)
        if (!done[r]) {
          process(r);  // deadlock break: this row informs its punctured columns
          break;
        }
    }
  }
  return order;
}

namespace {

inline int rec_value(const RegionTables& rt, int t, int s) {
  if (t == 0) return 0;
  return rt.recon.value(t, rt.recon.s_levels == 0 ? 0 : s);
}

inline int phi_value(const RegionTables& rt, int u) {
  if (u == 0) return 0;
  return rt.merge->phi_of(u);
}

}  // namespace

QuantizedDecoder::QuantizedDecoder(const LiftedCode& code, const DecoderDesign& design)
    : code_(&code), design_(&design) {
  if (design.z != code.z) throw std::runtime_error("decoder: design Z does not match code");
  init_order_ = initialization_row_order(code);
  sat_limit_ = (1 << (design.w_prime - 1)) - 1;
  tot_.resize(code.n);
  self_.resize(static_cast<size_t>(code.edge_count) * code.z);
  tv_.resize(static_cast<size_t>(code.edge_count) * code.z);
  hd_.resize(code.n);
}

int QuantizedDecoder::updates_per_iteration() const { return design_->updates_per_iter; }

int QuantizedDecoder::row_of_update(int iteration, int update) const {
  if (design_->schedule == Schedule::flooding) return -1;
  return iteration == 0 ? init_order_[update] : update;
}

QuantizedDecoder::RowCtx QuantizedDecoder::row_ctx(int iteration, int row) const {
  RowCtx ctx{nullptr, nullptr};
  int region = design_->region_of_row(row);
  if (design_->schedule == Schedule::flooding) {
    ctx.now = design_->step(iteration, 0).find(region);
    if (iteration > 0) ctx.prev = design_->step(iteration - 1, 0).find(region);
  } else {
    auto pos_of = [&](int iter) {
      if (iter > 0) return row;
      for (int u = 0; u < design_->updates_per_iter; ++u)
        if (init_order_[u] == row) return u;
      return row;
    };
    ctx.now = design_->step(iteration, pos_of(iteration)).find(region);
    if (iteration > 0) ctx.prev = design_->step(iteration - 1, pos_of(iteration - 1)).find(region);
  }
  if (!ctx.now) throw std::runtime_error("decoder: missing tables for row " + std::to_string(row));
  if (iteration > 0 && !ctx.prev)
    throw std::runtime_error("decoder: missing previous tables for row " + std::to_string(row));
  return ctx;
}

void QuantizedDecoder::init_state(MsgState& st, const std::vector<double>& llr) const {
  const LiftedCode& c = *code_;
  if (llr.size() != static_cast<size_t>(c.n))
    throw std::invalid_argument("decoder: LLR vector length mismatch");
  st.chan.assign(c.n, 0);
  st.app.assign(c.n, 0);
  size_t slots = static_cast<size_t>(c.edge_count) * c.z;
  if (design_->merged) {
    st.ups.assign(slots, 0);
    st.cn.assign(slots, 0);
  } else {
    st.cn.assign(slots, 0);
    st.side.assign(slots, 0);
  }
  for (int col = 0; col < c.bg.cols; ++col) {
    bool punct = c.punctured[col];
    for (int zz = 0; zz < c.z; ++zz) {
      int v = col * c.z + zz;
      int val = punct ? 0 : design_->chq.recon_of(design_->chq.quantize(llr[v]));
      st.chan[v] = static_cast<int8_t>(sat(val));
      st.app[v] = st.chan[v];
    }
  }
}

// Two-minima min-sign update over one lifted check row. in/out are per-slot
// label or integer arrays; zero input is treated as +0.
template <typename T>
static void cn_minsign_row(const LiftedCode& c, int row, const T* in, T* out) {
  const auto& edges = c.row_edges[row];
  int deg = static_cast<int>(edges.size());
  for (int zz = 0; zz < c.z; ++zz) {
    int min1 = 1 << 30, min2 = 1 << 30, arg = -1;
    int parity = 0;  // 0: +, 1: -
    for (int e = 0; e < deg; ++e) {
      int v = in[edges[e] * c.z + zz];
      int neg = v < 0;
      parity ^= neg;
      int mag = neg ? -v : v;
      if (mag < min1) {
        min2 = min1;
        min1 = mag;
        arg = e;
      } else if (mag < min2) {
        min2 = mag;
      }
    }
    for (int e = 0; e < deg; ++e) {
      size_t slot = static_cast<size_t>(edges[e]) * c.z + zz;
      int v = in[slot];
      int own_neg = v < 0;
      int mag = (e == arg) ? min2 : min1;
      int sign_neg = parity ^ own_neg;
      out[slot] = static_cast<T>(sign_neg ? -mag : mag);
    }
  }
}

void cn_minsign(const LiftedCode& code, int row, const int8_t* in, int8_t* out) {
  if (code.row_edges[row].size() < 2)
    throw std::invalid_argument("check node degree < 2");
  cn_minsign_row(code, row, in, out);
}

// Signed-zero raw outputs: the extrinsic sign survives a zero magnitude,
// which is what makes the Fig. 2a/2b quantizer placements exactly
// equivalent.
static void cn_minsign_raw_row(const LiftedCode& c, int row, const int8_t* in, int16_t* out) {
  const auto& edges = c.row_edges[row];
  int deg = static_cast<int>(edges.size());
  for (int zz = 0; zz < c.z; ++zz) {
    int min1 = 1 << 30, min2 = 1 << 30, arg = -1;
    int parity = 0;
    for (int e = 0; e < deg; ++e) {
      int v = in[edges[e] * c.z + zz];
      int neg = v < 0;
      parity ^= neg;
      int mag = neg ? -v : v;
      if (mag < min1) {
        min2 = min1;
        min1 = mag;
        arg = e;
      } else if (mag < min2) {
        min2 = mag;
      }
    }
    for (int e = 0; e < deg; ++e) {
      size_t slot = static_cast<size_t>(edges[e]) * c.z + zz;
      int own_neg = in[slot] < 0;
      int mag = (e == arg) ? min2 : min1;
      int enc = 2 * mag + 1;
      out[slot] = static_cast<int16_t>((parity ^ own_neg) ? -enc : enc);
    }
  }
}

void cn_minsign_raw(const LiftedCode& code, int row, const int8_t* in, int16_t* out) {
  if (code.row_edges[row].size() < 2)
    throw std::invalid_argument("check node degree < 2");
  cn_minsign_raw_row(code, row, in, out);
}

void QuantizedDecoder::vn_totals(const MsgState& st, int table_iter, std::vector<int32_t>& tot,
                                 std::vector<int16_t>& self) const {
  const LiftedCode& c = *code_;
  for (int v = 0; v < c.n; ++v) tot[v] = st.chan[v];
  if (table_iter < 0) {
    std::fill(self.begin(), self.end(), 0);
    return;
  }
  for (int r = 0; r < c.bg.rows; ++r) {
    RowCtx ctx = row_ctx(table_iter, r);
    const RegionTables& rt = *ctx.now;
    for (int m : c.row_edges[r]) {
      int colZ = c.edge_col[m] * c.z;
      int sh = c.edge_shift[m];
      for (int zz = 0; zz < c.z; ++zz) {
        size_t slot = static_cast<size_t>(m) * c.z + zz;
        int rec = design_->merged ? phi_value(rt, st.ups[slot])
                                  : rec_value(rt, st.cn[slot], st.side[slot]);
        self[slot] = static_cast<int16_t>(rec);
        int vz = zz + sh;
        if (vz >= c.z) vz -= c.z;
        tot[colZ + vz] += rec;
      }
    }
  }
}

void QuantizedDecoder::process_row_layered(MsgState& st, int iteration, int row) const {
  const LiftedCode& c = *code_;
  RowCtx ctx = row_ctx(iteration, row);
  const auto& edges = c.row_edges[row];
  int deg = static_cast<int>(edges.size());
  // partial VN update into the shared tv_ buffer (lv values kept per slot)
  static thread_local std::vector<int8_t> lv;
  lv.resize(static_cast<size_t>(deg) * c.z);
  for (int e = 0; e < deg; ++e) {
    int m = edges[e];
    int colZ = c.edge_col[m] * c.z;
    int sh = c.edge_shift[m];
    for (int zz = 0; zz < c.z; ++zz) {
      size_t slot = static_cast<size_t>(m) * c.z + zz;
      int sub = 0;
      if (ctx.prev) {
        sub = design_->merged ? phi_value(*ctx.prev, st.ups[slot])
                              : rec_value(*ctx.prev, st.cn[slot], st.side[slot]);
      }
      int vz = zz + sh;
      if (vz >= c.z) vz -= c.z;
      int l = sat(st.app[colZ + vz] - sub);
      lv[static_cast<size_t>(e) * c.z + zz] = static_cast<int8_t>(l);
      tv_[slot] = static_cast<int8_t>(ctx.now->q.quantize(l));
    }
  }
  // full CN update on the quantized messages
  cn_minsign_row(c, row, tv_.data(), tv_.data());
  // merge / store and APP write-back
  for (int e = 0; e < deg; ++e) {
    int m = edges[e];
    int colZ = c.edge_col[m] * c.z;
    int sh = c.edge_shift[m];
    for (int zz = 0; zz < c.z; ++zz) {
      size_t slot = static_cast<size_t>(m) * c.z + zz;
      int out = tv_[slot];
      int vz = zz + sh;
      if (vz >= c.z) vz -= c.z;
      int l = lv[static_cast<size_t>(e) * c.z + zz];
      if (design_->merged) {
        int spsi = (ctx.prev && ctx.prev->merge->u_levels > 0)
                       ? ctx.prev->merge->psi_of(st.ups[slot])
                       : 0;
        const MergeTables& mt = *ctx.now->merge;
        int u = mt.ups_of(mt.s_levels == 0 ? 0 : spsi, out);
        st.ups[slot] = static_cast<int8_t>(u);
        st.app[colZ + vz] = static_cast<int8_t>(sat(l + mt.phi_of(u)));
      } else {
        if (design_->memory_assist) st.side[slot] = st.cn[slot];
        st.cn[slot] = static_cast<int8_t>(out);
        st.app[colZ + vz] =
            static_cast<int8_t>(sat(l + rec_value(*ctx.now, out, st.side[slot])));
      }
    }
  }
}

void QuantizedDecoder::advance_flood(MsgState& st, int iteration) const {
  const LiftedCode& c = *code_;
  if (iteration == 0) {
    // first iteration: sequential sweep in the initialization order
    for (int r : init_order_) process_row_layered(st, 0, r);
    return;
  }
  vn_totals(st, iteration - 1, tot_, self_);
  for (int r = 0; r < c.bg.rows; ++r) {
    RowCtx ctx = row_ctx(iteration, r);
    const ThresholdQuantizer& q = ctx.now->q;
    for (int m : c.row_edges[r]) {
      int colZ = c.edge_col[m] * c.z;
      int sh = c.edge_shift[m];
      for (int zz = 0; zz < c.z; ++zz) {
        size_t slot = static_cast<size_t>(m) * c.z + zz;
        int vz = zz + sh;
        if (vz >= c.z) vz -= c.z;
        int yv = sat(tot_[colZ + vz] - self_[slot]);
        tv_[slot] = static_cast<int8_t>(q.quantize(yv));
      }
    }
  }
  for (int r = 0; r < c.bg.rows; ++r) {
    cn_minsign_row(c, r, tv_.data(), tv_.data());
    RowCtx ctx = row_ctx(iteration, r);
    for (int m : c.row_edges[r]) {
      for (int zz = 0; zz < c.z; ++zz) {
        size_t slot = static_cast<size_t>(m) * c.z + zz;
        int out = tv_[slot];
        if (design_->merged) {
          int spsi = ctx.prev->merge->u_levels > 0 ? ctx.prev->merge->psi_of(st.ups[slot]) : 0;
          const MergeTables& mt = *ctx.now->merge;
          st.ups[slot] = static_cast<int8_t>(mt.ups_of(mt.s_levels == 0 ? 0 : spsi, out));
        } else {
          if (design_->memory_assist) st.side[slot] = st.cn[slot];
          st.cn[slot] = static_cast<int8_t>(out);
        }
      }
    }
  }
}

void QuantizedDecoder::advance_layer(MsgState& st, int iteration, int update) const {
  process_row_layered(st, iteration, row_of_update(iteration, update));
}

void QuantizedDecoder::peek_step(const MsgState& st, int iteration, int update,
                                 std::vector<int16_t>& yc, std::vector<int8_t>& sv,
                                 std::vector<int>& slots) const {
  const LiftedCode& c = *code_;
  size_t nslots = static_cast<size_t>(c.edge_count) * c.z;
  yc.assign(nslots, 0);
  sv.assign(nslots, 0);
  slots.clear();

  auto side_of = [&](const RowCtx& ctx, size_t slot) -> int {
    if (!design_->memory_assist && !design_->merged) return 0;
    if (!design_->merged) return st.cn[slot];
    if (iteration == 0) return 0;
    return ctx.prev->merge->u_levels > 0 ? ctx.prev->merge->psi_of(st.ups[slot]) : 0;
  };

  if (design_->schedule == Schedule::flooding) {
    static thread_local std::vector<int8_t> yv;
    yv.resize(nslots);
    vn_totals(st, iteration - 1, tot_, self_);
    for (int m = 0; m < c.edge_count; ++m) {
      int colZ = c.edge_col[m] * c.z;
      int sh = c.edge_shift[m];
      for (int zz = 0; zz < c.z; ++zz) {
        size_t slot = static_cast<size_t>(m) * c.z + zz;
        int vz = zz + sh;
        if (vz >= c.z) vz -= c.z;
        yv[slot] = static_cast<int8_t>(sat(tot_[colZ + vz] - self_[slot]));
      }
    }
    for (int r = 0; r < c.bg.rows; ++r) {
      cn_minsign_raw_row(c, r, yv.data(), yc.data());
      RowCtx ctx{nullptr, nullptr};
      if (iteration > 0) ctx = row_ctx(iteration, r);
      for (int m : c.row_edges[r])
        for (int zz = 0; zz < c.z; ++zz) {
          size_t slot = static_cast<size_t>(m) * c.z + zz;
          sv[slot] = static_cast<int8_t>(side_of(ctx, slot));
          slots.push_back(static_cast<int>(slot));
        }
    }
  } else {
    int row = row_of_update(iteration, update);
    RowCtx ctx = row_ctx(iteration, row);
    static thread_local std::vector<int8_t> yv;
    yv.assign(nslots, 0);
    for (int m : c.row_edges[row]) {
      int colZ = c.edge_col[m] * c.z;
      int sh = c.edge_shift[m];
      for (int zz = 0; zz < c.z; ++zz) {
        size_t slot = static_cast<size_t>(m) * c.z + zz;
        int sub = 0;
        if (ctx.prev) {
          sub = design_->merged ? phi_value(*ctx.prev, st.ups[slot])
                                : rec_value(*ctx.prev, st.cn[slot], st.side[slot]);
        }
        int vz = zz + sh;
        if (vz >= c.z) vz -= c.z;
        yv[slot] = static_cast<int8_t>(sat(st.app[colZ + vz] - sub));
      }
    }
    cn_minsign_raw_row(c, row, yv.data(), yc.data());
    for (int m : c.row_edges[row])
      for (int zz = 0; zz < c.z; ++zz) {
        size_t slot = static_cast<size_t>(m) * c.z + zz;
        sv[slot] = static_cast<int8_t>(side_of(ctx, slot));
        slots.push_back(static_cast<int>(slot));
      }
  }
}

void QuantizedDecoder::hard_decision(const MsgState& st, int last_iter,
                                     std::vector<uint8_t>& bits) const {
  const LiftedCode& c = *code_;
  bits.resize(c.n);
  if (design_->schedule == Schedule::layered && last_iter >= 0) {
    for (int v = 0; v < c.n; ++v) bits[v] = st.app[v] < 0 ? 1 : 0;
    return;
  }
  vn_totals(st, last_iter, tot_, self_);
  for (int v = 0; v < c.n; ++v) bits[v] = tot_[v] < 0 ? 1 : 0;
}

bool QuantizedDecoder::syndrome_zero(const std::vector<uint8_t>& bits) const {
  const LiftedCode& c = *code_;
  for (int r = 0; r < c.bg.rows; ++r) {
    for (int zz = 0; zz < c.z; ++zz) {
      uint8_t acc = 0;
      for (int m : c.row_edges[r]) acc ^= bits[c.lifted_vn(m, zz)];
      if (acc) return false;
    }
  }
  return true;
}

DecodeResult QuantizedDecoder::decode(const std::vector<double>& llr, const DecodeOptions& opt) {
  MsgState st;
  init_state(st, llr);
  int max_iter = opt.max_iter < 0 ? design_->max_iter : opt.max_iter;

  DecodeResult res;
  if (opt.track_hard) {
    std::vector<uint8_t> ch_hd(code_->n);
    for (int v = 0; v < code_->n; ++v) ch_hd[v] = st.chan[v] < 0 ? 1 : 0;
    res.iter_hard.push_back(std::move(ch_hd));
  }

  std::vector<uint8_t> bits(code_->n);
  hard_decision(st, -1, bits);  // max_iter == 0: channel-only decision
  for (int i = 0; i < max_iter; ++i) {
    if (design_->schedule == Schedule::flooding) {
      advance_flood(st, i);
    } else {
      for (int u = 0; u < design_->updates_per_iter; ++u) advance_layer(st, i, u);
    }
    res.iterations = i + 1;
    bool last = (i == max_iter - 1);
    if (opt.early_term || opt.track_hard || last) {
      hard_decision(st, i, bits);
      if (opt.check_widths) {
        for (int8_t v : st.app)
          if (v > sat_limit_ || v < -sat_limit_)
            throw std::runtime_error("width check failed: APP outside w' range");
        if (design_->merged) {
          int ulim = 1 << (design_->w_ups - 1);
          for (int8_t v : st.ups)
            if (v > ulim || v < -ulim) throw std::runtime_error("width check failed: t^ups");
        } else {
          int lim = 1 << (design_->w - 1);
          for (int8_t v : st.cn)
            if (v > lim || v < -lim) throw std::runtime_error("width check failed: t^c");
          for (int8_t v : st.side)
            if (v > lim || v < -lim) throw std::runtime_error("width check failed: side");
        }
      }
      if (opt.track_hard) res.iter_hard.push_back(bits);
      if (opt.early_term && syndrome_zero(bits)) {
        res.converged = true;
        break;
      }
    }
  }
  res.bits = bits;
  if (!res.converged) res.converged = syndrome_zero(bits);
  if (opt.track_hard) {
    while (static_cast<int>(res.iter_hard.size()) < max_iter + 1) res.iter_hard.push_back(bits);
  }
  return res;
}

// ---------------------------------------------------------------------------
// belief propagation baseline

double box_plus(double a, double b) {
  double sa = std::abs(a), sb = std::abs(b);
  double m = std::min(sa, sb);
  double sign = ((a < 0) != (b < 0)) ? -1.0 : 1.0;
  double corr = std::log1p(std::exp(-std::abs(a + b))) - std::log1p(std::exp(-std::abs(a - b)));
  return sign * m + corr;
}

DecodeResult decode_bp(const LiftedCode& code, const std::vector<double>& llr, int max_iter,
                       const DecodeOptions& opt) {
  const LiftedCode& c = code;
  size_t nslots = static_cast<size_t>(c.edge_count) * c.z;
  std::vector<double> v2c(nslots, 0.0), c2v(nslots, 0.0), app(c.n, 0.0);

  auto vn_phase = [&](bool first) {
    for (int v = 0; v < c.n; ++v) app[v] = llr[v];
    if (!first)
      for (int m = 0; m < c.edge_count; ++m)
        for (int zz = 0; zz < c.z; ++zz)
          app[c.lifted_vn(m, zz)] += c2v[static_cast<size_t>(m) * c.z + zz];
    for (int m = 0; m < c.edge_count; ++m)
      for (int zz = 0; zz < c.z; ++zz) {
        size_t slot = static_cast<size_t>(m) * c.z + zz;
        v2c[slot] = app[c.lifted_vn(m, zz)] - (first ? 0.0 : c2v[slot]);
      }
  };
  auto cn_phase = [&]() {
    std::vector<double> fwd, bwd;
    for (int r = 0; r < c.bg.rows; ++r) {
      const auto& edges = c.row_edges[r];
      int deg = static_cast<int>(edges.size());
      fwd.resize(deg);
      bwd.resize(deg);
      for (int zz = 0; zz < c.z; ++zz) {
        fwd[0] = v2c[static_cast<size_t>(edges[0]) * c.z + zz];
        bwd[deg - 1] = v2c[static_cast<size_t>(edges[deg - 1]) * c.z + zz];
        for (int e = 1; e < deg; ++e) {
          fwd[e] = box_plus(fwd[e - 1], v2c[static_cast<size_t>(edges[e]) * c.z + zz]);
          bwd[deg - 1 - e] =
              box_plus(bwd[deg - e], v2c[static_cast<size_t>(edges[deg - 1 - e]) * c.z + zz]);
        }
        for (int e = 0; e < deg; ++e) {
          size_t slot = static_cast<size_t>(edges[e]) * c.z + zz;
          if (e == 0)
            c2v[slot] = bwd[1];
          else if (e == deg - 1)
            c2v[slot] = fwd[deg - 2];
          else
            c2v[slot] = box_plus(fwd[e - 1], bwd[e + 1]);
        }
      }
    }
  };
  auto hard = [&](std::vector<uint8_t>& bits) {
    bits.resize(c.n);
    for (int v = 0; v < c.n; ++v) bits[v] = app[v] < 0 ? 1 : 0;
  };
  auto syn_zero = [&](const std::vector<uint8_t>& bits) {
    for (int r = 0; r < c.bg.rows; ++r)
      for (int zz = 0; zz < c.z; ++zz) {
        uint8_t acc = 0;
        for (int m : c.row_edges[r]) acc ^= bits[c.lifted_vn(m, zz)];
        if (acc) return false;
      }
    return true;
  };

  DecodeResult res;
  std::vector<uint8_t> bits(c.n);
  for (int v = 0; v < c.n; ++v) bits[v] = llr[v] < 0 ? 1 : 0;
  if (opt.track_hard) res.iter_hard.push_back(bits);
  for (int i = 0; i < max_iter; ++i) {
    vn_phase(i == 0);
    cn_phase();
    // posterior after this iteration
    for (int v = 0; v < c.n; ++v) app[v] = llr[v];
    for (int m = 0; m < c.edge_count; ++m)
      for (int zz = 0; zz < c.z; ++zz)
        app[c.lifted_vn(m, zz)] += c2v[static_cast<size_t>(m) * c.z + zz];
    res.iterations = i + 1;
    hard(bits);
    if (opt.track_hard) res.iter_hard.push_back(bits);
    if (opt.early_term && syn_zero(bits)) {
      res.converged = true;
      break;
    }
  }
  res.bits = bits;
  if (!res.converged) res.converged = syn_zero(bits);
  if (opt.track_hard)
    while (static_cast<int>(res.iter_hard.size()) < max_iter + 1) res.iter_hard.push_back(bits);
  return res;
}

}  // namespace ldpcq
