#pragma once

#include <cstdint>
#include <vector>

#include "ldpcq/design.hpp"
#include "ldpcq/lifted_code.hpp"

namespace ldpcq {

// Row processing order of the first iteration. Rows touching a punctured
// column wait until that column has received a check message from an earlier
// row; a deadlock (no processable row) forces the lowest-index pending row,
// which then informs its punctured columns.
std::vector<int> initialization_row_order(const LiftedCode& code);

struct DecodeOptions {
  int max_iter = -1;        // < 0: design's max_iter
  bool early_term = true;   // syndrome check per iteration / full sweep
  bool track_hard = false;  // record hard decisions: [0] = channel, [i+1] = after iteration i
  bool check_widths = false;  // assert stored messages fit their bit widths
};

struct DecodeResult {
  std::vector<uint8_t> bits;
  int iterations = 0;
  bool converged = false;
  std::vector<std::vector<uint8_t>> iter_hard;
};

// Per-frame message memory. Slot z of base edge m lives at index m*Z+z.
struct MsgState {
  std::vector<int8_t> chan;  // per VN integer channel reconstruction (0 at punctured)
  std::vector<int8_t> app;   // per VN APP (layered semantics)
  std::vector<int8_t> cn;    // per slot t^c, 0 = none
  std::vector<int8_t> side;  // per slot retained t^c of the previous iteration
  std::vector<int8_t> ups;   // per slot t^ups (merged mode)
};

class QuantizedDecoder {
 public:
  QuantizedDecoder(const LiftedCode& code, const DecoderDesign& design);

  DecodeResult decode(const std::vector<double>& channel_llr, const DecodeOptions& opt = {});

  // Design-pipeline hooks: step-wise state advance and Fig.-2a-style raw
  // check-node outputs of the next step without committing it.
  void init_state(MsgState& st, const std::vector<double>& channel_llr) const;
  void advance_flood(MsgState& st, int iteration) const;
  void advance_layer(MsgState& st, int iteration, int update) const;
  // yc: raw min-sign outputs on the w' grid in the signed-zero encoding
  // sign*(2*mag+1) (odd values in [-(2^w'-1), 2^w'-1]), so a zero-magnitude
  // output keeps its extrinsic sign; sv: side labels paired with the
  // upcoming message; covered slots listed in `slots`.
  void peek_step(const MsgState& st, int iteration, int update, std::vector<int16_t>& yc,
                 std::vector<int8_t>& sv, std::vector<int>& slots) const;
  void hard_decision(const MsgState& st, int last_iter, std::vector<uint8_t>& bits) const;
  bool syndrome_zero(const std::vector<uint8_t>& bits) const;
  int row_of_update(int iteration, int update) const;
  int updates_per_iteration() const;

  const LiftedCode& code() const { return *code_; }
  const DecoderDesign& design() const { return *design_; }
  const std::vector<int>& init_order() const { return init_order_; }

  bool check_widths = false;

 private:
  struct RowCtx {
    const RegionTables* now;
    const RegionTables* prev;  // tables that wrote the stored message; null at iteration 0
  };
  RowCtx row_ctx(int iteration, int row) const;
  void process_row_layered(MsgState& st, int iteration, int row) const;
  void vn_totals(const MsgState& st, int table_iter, std::vector<int32_t>& tot,
                 std::vector<int16_t>& self) const;
  int sat(int v) const {
    int lim = sat_limit_;
    return v > lim ? lim : (v < -lim ? -lim : v);
  }

  const LiftedCode* code_;
  const DecoderDesign* design_;
  std::vector<int> init_order_;
  int sat_limit_;
  // scratch buffers (one decoder instance per thread)
  mutable std::vector<int32_t> tot_;
  mutable std::vector<int16_t> self_;
  mutable std::vector<int8_t> tv_;
  mutable std::vector<uint8_t> hd_;
};

// Min-sign check update over one lifted row: per slot, the product of
// extrinsic signs times the minimum extrinsic magnitude (two-minima pass).
// Zero inputs count as +0. Works on labels or raw integers; in == out is
// allowed. Throws on row degree < 2.
void cn_minsign(const LiftedCode& code, int row, const int8_t* in, int8_t* out);

// Raw-output variant in the signed-zero encoding sign*(2*mag+1).
void cn_minsign_raw(const LiftedCode& code, int row, const int8_t* in, int16_t* out);

// Full-precision belief propagation baseline with exact box-plus.
double box_plus(double a, double b);
DecodeResult decode_bp(const LiftedCode& code, const std::vector<double>& channel_llr,
                       int max_iter, const DecodeOptions& opt = {});

}  // namespace ldpcq
