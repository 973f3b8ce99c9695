#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ldpcq/base_graph.hpp"
#include "ldpcq/channel.hpp"

namespace ldpcq {

enum class Schedule { flooding, layered };
enum class Alignment { row, matrix };

std::string to_string(Schedule s);
std::string to_string(Alignment a);
Schedule schedule_from_string(const std::string& s);
Alignment alignment_from_string(const std::string& s);

// label in {-L..-1, 1..L} -> index in [0, 2L)
inline int label_index(int label, int levels) {
  return label < 0 ? label + levels : label + levels - 1;
}
inline int index_label(int idx, int levels) { return idx < levels ? idx - levels : idx - levels + 1; }

// Symmetric magnitude thresholds on the integer LLR grid.
struct ThresholdQuantizer {
  std::vector<int> thresholds;  // ascending, size levels-1
  int levels() const { return static_cast<int>(thresholds.size()) + 1; }
  // label in {-levels..-1, +1..+levels}; y == 0 maps to +1
  int quantize(int y) const {
    int mag = y < 0 ? -y : y;
    int lv = 1;
    for (int t : thresholds) {
      if (mag >= t)
        ++lv;
      else
        break;
    }
    return y < 0 ? -lv : lv;
  }
};

// (t, s) -> integer LLR of width w'. s_levels == 0 marks a singleton side
// alphabet (entry independent of s).
struct ReconstructionTable {
  int t_levels = 0;
  int s_levels = 0;
  std::vector<int16_t> v;  // (2*t_levels) rows x max(1, 2*s_levels) cols

  int value(int t, int s) const {
    int row = label_index(t, t_levels);
    int col = s_levels == 0 ? 0 : label_index(s, s_levels);
    return v[static_cast<size_t>(row) * (s_levels == 0 ? 1 : 2 * s_levels) + col];
  }
  bool odd_symmetric() const;
};

// Merged check-node message tables: ups compresses (s^psi, t^c) into t^ups,
// psi re-compresses t^ups into the next iteration's side message, phi holds
// the integer LLR reconstruction of t^ups.
struct MergeTables {
  int t_levels = 0;  // t^c
  int s_levels = 0;  // s^psi; 0 at the first iteration (no side yet)
  int u_levels = 0;  // t^ups
  std::vector<int8_t> ups;  // max(1,2*s_levels) x (2*t_levels)
  std::vector<int8_t> psi;  // 2*u_levels
  std::vector<int16_t> phi; // 2*u_levels

  int ups_of(int s, int t) const {
    int row = s_levels == 0 ? 0 : label_index(s, s_levels);
    return ups[static_cast<size_t>(row) * (2 * t_levels) + label_index(t, t_levels)];
  }
  int psi_of(int u) const { return psi[label_index(u, u_levels)]; }
  int phi_of(int u) const { return phi[label_index(u, u_levels)]; }
};

struct RegionTables {
  ThresholdQuantizer q;
  ReconstructionTable recon;
  std::optional<MergeTables> merge;
};

// One design step: flooding has one step per iteration, a layered schedule
// one step per (iteration, layer). Regions inside a step follow the
// alignment mode.
struct StepTables {
  int iteration = 0;
  int update = 0;
  std::vector<int> region_ids;          // sorted
  std::vector<RegionTables> regions;    // parallel to region_ids
  const RegionTables* find(int region_id) const;
};

struct DecoderDesign {
  int version = 1;
  uint64_t code_hash = 0;
  int z = 0;
  Rational rate{1, 1};
  Schedule schedule = Schedule::flooding;
  Alignment alignment = Alignment::row;
  int w = 2;
  int w_ch = 5;
  int w_prime = 8;
  bool memory_assist = false;
  bool merged = false;
  int w_ups = 0, w_psi = 0;
  double design_ebn0_db = 0;
  int max_iter = 0;
  int updates_per_iter = 1;
  uint64_t seed = 0;
  ChannelQuantizer chq;
  std::vector<StepTables> steps;  // max_iter * updates_per_iter

  const StepTables& step(int iteration, int update) const {
    return steps[static_cast<size_t>(iteration) * updates_per_iter + update];
  }
  int region_of_row(int row) const { return alignment == Alignment::row ? row : 0; }
  void validate() const;  // throws on structural violations
};

std::string serialize_design(const DecoderDesign& d);
DecoderDesign parse_design(const std::string& text);
void save_design(const DecoderDesign& d, const std::string& path);
DecoderDesign load_design(const std::string& path);

// Human-readable boundary/table dump (the `inspect` subcommand).
std::string dump_design(const DecoderDesign& d);

}  // namespace ldpcq
