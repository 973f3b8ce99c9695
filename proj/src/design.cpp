#include "ldpcq/design.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ldpcq {

std::string to_string(Schedule s) { return s == Schedule::flooding ? "flooding" : "layered"; }
std::string to_string(Alignment a) { return a == Alignment::row ? "row" : "matrix"; }

Schedule schedule_from_string(const std::string& s) {
  if (s == "flooding") return Schedule::flooding;
  if (s == "layered") return Schedule::layered;
  throw ParseError("unknown schedule: " + s);
}

Alignment alignment_from_string(const std::string& s) {
  if (s == "row") return Alignment::row;
  if (s == "matrix") return Alignment::matrix;
  throw ParseError("unknown alignment: " + s);
}

bool ReconstructionTable::odd_symmetric() const {
  int sl = s_levels == 0 ? 1 : s_levels;
  for (int t = 1; t <= t_levels; ++t)
    for (int si = 0; si < (s_levels == 0 ? 1 : 2 * s_levels); ++si) {
      int s = s_levels == 0 ? 0 : index_label(si, s_levels);
      int ms = s_levels == 0 ? 0 : -s;
      if (value(t, s) != -value(-t, ms)) return false;
    }
  (void)sl;
  return true;
}

const RegionTables* StepTables::find(int region_id) const {
  for (size_t i = 0; i < region_ids.size(); ++i)
    if (region_ids[i] == region_id) return &regions[i];
  return nullptr;
}

void DecoderDesign::validate() const {
  if (steps.size() != static_cast<size_t>(max_iter) * updates_per_iter)
    throw std::runtime_error("design: step count does not match max_iter * updates_per_iter");
  int limit = (1 << (w_prime - 1)) - 1;
  for (const auto& st : steps) {
    if (st.region_ids.size() != st.regions.size() || st.regions.empty())
      throw std::runtime_error("design: step without regions");
    for (const auto& rt : st.regions) {
      if (rt.q.levels() != (1 << (w - 1)))
        throw std::runtime_error("design: quantizer level count mismatch");
      for (size_t i = 1; i < rt.q.thresholds.size(); ++i)
        if (rt.q.thresholds[i] <= rt.q.thresholds[i - 1])
          throw std::runtime_error("design: thresholds not strictly increasing");
      if (!merged) {
        if (!rt.recon.odd_symmetric())
          throw std::runtime_error("design: reconstruction table not odd-symmetric");
        for (int16_t x : rt.recon.v)
          if (x > limit || x < -limit) throw std::runtime_error("design: reconstruction exceeds w' bound");
      } else if (!rt.merge.has_value()) {
        throw std::runtime_error("design: merged decoder step missing merge tables");
      } else {
        const MergeTables& mt = *rt.merge;
        for (int t = 1; t <= mt.t_levels; ++t) {
          if (mt.s_levels == 0) {
            if (mt.ups_of(0, -t) != -mt.ups_of(0, t))
              throw std::runtime_error("design: ups table not odd-symmetric");
          } else {
            for (int s = 1; s <= mt.s_levels; ++s) {
              if (mt.ups_of(-s, -t) != -mt.ups_of(s, t) || mt.ups_of(s, -t) != -mt.ups_of(-s, t))
                throw std::runtime_error("design: ups table not odd-symmetric");
            }
          }
        }
        for (int u = 1; u <= mt.u_levels; ++u) {
          if (mt.psi_of(-u) != -mt.psi_of(u))
            throw std::runtime_error("design: psi table not odd-symmetric");
          if (mt.phi_of(-u) != -mt.phi_of(u))
            throw std::runtime_error("design: phi table not odd-symmetric");
          if (mt.phi_of(u) > limit || mt.phi_of(u) < -limit)
            throw std::runtime_error("design: phi exceeds w' bound");
        }
      }
    }
  }
  if (merged && w_psi > w_ups)
    throw std::runtime_error("design: w_psi must not exceed w_ups");
}

namespace {

void emit_region(std::ostringstream& os, const RegionTables& rt, bool merged) {
  os << "thresholds";
  for (int t : rt.q.thresholds) os << ' ' << t;
  os << '\n';
  if (!merged) {
    const auto& rc = rt.recon;
    for (int ti = 0; ti < 2 * rc.t_levels; ++ti) {
      int t = index_label(ti, rc.t_levels);
      if (rc.s_levels == 0) {
        os << "recon " << t << " 0 " << rc.value(t, 0) << '\n';
      } else {
        for (int si = 0; si < 2 * rc.s_levels; ++si) {
          int s = index_label(si, rc.s_levels);
          os << "recon " << t << ' ' << s << ' ' << rc.value(t, s) << '\n';
        }
      }
    }
  } else {
    const auto& mt = *rt.merge;
    os << "merge_dims " << mt.t_levels << ' ' << mt.s_levels << ' ' << mt.u_levels << '\n';
    int srows = mt.s_levels == 0 ? 1 : 2 * mt.s_levels;
    for (int si = 0; si < srows; ++si) {
      int s = mt.s_levels == 0 ? 0 : index_label(si, mt.s_levels);
      for (int ti = 0; ti < 2 * mt.t_levels; ++ti) {
        int t = index_label(ti, mt.t_levels);
        os << "ups " << s << ' ' << t << ' ' << static_cast<int>(mt.ups_of(s, t)) << '\n';
      }
    }
    for (int ui = 0; ui < 2 * mt.u_levels; ++ui) {
      int u = index_label(ui, mt.u_levels);
      os << "psi " << u << ' ' << static_cast<int>(mt.psi_of(u)) << '\n';
    }
    for (int ui = 0; ui < 2 * mt.u_levels; ++ui) {
      int u = index_label(ui, mt.u_levels);
      os << "phi " << u << ' ' << mt.phi_of(u) << '\n';
    }
  }
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string serialize_design(const DecoderDesign& d) {
  std::ostringstream os;
  char hex[32];
  std::snprintf(hex, sizeof hex, "%016" PRIx64, d.code_hash);
  os << "ldpcq-design " << d.version << '\n';
  os << "code_hash " << hex << '\n';
  os << "z " << d.z << '\n';
  os << "rate " << d.rate.num << '/' << d.rate.den << '\n';
  os << "schedule " << to_string(d.schedule) << '\n';
  os << "alignment " << to_string(d.alignment) << '\n';
  os << "w " << d.w << '\n';
  os << "w_ch " << d.w_ch << '\n';
  os << "w_prime " << d.w_prime << '\n';
  os << "memory_assist " << (d.memory_assist ? 1 : 0) << '\n';
  os << "merged " << (d.merged ? 1 : 0) << '\n';
  if (d.merged) os << "w_ups " << d.w_ups << "\nw_psi " << d.w_psi << '\n';
  os << "design_ebn0_db " << fmt_double(d.design_ebn0_db) << '\n';
  os << "max_iter " << d.max_iter << '\n';
  os << "updates_per_iter " << d.updates_per_iter << '\n';
  os << "seed " << d.seed << '\n';
  os << "channel_quantizer " << d.chq.w_ch << '\n';
  os << "ch_llr_scale " << fmt_double(d.chq.llr_scale) << '\n';
  os << "ch_thresholds";
  for (double t : d.chq.thresholds) os << ' ' << fmt_double(t);
  os << '\n';
  os << "ch_recon";
  for (int r : d.chq.recon) os << ' ' << r;
  os << '\n';
  for (const auto& st : d.steps) {
    os << "step " << st.iteration << ' ' << st.update << '\n';
    for (size_t i = 0; i < st.region_ids.size(); ++i) {
      os << "region " << st.region_ids[i] << '\n';
      emit_region(os, st.regions[i], d.merged);
    }
  }
  os << "end\n";
  return os.str();
}

namespace {

class LineReader {
 public:
  explicit LineReader(const std::string& text) : in_(text) {}
  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) return true;
    }
    return false;
  }
  void push_back(const std::string& line) { saved_ = line; }
  bool next_or_saved(std::string& line) {
    if (!saved_.empty()) {
      line = saved_;
      saved_.clear();
      return true;
    }
    return next(line);
  }

 private:
  std::istringstream in_;
  std::string saved_;
};

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  std::string t;
  while (is >> t) out.push_back(t);
  return out;
}

}  // namespace

DecoderDesign parse_design(const std::string& text) {
  LineReader rd(text);
  std::string line;
  DecoderDesign d;
  auto expect_kv = [&](const char* key) -> std::vector<std::string> {
    if (!rd.next_or_saved(line)) throw ParseError(std::string("design: missing ") + key);
    auto tk = tokens(line);
    if (tk.empty() || tk[0] != key)
      throw ParseError(std::string("design: expected '") + key + "' got '" + line + "'");
    return tk;
  };

  auto tk = expect_kv("ldpcq-design");
  d.version = std::stoi(tk.at(1));
  if (d.version != 1) throw ParseError("design: unsupported version");
  d.code_hash = std::stoull(expect_kv("code_hash").at(1), nullptr, 16);
  d.z = std::stoi(expect_kv("z").at(1));
  d.rate = parse_rational(expect_kv("rate").at(1));
  d.schedule = schedule_from_string(expect_kv("schedule").at(1));
  d.alignment = alignment_from_string(expect_kv("alignment").at(1));
  d.w = std::stoi(expect_kv("w").at(1));
  d.w_ch = std::stoi(expect_kv("w_ch").at(1));
  d.w_prime = std::stoi(expect_kv("w_prime").at(1));
  d.memory_assist = std::stoi(expect_kv("memory_assist").at(1)) != 0;
  d.merged = std::stoi(expect_kv("merged").at(1)) != 0;
  if (d.merged) {
    d.w_ups = std::stoi(expect_kv("w_ups").at(1));
    d.w_psi = std::stoi(expect_kv("w_psi").at(1));
  }
  d.design_ebn0_db = std::stod(expect_kv("design_ebn0_db").at(1));
  d.max_iter = std::stoi(expect_kv("max_iter").at(1));
  d.updates_per_iter = std::stoi(expect_kv("updates_per_iter").at(1));
  d.seed = std::stoull(expect_kv("seed").at(1));
  d.chq.w_ch = std::stoi(expect_kv("channel_quantizer").at(1));
  d.chq.llr_scale = std::stod(expect_kv("ch_llr_scale").at(1));
  tk = expect_kv("ch_thresholds");
  for (size_t i = 1; i < tk.size(); ++i) d.chq.thresholds.push_back(std::stod(tk[i]));
  tk = expect_kv("ch_recon");
  for (size_t i = 1; i < tk.size(); ++i) d.chq.recon.push_back(std::stoi(tk[i]));
  if (static_cast<int>(d.chq.recon.size()) != (1 << (d.w_ch - 1)))
    throw ParseError("design: channel recon size mismatch");

  while (rd.next_or_saved(line)) {
    auto st_tk = tokens(line);
    if (st_tk[0] == "end") break;
    if (st_tk[0] != "step") throw ParseError("design: expected 'step', got '" + line + "'");
    StepTables st;
    st.iteration = std::stoi(st_tk.at(1));
    st.update = std::stoi(st_tk.at(2));
    while (rd.next_or_saved(line)) {
      auto rtk = tokens(line);
      if (rtk[0] == "step" || rtk[0] == "end") {
        rd.push_back(line);
        break;
      }
      if (rtk[0] != "region") throw ParseError("design: expected 'region', got '" + line + "'");
      int region_id = std::stoi(rtk.at(1));
      RegionTables rt;
      auto th = expect_kv("thresholds");
      for (size_t i = 1; i < th.size(); ++i) rt.q.thresholds.push_back(std::stoi(th[i]));
      if (!d.merged) {
        rt.recon.t_levels = 1 << (d.w - 1);
        int expected_rows = 2 * rt.recon.t_levels;
        std::vector<std::vector<std::string>> rows;
        while (rd.next_or_saved(line)) {
          auto etk = tokens(line);
          if (etk[0] != "recon") {
            rd.push_back(line);
            break;
          }
          rows.push_back(etk);
        }
        bool singleton = true;
        for (auto& r : rows)
          if (std::stoi(r.at(2)) != 0) singleton = false;
        rt.recon.s_levels = singleton ? 0 : 1 << (d.w - 1);
        int cols = singleton ? 1 : 2 * rt.recon.s_levels;
        rt.recon.v.assign(static_cast<size_t>(expected_rows) * cols, 0);
        if (static_cast<int>(rows.size()) != expected_rows * cols)
          throw ParseError("design: reconstruction entry count mismatch");
        for (auto& r : rows) {
          int t = std::stoi(r.at(1)), s = std::stoi(r.at(2)), v = std::stoi(r.at(3));
          int row = label_index(t, rt.recon.t_levels);
          int col = singleton ? 0 : label_index(s, rt.recon.s_levels);
          rt.recon.v[static_cast<size_t>(row) * cols + col] = static_cast<int16_t>(v);
        }
      } else {
        auto md = expect_kv("merge_dims");
        MergeTables mt;
        mt.t_levels = std::stoi(md.at(1));
        mt.s_levels = std::stoi(md.at(2));
        mt.u_levels = std::stoi(md.at(3));
        int srows = mt.s_levels == 0 ? 1 : 2 * mt.s_levels;
        mt.ups.assign(static_cast<size_t>(srows) * 2 * mt.t_levels, 0);
        mt.psi.assign(2 * mt.u_levels, 0);
        mt.phi.assign(2 * mt.u_levels, 0);
        for (int i = 0; i < srows * 2 * mt.t_levels; ++i) {
          auto etk = expect_kv("ups");
          int s = std::stoi(etk.at(1)), t = std::stoi(etk.at(2)), u = std::stoi(etk.at(3));
          int row = mt.s_levels == 0 ? 0 : label_index(s, mt.s_levels);
          mt.ups[static_cast<size_t>(row) * 2 * mt.t_levels + label_index(t, mt.t_levels)] =
              static_cast<int8_t>(u);
        }
        for (int i = 0; i < 2 * mt.u_levels; ++i) {
          auto etk = expect_kv("psi");
          mt.psi[label_index(std::stoi(etk.at(1)), mt.u_levels)] =
              static_cast<int8_t>(std::stoi(etk.at(2)));
        }
        for (int i = 0; i < 2 * mt.u_levels; ++i) {
          auto etk = expect_kv("phi");
          mt.phi[label_index(std::stoi(etk.at(1)), mt.u_levels)] =
              static_cast<int16_t>(std::stoi(etk.at(2)));
        }
        rt.merge = std::move(mt);
        // merged steps carry no per-(t,s) reconstruction table
        rt.recon.t_levels = 1 << (d.w - 1);
        rt.recon.s_levels = 0;
        rt.recon.v.assign(2 * rt.recon.t_levels, 0);
      }
      st.region_ids.push_back(region_id);
      st.regions.push_back(std::move(rt));
    }
    d.steps.push_back(std::move(st));
  }
  d.validate();
  return d;
}

void save_design(const DecoderDesign& d, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write design file: " + path);
  f << serialize_design(d);
}

DecoderDesign load_design(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open design file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_design(ss.str());
}

std::string dump_design(const DecoderDesign& d) {
  std::ostringstream os;
  os << "design: " << to_string(d.schedule) << ", " << to_string(d.alignment) << "-aligned, w="
     << d.w << " w_ch=" << d.w_ch << " w'=" << d.w_prime
     << (d.memory_assist ? ", memory-assisted" : ", conventional");
  if (d.merged) os << ", merged (" << d.w << " " << d.w_ups << " " << d.w_psi << ")";
  os << "\ncode: hash " << std::hex << d.code_hash << std::dec << ", Z=" << d.z << ", rate "
     << d.rate.str() << "\ndesign Eb/N0: " << d.design_ebn0_db << " dB, " << d.max_iter
     << " iterations, seed " << d.seed << "\n\nchannel quantizer (w_ch=" << d.chq.w_ch
     << "), thresholds on |L^ch|:\n  ";
  for (double t : d.chq.thresholds) os << t << ' ';
  os << "\n  level reconstructions: ";
  for (int r : d.chq.recon) os << r << ' ';
  os << "\n\nboundary magnitudes per iteration (region 0 of each update):\n";
  os << "iter";
  int show = d.steps.empty() ? 0 : static_cast<int>(d.steps[0].regions[0].q.thresholds.size());
  for (int i = 0; i < show; ++i) os << "\ttau" << (i + 1);
  os << '\n';
  for (int it = 0; it < d.max_iter; ++it) {
    const StepTables& st = d.step(it, 0);
    os << it;
    for (int t : st.regions[0].q.thresholds) os << '\t' << t;
    os << '\n';
  }
  os << "\nreconstruction tables:\n";
  for (const auto& st : d.steps) {
    for (size_t i = 0; i < st.region_ids.size(); ++i) {
      os << "step (" << st.iteration << "," << st.update << ") region " << st.region_ids[i]
         << ": thresholds";
      for (int t : st.regions[i].q.thresholds) os << ' ' << t;
      os << '\n';
      const auto& rt = st.regions[i];
      if (!d.merged) {
        const auto& rc = rt.recon;
        int sl = rc.s_levels == 0 ? 1 : 2 * rc.s_levels;
        os << "  side alphabet: " << (rc.s_levels == 0 ? "singleton" : std::to_string(sl))
           << '\n';
        for (int ti = 0; ti < 2 * rc.t_levels; ++ti) {
          int t = index_label(ti, rc.t_levels);
          os << "  t=" << t << ":";
          if (rc.s_levels == 0)
            os << ' ' << rc.value(t, 0);
          else
            for (int si = 0; si < 2 * rc.s_levels; ++si)
              os << ' ' << rc.value(t, index_label(si, rc.s_levels));
          os << '\n';
        }
      } else {
        const auto& mt = *rt.merge;
        os << "  merge: t_levels=" << mt.t_levels << " s_levels=" << mt.s_levels
           << " u_levels=" << mt.u_levels << '\n';
      }
    }
  }
  return os.str();
}

}  // namespace ldpcq
