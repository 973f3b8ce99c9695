#include "ldpcq/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ldpcq {

using nlohmann::json;

void ExperimentConfig::validate() const {
  if (variant != "conv" && variant != "mem" && variant != "merged" && variant != "bp")
    throw std::runtime_error("config: variant must be conv|mem|merged|bp");
  if (variant != "bp") {
    if (w < 2 || w > 4) throw std::runtime_error("config: w must be in {2,3,4}");
    if (w_ch < 1 || w_ch > 8) throw std::runtime_error("config: w_ch out of range");
    if (w_prime < w_ch || w_prime > 8)
      throw std::runtime_error("config: w_prime must be in [w_ch, 8]");
    if (variant == "merged") {
      if (w_psi > w_ups) throw std::runtime_error("config: w_psi must not exceed w_ups");
      if (w_ups < 2 || w_ups > 7) throw std::runtime_error("config: w_ups out of range");
    }
  }
  schedule_from_string(schedule);
  alignment_from_string(alignment);
  if (min_frame_errors < 50)
    throw std::runtime_error("config: min_frame_errors must be at least 50 for reported points");
  if (train_frames < 1) throw std::runtime_error("config: train_frames must be positive");
}

DesignParams ExperimentConfig::design_params(int threads) const {
  DesignParams p;
  p.schedule = schedule_from_string(schedule);
  p.alignment = alignment_from_string(alignment);
  p.w = w;
  p.w_ch = w_ch;
  p.w_prime = w_prime;
  p.memory_assist = variant == "mem" || variant == "merged";
  p.merged = variant == "merged";
  p.w_ups = w_ups;
  p.w_psi = w_psi;
  p.design_ebn0_db = design_ebn0_db;
  p.max_iter = resolved_max_iter();
  p.frames = train_frames;
  p.inits = ib_inits;
  p.grid_bins = grid_bins;
  p.seed = seed;
  p.threads = threads;
  return p;
}

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("config parse error: ") + e.what());
  }
  ExperimentConfig c;
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("base_graph", c.base_graph);
  get("z", c.z);
  if (j.contains("rate")) c.rate = parse_rational(j.at("rate").get<std::string>());
  get("schedule", c.schedule);
  get("alignment", c.alignment);
  get("variant", c.variant);
  get("w", c.w);
  get("w_ch", c.w_ch);
  get("w_prime", c.w_prime);
  get("w_ups", c.w_ups);
  get("w_psi", c.w_psi);
  get("max_iter", c.max_iter);
  get("design_ebn0_db", c.design_ebn0_db);
  get("design_auto", c.design_auto);
  get("design_auto_target", c.design_auto_target);
  get("design_auto_lo", c.design_auto_lo);
  get("design_auto_hi", c.design_auto_hi);
  get("design_auto_tol_db", c.design_auto_tol_db);
  get("train_frames", c.train_frames);
  get("ib_inits", c.ib_inits);
  get("grid_bins", c.grid_bins);
  get("seed", c.seed);
  if (j.contains("sweep_ebn0_db"))
    c.sweep_ebn0_db = j.at("sweep_ebn0_db").get<std::vector<double>>();
  get("min_frame_errors", c.min_frame_errors);
  get("max_frames", c.max_frames);
  get("batch", c.batch);
  get("mi_frames", c.mi_frames);
  get("mi_ebn0_db", c.mi_ebn0_db);
  get("noiseless", c.noiseless);
  get("strict_assets", c.strict_assets);
  for (auto& el : j.items()) {
    static const char* known[] = {
        "base_graph", "z", "rate", "schedule", "alignment", "variant", "w", "w_ch",
        "w_prime", "w_ups", "w_psi", "max_iter", "design_ebn0_db", "design_auto",
        "design_auto_target", "design_auto_lo", "design_auto_hi", "design_auto_tol_db",
        "train_frames", "ib_inits", "grid_bins", "seed", "sweep_ebn0_db", "min_frame_errors",
        "max_frames", "batch", "mi_frames", "mi_ebn0_db", "noiseless", "strict_assets"};
    bool ok = false;
    for (const char* k : known) ok |= el.key() == k;
    if (!ok) throw std::runtime_error("config: unknown field '" + el.key() + "'");
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

BuiltCode build_code(const ExperimentConfig& cfg) {
  BuiltCode bc;
  std::vector<std::string> warnings;
  bc.full = load_base_graph(cfg.base_graph, cfg.strict_assets, &warnings);
  bc.adapted = rate_adapt(bc.full, cfg.rate);
  bc.code = lift(bc.adapted, cfg.z);
  return bc;
}

}  // namespace ldpcq
