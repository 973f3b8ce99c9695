// Batch CLI: quantizer design runs, FER sweeps, mutual-information tracking
// and design-file inspection.

#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "ldpcq/config.hpp"
#include "ldpcq/sim.hpp"

using namespace ldpcq;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string design_path;
  std::string out_path;
  // optional overrides
  std::vector<std::string> overrides;
};

void apply_overrides(ExperimentConfig& cfg, const std::vector<std::string>& kv) {
  for (const auto& s : kv) {
    auto eq = s.find('=');
    if (eq == std::string::npos) throw std::runtime_error("override must be key=value: " + s);
    std::string k = s.substr(0, eq), v = s.substr(eq + 1);
    if (k == "z") cfg.z = std::stoi(v);
    else if (k == "rate") cfg.rate = parse_rational(v);
    else if (k == "schedule") cfg.schedule = v;
    else if (k == "alignment") cfg.alignment = v;
    else if (k == "variant") cfg.variant = v;
    else if (k == "w") cfg.w = std::stoi(v);
    else if (k == "w_ch") cfg.w_ch = std::stoi(v);
    else if (k == "w_prime") cfg.w_prime = std::stoi(v);
    else if (k == "w_ups") cfg.w_ups = std::stoi(v);
    else if (k == "w_psi") cfg.w_psi = std::stoi(v);
    else if (k == "max_iter") cfg.max_iter = std::stoi(v);
    else if (k == "design_ebn0_db") cfg.design_ebn0_db = std::stod(v);
    else if (k == "train_frames") cfg.train_frames = std::stoi(v);
    else if (k == "ib_inits") cfg.ib_inits = std::stoi(v);
    else if (k == "seed") cfg.seed = std::stoull(v);
    else if (k == "min_frame_errors") cfg.min_frame_errors = std::stoull(v);
    else if (k == "max_frames") cfg.max_frames = std::stoull(v);
    else if (k == "mi_frames") cfg.mi_frames = std::stoull(v);
    else if (k == "base_graph") cfg.base_graph = v;
    else if (k == "noiseless") cfg.noiseless = v == "1" || v == "true";
    else throw std::runtime_error("unknown override key: " + k);
  }
  cfg.validate();
}

int cmd_design(const CommonArgs& args) {
  ExperimentConfig cfg = load_config(args.config_path);
  apply_overrides(cfg, args.overrides);
  if (cfg.variant == "bp") throw std::runtime_error("bp variant needs no design run");
  BuiltCode bc = build_code(cfg);
  int threads = env_threads();
  DesignParams params = cfg.design_params(threads);
  params.log = [](const std::string& m) { std::cerr << m << "\n"; };
  params.checkpoint_path = args.out_path + ".ckpt";

  if (cfg.design_auto) {
    double ebn0 = bisect_design_ebn0(bc.code, cfg.rate, params, cfg.design_auto_lo,
                                     cfg.design_auto_hi, cfg.design_auto_target,
                                     cfg.design_auto_tol_db, params.log);
    std::cerr << "selected design Eb/N0 " << ebn0 << " dB\n";
    params.design_ebn0_db = ebn0;
  }
  DecoderDesign d = design_full(bc.code, cfg.rate, params);
  save_design(d, args.out_path);
  std::remove((args.out_path + ".ckpt").c_str());
  std::cout << "wrote " << args.out_path << "\n";
  return 0;
}

void check_design_matches(const ExperimentConfig& cfg, const BuiltCode& bc,
                          const DecoderDesign& d) {
  if (d.code_hash != code_hash(bc.adapted, cfg.z, cfg.rate))
    throw std::runtime_error("design file does not match the configured code (hash mismatch)");
}

int cmd_fer(const CommonArgs& args) {
  ExperimentConfig cfg = load_config(args.config_path);
  apply_overrides(cfg, args.overrides);
  BuiltCode bc = build_code(cfg);
  DecoderDesign d;
  bool bp = cfg.variant == "bp";
  if (!bp) {
    d = load_design(args.design_path);
    check_design_matches(cfg, bc, d);
  }
  if (cfg.sweep_ebn0_db.empty()) throw std::runtime_error("config: sweep_ebn0_db is empty");

  std::ostream* out = &std::cout;
  std::ofstream f;
  if (!args.out_path.empty()) {
    f.open(args.out_path);
    if (!f) throw std::runtime_error("cannot write " + args.out_path);
    out = &f;
  }
  FerOptions opt;
  opt.min_frame_errors = cfg.min_frame_errors;
  opt.max_frames = cfg.max_frames;
  opt.batch = cfg.batch;
  opt.threads = env_threads();
  opt.seed = cfg.seed;
  opt.noiseless = cfg.noiseless;
  *out << fer_csv_header() << "\n";
  for (double ebn0 : cfg.sweep_ebn0_db) {
    FerPoint pt = run_fer_point(bc.code, bp ? nullptr : &d, ebn0, opt, cfg.resolved_max_iter());
    *out << fer_csv_row(pt) << "\n";
    out->flush();
    std::cerr << "Eb/N0 " << ebn0 << " dB: FER " << pt.fer << " (" << pt.frame_errors << "/"
              << pt.frames << ")\n";
  }
  return 0;
}

int cmd_mi_track(const CommonArgs& args) {
  ExperimentConfig cfg = load_config(args.config_path);
  apply_overrides(cfg, args.overrides);
  BuiltCode bc = build_code(cfg);
  DecoderDesign d;
  bool bp = cfg.variant == "bp";
  if (!bp) {
    d = load_design(args.design_path);
    check_design_matches(cfg, bc, d);
  }
  double ebn0 = cfg.mi_ebn0_db > -1e29 ? cfg.mi_ebn0_db
                                       : (bp ? cfg.design_ebn0_db : d.design_ebn0_db);
  MiTrack t = run_mi_track(bc.code, bp ? nullptr : &d, ebn0, cfg.mi_frames, env_threads(),
                           cfg.seed, cfg.resolved_max_iter());
  std::ostream* out = &std::cout;
  std::ofstream f;
  if (!args.out_path.empty()) {
    f.open(args.out_path);
    if (!f) throw std::runtime_error("cannot write " + args.out_path);
    out = &f;
  }
  *out << mi_csv_header() << "\n" << mi_csv_rows(ebn0, t);
  return 0;
}

int cmd_inspect(const CommonArgs& args) {
  DecoderDesign d = load_design(args.design_path);
  std::cout << dump_design(d);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"information-optimum coarse quantizer design and evaluation for LDPC decoding"};
  app.require_subcommand(1);
  CommonArgs args;

  auto add_common = [&](CLI::App* sub, bool need_cfg, bool need_design, bool has_out) {
    if (need_cfg)
      sub->add_option("-c,--config", args.config_path, "experiment config (JSON)")->required();
    if (need_design)
      sub->add_option("-d,--design", args.design_path, "design file")->required();
    if (has_out) sub->add_option("-o,--out", args.out_path, "output path");
    if (need_cfg)
      sub->add_option("--set", args.overrides, "override config fields (key=value)");
  };

  auto* design = app.add_subcommand("design", "run a decoder design");
  add_common(design, true, false, true);
  design->callback([&] {
    if (args.out_path.empty()) throw CLI::ValidationError("--out is required for design");
  });
  auto* fer = app.add_subcommand("fer", "frame-error-rate sweep");
  add_common(fer, true, false, true);
  fer->add_option("-d,--design", args.design_path, "design file");
  auto* mi = app.add_subcommand("mi-track", "per-iteration mutual information");
  add_common(mi, true, false, true);
  mi->add_option("-d,--design", args.design_path, "design file");
  auto* inspect = app.add_subcommand("inspect", "dump a design file");
  inspect->add_option("-d,--design", args.design_path, "design file")->required();

  CLI11_PARSE(app, argc, argv);
  try {
    if (design->parsed()) return cmd_design(args);
    if (fer->parsed()) return cmd_fer(args);
    if (mi->parsed()) return cmd_mi_track(args);
    if (inspect->parsed()) return cmd_inspect(args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
