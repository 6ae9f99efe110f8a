// Command-line front end: seeded single runs and the sweep protocols, with
// CSV/SVG output directories. See README.md for the file formats.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "rtmwcs/harness.hpp"
#include "rtmwcs/mwc.hpp"

namespace {

using rtmwcs::ExperimentConfig;

std::string scan_option(int argc, char** argv, const std::string& name,
                        const std::string& fallback) {
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == name && i + 1 < argc) return argv[i + 1];
    if (arg.rfind(name + "=", 0) == 0) return arg.substr(name.size() + 1);
  }
  return fallback;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// Expand `key=value` lines of a config file into command-line tokens,
// inserted right after the subcommand so explicit flags still override.
// `#`/`;` comments and `[section]` headers are ignored; boolean keys accept
// true/false.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  const std::string path = scan_option(argc, argv, "--config", "");
  if (path.empty()) return args;
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config file " + path);

  std::vector<std::string> tokens;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';' || line[0] == '[')
      continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": empty key");
    if (value == "true") {
      tokens.push_back("--" + key);
    } else if (value == "false") {
      // flag left at its default
    } else {
      tokens.push_back("--" + key);
      tokens.push_back(value);
    }
  }
  if (args.size() < 2) return args;
  std::vector<std::string> out{args[0], args[1]};
  out.insert(out.end(), tokens.begin(), tokens.end());
  out.insert(out.end(), args.begin() + 2, args.end());
  return out;
}

void add_common_options(CLI::App* cmd, ExperimentConfig& cfg,
                        std::string& profile) {
  cmd->add_option("--profile", profile, "preset defaults: paper, desk, small")
      ->check(CLI::IsMember({"paper", "desk", "small"}))
      ->capture_default_str();
  cmd->add_option("--f-nyq", cfg.f_nyq, "Nyquist rate in Hz")
      ->capture_default_str();
  cmd->add_option("-L,--slices", cfg.slices,
                  "spectral slices per Nyquist span (odd)")
      ->capture_default_str();
  cmd->add_option("--periods", cfg.periods, "chip periods per record")
      ->capture_default_str();
  cmd->add_option("-K,--pairs", cfg.band_pairs, "active band pairs")
      ->capture_default_str();
  cmd->add_option("-B,--bandwidth", cfg.bandwidth, "band width in Hz")
      ->capture_default_str();
  cmd->add_option("--t-min", cfg.t_min, "band time-offset range start (s)")
      ->capture_default_str();
  cmd->add_option("--t-max", cfg.t_max, "band time-offset range end (s)")
      ->capture_default_str();
  cmd->add_option("--input-snr", cfg.input_snr_db,
                  "input SNR in dB (default: noiseless)");
  cmd->add_option("-M,--runs", cfg.runs, "acquisition runs / channels")
      ->capture_default_str();
  cmd->add_option("--trials", cfg.trials, "trials per sweep point")
      ->capture_default_str();
  cmd->add_option("--seed", cfg.master_seed, "master seed")
      ->capture_default_str();
  cmd->add_option("--max-bands", cfg.max_bands,
                  "slice budget for the pursuit (0 = per-command default)");
  cmd->add_option("--residual-tol", cfg.residual_tol,
                  "relative residual stopping threshold")
      ->capture_default_str();
  cmd->add_flag_callback(
      "--no-symmetric", [&cfg] { cfg.symmetric = false; },
      "disable paired slice selection");
  cmd->add_flag_callback(
      "--misaligned",
      [&cfg] { cfg.mode = rtmwcs::SamplingMode::misaligned; },
      "sample at the true offset instead of the quantized one");
  cmd->add_option("--jitter", cfg.tau_jitter,
                  "uniform +-ticks of TDC reporting error");
  cmd->add_option("--edge-margin", cfg.snr_edge_margin,
                  "fraction trimmed from each end for SNR")
      ->capture_default_str();
  cmd->add_option("-o,--out-dir", cfg.out_dir, "output directory")
      ->capture_default_str();
  static std::string config_path;
  cmd->add_option("--config", config_path,
                  "read key=value option lines from a file (explicit flags "
                  "override)");
}

void print_sweep(const rtmwcs::SweepResult& result,
                 const ExperimentConfig& cfg) {
  rtmwcs::write_sweep_outputs(result, cfg);
  std::cout << result.points_csv();
  std::cout << "wrote " << cfg.out_dir << "/points.csv, trials.csv, plot.svg\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Sub-Nyquist compressive sampling simulator: random-triggered "
      "single-channel acquisition with blind joint-sparse recovery, plus a "
      "synchronous multi-channel baseline"};
  app.require_subcommand(1);

  ExperimentConfig cfg;
  std::vector<std::string> args;
  try {
    args = expand_config(argc, argv);
    std::vector<char*> argv2;
    argv2.reserve(args.size());
    for (auto& a : args) argv2.push_back(a.data());
    cfg = rtmwcs::profile_config(scan_option(
        static_cast<int>(argv2.size()), argv2.data(), "--profile", "desk"));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  std::string profile = "desk";

  auto* sim = app.add_subcommand("simulate", "one end-to-end run with a full "
                                             "artifact dump");
  std::string waveform_file;
  add_common_options(sim, cfg, profile);
  sim->add_option("--signal-file", waveform_file,
                  "replay a recorded waveform (header 'f_nyq_hz=<v> n=<count>' "
                  "plus one sample per line)");

  auto* sk = app.add_subcommand("sweep-sparsity",
                                "output SNR vs band-pair count K");
  add_common_options(sk, cfg, profile);
  sk->add_option("--k-min", cfg.k_min)->capture_default_str();
  sk->add_option("--k-max", cfg.k_max)->capture_default_str();
  sk->add_option("--k-step", cfg.k_step)->capture_default_str();

  auto* sn = app.add_subcommand("sweep-noise", "output SNR vs input SNR");
  add_common_options(sn, cfg, profile);
  sn->add_option("--snr-min", cfg.snr_min)->capture_default_str();
  sn->add_option("--snr-max", cfg.snr_max)->capture_default_str();
  sn->add_option("--snr-step", cfg.snr_step)->capture_default_str();

  auto* sm = app.add_subcommand("sweep-m", "output SNR vs acquisition count");
  add_common_options(sm, cfg, profile);
  sm->add_option("--m-min", cfg.m_min)->capture_default_str();
  sm->add_option("--m-max", cfg.m_max)->capture_default_str();
  sm->add_option("--m-step", cfg.m_step)->capture_default_str();

  auto* cm = app.add_subcommand(
      "compare-mwc", "paired single-channel vs multi-channel sweep over M");
  add_common_options(cm, cfg, profile);
  cm->add_option("--m-min", cfg.m_min)->capture_default_str();
  cm->add_option("--m-max", cfg.m_max)->capture_default_str();
  cm->add_option("--m-step", cfg.m_step)->capture_default_str();

  try {
    std::vector<const char*> argv2;
    argv2.reserve(args.size());
    for (auto& a : args) argv2.push_back(a.c_str());
    app.parse(static_cast<int>(argv2.size()), argv2.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (sim->parsed()) {
      std::optional<std::string> path;
      if (!waveform_file.empty()) path = waveform_file;
      const auto report = rtmwcs::simulate(cfg, path);
      rtmwcs::write_simulate_outputs(report, cfg);
      std::cout << "support:";
      for (int l : report.recovery.support.indices) std::cout << ' ' << l;
      std::cout << '\n';
      std::cout << "residual: " << rtmwcs::format_g17(
                       report.recovery.residual_norm)
                << '\n';
      if (report.recovery.output_snr_db)
        std::cout << "output SNR: "
                  << rtmwcs::format_g17(*report.recovery.output_snr_db)
                  << " dB\n";
      std::cout << "wrote " << cfg.out_dir
                << "/{summary.csv,acquisitions.csv,chips.txt,signal.txt,"
                   "xhat.f64,slices.c64}\n";
    } else if (sk->parsed()) {
      print_sweep(rtmwcs::run_sparsity_sweep(cfg), cfg);
    } else if (sn->parsed()) {
      print_sweep(rtmwcs::run_noise_sweep(cfg), cfg);
    } else if (sm->parsed()) {
      print_sweep(rtmwcs::run_m_sweep(cfg, false), cfg);
    } else if (cm->parsed()) {
      print_sweep(rtmwcs::run_m_sweep(cfg, true), cfg);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
