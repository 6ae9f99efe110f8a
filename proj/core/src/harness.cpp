#include "rtmwcs/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "rtmwcs/mwc.hpp"
#include "svg.hpp"

namespace rtmwcs {

namespace fs = std::filesystem;

namespace {

// Stream tags for derive_seed so every consumer gets an independent stream.
constexpr std::uint64_t kTagTrial = 1;
constexpr std::uint64_t kTagSimulate = 5;
constexpr std::uint64_t kStreamBands = 1;
constexpr std::uint64_t kStreamNoise = 2;
constexpr std::uint64_t kStreamChips = 3;
constexpr std::uint64_t kStreamOffsets = 4;

double now_s() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

void validate_common(const ExperimentConfig& cfg) {
  if (cfg.trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  if (cfg.runs < 1) throw std::invalid_argument("config: runs must be >= 1");
  if (cfg.band_pairs < 0) throw std::invalid_argument("config: negative K");
  const GridConfig grid = cfg.grid();
  if (!(cfg.t_min >= 0.0 && cfg.t_max >= cfg.t_min &&
        cfg.t_max <= grid.record_duration_s()))
    throw std::invalid_argument(
        "config: band time range must sit inside the record (record is " +
        format_g17(grid.record_duration_s()) + " s)");
  if (!(cfg.bandwidth > 0.0 && cfg.bandwidth <= grid.sub_rate_hz()))
    throw std::invalid_argument("config: bandwidth must be in (0, f_s]");
}

int sweep_band_budget(const ExperimentConfig& cfg, int band_pairs, int runs) {
  if (cfg.max_bands > 0) return std::min(cfg.max_bands, runs);
  return std::min(4 * band_pairs, runs);
}

RecoveryOptions recovery_options(const ExperimentConfig& cfg, int max_bands) {
  RecoveryOptions opts;
  opts.max_bands = max_bands;
  opts.residual_tol = cfg.residual_tol;
  opts.symmetric = cfg.symmetric;
  opts.eig_rel_tol = cfg.eig_rel_tol;
  opts.snr_edge_margin = cfg.snr_edge_margin;
  return opts;
}

std::string join_support(const SupportSet& s) {
  std::string out;
  for (std::size_t i = 0; i < s.indices.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(s.indices[i]);
  }
  return out;
}

struct TrialOutput {
  RecoveryResult rt;
  std::optional<RecoveryResult> mwc;
  double wall_s = 0.0;
};

// One seeded trial: draw noise/chips/offsets from streams derived off
// trial_seed (never off the sweep point), acquire, reconstruct against the
// clean reference. Optionally runs the zero-offset multi-channel baseline
// on the same signal and chips.
TrialOutput execute_trial(const ExperimentConfig& cfg, const GridConfig& grid,
                          const std::vector<BandSpec>& bands,
                          double input_snr_db, int runs,
                          std::uint64_t trial_seed, int max_bands,
                          bool with_mwc) {
  const double start = now_s();
  const MultibandSignal clean = generate_multiband(grid, bands);
  const bool noisy_input = std::isfinite(input_snr_db);
  const MultibandSignal input =
      noisy_input
          ? add_awgn(clean, input_snr_db, derive_seed(trial_seed, kStreamNoise))
          : clean;

  const ChipSet chips =
      generate_chips(grid, runs, derive_seed(trial_seed, kStreamChips));
  const MeasurementMatrix phi = build_phi(chips);
  AcquireOptions aopts;
  aopts.mode = cfg.mode;
  aopts.tau_jitter = cfg.tau_jitter;
  const auto acqs =
      acquire_run(input, chips, derive_seed(trial_seed, kStreamOffsets), aopts);

  const RecoveryOptions ropts = recovery_options(cfg, max_bands);
  TrialOutput out;
  out.rt = reconstruct(acqs, phi, grid, ropts, &clean.samples);
  if (with_mwc) {
    const MwcRun mwc = acquire_mwc(input, chips);
    out.mwc = reconstruct(mwc.acqs, phi, grid, ropts, &clean.samples);
  }
  out.wall_s = now_s() - start;
  return out;
}

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;
};

MeanStd mean_std(const std::vector<double>& v) {
  MeanStd out;
  if (v.empty()) return out;
  for (double x : v) out.mean += x;
  out.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    double acc = 0.0;
    for (double x : v) acc += (x - out.mean) * (x - out.mean);
    out.stddev = std::sqrt(acc / static_cast<double>(v.size() - 1));
  }
  return out;
}

TrialRecord make_record(const ExperimentConfig& cfg, std::uint64_t trial_seed,
                        int band_pairs, int runs, double input_snr_db,
                        const RecoveryResult& rec, double wall_s) {
  TrialRecord r;
  r.master_seed = cfg.master_seed;
  r.trial_seed = trial_seed;
  r.band_pairs = band_pairs;
  r.runs = runs;
  r.input_snr_db = input_snr_db;
  r.output_snr_db = rec.output_snr_db.value_or(
      std::numeric_limits<double>::quiet_NaN());
  r.support = join_support(rec.support);
  r.residual = rec.residual_norm;
  r.wall_s = wall_s;
  return r;
}

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  f << content;
}

}  // namespace

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

ExperimentConfig profile_config(const std::string& name) {
  ExperimentConfig cfg;
  if (name == "paper") {
    cfg.trials = 200;
  } else if (name == "desk") {
    cfg.trials = 20;
  } else if (name == "small") {
    // toy grid for CI: 435 ns record, wide slices, seconds per sweep
    cfg.slices = 17;
    cfg.periods = 64;
    cfg.bandwidth = 20e6;
    cfg.t_min = 5e-8;
    cfg.t_max = 3.3e-7;
    cfg.trials = 5;
    cfg.k_max = 6;
  } else {
    throw std::invalid_argument("unknown profile '" + name +
                                "' (expected paper, desk or small)");
  }
  return cfg;
}

std::vector<BandSpec> draw_bands(const ExperimentConfig& cfg, int band_pairs,
                                 Rng& rng) {
  const double b = cfg.bandwidth;
  const double lo = b / 2.0;
  const double hi = (cfg.f_nyq - b) / 2.0;
  if (!(hi > lo))
    throw std::invalid_argument("draw_bands: no legal carrier range");
  std::vector<BandSpec> out;
  out.reserve(static_cast<std::size_t>(band_pairs));
  for (int i = 0; i < band_pairs; ++i) {
    double carrier = 0.0;
    int attempts = 0;
    for (;;) {
      carrier = rng.uniform(lo, hi);
      bool ok = true;
      for (const auto& prev : out)
        if (std::abs(carrier - prev.carrier_hz) <= b) ok = false;
      if (ok) break;
      if (++attempts > 100000)
        throw std::runtime_error("draw_bands: cannot place disjoint bands");
    }
    BandSpec band;
    band.carrier_hz = carrier;
    band.time_offset_s = rng.uniform(cfg.t_min, cfg.t_max);
    band.energy = rng.uniform(cfg.energy_min, cfg.energy_max);
    band.bandwidth_hz = b;
    out.push_back(band);
  }
  return out;
}

std::string ResultTable::to_csv() const {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_g17(row[i]);
    }
    out += '\n';
  }
  return out;
}

double ResultTable::cell(std::size_t row, const std::string& column) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == column) return rows.at(row).at(i);
  throw std::out_of_range("ResultTable: no column " + column);
}

std::string SweepResult::trials_csv() const {
  std::string out =
      "master_seed,trial_seed,k,m,input_snr_db,output_snr_db,support,"
      "residual,wall_time_s\n";
  for (const auto& t : trials) {
    out += std::to_string(t.master_seed);
    out += ',';
    out += std::to_string(t.trial_seed);
    out += ',';
    out += std::to_string(t.band_pairs);
    out += ',';
    out += std::to_string(t.runs);
    out += ',';
    out += format_g17(t.input_snr_db);
    out += ',';
    out += format_g17(t.output_snr_db);
    out += ',';
    out += t.support;
    out += ',';
    out += format_g17(t.residual);
    out += ',';
    out += format_g17(t.wall_s);
    out += '\n';
  }
  return out;
}

SweepResult run_sparsity_sweep(const ExperimentConfig& cfg) {
  validate_common(cfg);
  if (cfg.k_min < 1 || cfg.k_max < cfg.k_min || cfg.k_step < 1)
    throw std::invalid_argument("sparsity sweep: bad K range");
  const GridConfig grid = cfg.grid();

  // One band list per trial; point K uses its first K bands.
  std::vector<std::uint64_t> trial_seeds(cfg.trials);
  std::vector<std::vector<BandSpec>> trial_bands(cfg.trials);
  for (int t = 0; t < cfg.trials; ++t) {
    trial_seeds[t] = derive_seed(cfg.master_seed, kTagTrial, t);
    Rng rng(derive_seed(trial_seeds[t], kStreamBands));
    trial_bands[t] = draw_bands(cfg, cfg.k_max, rng);
  }

  SweepResult result;
  result.kind = "sparsity";
  result.points.header = {"k", "trials", "clipped", "mean_output_snr_db",
                          "std_output_snr_db"};
  for (int k = cfg.k_min; k <= cfg.k_max; k += cfg.k_step) {
    const int budget = sweep_band_budget(cfg, k, cfg.runs);
    std::vector<double> snrs;
    for (int t = 0; t < cfg.trials; ++t) {
      const std::vector<BandSpec> bands(trial_bands[t].begin(),
                                        trial_bands[t].begin() + k);
      const TrialOutput out =
          execute_trial(cfg, grid, bands, cfg.input_snr_db, cfg.runs,
                        trial_seeds[t], budget, false);
      snrs.push_back(out.rt.output_snr_db.value());
      result.trials.push_back(make_record(cfg, trial_seeds[t], k, cfg.runs,
                                          cfg.input_snr_db, out.rt,
                                          out.wall_s));
    }
    const MeanStd stats = mean_std(snrs);
    const double clipped = (4 * k > cfg.runs) ? 1.0 : 0.0;
    result.points.rows.push_back({static_cast<double>(k),
                                  static_cast<double>(cfg.trials), clipped,
                                  stats.mean, stats.stddev});
  }
  return result;
}

SweepResult run_noise_sweep(const ExperimentConfig& cfg) {
  validate_common(cfg);
  if (!(cfg.snr_step > 0.0) || cfg.snr_max < cfg.snr_min)
    throw std::invalid_argument("noise sweep: bad SNR range");
  const GridConfig grid = cfg.grid();

  std::vector<std::uint64_t> trial_seeds(cfg.trials);
  std::vector<std::vector<BandSpec>> trial_bands(cfg.trials);
  for (int t = 0; t < cfg.trials; ++t) {
    trial_seeds[t] = derive_seed(cfg.master_seed, kTagTrial, t);
    Rng rng(derive_seed(trial_seeds[t], kStreamBands));
    trial_bands[t] = draw_bands(cfg, cfg.band_pairs, rng);
  }
  const int budget = sweep_band_budget(cfg, cfg.band_pairs, cfg.runs);

  SweepResult result;
  result.kind = "noise";
  result.points.header = {"input_snr_db", "trials", "mean_output_snr_db",
                          "std_output_snr_db"};
  for (double snr = cfg.snr_min; snr <= cfg.snr_max + 1e-9;
       snr += cfg.snr_step) {
    std::vector<double> snrs;
    for (int t = 0; t < cfg.trials; ++t) {
      const TrialOutput out = execute_trial(cfg, grid, trial_bands[t], snr,
                                            cfg.runs, trial_seeds[t], budget,
                                            false);
      snrs.push_back(out.rt.output_snr_db.value());
      result.trials.push_back(make_record(cfg, trial_seeds[t], cfg.band_pairs,
                                          cfg.runs, snr, out.rt, out.wall_s));
    }
    const MeanStd stats = mean_std(snrs);
    result.points.rows.push_back(
        {snr, static_cast<double>(cfg.trials), stats.mean, stats.stddev});
  }
  return result;
}

SweepResult run_m_sweep(const ExperimentConfig& cfg, bool include_mwc) {
  validate_common(cfg);
  if (cfg.m_min < 1 || cfg.m_max < cfg.m_min || cfg.m_step < 1)
    throw std::invalid_argument("m sweep: bad M range");
  const GridConfig grid = cfg.grid();

  std::vector<std::uint64_t> trial_seeds(cfg.trials);
  std::vector<std::vector<BandSpec>> trial_bands(cfg.trials);
  for (int t = 0; t < cfg.trials; ++t) {
    trial_seeds[t] = derive_seed(cfg.master_seed, kTagTrial, t);
    Rng rng(derive_seed(trial_seeds[t], kStreamBands));
    trial_bands[t] = draw_bands(cfg, cfg.band_pairs, rng);
  }

  SweepResult result;
  result.kind = include_mwc ? "compare-mwc" : "m";
  result.points.header = {"m", "trials", "rt_mean_output_snr_db",
                          "rt_std_output_snr_db"};
  if (include_mwc) {
    result.points.header.push_back("mwc_mean_output_snr_db");
    result.points.header.push_back("mwc_std_output_snr_db");
    result.points.header.push_back("mean_delta_db");
  }

  for (int m = cfg.m_min; m <= cfg.m_max; m += cfg.m_step) {
    const int budget = sweep_band_budget(cfg, cfg.band_pairs, m);
    std::vector<double> rt_snrs, mwc_snrs;
    for (int t = 0; t < cfg.trials; ++t) {
      const TrialOutput out =
          execute_trial(cfg, grid, trial_bands[t], cfg.input_snr_db, m,
                        trial_seeds[t], budget, include_mwc);
      rt_snrs.push_back(out.rt.output_snr_db.value());
      result.trials.push_back(make_record(cfg, trial_seeds[t], cfg.band_pairs,
                                          m, cfg.input_snr_db, out.rt,
                                          out.wall_s));
      if (include_mwc) mwc_snrs.push_back(out.mwc->output_snr_db.value());
    }
    const MeanStd rt = mean_std(rt_snrs);
    std::vector<double> row = {static_cast<double>(m),
                               static_cast<double>(cfg.trials), rt.mean,
                               rt.stddev};
    if (include_mwc) {
      const MeanStd mw = mean_std(mwc_snrs);
      row.push_back(mw.mean);
      row.push_back(mw.stddev);
      row.push_back(mw.mean - rt.mean);
    }
    result.points.rows.push_back(std::move(row));
  }
  return result;
}

void write_sweep_outputs(const SweepResult& result,
                         const ExperimentConfig& cfg) {
  fs::create_directories(cfg.out_dir);
  const fs::path dir(cfg.out_dir);
  write_text_file(dir / "points.csv", result.points_csv());
  write_text_file(dir / "trials.csv", result.trials_csv());

  std::vector<svg::Series> series;
  const auto& header = result.points.header;
  const auto& rows = result.points.rows;
  auto column = [&](const std::string& name) {
    std::vector<double> v;
    for (std::size_t r = 0; r < rows.size(); ++r)
      v.push_back(result.points.cell(r, name));
    return v;
  };
  const std::string x_name = header.at(0);
  if (result.kind == "sparsity") {
    series.push_back({"output SNR", column("k"), column("mean_output_snr_db")});
  } else if (result.kind == "noise") {
    series.push_back({"output SNR", column("input_snr_db"),
                      column("mean_output_snr_db")});
  } else {
    series.push_back(
        {"RT-MWCS", column("m"), column("rt_mean_output_snr_db")});
    if (result.kind == "compare-mwc")
      series.push_back({"MWC", column("m"), column("mwc_mean_output_snr_db")});
  }
  svg::write_line_chart((dir / "plot.svg").string(),
                        "mean output SNR vs " + x_name, x_name,
                        "output SNR (dB)", series);
}

SimulateReport simulate(const ExperimentConfig& cfg,
                        const std::optional<std::string>& waveform_path) {
  const double start = now_s();
  const std::uint64_t trial_seed =
      derive_seed(cfg.master_seed, kTagSimulate, 0);

  GridConfig grid = cfg.grid();
  MultibandSignal clean{grid, {}, {}, 0.0};
  MultibandSignal input{grid, {}, {}, 0.0};
  std::vector<BandSpec> bands;
  bool have_reference = false;

  if (waveform_path) {
    const Waveform wf = read_waveform(*waveform_path);
    if (wf.samples.size() % static_cast<std::size_t>(cfg.slices) != 0)
      throw std::runtime_error(
          *waveform_path + ": sample count " +
          std::to_string(wf.samples.size()) +
          " is not a multiple of the slice count " +
          std::to_string(cfg.slices));
    grid = GridConfig(wf.f_nyq_hz, cfg.slices,
                      static_cast<int>(wf.samples.size()) / cfg.slices);
    input = MultibandSignal{grid, wf.samples, {}, 0.0};
  } else {
    validate_common(cfg);
    Rng rng(derive_seed(trial_seed, kStreamBands));
    bands = draw_bands(cfg, cfg.band_pairs, rng);
    clean = generate_multiband(grid, bands);
    input = std::isfinite(cfg.input_snr_db)
                ? add_awgn(clean, cfg.input_snr_db,
                           derive_seed(trial_seed, kStreamNoise))
                : clean;
    have_reference = true;
  }

  SimulateReport report{grid, RecoveryResult{}, bands, input.samples,
                        ChipSet{grid, {}, 0}, {}, trial_seed,
                        cfg.input_snr_db, 0.0};
  report.chips =
      generate_chips(grid, cfg.runs, derive_seed(trial_seed, kStreamChips));
  const MeasurementMatrix phi = build_phi(report.chips);
  AcquireOptions aopts;
  aopts.mode = cfg.mode;
  aopts.tau_jitter = cfg.tau_jitter;
  report.acqs = acquire_run(input, report.chips,
                            derive_seed(trial_seed, kStreamOffsets), aopts);

  // Single-run demo keeps the top-2K convention; sweeps use min(4K, M).
  int budget = 0;
  if (cfg.max_bands > 0)
    budget = std::min(cfg.max_bands, cfg.runs);
  else if (have_reference)
    budget = std::min(2 * cfg.band_pairs, cfg.runs);
  else
    budget = std::max(cfg.runs - 2, 1);

  report.recovery =
      reconstruct(report.acqs, phi, grid, recovery_options(cfg, budget),
                  have_reference ? &clean.samples : nullptr);
  report.wall_s = now_s() - start;
  return report;
}

void write_simulate_outputs(const SimulateReport& report,
                            const ExperimentConfig& cfg) {
  fs::create_directories(cfg.out_dir);
  const fs::path dir(cfg.out_dir);

  TrialRecord rec = make_record(
      cfg, report.trial_seed, static_cast<int>(report.bands.size()),
      static_cast<int>(report.acqs.size()), report.input_snr_db,
      report.recovery, report.wall_s);
  SweepResult shell;
  shell.trials.push_back(rec);
  write_text_file(dir / "summary.csv", shell.trials_csv());

  std::string acq_csv = "run,dt,tau\n";
  for (const auto& a : report.acqs) {
    acq_csv += std::to_string(a.run);
    acq_csv += ',';
    acq_csv += format_g17(a.dt);
    acq_csv += ',';
    acq_csv += std::to_string(a.tau);
    acq_csv += '\n';
  }
  write_text_file(dir / "acquisitions.csv", acq_csv);

  save_chips((dir / "chips.txt").string(), report.chips);
  write_waveform((dir / "signal.txt").string(), report.grid.nyquist_rate_hz,
                 report.acquired_input);

  std::ofstream xf(dir / "xhat.f64", std::ios::binary);
  if (!xf) throw std::runtime_error("cannot open xhat.f64");
  xf.write(reinterpret_cast<const char*>(report.recovery.x_hat.data()),
           static_cast<std::streamsize>(report.recovery.x_hat.size() *
                                        sizeof(double)));

  std::ofstream sf(dir / "slices.c64", std::ios::binary);
  if (!sf) throw std::runtime_error("cannot open slices.c64");
  const auto& s = report.recovery.slices;
  for (Eigen::Index r = 0; r < s.rows(); ++r)
    for (Eigen::Index c = 0; c < s.cols(); ++c) {
      const double re = s(r, c).real(), im = s(r, c).imag();
      sf.write(reinterpret_cast<const char*>(&re), sizeof(double));
      sf.write(reinterpret_cast<const char*>(&im), sizeof(double));
    }
}

void write_waveform(const std::string& path, double f_nyq_hz,
                    const std::vector<double>& samples) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  f << "f_nyq_hz=" << format_g17(f_nyq_hz) << " n=" << samples.size() << '\n';
  for (double v : samples) f << format_g17(v) << '\n';
}

Waveform read_waveform(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error(path + ": cannot open");
  std::string line;
  if (!std::getline(f, line))
    throw std::runtime_error(path + ":1: empty file, expected header "
                                    "'f_nyq_hz=<value> n=<count>'");
  Waveform wf;
  long long count = 0;
  if (std::sscanf(line.c_str(), "f_nyq_hz=%lf n=%lld", &wf.f_nyq_hz, &count) !=
      2)
    throw std::runtime_error(
        path + ":1: expected header 'f_nyq_hz=<value> n=<count>'");
  if (!(wf.f_nyq_hz > 0.0))
    throw std::runtime_error(path + ":1: f_nyq_hz must be positive");
  if (count <= 0)
    throw std::runtime_error(path + ":1: sample count must be positive");

  wf.samples.reserve(static_cast<std::size_t>(count));
  long long lineno = 1;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (static_cast<long long>(wf.samples.size()) >= count)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": unexpected trailing data");
    char* end = nullptr;
    const double v = std::strtod(line.c_str(), &end);
    if (end == line.c_str() ||
        std::string(end).find_first_not_of(" \t\r") != std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": cannot parse sample");
    wf.samples.push_back(v);
  }
  if (static_cast<long long>(wf.samples.size()) != count)
    throw std::runtime_error(
        path + ": expected " + std::to_string(count) + " samples, file ends after " +
        std::to_string(wf.samples.size()));
  return wf;
}

}  // namespace rtmwcs
