#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "rtmwcs/acquisition.hpp"
#include "rtmwcs/recovery.hpp"
#include "rtmwcs/rng.hpp"

namespace rtmwcs {

/// Everything a seeded experiment needs: grid, band draw ranges,
/// acquisition and recovery knobs, sweep ranges, and the output directory.
struct ExperimentConfig {
  // grid
  double f_nyq = 2.5e9;
  int slices = 197;
  int periods = 512;

  // band draws
  int band_pairs = 3;           // K
  double bandwidth = 10e6;      // B
  double energy_min = 1.0, energy_max = 10.0;
  double t_min = 0.0, t_max = 10e-6;
  double input_snr_db = std::numeric_limits<double>::infinity();

  // acquisition
  int runs = 20;  // M
  SamplingMode mode = SamplingMode::exact;
  int tau_jitter = 0;

  // recovery; max_bands <= 0 selects the per-command default
  int max_bands = 0;
  double residual_tol = 1e-3;
  bool symmetric = true;
  double eig_rel_tol = 1e-6;
  double snr_edge_margin = 0.05;

  // sweeps
  int k_min = 1, k_max = 15, k_step = 1;
  double snr_min = 10.0, snr_max = 50.0, snr_step = 5.0;
  int m_min = 10, m_max = 20, m_step = 1;

  int trials = 20;
  std::uint64_t master_seed = 20250809;
  std::string out_dir = "runs";

  GridConfig grid() const { return GridConfig(f_nyq, slices, periods); }
};

/// Named defaults: "paper" (200 trials), "desk" (20 trials), and "small"
/// (L=17 toy grid that finishes in seconds, for CI).
ExperimentConfig profile_config(const std::string& name);

/// Per-trial band draw used by every sweep: carriers uniform in
/// [B/2, (f_nyq-B)/2] with rejection until pairwise carrier spacing exceeds
/// B (disjoint bands), t and E uniform in their ranges.
std::vector<BandSpec> draw_bands(const ExperimentConfig& cfg, int band_pairs,
                                 Rng& rng);

/// Generic per-point result table with a fixed header; serializes with
/// floats at 17 significant digits.
struct ResultTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::string to_csv() const;
  double cell(std::size_t row, const std::string& column) const;
};

/// One trial of one sweep point, the canonical per-trial log schema.
struct TrialRecord {
  std::uint64_t master_seed = 0;
  std::uint64_t trial_seed = 0;
  int band_pairs = 0;
  int runs = 0;
  double input_snr_db = 0.0;
  double output_snr_db = 0.0;
  std::string support;  // semicolon-joined 1-based slice indices
  double residual = 0.0;
  double wall_s = 0.0;
};

struct SweepResult {
  std::string kind;  // "sparsity", "noise", "m", "compare-mwc"
  ResultTable points;
  std::vector<TrialRecord> trials;

  std::string points_csv() const { return points.to_csv(); }
  std::string trials_csv() const;
};

/// Sparsity sweep (M fixed): per K, mean/stddev output SNR over the trials.
/// Each trial draws k_max bands once and point K uses the first K of them,
/// so points are paired. A point is flagged `clipped` when 4K exceeds M.
SweepResult run_sparsity_sweep(const ExperimentConfig& cfg);

/// Input-SNR sweep (K, M fixed). The same trial reuses one noise draw
/// rescaled per point, so the curve is paired across points.
SweepResult run_noise_sweep(const ExperimentConfig& cfg);

/// Run-count sweep. Chip rows and offsets extend prefix-wise with M, so
/// points are paired. With include_mwc the same signal and chips also feed
/// the zero-offset multi-channel baseline for a paired comparison.
SweepResult run_m_sweep(const ExperimentConfig& cfg, bool include_mwc);

/// Writes points.csv, trials.csv and plot.svg under cfg.out_dir.
void write_sweep_outputs(const SweepResult& result,
                         const ExperimentConfig& cfg);

struct SimulateReport {
  GridConfig grid;
  RecoveryResult recovery;
  std::vector<BandSpec> bands;         // empty for external waveforms
  std::vector<double> acquired_input;  // the record fed to the sampler
  ChipSet chips;
  std::vector<Acquisition> acqs;
  std::uint64_t trial_seed = 0;
  double input_snr_db = 0.0;
  double wall_s = 0.0;
};

/// Single end-to-end run. Without a waveform file the signal is drawn from
/// the config (and the clean signal is the SNR reference); with one, the
/// file's samples are acquired as-is and no SNR is reported.
SimulateReport simulate(const ExperimentConfig& cfg,
                        const std::optional<std::string>& waveform_path = {});

/// Writes the run directory: summary.csv, acquisitions.csv, chips.txt,
/// signal.txt (replayable waveform), xhat.f64 and slices.c64.
void write_simulate_outputs(const SimulateReport& report,
                            const ExperimentConfig& cfg);

/// Waveform text format: header line "f_nyq_hz=<value> n=<count>", then one
/// real sample per line. Parse errors carry the 1-based line number.
void write_waveform(const std::string& path, double f_nyq_hz,
                    const std::vector<double>& samples);
struct Waveform {
  double f_nyq_hz = 0.0;
  std::vector<double> samples;
};
Waveform read_waveform(const std::string& path);

/// 17-significant-digit float formatting used for all CSV output.
std::string format_g17(double v);

}  // namespace rtmwcs
