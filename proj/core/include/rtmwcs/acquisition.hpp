#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "rtmwcs/chips.hpp"
#include "rtmwcs/fft.hpp"
#include "rtmwcs/grid.hpp"
#include "rtmwcs/signal.hpp"

namespace rtmwcs {

/// Where the ADC grid lands relative to the trigger.
/// exact:      samples sit at the quantized offset tau*T, so the per-bin
///             aliasing model holds to rounding error (algorithm studies).
/// misaligned: samples sit at the true offset dt while recovery still uses
///             tau, exposing the sub-tick quantization error (hardware
///             studies).
enum class SamplingMode { exact, misaligned };

/// Brick-wall boundary handling. `closed` keeps the bins at exactly
/// +-cutoff; `open` zeroes them. The acquisition chain filters with `open`
/// at cutoff f_s/2: at critical sampling the +-f_s/2 bins alias onto one
/// sub-rate bin with run-dependent phases, so no single measurement matrix
/// models them, and dropping the pair keeps the output real and the
/// aliasing identity exact. When no bin sits exactly at the cutoff the two
/// variants are identical.
enum class PassbandEdge { closed, open };

/// FFT-domain ideal lowpass on a periodic record: bins with |f| <= cutoff
/// retained (strictly below for PassbandEdge::open), others zeroed.
std::vector<double> ideal_lowpass(const std::vector<double>& x,
                                  double cutoff_hz, double f_nyq_hz,
                                  PassbandEdge edge = PassbandEdge::closed);
std::vector<cplx> ideal_lowpass(const std::vector<cplx>& x, double cutoff_hz,
                                double f_nyq_hz,
                                PassbandEdge edge = PassbandEdge::closed);

/// TDC model: tau = ceil(dt / T), clamped to L-1 at the open boundary.
/// dt must lie in [0, T_s).
int quantize_offset(double dt, const GridConfig& grid);

/// One run: N/L sub-rate samples plus the trigger-to-clock offset and its
/// quantization.
struct Acquisition {
  int run = 0;
  std::vector<double> samples;  // y[k], length N/L
  double dt = 0.0;              // true offset, in [0, T_s)
  int tau = 0;                  // quantized offset in Nyquist ticks
  Eigen::VectorXi chip_row;
};

/// Modulate by the trigger-aligned chip waveform, ideal-lowpass at f_s/2,
/// and sample every L-th Nyquist tick starting at the offset (tau in exact
/// mode, dt in misaligned mode).
Acquisition acquire(const MultibandSignal& sig, const Eigen::VectorXi& chip_row,
                    double dt, SamplingMode mode = SamplingMode::exact);

struct AcquireOptions {
  SamplingMode mode = SamplingMode::exact;
  /// Uniform +-jitter (Nyquist ticks) added to the reported tau only,
  /// modeling TDC measurement uncertainty. 0 disables.
  int tau_jitter = 0;
};

/// M runs with independent offsets drawn uniformly in [0, T_s); draws that
/// would quantize to tau = L are resampled. Deterministic in the seed.
std::vector<Acquisition> acquire_run(const MultibandSignal& sig,
                                     const ChipSet& chips, std::uint64_t seed,
                                     const AcquireOptions& opts = {});

}  // namespace rtmwcs
