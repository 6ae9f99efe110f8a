#include "rtmwcs/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rtmwcs/fft.hpp"
#include "rtmwcs/rng.hpp"

namespace rtmwcs {

namespace {

// Largest |signed bin| kept by the brick wall, in bin units.
long long passband_limit(double cutoff_hz, double f_nyq_hz, long long n,
                         PassbandEdge edge) {
  const double cutoff_bins = cutoff_hz * static_cast<double>(n) / f_nyq_hz;
  if (edge == PassbandEdge::closed)
    return static_cast<long long>(std::floor(cutoff_bins + 1e-9));
  return static_cast<long long>(std::ceil(cutoff_bins - 1e-9)) - 1;
}

void apply_brick_wall(std::vector<cplx>& spectrum, double cutoff_hz,
                      double f_nyq_hz, PassbandEdge edge) {
  const auto n = static_cast<long long>(spectrum.size());
  const long long keep = passband_limit(cutoff_hz, f_nyq_hz, n, edge);
  for (long long k = 0; k < n; ++k)
    if (std::llabs(signed_bin(k, n)) > keep) spectrum[k] = cplx(0.0, 0.0);
}

void validate_cutoff(double cutoff_hz, double f_nyq_hz) {
  if (!(cutoff_hz > 0.0 && cutoff_hz <= f_nyq_hz / 2.0))
    throw std::invalid_argument("ideal_lowpass: cutoff outside (0, f_nyq/2]");
}

}  // namespace

std::vector<cplx> ideal_lowpass(const std::vector<cplx>& x, double cutoff_hz,
                                double f_nyq_hz, PassbandEdge edge) {
  validate_cutoff(cutoff_hz, f_nyq_hz);
  auto spectrum = fft(x);
  apply_brick_wall(spectrum, cutoff_hz, f_nyq_hz, edge);
  return ifft(spectrum);
}

std::vector<double> ideal_lowpass(const std::vector<double>& x,
                                  double cutoff_hz, double f_nyq_hz,
                                  PassbandEdge edge) {
  validate_cutoff(cutoff_hz, f_nyq_hz);
  auto spectrum = fft(x);
  apply_brick_wall(spectrum, cutoff_hz, f_nyq_hz, edge);
  return ifft_real(spectrum);
}

int quantize_offset(double dt, const GridConfig& grid) {
  if (!(dt >= 0.0 && dt < grid.sub_period_s()))
    throw std::invalid_argument("quantize_offset: dt outside [0, T_s)");
  const double ticks = dt * grid.nyquist_rate_hz;
  const auto tau = static_cast<int>(std::ceil(ticks - 1e-9));
  return std::clamp(tau, 0, grid.slices - 1);
}

Acquisition acquire(const MultibandSignal& sig, const Eigen::VectorXi& chip_row,
                    double dt, SamplingMode mode) {
  const GridConfig& grid = sig.grid;
  const int big_n = grid.record_length();
  if (static_cast<int>(chip_row.size()) != grid.slices)
    throw std::invalid_argument("acquire: chip row length != slice count");
  if (static_cast<int>(sig.samples.size()) != big_n)
    throw std::invalid_argument("acquire: sample count != record length");
  const int tau = quantize_offset(dt, grid);

  // Modulate by the trigger-aligned chip waveform (chip k covers one tick).
  std::vector<cplx> mixed(big_n);
  for (int i = 0; i < big_n; ++i)
    mixed[i] = sig.samples[i] * static_cast<double>(chip_row[i % grid.slices]);

  auto spectrum = fft(mixed);
  apply_brick_wall(spectrum, grid.sub_rate_hz() / 2.0, grid.nyquist_rate_hz,
                   PassbandEdge::open);

  if (mode == SamplingMode::misaligned && dt > 0.0) {
    // Evaluate the bandlimited record at n + dt/T via a spectral phase ramp,
    // so the decimated grid sits at the true offset rather than tau.
    const double frac = dt * grid.nyquist_rate_hz;
    for (int k = 0; k < big_n; ++k) {
      const double ph = 2.0 * std::numbers::pi *
                        static_cast<double>(signed_bin(k, big_n)) * frac /
                        static_cast<double>(big_n);
      spectrum[k] *= cplx(std::cos(ph), std::sin(ph));
    }
  }
  const std::vector<double> filtered = ifft_real(spectrum);

  const int count = grid.bins_per_slice();
  std::vector<double> y(count);
  if (mode == SamplingMode::misaligned && dt > 0.0) {
    for (int k = 0; k < count; ++k)
      y[k] = filtered[(static_cast<long long>(k) * grid.slices) % big_n];
  } else {
    for (int k = 0; k < count; ++k)
      y[k] = filtered[(tau + static_cast<long long>(k) * grid.slices) % big_n];
  }
  return Acquisition{0, std::move(y), dt, tau, chip_row};
}

std::vector<Acquisition> acquire_run(const MultibandSignal& sig,
                                     const ChipSet& chips, std::uint64_t seed,
                                     const AcquireOptions& opts) {
  const GridConfig& grid = sig.grid;
  const int m_count = chips.count();
  if (m_count < 1) throw std::invalid_argument("acquire_run: no chip rows");
  if (opts.tau_jitter < 0)
    throw std::invalid_argument("acquire_run: negative jitter");

  Rng rng(seed);
  // Pre-draw the whole offset stream (and jitters) so the per-run work is
  // order-free; resample draws that would quantize past the last tick.
  std::vector<double> offsets(m_count);
  const double limit = (grid.slices - 1) * grid.tick_s();
  for (int m = 0; m < m_count; ++m) {
    double dt = 0.0;
    do {
      dt = rng.uniform(0.0, grid.sub_period_s());
    } while (dt > limit);
    offsets[m] = dt;
  }
  std::vector<int> jitters(m_count, 0);
  if (opts.tau_jitter > 0)
    for (int m = 0; m < m_count; ++m)
      jitters[m] = rng.uniform_int(-opts.tau_jitter, opts.tau_jitter);

  std::vector<Acquisition> out;
  out.reserve(m_count);
  for (int m = 0; m < m_count; ++m) {
    Acquisition a = acquire(sig, chips.rows.row(m), offsets[m], opts.mode);
    a.run = m;
    a.tau = std::clamp(a.tau + jitters[m], 0, grid.slices - 1);
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace rtmwcs
