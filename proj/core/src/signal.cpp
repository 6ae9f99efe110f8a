#include "rtmwcs/signal.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "rtmwcs/rng.hpp"

namespace rtmwcs {

namespace {

double sinc(double u) {
  const double pu = std::numbers::pi * u;
  if (std::abs(pu) < 1e-8) return 1.0 - pu * pu / 6.0;
  return std::sin(pu) / pu;
}

void validate_band(const BandSpec& b, const GridConfig& grid) {
  const double f_p = grid.sub_rate_hz();
  if (!(b.bandwidth_hz > 0.0))
    throw std::invalid_argument("band: bandwidth must be positive");
  if (b.bandwidth_hz > f_p * (1.0 + 1e-12))
    throw std::invalid_argument("band: bandwidth " +
                                std::to_string(b.bandwidth_hz) +
                                " Hz exceeds slice width " +
                                std::to_string(f_p) + " Hz");
  const double lo = b.bandwidth_hz / 2.0;
  const double hi = (grid.nyquist_rate_hz - b.bandwidth_hz) / 2.0;
  if (!(b.carrier_hz >= lo && b.carrier_hz <= hi))
    throw std::invalid_argument("band: carrier " +
                                std::to_string(b.carrier_hz) +
                                " Hz outside legal range [" +
                                std::to_string(lo) + ", " + std::to_string(hi) +
                                "] Hz");
  if (!(b.time_offset_s >= 0.0 &&
        b.time_offset_s <= grid.record_duration_s()))
    throw std::invalid_argument("band: time offset outside the record");
}

}  // namespace

GridConfig::GridConfig(double nyquist_rate_hz, int slices, int periods)
    : nyquist_rate_hz(nyquist_rate_hz), slices(slices), periods(periods) {
  if (!(nyquist_rate_hz > 0.0))
    throw std::invalid_argument("grid: nyquist rate must be positive");
  if (slices < 1 || slices % 2 == 0)
    throw std::invalid_argument("grid: slice count must be odd and >= 1");
  if (periods < 1)
    throw std::invalid_argument("grid: period count must be >= 1");
}

MultibandSignal generate_multiband(const GridConfig& grid,
                                   const std::vector<BandSpec>& bands) {
  for (const auto& b : bands) validate_band(b, grid);

  const int n = grid.record_length();
  const double dt = grid.tick_s();
  std::vector<double> x(n, 0.0);
  for (const auto& b : bands) {
    const double amp = std::sqrt(b.energy * b.bandwidth_hz);
    const double w = 2.0 * std::numbers::pi * b.carrier_hz;
    for (int i = 0; i < n; ++i) {
      const double t = i * dt - b.time_offset_s;
      x[i] += amp * sinc(b.bandwidth_hz * t) * std::cos(w * t);
    }
  }

  double occupied = 0.0;
  for (const auto& b : bands) occupied += 2.0 * b.bandwidth_hz;
  const double q = occupied / (grid.nyquist_rate_hz / 2.0);
  return MultibandSignal{grid, std::move(x), bands, q};
}

MultibandSignal add_awgn(const MultibandSignal& sig, double target_snr_db,
                         std::uint64_t seed) {
  if (std::isnan(target_snr_db))
    throw std::invalid_argument("add_awgn: target SNR is NaN");
  if (std::isinf(target_snr_db)) {
    if (target_snr_db > 0) return sig;
    throw std::invalid_argument("add_awgn: -inf target SNR");
  }

  double power = 0.0;
  for (double v : sig.samples) power += v * v;
  if (power <= 0.0)
    throw std::invalid_argument("add_awgn: zero signal with finite target");
  power /= static_cast<double>(sig.samples.size());

  const double sigma =
      std::sqrt(power * std::pow(10.0, -target_snr_db / 10.0));
  Rng rng(seed);
  MultibandSignal out = sig;
  for (auto& v : out.samples) v += sigma * rng.gaussian();
  return out;
}

double snr_db(const std::vector<double>& reference,
              const std::vector<double>& estimate, double edge_margin) {
  if (reference.size() != estimate.size())
    throw std::invalid_argument("snr_db: length mismatch");
  if (!(edge_margin >= 0.0 && edge_margin <= 0.25))
    throw std::invalid_argument("snr_db: edge_margin outside [0, 0.25]");
  const auto n = static_cast<long long>(reference.size());
  const auto trim = static_cast<long long>(std::floor(edge_margin * n));
  if (n - 2 * trim <= 0) throw std::invalid_argument("snr_db: empty interior");

  double ref_pow = 0.0, err_pow = 0.0;
  for (long long i = trim; i < n - trim; ++i) {
    const double e = reference[i] - estimate[i];
    ref_pow += reference[i] * reference[i];
    err_pow += e * e;
  }
  if (ref_pow <= 0.0)
    throw std::invalid_argument("snr_db: zero reference on the interior");
  if (err_pow <= 0.0) return kSnrCapDb;
  return std::min(10.0 * std::log10(ref_pow / err_pow), kSnrCapDb);
}

int slice_of_frequency(double f_hz, const GridConfig& grid) {
  const double f_p = grid.sub_rate_hz();
  if (!(f_hz >= -grid.nyquist_rate_hz / 2.0 &&
        f_hz < grid.nyquist_rate_hz / 2.0))
    throw std::invalid_argument("slice_of_frequency: outside Nyquist band");
  const int off = static_cast<int>(std::lround(std::floor(f_hz / f_p + 0.5)));
  return grid.half_slices() + 1 + off;
}

std::set<int> true_support_slices(const MultibandSignal& sig) {
  const GridConfig& grid = sig.grid;
  const double f_p = grid.sub_rate_hz();
  const int l0 = grid.half_slices();
  std::set<int> out;
  for (int l = 1; l <= grid.slices; ++l) {
    const double center = (l - l0 - 1) * f_p;
    const double lo = center - f_p / 2.0;
    const double hi = center + f_p / 2.0;  // slice interval [lo, hi)
    for (const auto& b : sig.bands) {
      for (double sign : {1.0, -1.0}) {
        const double b_lo = sign * b.carrier_hz - b.bandwidth_hz / 2.0;
        const double b_hi = sign * b.carrier_hz + b.bandwidth_hz / 2.0;
        if (b_hi >= lo && b_lo < hi) {
          out.insert(l);
        }
      }
    }
  }
  return out;
}

}  // namespace rtmwcs
