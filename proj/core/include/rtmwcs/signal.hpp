#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "rtmwcs/grid.hpp"

namespace rtmwcs {

/// One band pair: an energy-weighted sinc pulse on carrier +-carrier_hz.
/// bandwidth_hz is the full two-sided baseband width of the sinc pulse,
/// i.e. the occupied width of each of the two spectral bands.
struct BandSpec {
  double energy;         // dimensionless weight, sqrt(energy*bandwidth) amplitude
  double bandwidth_hz;   // must not exceed the slice width
  double time_offset_s;  // pulse center within the record
  double carrier_hz;     // in [B/2, (f_nyq - B)/2] so the band fits below f_nyq/2
};

struct MultibandSignal {
  GridConfig grid;
  std::vector<double> samples;  // x(n*T), length grid.record_length()
  std::vector<BandSpec> bands;  // ground truth; empty when unknown
  double occupation_q = 0.0;    // occupied bandwidth over the spectral span
};

/// Sampled sum of sinc-on-carrier pulses, x(t) = sum_i sqrt(E_i*B_i) *
/// sinc(B_i*(t-t_i)) * cos(2*pi*f_i*(t-t_i)), sinc(u) = sin(pi*u)/(pi*u),
/// evaluated on the Nyquist grid. Deterministic in its inputs.
MultibandSignal generate_multiband(const GridConfig& grid,
                                   const std::vector<BandSpec>& bands);

/// Adds white Gaussian noise scaled so the expected sample SNR equals
/// target_snr_db. +inf returns the signal unchanged; bands carry through.
MultibandSignal add_awgn(const MultibandSignal& sig, double target_snr_db,
                         std::uint64_t seed);

inline constexpr double kSnrCapDb = 300.0;

/// 10*log10(||r||^2 / ||r-e||^2) over the interior samples, with
/// floor(edge_margin*N) samples trimmed from each end. Returns kSnrCapDb
/// when the estimate matches the reference exactly (or beats the cap).
double snr_db(const std::vector<double>& reference,
              const std::vector<double>& estimate, double edge_margin = 0.05);

/// Slice indices (1-based, {1..L}) whose frequency interval intersects any
/// band of the signal on either spectral sign. Slice l covers
/// [(l-L0-1)*f_p - f_p/2, (l-L0-1)*f_p + f_p/2); slice L0+1 is centered on DC.
std::set<int> true_support_slices(const MultibandSignal& sig);

/// Slice containing frequency f (1-based); f in [-f_nyq/2, f_nyq/2).
int slice_of_frequency(double f_hz, const GridConfig& grid);

}  // namespace rtmwcs
