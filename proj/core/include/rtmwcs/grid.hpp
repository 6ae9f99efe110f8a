#pragma once

namespace rtmwcs {

/// Sampling grid shared by every stage: a record of `periods` chip periods,
/// each `slices` samples long at the Nyquist rate. `slices` is both the
/// number of chips per modulation period and the number of equal-width
/// spectral slices the Nyquist band splits into, and must be odd.
struct GridConfig {
  double nyquist_rate_hz;
  int slices;   // L
  int periods;  // record length / L

  GridConfig(double nyquist_rate_hz, int slices, int periods);

  int half_slices() const { return (slices - 1) / 2; }              // L0, slices = 2*L0+1
  double tick_s() const { return 1.0 / nyquist_rate_hz; }           // Nyquist sample period
  double sub_rate_hz() const { return nyquist_rate_hz / slices; }   // ADC rate = slice width
  double sub_period_s() const { return 1.0 / sub_rate_hz(); }       // ADC clock period
  int record_length() const { return slices * periods; }
  int bins_per_slice() const { return periods; }
  double bin_hz() const { return nyquist_rate_hz / record_length(); }
  double record_duration_s() const { return record_length() * tick_s(); }

  bool operator==(const GridConfig&) const = default;
};

}  // namespace rtmwcs
