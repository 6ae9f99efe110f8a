#include "rtmwcs/mwc.hpp"

#include <cmath>
#include <stdexcept>

namespace rtmwcs {

MwcRun acquire_mwc(const MultibandSignal& sig, const ChipSet& chips) {
  const int m_count = chips.count();
  if (m_count < 1) throw std::invalid_argument("acquire_mwc: no chip rows");
  MwcRun run;
  run.acqs.reserve(m_count);
  for (int m = 0; m < m_count; ++m) {
    Acquisition a = acquire(sig, chips.rows.row(m), 0.0);
    a.run = m;
    run.acqs.push_back(std::move(a));
  }
  return run;
}

int recommended_channels(int band_pairs, double slices) {
  if (band_pairs < 1)
    throw std::invalid_argument("recommended_channels: band_pairs < 1");
  const double ratio = slices / (4.0 * band_pairs);
  if (!(ratio > 1.0))
    throw std::invalid_argument(
        "recommended_channels: slices must exceed 4*band_pairs");
  const double v = 8.0 * band_pairs * std::log(ratio);
  return static_cast<int>(std::ceil(v - 1e-9));
}

}  // namespace rtmwcs
