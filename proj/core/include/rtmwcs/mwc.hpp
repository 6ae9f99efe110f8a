#pragma once

#include <vector>

#include "rtmwcs/acquisition.hpp"

namespace rtmwcs {

/// One multi-channel converter shot: M synchronous channels, all with zero
/// trigger-to-clock offset. Identical to the single-channel scheme with
/// every offset forced to zero, which is exactly the architectural
/// difference between the two systems.
struct MwcRun {
  std::vector<Acquisition> acqs;
};

MwcRun acquire_mwc(const MultibandSignal& sig, const ChipSet& chips);

/// Channel-count rule of thumb for stable support estimation,
/// ceil(8*K*ln(slices/(4*K))). slices is real-valued so non-integer ratios
/// are expressible; slices <= 4*K is rejected.
int recommended_channels(int band_pairs, double slices);

}  // namespace rtmwcs
