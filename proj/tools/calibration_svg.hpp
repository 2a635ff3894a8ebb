#pragma once

#include <string>
#include <vector>

#include "songsieve/calibrate.hpp"

namespace songsieve::cli {

/// Static SVG of the fitted correctness curve: scatter of samples, the
/// logistic curve, the bootstrap band, and the threshold crossing lines for
/// each probability target.
void write_calibration_svg(const std::string& path, const std::vector<CalibrationSample>& samples,
                           const LogisticModel& model, const BootstrapBand& band,
                           const std::vector<double>& p_targets);

}  // namespace songsieve::cli
