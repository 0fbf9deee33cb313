#pragma once

#include <cstdint>
#include <string>

#include "comfortcam/frame.hpp"
#include "comfortcam/roi.hpp"

namespace comfortcam {

/// Plausible band for skin/air readings.
inline constexpr double kMinPlausibleC = -40.0;
inline constexpr double kMaxPlausibleC = 80.0;

/// Linear centikelvin convention: celsius = raw/100 - 273.15. Throws
/// std::runtime_error("implausible radiometric sample") outside
/// [-40, +80] degC.
double raw_to_celsius(std::uint16_t raw);

/// Inverse of raw_to_celsius with round-to-nearest; used when rendering
/// synthetic radiometric frames. Throws outside the plausible band.
std::uint16_t celsius_to_raw(double celsius);

/// Per-frame min-max normalization to 8 bits:
/// g = round(255*(raw-min)/(max-min)); a constant frame maps to all zeros.
GrayFrame agc_to_8bit(const ThermalFrame& t);

enum class RoiKind { SkinTemperatureC, PixelIntensity };
enum class RoiStat { Mean, Max, P90 };

const std::string& roi_kind_name(RoiKind k);
RoiKind roi_kind_from_name(const std::string& name);
const std::string& roi_stat_name(RoiStat s);
RoiStat roi_stat_from_name(const std::string& name);

/// One scalar reduced from a thermal-space region.
struct RoiReading {
  std::int64_t timestamp_ms = 0;
  Region region = Region::Nose;
  RoiKind kind = RoiKind::SkinTemperatureC;
  double value = 0.0;      // degC or mean 8-bit intensity
  int n_pixels = 0;
};

/// Reduces the region's pixels to one number: converted temperatures for
/// SkinTemperatureC (frame must be radiometric), 8-bit AGC intensities for
/// PixelIntensity. p90 is the ceil(0.9 n)-th order statistic. Throws
/// std::runtime_error("ROI too small") below 4 pixels and
/// std::invalid_argument on a kind/flag mismatch.
RoiReading roi_statistic(const ThermalFrame& frame, Region region,
                         const Rect& roi_thermal, RoiKind kind, RoiStat stat);

/// Same reduction against a pre-computed 8-bit render (PixelIntensity only).
RoiReading roi_statistic(const GrayFrame& render8, Region region,
                         const Rect& roi_thermal, RoiStat stat);

}  // namespace comfortcam
