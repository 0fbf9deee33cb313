#pragma once

#include <cstdint>
#include <vector>

namespace comfortcam {

/// 16-bit single-channel thermal capture. Immutable after construction in
/// pipeline use; raw counts are row-major.
struct ThermalFrame {
  int width = 0;
  int height = 0;
  std::vector<std::uint16_t> raw;   // width*height counts
  std::int64_t timestamp_ms = 0;
  bool radiometric = false;

  std::uint16_t at(int x, int y) const { return raw[static_cast<std::size_t>(y) * width + x]; }
};

/// 8-bit RGB capture, row-major, R,G,B interleaved.
struct VisualFrame {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;    // 3*width*height
  std::int64_t timestamp_ms = 0;
};

/// 8-bit single-channel intermediate (grayscale render / mask source).
struct GrayFrame {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> gray;   // width*height
  std::int64_t timestamp_ms = 0;

  std::uint8_t at(int x, int y) const { return gray[static_cast<std::size_t>(y) * width + x]; }
};

/// Default rig geometry.
inline constexpr int kThermalWidth = 160;
inline constexpr int kThermalHeight = 120;
inline constexpr int kVisualWidth = 1280;
inline constexpr int kVisualHeight = 960;

/// Throws std::invalid_argument when the pixel buffer does not match the
/// stated geometry or a dimension is < 1.
void validate(const ThermalFrame& f);
void validate(const VisualFrame& f);
void validate(const GrayFrame& f);

/// gray = round(0.299 R + 0.587 G + 0.114 B), clamped to [0,255].
GrayFrame to_grayscale(const VisualFrame& v);

/// Integer-factor area-average downscale. Both dimensions must be divisible
/// by the factor.
GrayFrame downscale_area(const GrayFrame& g, int factor);

}  // namespace comfortcam
