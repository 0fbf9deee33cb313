#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "comfortcam/frame.hpp"

namespace comfortcam {

/// Per-pixel foreground mask, dimensions match the source frame.
struct MaskFrame {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;   // 0/1

  bool at(int x, int y) const {
    return bits[static_cast<std::size_t>(y) * width + x] != 0;
  }
};

/// Threshold maximizing between-class variance over the 256-bin histogram
/// (exhaustive search; lowest maximizer wins). A constant image yields 0.
int otsu_threshold(const GrayFrame& g);

/// Foreground = pixels >= otsu threshold. Constant image -> all foreground.
MaskFrame make_mask(const GrayFrame& g);

struct Keypoint {
  double x = 0.0;
  double y = 0.0;
  double response = 0.0;   // Harris corner score
  double angle = 0.0;      // orientation, radians in [0, 2pi)
};

/// 256-bit binary descriptor.
struct Descriptor {
  std::array<std::uint64_t, 4> bits{};

  bool operator==(const Descriptor&) const = default;
};

int hamming_distance(const Descriptor& a, const Descriptor& b);

inline constexpr int kOrientationBins = 30;
inline constexpr int kPatchBorder = 16;   // descriptor patch margin
inline constexpr int kFastThreshold = 20;
inline constexpr int kDefaultMaxKeypoints = 500;

/// Orientation quantized to one of the 30 steering bins.
int orientation_bin(double angle);

/// Descriptor for a given keypoint with a forced steering bin (exposed for
/// the steering-consistency tests; detect_features picks the bin from the
/// intensity-centroid angle). The 5x5 box-smoothed image is sampled at the
/// bin-rotated test pairs.
Descriptor describe_at(const GrayFrame& smoothed, int cx, int cy, int bin);

/// 5x5 box smoothing with clamped borders.
GrayFrame box_smooth5(const GrayFrame& g);

/// FAST-9 segment-test corners (threshold 20) inside the mask and at least
/// kPatchBorder away from the frame edge, 3x3 non-max suppressed and ranked
/// by Harris response; the top max_kp survive. Orientation comes from the
/// intensity centroid of a radius-15 circular patch.
std::vector<std::pair<Keypoint, Descriptor>> detect_features(
    const GrayFrame& g, const MaskFrame& mask, int max_kp = kDefaultMaxKeypoints);

struct Match {
  int a = 0;
  int b = 0;
  int distance = 0;
};

/// Lowe ratio test (d1 < ratio * d2, ties to the lowest index) plus mutual
/// nearest-neighbour cross-check.
std::vector<Match> match_descriptors(const std::vector<Descriptor>& a,
                                     const std::vector<Descriptor>& b,
                                     double ratio = 0.8);

}  // namespace comfortcam
