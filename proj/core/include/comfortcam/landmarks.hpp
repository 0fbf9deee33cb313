#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>

#include "comfortcam/homography.hpp"

namespace comfortcam {

inline constexpr int kLandmarkCount = 68;

/// 68 facial points in full-resolution visual coordinates, standard
/// annotation order: 0-16 jaw, 17-26 brows, 27-35 nose, 36-41 right eye,
/// 42-47 left eye, 48-67 mouth.
struct LandmarkSet {
  std::array<Point2, kLandmarkCount> points{};
};

/// Throws std::invalid_argument on non-finite or out-of-frame points.
void validate(const LandmarkSet& lm, int frame_width, int frame_height);

/// Per-frame landmark source. Absence is a value (frames the detector
/// missed), not an error.
class LandmarkProvider {
 public:
  using Lookup = std::function<std::optional<LandmarkSet>(std::int64_t)>;

  /// Sidecar-backed provider; the whole sidecar is parsed eagerly so format
  /// errors surface at construction.
  static LandmarkProvider from_sidecar(const std::string& path);

  /// Simulator- or test-backed provider.
  static LandmarkProvider from_function(Lookup fn);

  std::optional<LandmarkSet> landmarks(std::int64_t frame_id) const {
    return lookup_(frame_id);
  }

 private:
  explicit LandmarkProvider(Lookup fn) : lookup_(std::move(fn)) {}
  Lookup lookup_;
};

/// Sidecar format: one record per line, "frame_id x0 y0 ... x67 y67".
std::map<std::int64_t, LandmarkSet> load_landmark_sidecar(const std::string& path);
void save_landmark_sidecar(const std::map<std::int64_t, LandmarkSet>& records,
                           const std::string& path, const std::string& config);

}  // namespace comfortcam
