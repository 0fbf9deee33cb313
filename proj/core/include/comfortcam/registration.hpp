#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "comfortcam/calib.hpp"
#include "comfortcam/frame.hpp"
#include "comfortcam/orb.hpp"

namespace comfortcam {

struct RegisterParams {
  int max_keypoints = kDefaultMaxKeypoints;
  double match_ratio = 0.8;
  int ransac_max_iter = 2000;
  double inlier_px = 2.0;     // thermal pixels
  int min_inliers = 15;       // below this the calibration prior is used
  std::uint64_t seed = 0;
};

/// Outcome of one cross-modal frame registration. The homography maps
/// full-resolution visual coordinates to thermal coordinates.
struct RegistrationResult {
  Homography homography;
  int n_matches = 0;
  int n_inliers = 0;
  bool used_fallback = false;
  double mean_reproj_px = 0.0;   // NaN when the prior was used
};

/// Fig-style per-frame pipeline: grayscale + area-downscale the visual frame
/// to thermal resolution, mask both with the between-class-variance rule,
/// detect/match oriented binary features, fit a RANSAC homography in
/// thermal-resolution coordinates and compose with the downscale matrix.
/// Falls back to the calibration prior when fewer than min_inliers survive.
/// Throws std::runtime_error("registration failed") only when there is no
/// prior to fall back to.
RegistrationResult register_pair(const VisualFrame& visual,
                                 const ThermalFrame& thermal,
                                 const std::optional<RigCalibration>& prior,
                                 const RegisterParams& params);

/// Same pipeline against a pre-rendered 8-bit thermal frame.
RegistrationResult register_pair(const VisualFrame& visual,
                                 const GrayFrame& thermal_8bit,
                                 const std::optional<RigCalibration>& prior,
                                 const RegisterParams& params);

/// Debug dump record:
/// "frame_id n_matches n_inliers used_fallback mean_reproj_px h00..h22".
std::string format_registration_record(std::int64_t frame_id,
                                       const RegistrationResult& r);

}  // namespace comfortcam
