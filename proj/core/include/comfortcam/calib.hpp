#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "comfortcam/homography.hpp"

namespace comfortcam {

/// One visual-pixel -> thermal-pixel match (checkerboard corner or feature
/// match).
struct Correspondence {
  Point2 src;   // visual coordinates
  Point2 dst;   // thermal coordinates
};

/// Normalized direct linear transform. Hartley normalization on both point
/// sets, least-squares null vector of the 2n x 9 design matrix, denormalized
/// and scaled so h33 == 1.
///
/// Throws std::invalid_argument for fewer than 4 points and
/// std::runtime_error("degenerate configuration") when the design matrix has
/// a rank-deficient null space (e.g. 3 collinear points in a minimal set).
Homography estimate_homography_dlt(const std::vector<Correspondence>& corrs);

struct RansacParams {
  int max_iter = 2000;
  double inlier_px = 2.0;        // symmetric reprojection threshold, thermal px
  std::uint64_t seed = 0;        // mandatory: callers always pass one
  int min_inliers = 4;
};

struct RansacResult {
  Homography homography;
  std::vector<bool> inlier_mask;   // against the refit model
  int n_inliers = 0;
  double mean_error_px = 0.0;      // mean symmetric error over inliers
};

/// Classic RANSAC over minimal 4-point DLT models, scored by symmetric
/// reprojection error; the best consensus set is refit with the full DLT
/// (re-selecting inliers until stable, at most 3 rounds). Deterministic for
/// a fixed seed. Throws std::runtime_error("registration failed") when no
/// model reaches min_inliers.
RansacResult ransac_homography(const std::vector<Correspondence>& corrs,
                               const RansacParams& params);

/// Symmetric transfer error of one correspondence under h: the mean of the
/// forward and backward reprojection distances.
double symmetric_error_px(const Homography& h, const Homography& h_inv,
                          const Correspondence& c);

/// Registration prior estimated from pooled checkerboard correspondences.
struct RigCalibration {
  Homography prior;              // visual (full resolution) -> thermal
  double rms_residual_px = 0.0;  // over inliers
  int frames_used = 0;
  double inlier_fraction = 0.0;
};

/// Pools every frame's correspondences, runs RANSAC + DLT refit, reports the
/// inlier RMS residual. Each frame set needs >= 4 points.
RigCalibration calibrate_rig(
    const std::vector<std::vector<Correspondence>>& frame_sets,
    const RansacParams& params);

/// Correspondence file: text lines "sx sy dx dy", '#' comments allowed.
std::vector<Correspondence> load_correspondences(const std::string& path);
void save_correspondences(const std::vector<Correspondence>& corrs,
                          const std::string& path, const std::string& config);

/// Rig calibration file: provenance header, "homography <9 numbers>",
/// "rms_residual_px <v>", "frames_used <n>", "inlier_fraction <v>".
RigCalibration load_rig(const std::string& path);
void save_rig(const RigCalibration& rig, const std::string& path,
              const std::string& config);

}  // namespace comfortcam
