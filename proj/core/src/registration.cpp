#include "comfortcam/registration.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "comfortcam/io_util.hpp"
#include "comfortcam/thermal.hpp"

namespace comfortcam {

namespace {

RegistrationResult fallback_or_throw(const std::optional<RigCalibration>& prior,
                                     int n_matches, int n_inliers) {
  if (!prior) throw std::runtime_error("registration failed");
  RegistrationResult r;
  r.homography = prior->prior;
  r.n_matches = n_matches;
  r.n_inliers = n_inliers;
  r.used_fallback = true;
  r.mean_reproj_px = std::numeric_limits<double>::quiet_NaN();
  return r;
}

}  // namespace

RegistrationResult register_pair(const VisualFrame& visual,
                                 const GrayFrame& thermal_8bit,
                                 const std::optional<RigCalibration>& prior,
                                 const RegisterParams& params) {
  validate(visual);
  validate(thermal_8bit);
  if (visual.width % thermal_8bit.width != 0 ||
      visual.height % thermal_8bit.height != 0 ||
      visual.width / thermal_8bit.width != visual.height / thermal_8bit.height)
    throw std::invalid_argument(
        "visual frame must be an integer multiple of the thermal geometry");
  const int factor = visual.width / thermal_8bit.width;

  const GrayFrame vis_ds = downscale_area(to_grayscale(visual), factor);
  const MaskFrame mask_v = make_mask(vis_ds);
  const MaskFrame mask_t = make_mask(thermal_8bit);

  const auto feats_v = detect_features(vis_ds, mask_v, params.max_keypoints);
  const auto feats_t = detect_features(thermal_8bit, mask_t, params.max_keypoints);

  std::vector<Descriptor> desc_v, desc_t;
  desc_v.reserve(feats_v.size());
  desc_t.reserve(feats_t.size());
  for (const auto& [kp, d] : feats_v) desc_v.push_back(d);
  for (const auto& [kp, d] : feats_t) desc_t.push_back(d);

  const auto matches = match_descriptors(desc_v, desc_t, params.match_ratio);
  const int n_matches = static_cast<int>(matches.size());
  if (n_matches < 4) return fallback_or_throw(prior, n_matches, 0);

  // A downscaled sample represents the centre of its f x f source block
  // (full-res coordinate f*x + (f-1)/2), so express visual keypoints in
  // full-resolution/f units before fitting; the diag(1/f) composition below
  // is then exact rather than biased by half a block.
  const double off = (factor - 1) / (2.0 * factor);
  std::vector<Correspondence> corrs;
  corrs.reserve(matches.size());
  for (const auto& m : matches) {
    corrs.push_back({{feats_v[m.a].first.x + off, feats_v[m.a].first.y + off},
                     {feats_t[m.b].first.x, feats_t[m.b].first.y}});
  }

  RansacParams rp;
  rp.max_iter = params.ransac_max_iter;
  rp.inlier_px = params.inlier_px;
  rp.seed = params.seed;
  rp.min_inliers = 4;
  RansacResult rr;
  try {
    rr = ransac_homography(corrs, rp);
  } catch (const std::runtime_error&) {
    return fallback_or_throw(prior, n_matches, 0);
  }
  if (rr.n_inliers < params.min_inliers)
    return fallback_or_throw(prior, n_matches, rr.n_inliers);

  // Compose with the downscale map so the result takes full-resolution
  // visual coordinates.
  Homography ds;
  ds.h = {1.0 / factor, 0, 0, 0, 1.0 / factor, 0, 0, 0, 1};
  RegistrationResult r;
  r.homography = rr.homography.composed(ds).normalized();
  r.n_matches = n_matches;
  r.n_inliers = rr.n_inliers;
  r.used_fallback = false;
  r.mean_reproj_px = rr.mean_error_px;
  return r;
}

RegistrationResult register_pair(const VisualFrame& visual,
                                 const ThermalFrame& thermal,
                                 const std::optional<RigCalibration>& prior,
                                 const RegisterParams& params) {
  return register_pair(visual, agc_to_8bit(thermal), prior, params);
}

std::string format_registration_record(std::int64_t frame_id,
                                       const RegistrationResult& r) {
  std::string s = std::to_string(frame_id);
  s += " " + std::to_string(r.n_matches);
  s += " " + std::to_string(r.n_inliers);
  s += r.used_fallback ? " 1" : " 0";
  s += " " + fmt_double(r.mean_reproj_px);
  for (int i = 0; i < 9; ++i) s += " " + fmt_double(r.homography.h[i]);
  return s;
}

}  // namespace comfortcam
