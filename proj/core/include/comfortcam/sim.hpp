#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "comfortcam/calib.hpp"
#include "comfortcam/landmarks.hpp"
#include "comfortcam/roi.hpp"
#include "comfortcam/votes.hpp"

namespace comfortcam::sim {

/// Chamber protocol: frame/vote clocks plus a piecewise-constant setpoint
/// profile. Frames are captured at t = i*frame_interval (i = 1..N), votes at
/// t = k*vote_interval.
struct Protocol {
  std::string id = "custom";
  double duration_s = 0.0;
  double frame_interval_s = 1.0;
  double vote_interval_s = 60.0;
  std::vector<std::pair<double, double>> setpoint;   // (t_s, degC), t ascending

  /// 3600 s, 5 s frames, 120 s votes; 22 degC start, then +1 degC every
  /// 600 s up to 27 (heating transient).
  static Protocol exp1();
  /// 5400 s, 1 s frames, 180 s votes; 21 -> 28 degC staircase, +1 degC every
  /// 360 s.
  static Protocol exp2();

  double setpoint_at(double t_s) const;
  int frame_count() const;
  int vote_count() const;
};

struct RegionParams {
  double baseline_c = 33.0;   // skin temperature at 22 degC air
  double gain = 0.3;          // degC skin per degC air
  double tau_s = 60.0;        // first-order time constant
};

/// Per-region skin dynamics and voting behaviour. Gains must satisfy
/// g_nose > g_cheeks > g_forehead >= g_eyes > 0 (validated).
struct SubjectModel {
  std::map<Region, RegionParams> regions;
  double comfort_lo_c = 22.6;
  double comfort_hi_c = 25.4;
  double comfort_step_c = 1.2;    // width of the "slightly" preference bands
  double hysteresis_c = 0.25;
  std::uint64_t seed = 1;

  static SubjectModel default_subject();
};

void validate(const SubjectModel& s);

struct CameraModel {
  double bias_c = 0.3;
  double noise_sigma_c = 0.2;
  double ffc_period_s = 180.0;
  double ffc_step_c = 1.5;        // additive offset, 3 frames per event
  bool radiometric = true;
};

/// Static scene geometry: face scale shrinks with camera distance.
struct SceneGeometry {
  double distance_m = 1.0;        // 1 or 3
  Homography planted;             // visual (full res) -> thermal
  double face_cx = 640.0, face_cy = 450.0;
  double face_rx = 210.0, face_ry = 280.0;   // landmark unit scale (at d=1)
  double oval_scale = 1.15;       // scene oval vs landmark unit box
};

/// Rig ground truth used when a caller does not supply one: thermal/visual
/// scale 1/8 with a small rotation, offset and perspective.
Homography default_planted_homography();

struct FiducialMark {
  double x = 0, y = 0;            // centre, visual coordinates
  double size = 40;               // square side, visual px
  double gray = 200;              // visual intensity
  double temp_offset_c = 2.0;     // above the face base temperature
};

/// A fully simulated session: every signal the pipeline consumes plus the
/// planted ground truth to judge it against.
struct SimSession {
  Protocol protocol;
  SubjectModel subject;
  CameraModel camera;
  std::uint64_t seed = 0;
  SceneGeometry geometry;

  std::vector<std::int64_t> frame_times_ms;
  std::vector<double> room_c;                          // per frame, with jitter
  std::vector<double> rh_pct;
  std::map<Region, std::vector<double>> truth_c;       // physiological truth
  std::map<Region, std::vector<double>> camera_clean_c;  // truth + bias
  std::map<Region, std::vector<double>> camera_c;      // + noise + FFC
  std::map<Region, std::vector<int>> intensity;        // modelled per-frame AGC
  std::vector<double> ffc_offset_c;                    // per frame
  std::vector<VoteRecord> votes;
  std::vector<std::int64_t> wearable_times_ms;
  std::vector<double> wearable_c;                      // reference sensor

  LandmarkSet landmarks;                               // static face
  RoiSet visual_rois;                                  // all six regions
  RoiSet thermal_rois;                                 // survivors at this geometry
  std::map<Region, int> roi_pixels;                    // thermal pixel counts
  std::vector<FiducialMark> marks;
  Rect cold_rect;                                      // static cold reference
  double cold_temp_c = 18.0;
  double face_base_c = 32.0;
  double bg_gray = 50.0, face_gray = 128.0, cold_gray = 25.0;

  /// Regions emitted into the camera feature table (thermal survivors, in
  /// canonical order).
  std::vector<Region> feature_regions() const;
};

/// Runs the chamber model: lagged room temperature with AR(1) jitter,
/// first-order per-region skin dynamics, hysteresis voting on the comfort
/// band, camera bias/noise/FFC, modelled AGC intensities, wearable log and
/// the static scene (landmarks, regions, fiducial marks). Deterministic for
/// fixed (seed, subject.seed).
SimSession simulate_session(const Protocol& protocol,
                            const SubjectModel& subject,
                            const CameraModel& camera, std::uint64_t seed,
                            double distance_m);

/// 68-point frontal template in unit coordinates (x right, y down, roughly
/// [-1, 1]); exposed for geometry tests.
const std::array<Point2, kLandmarkCount>& face_template();

}  // namespace comfortcam::sim
