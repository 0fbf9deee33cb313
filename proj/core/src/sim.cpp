#include "comfortcam/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "comfortcam/frame.hpp"
#include "comfortcam/rng.hpp"

namespace comfortcam::sim {

namespace {

constexpr double kRoomTauS = 120.0;
constexpr double kJitterTauS = 100.0;
constexpr double kJitterSigmaC = 0.16;
constexpr double kNeutralAirC = 22.0;
constexpr double kWearableIntervalS = 30.0;
constexpr double kWearableSigmaC = 0.1;
constexpr int kFfcFrames = 3;
constexpr double kMaxMarkOffsetC = 3.5;

// RNG stream ids.
enum Stream : std::uint64_t {
  kStreamRoom = 1,
  kStreamRh,
  kStreamRegionNoise,
  kStreamAgcBounds,
  kStreamWearable,
  kStreamMarks,
  kStreamVotes
};

}  // namespace

Protocol Protocol::exp1() {
  Protocol p;
  p.id = "exp1";
  p.duration_s = 3600.0;
  p.frame_interval_s = 5.0;
  p.vote_interval_s = 120.0;
  p.setpoint = {{0, 22}};
  for (int k = 1; k <= 5; ++k)
    p.setpoint.push_back({600.0 * k, 22.0 + k});
  return p;
}

Protocol Protocol::exp2() {
  Protocol p;
  p.id = "exp2";
  p.duration_s = 5400.0;
  p.frame_interval_s = 1.0;
  p.vote_interval_s = 180.0;
  p.setpoint = {{0, 21}};
  for (int k = 1; k <= 7; ++k)
    p.setpoint.push_back({360.0 * k, 21.0 + k});
  return p;
}

double Protocol::setpoint_at(double t_s) const {
  if (setpoint.empty()) throw std::invalid_argument("empty setpoint profile");
  double v = setpoint.front().second;
  for (const auto& [t, val] : setpoint) {
    if (t_s >= t) v = val;
  }
  return v;
}

int Protocol::frame_count() const {
  return static_cast<int>(std::floor(duration_s / frame_interval_s + 1e-9));
}

int Protocol::vote_count() const {
  return static_cast<int>(std::floor(duration_s / vote_interval_s + 1e-9));
}

SubjectModel SubjectModel::default_subject() {
  SubjectModel s;
  s.regions[Region::Nose] = {31.5, 0.50, 40.0};
  s.regions[Region::Forehead] = {34.5, 0.20, 95.0};
  s.regions[Region::RightCheek] = {33.2, 0.38, 60.0};
  s.regions[Region::LeftCheek] = {33.0, 0.36, 62.0};
  s.regions[Region::RightEye] = {34.2, 0.19, 85.0};
  s.regions[Region::LeftEye] = {34.0, 0.18, 88.0};
  return s;
}

void validate(const SubjectModel& s) {
  for (const Region r : kAllRegions)
    if (!s.regions.count(r))
      throw std::invalid_argument("subject model missing region " +
                                  region_name(r));
  auto gain = [&](Region r) { return s.regions.at(r).gain; };
  const double cheeks =
      0.5 * (gain(Region::RightCheek) + gain(Region::LeftCheek));
  const double eyes = 0.5 * (gain(Region::RightEye) + gain(Region::LeftEye));
  if (!(gain(Region::Nose) > cheeks && cheeks > gain(Region::Forehead) &&
        gain(Region::Forehead) >= eyes && eyes > 0.0))
    throw std::invalid_argument(
        "subject gains must satisfy nose > cheeks > forehead >= eyes > 0");
  for (const auto& [r, p] : s.regions)
    if (p.tau_s <= 0.0)
      throw std::invalid_argument("region time constants must be positive");
  if (!(s.comfort_lo_c < s.comfort_hi_c))
    throw std::invalid_argument("comfort band must be non-empty");
}

Homography default_planted_homography() {
  Homography h;
  const double theta = 0.004;
  const double s = 0.125;
  h.h = {s * std::cos(theta), -s * std::sin(theta), 0.8,
         s * std::sin(theta), s * std::cos(theta),  0.5,
         2e-6,                -1.5e-6,              1.0};
  return h;
}

const std::array<Point2, kLandmarkCount>& face_template() {
  static const std::array<Point2, kLandmarkCount> tmpl = [] {
    std::array<Point2, kLandmarkCount> t{};
    // Jaw 0-16: lower face arc, ears near eye level, chin at the bottom.
    for (int i = 0; i <= 16; ++i) {
      const double a = std::numbers::pi * i / 16.0;
      t[i] = {-0.95 * std::cos(a), -0.10 + 1.05 * std::sin(a)};
    }
    // Brows 17-26.
    const double arc[5] = {0.0, 0.035, 0.05, 0.035, 0.0};
    for (int k = 0; k < 5; ++k) {
      t[17 + k] = {-0.65 + 0.125 * k, -0.55 - arc[k]};
      t[22 + k] = {0.15 + 0.125 * k, -0.55 - arc[k]};
    }
    // Nose bridge 27-30 and base 31-35.
    const double bridge_y[4] = {-0.45, -0.28, -0.11, 0.05};
    for (int k = 0; k < 4; ++k) t[27 + k] = {0.0, bridge_y[k]};
    const double base_x[5] = {-0.16, -0.08, 0.0, 0.08, 0.16};
    const double base_y[5] = {0.17, 0.20, 0.21, 0.20, 0.17};
    for (int k = 0; k < 5; ++k) t[31 + k] = {base_x[k], base_y[k]};
    // Eyes 36-41 (subject right) and 42-47 (left).
    const Point2 right_eye[6] = {{-0.52, -0.35}, {-0.46, -0.40}, {-0.34, -0.40},
                                 {-0.28, -0.35}, {-0.34, -0.30}, {-0.46, -0.30}};
    for (int k = 0; k < 6; ++k) {
      t[36 + k] = right_eye[k];
      t[42 + k] = {-right_eye[(k + 3) % 6].x, right_eye[(k + 3) % 6].y};
    }
    // Mouth: outer 48-59, inner 60-67.
    for (int k = 0; k < 12; ++k) {
      const double a = std::numbers::pi + k * (2.0 * std::numbers::pi / 12.0);
      t[48 + k] = {0.28 * std::cos(a), 0.55 - 0.12 * std::sin(a)};
    }
    for (int k = 0; k < 8; ++k) {
      const double a = std::numbers::pi + k * (2.0 * std::numbers::pi / 8.0);
      t[60 + k] = {0.18 * std::cos(a), 0.55 - 0.05 * std::sin(a)};
    }
    return t;
  }();
  return tmpl;
}

std::vector<Region> SimSession::feature_regions() const {
  std::vector<Region> out;
  for (const Region r : kAllRegions)
    if (thermal_rois.regions.count(r)) out.push_back(r);
  return out;
}

namespace {

// Hysteresis ladder over the 5-point preference scale: boundaries between
// categories shift by +/- hysteresis depending on the current state.
int step_preference(int current, double air_c, const SubjectModel& s) {
  const double b[4] = {s.comfort_lo_c - s.comfort_step_c, s.comfort_lo_c,
                       s.comfort_hi_c, s.comfort_hi_c + s.comfort_step_c};
  int idx = current;
  while (idx < 4 && air_c > b[idx] + s.hysteresis_c) ++idx;
  while (idx > 0 && air_c < b[idx - 1] - s.hysteresis_c) --idx;
  return idx;
}

int raw_preference_index(double air_c, const SubjectModel& s) {
  const double b[4] = {s.comfort_lo_c - s.comfort_step_c, s.comfort_lo_c,
                       s.comfort_hi_c, s.comfort_hi_c + s.comfort_step_c};
  int idx = 0;
  while (idx < 4 && air_c > b[idx]) ++idx;
  return idx;
}

Sensation sensation_for(double air_c, const SubjectModel& s) {
  const double b[6] = {s.comfort_lo_c - 2.5, s.comfort_lo_c - 1.2,
                       s.comfort_lo_c,       s.comfort_hi_c,
                       s.comfort_hi_c + 1.2, s.comfort_hi_c + 2.5};
  int idx = 0;
  while (idx < 6 && air_c > b[idx]) ++idx;
  return static_cast<Sensation>(idx);
}

RawPreference preference_from_index(int idx) {
  // 0 = coldest air = wants Warmer.
  static const RawPreference map[5] = {
      RawPreference::Warmer, RawPreference::SlightlyWarmer,
      RawPreference::NoChange, RawPreference::SlightlyCooler,
      RawPreference::Colder};
  return map[idx];
}

void place_marks(SimSession& s, Rng& rng) {
  const auto& g = s.geometry;
  const double oval_rx = g.oval_scale * g.face_rx;
  const double oval_ry = g.oval_scale * g.face_ry;
  const double margin = 16.0;

  auto inside_oval = [&](double x, double y) {
    const double dx = (x - g.face_cx) / oval_rx;
    const double dy = (y - g.face_cy) / oval_ry;
    return dx * dx + dy * dy <= 1.0;
  };
  auto hits_roi = [&](double x, double y, double half) {
    for (const auto& [region, r] : s.visual_rois.regions) {
      if (x + half + margin < r.x0 || x - half - margin > r.x1 ||
          y + half + margin < r.y0 || y - half - margin > r.y1)
        continue;
      return true;
    }
    return false;
  };

  const int target = 80;
  const int max_attempts = 6000;
  for (int attempt = 0; attempt < max_attempts &&
                        static_cast<int>(s.marks.size()) < target;
       ++attempt) {
    FiducialMark m;
    m.size = rng.uniform(32.0, 56.0) / g.distance_m;
    m.x = g.face_cx + rng.uniform(-oval_rx, oval_rx);
    m.y = g.face_cy + rng.uniform(-oval_ry, oval_ry);
    const double half = 0.5 * m.size;
    // The whole square must sit on the face oval, clear of every region.
    if (!inside_oval(m.x - half, m.y - half) ||
        !inside_oval(m.x + half, m.y - half) ||
        !inside_oval(m.x - half, m.y + half) ||
        !inside_oval(m.x + half, m.y + half))
      continue;
    if (hits_roi(m.x, m.y, half)) continue;
    bool overlaps = false;
    for (const auto& other : s.marks) {
      const double min_gap = 0.5 * (m.size + other.size) + 8.0 / g.distance_m;
      if (std::abs(m.x - other.x) < min_gap &&
          std::abs(m.y - other.y) < min_gap) {
        overlaps = true;
        break;
      }
    }
    if (overlaps) continue;
    m.gray = 170.0 + rng.uniform(0.0, 85.0);
    m.temp_offset_c = 1.5 + (m.gray - 170.0) * (2.0 / 85.0);
    s.marks.push_back(m);
  }
}

}  // namespace

SimSession simulate_session(const Protocol& protocol,
                            const SubjectModel& subject,
                            const CameraModel& camera, std::uint64_t seed,
                            double distance_m) {
  validate(subject);
  if (distance_m != 1.0 && distance_m != 3.0)
    throw std::invalid_argument("camera distance must be 1 or 3 m");
  if (protocol.frame_count() < 1)
    throw std::invalid_argument("protocol produces no frames");

  SimSession s;
  s.protocol = protocol;
  s.subject = subject;
  s.camera = camera;
  s.seed = seed;
  s.geometry.distance_m = distance_m;
  s.geometry.planted = default_planted_homography();
  s.geometry.face_rx = 210.0 / distance_m;
  s.geometry.face_ry = 280.0 / distance_m;

  const std::uint64_t master = derive_seed(seed, subject.seed);
  Rng rng_room(derive_seed(master, kStreamRoom));
  Rng rng_rh(derive_seed(master, kStreamRh));
  Rng rng_noise(derive_seed(master, kStreamRegionNoise));
  Rng rng_agc(derive_seed(master, kStreamAgcBounds));
  Rng rng_wear(derive_seed(master, kStreamWearable));
  Rng rng_marks(derive_seed(master, kStreamMarks));

  // Static scene: landmarks, regions, marks.
  const auto& tmpl = face_template();
  for (int i = 0; i < kLandmarkCount; ++i) {
    s.landmarks.points[i] = {s.geometry.face_cx + tmpl[i].x * s.geometry.face_rx,
                             s.geometry.face_cy + tmpl[i].y * s.geometry.face_ry};
  }
  s.visual_rois = compute_rois(s.landmarks, kVisualWidth, kVisualHeight, true);
  s.thermal_rois = transfer_rois(s.visual_rois, s.geometry.planted,
                                 kThermalWidth, kThermalHeight);
  for (const auto& [region, rect] : s.thermal_rois.regions)
    s.roi_pixels[region] =
        pixel_bounds(rect, kThermalWidth, kThermalHeight).n_pixels();
  s.cold_rect = {40.0, 40.0, 240.0, 200.0};
  place_marks(s, rng_marks);

  // Frame clock.
  const int n = protocol.frame_count();
  const double dt = protocol.frame_interval_s;
  s.frame_times_ms.resize(n);
  for (int i = 0; i < n; ++i)
    s.frame_times_ms[i] =
        static_cast<std::int64_t>(std::llround((i + 1) * dt * 1000.0));

  // Room temperature: first-order lag on the setpoint plus AR(1) jitter.
  const double phi = std::exp(-dt / kJitterTauS);
  const double innov = kJitterSigmaC * std::sqrt(1.0 - phi * phi);
  double lag = protocol.setpoint_at(0.0);
  double jitter = rng_room.normal(0.0, kJitterSigmaC);
  s.room_c.resize(n);
  s.rh_pct.resize(n);
  for (int i = 0; i < n; ++i) {
    const double t = (i + 1) * dt;
    lag += (dt / kRoomTauS) * (protocol.setpoint_at(t) - lag);
    jitter = phi * jitter + rng_room.normal(0.0, innov);
    s.room_c[i] = lag + jitter;
    s.rh_pct[i] = 45.0 + rng_rh.normal(0.0, 1.0);
  }

  // Per-region skin dynamics (explicit Euler on the frame clock), starting
  // at equilibrium for the initial room temperature.
  s.ffc_offset_c.assign(n, 0.0);
  if (camera.ffc_step_c != 0.0 && camera.ffc_period_s > 0.0) {
    for (int i = 0; i < n; ++i) {
      const double t = (i + 1) * dt;
      const double since =
          t - std::floor(t / camera.ffc_period_s) * camera.ffc_period_s;
      const bool in_window = since < kFfcFrames * dt - 1e-9;
      if (in_window && t >= camera.ffc_period_s) s.ffc_offset_c[i] = camera.ffc_step_c;
    }
  }

  for (const Region r : kAllRegions) {
    s.truth_c[r].resize(n);
    s.camera_clean_c[r].resize(n);
  }
  std::map<Region, double> temp;
  for (const Region r : kAllRegions) {
    const auto& p = subject.regions.at(r);
    temp[r] = p.baseline_c + p.gain * (s.room_c[0] - kNeutralAirC);
  }
  for (int i = 0; i < n; ++i) {
    for (const Region r : kAllRegions) {
      const auto& p = subject.regions.at(r);
      const double target = p.baseline_c + p.gain * (s.room_c[i] - kNeutralAirC);
      temp[r] += (dt / p.tau_s) * (target - temp[r]);
      s.truth_c[r][i] = temp[r];
      s.camera_clean_c[r][i] = temp[r] + camera.bias_c;
    }
  }

  // Camera series + modelled per-frame AGC intensities for the regions that
  // survive the thermal geometry.
  const auto regions = s.feature_regions();
  for (const Region r : regions) {
    s.camera_c[r].resize(n);
    s.intensity[r].resize(n);
  }
  for (int i = 0; i < n; ++i) {
    double field_max = s.face_base_c + kMaxMarkOffsetC;
    for (const Region r : kAllRegions)
      field_max = std::max(field_max, s.truth_c[r][i]);
    // The AGC window rides the pixel-noise extremes of the rendered frame.
    const double lo_wobble = 0.75 * camera.noise_sigma_c +
                             0.35 * camera.noise_sigma_c * rng_agc.normal();
    const double hi_wobble = 0.75 * camera.noise_sigma_c +
                             0.35 * camera.noise_sigma_c * rng_agc.normal();
    const double agc_min = s.cold_temp_c - lo_wobble;
    const double agc_max = field_max + hi_wobble;
    for (const Region r : kAllRegions) {
      const double z = rng_noise.normal();
      if (!s.camera_c.count(r)) continue;
      const double sigma_eff =
          camera.noise_sigma_c /
          std::sqrt(static_cast<double>(std::max(1, s.roi_pixels.at(r))));
      const double noisy = s.truth_c[r][i] + sigma_eff * z;
      s.camera_c[r][i] = noisy + camera.bias_c + s.ffc_offset_c[i];
      // Frame-wide offsets (bias, FFC) cancel in the per-frame AGC.
      double v = 255.0 * (noisy - agc_min) / (agc_max - agc_min);
      v = std::floor(v + 0.5);
      s.intensity[r][i] =
          static_cast<int>(std::min(255.0, std::max(0.0, v)));
    }
  }

  // Votes on the vote clock with hysteresis against the comfort band.
  const int n_votes = protocol.vote_count();
  int pref_idx = -1;
  for (int k = 1; k <= n_votes; ++k) {
    const double t = k * protocol.vote_interval_s;
    int idx = static_cast<int>(std::floor(t / dt + 1e-9)) - 1;
    idx = std::max(0, std::min(n - 1, idx));
    const double air = s.room_c[idx];
    pref_idx = pref_idx < 0 ? raw_preference_index(air, subject)
                            : step_preference(pref_idx, air, subject);
    VoteRecord v;
    v.timestamp_ms = static_cast<std::int64_t>(std::llround(t * 1000.0));
    v.sensation = sensation_for(air, subject);
    v.preference = preference_from_index(pref_idx);
    s.votes.push_back(v);
  }

  // Wearable reference on the forehead.
  const int n_wear =
      static_cast<int>(std::floor(protocol.duration_s / kWearableIntervalS));
  for (int k = 1; k <= n_wear; ++k) {
    const double t = k * kWearableIntervalS;
    int idx = static_cast<int>(std::floor(t / dt + 1e-9)) - 1;
    idx = std::max(0, std::min(n - 1, idx));
    s.wearable_times_ms.push_back(
        static_cast<std::int64_t>(std::llround(t * 1000.0)));
    s.wearable_c.push_back(s.truth_c.at(Region::Forehead)[idx] +
                           rng_wear.normal(0.0, kWearableSigmaC));
  }

  return s;
}

}  // namespace comfortcam::sim
