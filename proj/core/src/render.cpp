#include "comfortcam/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "comfortcam/dataset.hpp"
#include "comfortcam/features_io.hpp"
#include "comfortcam/frame_io.hpp"
#include "comfortcam/io_util.hpp"
#include "comfortcam/rng.hpp"
#include "comfortcam/session.hpp"
#include "comfortcam/thermal.hpp"

namespace comfortcam::sim {

namespace {

bool in_rect(const Rect& r, double x, double y) {
  return x >= r.x0 && x < r.x1 && y >= r.y0 && y < r.y1;
}

bool in_oval(const SceneGeometry& g, double x, double y) {
  const double rx = g.oval_scale * g.face_rx;
  const double ry = g.oval_scale * g.face_ry;
  const double dx = (x - g.face_cx) / rx;
  const double dy = (y - g.face_cy) / ry;
  return dx * dx + dy * dy <= 1.0;
}

}  // namespace

VisualFrame render_visual(const SimSession& s, int frame_index) {
  VisualFrame f;
  f.width = kVisualWidth;
  f.height = kVisualHeight;
  f.timestamp_ms = s.frame_times_ms.at(frame_index);
  f.rgb.assign(3u * kVisualWidth * kVisualHeight, 0);

  auto fill = [&](int x0, int y0, int x1, int y1, double gray) {
    x0 = std::max(0, x0);
    y0 = std::max(0, y0);
    x1 = std::min(kVisualWidth, x1);
    y1 = std::min(kVisualHeight, y1);
    const auto v = static_cast<std::uint8_t>(
        std::min(255.0, std::max(0.0, std::floor(gray + 0.5))));
    for (int y = y0; y < y1; ++y) {
      std::uint8_t* row = f.rgb.data() + 3 * (static_cast<std::size_t>(y) * kVisualWidth + x0);
      for (int x = x0; x < x1; ++x) {
        *row++ = v;
        *row++ = v;
        *row++ = v;
      }
    }
  };

  fill(0, 0, kVisualWidth, kVisualHeight, s.bg_gray);
  fill(static_cast<int>(s.cold_rect.x0), static_cast<int>(s.cold_rect.y0),
       static_cast<int>(s.cold_rect.x1), static_cast<int>(s.cold_rect.y1),
       s.cold_gray);

  // Face oval, scanline fill.
  const auto& g = s.geometry;
  const double rx = g.oval_scale * g.face_rx;
  const double ry = g.oval_scale * g.face_ry;
  const int y0 = std::max(0, static_cast<int>(std::floor(g.face_cy - ry)));
  const int y1 = std::min(kVisualHeight, static_cast<int>(std::ceil(g.face_cy + ry)) + 1);
  const auto face_v = static_cast<std::uint8_t>(s.face_gray);
  for (int y = y0; y < y1; ++y) {
    const double dy = (y - g.face_cy) / ry;
    const double disc = 1.0 - dy * dy;
    if (disc <= 0.0) continue;
    const double half = rx * std::sqrt(disc);
    const int xa = std::max(0, static_cast<int>(std::ceil(g.face_cx - half)));
    const int xb = std::min(kVisualWidth - 1, static_cast<int>(std::floor(g.face_cx + half)));
    for (int x = xa; x <= xb; ++x) {
      std::uint8_t* p = f.rgb.data() + 3 * (static_cast<std::size_t>(y) * kVisualWidth + x);
      p[0] = p[1] = p[2] = face_v;
    }
  }

  for (const auto& m : s.marks) {
    const double half = 0.5 * m.size;
    fill(static_cast<int>(std::lround(m.x - half)),
         static_cast<int>(std::lround(m.y - half)),
         static_cast<int>(std::lround(m.x + half)),
         static_cast<int>(std::lround(m.y + half)), m.gray);
  }
  return f;
}

ThermalFrame render_thermal(const SimSession& s, int frame_index) {
  const auto& g = s.geometry;
  const Homography inv = g.planted.inverse();
  const double room = s.room_c.at(frame_index);

  // Scene temperature at a full-resolution visual coordinate.
  auto scene_temp = [&](double x, double y) {
    if (in_rect(s.cold_rect, x, y)) return s.cold_temp_c;
    if (in_oval(g, x, y)) {
      for (const auto& m : s.marks) {
        const double half = 0.5 * m.size;
        if (x >= m.x - half && x < m.x + half && y >= m.y - half &&
            y < m.y + half)
          return s.face_base_c + m.temp_offset_c;
      }
      return s.face_base_c;
    }
    return room;   // walls track the air temperature
  };

  std::vector<double> field(static_cast<std::size_t>(kThermalWidth) * kThermalHeight);
  for (int y = 0; y < kThermalHeight; ++y) {
    for (int x = 0; x < kThermalWidth; ++x) {
      double acc = 0.0;
      for (int sy = 0; sy < 3; ++sy) {
        for (int sx = 0; sx < 3; ++sx) {
          const double fx = x + (sx - 1) / 3.0;
          const double fy = y + (sy - 1) / 3.0;
          const Point2 v = inv.apply({fx, fy});
          acc += scene_temp(v.x, v.y);
        }
      }
      field[static_cast<std::size_t>(y) * kThermalWidth + x] = acc / 9.0;
    }
  }

  // Region patches overdrawn at their true temperatures: exactly the pixels
  // the extractor will read for these regions.
  for (const auto& [region, rect] : s.thermal_rois.regions) {
    const PixelRect px = pixel_bounds(rect, kThermalWidth, kThermalHeight);
    const double t = s.truth_c.at(region)[static_cast<std::size_t>(frame_index)];
    for (int y = px.y0; y < px.y1; ++y)
      for (int x = px.x0; x < px.x1; ++x)
        field[static_cast<std::size_t>(y) * kThermalWidth + x] = t;
  }

  // Camera effects: frame-wide bias + FFC offset, per-pixel noise.
  Rng rng(derive_seed(derive_seed(s.seed, s.subject.seed),
                      0x9e40000ull + static_cast<std::uint64_t>(frame_index)));
  const double offset = s.camera.bias_c + s.ffc_offset_c.at(frame_index);

  ThermalFrame out;
  out.width = kThermalWidth;
  out.height = kThermalHeight;
  out.timestamp_ms = s.frame_times_ms.at(frame_index);
  out.radiometric = s.camera.radiometric;
  out.raw.resize(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) {
    double t = field[i] + offset;
    if (s.camera.noise_sigma_c > 0.0) t += rng.normal(0.0, s.camera.noise_sigma_c);
    out.raw[i] = celsius_to_raw(std::min(kMaxPlausibleC, std::max(kMinPlausibleC, t)));
  }
  return out;
}

std::vector<std::vector<Correspondence>> checkerboard_correspondences(
    const SimSession& s, int n_views, double corner_noise_px,
    std::uint64_t seed) {
  std::vector<std::vector<Correspondence>> views;
  Rng rng(derive_seed(seed, 0xc0a6e55ull));
  for (int v = 0; v < n_views; ++v) {
    const double theta = rng.uniform(-0.3, 0.3);
    const double spacing = rng.uniform(70.0, 100.0);
    const double cx = rng.uniform(350.0, 930.0);
    const double cy = rng.uniform(300.0, 660.0);
    std::vector<Correspondence> corners;
    for (int gy = 0; gy < 6; ++gy) {
      for (int gx = 0; gx < 8; ++gx) {
        const double ux = (gx - 3.5) * spacing;
        const double uy = (gy - 2.5) * spacing;
        Point2 src{cx + ux * std::cos(theta) - uy * std::sin(theta),
                   cy + ux * std::sin(theta) + uy * std::cos(theta)};
        src.x = std::min(static_cast<double>(kVisualWidth - 1), std::max(0.0, src.x));
        src.y = std::min(static_cast<double>(kVisualHeight - 1), std::max(0.0, src.y));
        Point2 dst = s.geometry.planted.apply(src);
        if (corner_noise_px > 0.0) {
          dst.x += rng.normal(0.0, corner_noise_px);
          dst.y += rng.normal(0.0, corner_noise_px);
        }
        corners.push_back({src, dst});
      }
    }
    views.push_back(std::move(corners));
  }
  return views;
}

namespace {

std::string frame_name(int index, const char* ext) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%06d.%s", index + 1, ext);
  return buf;
}

FeatureTable camera_feature_table(const SimSession& s) {
  FeatureTable t;
  const auto regions = s.feature_regions();
  for (std::size_t i = 0; i < s.frame_times_ms.size(); ++i) {
    for (const Region r : regions) {
      if (s.camera.radiometric) {
        RoiReading reading;
        reading.timestamp_ms = s.frame_times_ms[i];
        reading.region = r;
        reading.kind = RoiKind::SkinTemperatureC;
        reading.value = s.camera_c.at(r)[i];
        reading.n_pixels = s.roi_pixels.at(r);
        t.readings.push_back(reading);
      }
      RoiReading reading;
      reading.timestamp_ms = s.frame_times_ms[i];
      reading.region = r;
      reading.kind = RoiKind::PixelIntensity;
      reading.value = static_cast<double>(s.intensity.at(r)[i]);
      reading.n_pixels = s.roi_pixels.at(r);
      t.readings.push_back(reading);
    }
  }
  return t;
}

FeatureTable truth_table(const SimSession& s,
                         const std::map<Region, std::vector<double>>& series) {
  FeatureTable t;
  for (std::size_t i = 0; i < s.frame_times_ms.size(); ++i) {
    for (const Region r : kAllRegions) {
      RoiReading reading;
      reading.timestamp_ms = s.frame_times_ms[i];
      reading.region = r;
      reading.kind = RoiKind::SkinTemperatureC;
      reading.value = series.at(r)[i];
      reading.n_pixels =
          s.roi_pixels.count(r) ? s.roi_pixels.at(r) : 0;
      t.readings.push_back(reading);
    }
  }
  return t;
}

}  // namespace

void write_session(const SimSession& s, const std::string& dir,
                   const WriteOptions& options) {
  make_dirs(dir);
  make_dirs(dir + "/thermal");
  make_dirs(dir + "/visual");
  make_dirs(dir + "/correspondences");
  make_dirs(dir + "/truth");
  const std::string& cfg = options.config;

  const int n = static_cast<int>(s.frame_times_ms.size());
  const int n_render = std::max(1, std::min(options.render_frames, n));

  SessionManifest m;
  m.session_id = s.protocol.id + "_seed" + std::to_string(s.seed);
  m.protocol_id = s.protocol.id;
  m.camera_distance_m = s.geometry.distance_m;
  m.landmark_sidecar = "landmarks.txt";
  m.votes_path = "votes.csv";
  m.room_temp_path = "room.csv";
  m.wearable_path = "wearable.csv";

  // The visual scene is static; render it once and restamp per frame.
  VisualFrame visual = render_visual(s, 0);
  for (int i = 0; i < n_render; ++i) {
    const ThermalFrame t = render_thermal(s, i);
    visual.timestamp_ms = s.frame_times_ms[i];
    const std::string trel = "thermal/" + frame_name(i, "pgm");
    const std::string vrel = "visual/" + frame_name(i, "ppm");
    save_thermal_frame(t, join_path(dir, trel));
    save_visual_frame(visual, join_path(dir, vrel));
    m.thermal_paths.push_back(trel);
    m.visual_paths.push_back(vrel);
  }
  save_manifest(m, dir + "/manifest.txt", cfg);

  std::map<std::int64_t, LandmarkSet> sidecar;
  for (int i = 0; i < n; ++i) sidecar[s.frame_times_ms[i]] = s.landmarks;
  save_landmark_sidecar(sidecar, dir + "/landmarks.txt", cfg);

  save_votes(s.votes, dir + "/votes.csv", cfg);

  TimeSeries room;
  room.times_ms = s.frame_times_ms;
  room.values = s.room_c;
  save_temperature_log(room, dir + "/room.csv", cfg, &s.rh_pct);

  TimeSeries wear;
  wear.times_ms = s.wearable_times_ms;
  wear.values = s.wearable_c;
  save_temperature_log(wear, dir + "/wearable.csv", cfg);

  save_feature_table(camera_feature_table(s), dir + "/camera_features.csv", cfg);
  save_feature_table(truth_table(s, s.truth_c), dir + "/truth/skin_truth.csv", cfg);
  save_feature_table(truth_table(s, s.camera_clean_c),
                     dir + "/truth/camera_clean.csv", cfg);

  RigCalibration truth_rig;
  truth_rig.prior = s.geometry.planted;
  truth_rig.frames_used = 0;
  truth_rig.inlier_fraction = 1.0;
  save_rig(truth_rig, dir + "/truth/homography.txt", cfg);

  std::string ffc = provenance_header(cfg);
  ffc += "# columns: timestamp_ms,ffc_offset_c\n";
  for (int i = 0; i < n; ++i) {
    if (s.ffc_offset_c[i] != 0.0)
      ffc += std::to_string(s.frame_times_ms[i]) + "," +
             fmt_double(s.ffc_offset_c[i]) + "\n";
  }
  ffc += "# noise_seed " + std::to_string(s.seed) + "\n";
  write_file(dir + "/truth/ffc_frames.txt", ffc);

  const auto views = checkerboard_correspondences(
      s, options.checkerboard_views, options.corner_noise_px, s.seed);
  for (std::size_t v = 0; v < views.size(); ++v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "view_%02zu.txt", v);
    save_correspondences(views[v], dir + "/correspondences/" + buf, cfg);
  }
}

}  // namespace comfortcam::sim
