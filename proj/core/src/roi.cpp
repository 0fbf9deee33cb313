#include "comfortcam/roi.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace comfortcam {

const std::string& region_name(Region r) {
  static const std::string names[] = {"nose",       "forehead",
                                      "right_cheek", "left_cheek",
                                      "right_eye",  "left_eye"};
  return names[static_cast<int>(r)];
}

Region region_from_name(const std::string& name) {
  for (Region r : kAllRegions)
    if (region_name(r) == name) return r;
  throw std::invalid_argument("unknown region name '" + name + "'");
}

namespace {

Rect bbox_of(const LandmarkSet& lm, int first, int last) {
  Rect r{lm.points[first].x, lm.points[first].y, lm.points[first].x,
         lm.points[first].y};
  for (int i = first; i <= last; ++i) {
    r.x0 = std::min(r.x0, lm.points[i].x);
    r.y0 = std::min(r.y0, lm.points[i].y);
    r.x1 = std::max(r.x1, lm.points[i].x);
    r.y1 = std::max(r.y1, lm.points[i].y);
  }
  return r;
}

Rect dilate_about_center(const Rect& r, double fraction) {
  const double cx = 0.5 * (r.x0 + r.x1);
  const double cy = 0.5 * (r.y0 + r.y1);
  const double hw = 0.5 * r.width() * (1.0 + fraction);
  const double hh = 0.5 * r.height() * (1.0 + fraction);
  return {cx - hw, cy - hh, cx + hw, cy + hh};
}

Point2 mean_of(const LandmarkSet& lm, int first, int last) {
  Point2 m{0, 0};
  for (int i = first; i <= last; ++i) {
    m.x += lm.points[i].x;
    m.y += lm.points[i].y;
  }
  const double n = last - first + 1;
  m.x /= n;
  m.y /= n;
  return m;
}

Rect clip_rect(const Rect& r, double w, double h) {
  return {std::max(r.x0, 0.0), std::max(r.y0, 0.0), std::min(r.x1, w),
          std::min(r.y1, h)};
}

}  // namespace

RoiSet compute_rois(const LandmarkSet& lm, int frame_width, int frame_height,
                    bool include_eyes) {
  validate(lm, frame_width, frame_height);

  const Point2 right_eye_c = mean_of(lm, 36, 41);
  const Point2 left_eye_c = mean_of(lm, 42, 47);
  const double interocular =
      std::hypot(left_eye_c.x - right_eye_c.x, left_eye_c.y - right_eye_c.y);
  if (interocular < 4.0) throw std::runtime_error("face below minimum scale");

  RoiSet out;
  out.space = RoiSpace::Visual;

  out.regions[Region::Nose] = bbox_of(lm, 27, 35);

  const Rect brows = bbox_of(lm, 17, 26);
  out.regions[Region::Forehead] =
      Rect{brows.x0, brows.y0 - 0.5 * interocular, brows.x1, brows.y0};

  const double cheek_half = 0.15 * interocular;
  auto cheek = [&](int a, int b, int c) {
    const Point2 ctr{(lm.points[a].x + lm.points[b].x + lm.points[c].x) / 3.0,
                     (lm.points[a].y + lm.points[b].y + lm.points[c].y) / 3.0};
    return Rect{ctr.x - cheek_half, ctr.y - cheek_half, ctr.x + cheek_half,
                ctr.y + cheek_half};
  };
  out.regions[Region::RightCheek] = cheek(2, 31, 48);
  out.regions[Region::LeftCheek] = cheek(14, 35, 54);

  if (include_eyes) {
    out.regions[Region::RightEye] = dilate_about_center(bbox_of(lm, 36, 41), 0.2);
    out.regions[Region::LeftEye] = dilate_about_center(bbox_of(lm, 42, 47), 0.2);
  }

  for (auto it = out.regions.begin(); it != out.regions.end();) {
    it->second = clip_rect(it->second, frame_width, frame_height);
    if (it->second.empty()) {
      it = out.regions.erase(it);
    } else {
      ++it;
    }
  }
  return out;
}

RoiSet transfer_rois(const RoiSet& visual_rois, const Homography& h,
                     int thermal_width, int thermal_height,
                     std::vector<RoiWarning>* warnings) {
  if (visual_rois.space != RoiSpace::Visual)
    throw std::invalid_argument("transfer_rois expects visual-space regions");
  if (!is_invertible(h))
    throw std::invalid_argument("homography is not invertible");

  RoiSet out;
  out.space = RoiSpace::Thermal;
  for (const auto& [region, r] : visual_rois.regions) {
    const Point2 corners[4] = {
        {r.x0, r.y0}, {r.x1, r.y0}, {r.x0, r.y1}, {r.x1, r.y1}};
    Rect mapped;
    bool first = true;
    for (const Point2& c : corners) {
      const Point2 q = h.apply(c);
      if (first) {
        mapped = {q.x, q.y, q.x, q.y};
        first = false;
      } else {
        mapped.x0 = std::min(mapped.x0, q.x);
        mapped.y0 = std::min(mapped.y0, q.y);
        mapped.x1 = std::max(mapped.x1, q.x);
        mapped.y1 = std::max(mapped.y1, q.y);
      }
    }
    const Rect clipped = clip_rect(mapped, thermal_width, thermal_height);
    if (clipped.empty() || clipped.area() < 4.0) {
      if (warnings)
        warnings->push_back({region, "clipped area below 4 px^2, dropped"});
      continue;
    }
    out.regions[region] = clipped;
  }
  if (out.regions.empty())
    throw std::runtime_error("no usable ROI in thermal frame");
  return out;
}

PixelRect pixel_bounds(const Rect& r, int frame_width, int frame_height) {
  PixelRect p;
  p.x0 = std::max(0, static_cast<int>(std::floor(r.x0)));
  p.y0 = std::max(0, static_cast<int>(std::floor(r.y0)));
  p.x1 = std::min(frame_width, static_cast<int>(std::ceil(r.x1)));
  p.y1 = std::min(frame_height, static_cast<int>(std::ceil(r.y1)));
  if (p.x1 < p.x0) p.x1 = p.x0;
  if (p.y1 < p.y0) p.y1 = p.y0;
  return p;
}

}  // namespace comfortcam
