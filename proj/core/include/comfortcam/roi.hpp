#pragma once

#include <map>
#include <string>
#include <vector>

#include "comfortcam/homography.hpp"
#include "comfortcam/landmarks.hpp"

namespace comfortcam {

enum class Region { Nose, Forehead, RightCheek, LeftCheek, RightEye, LeftEye };

inline constexpr Region kAllRegions[] = {Region::Nose,     Region::Forehead,
                                         Region::RightCheek, Region::LeftCheek,
                                         Region::RightEye, Region::LeftEye};

const std::string& region_name(Region r);
Region region_from_name(const std::string& name);

struct Rect {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
  bool empty() const { return !(x0 < x1 && y0 < y1); }
};

enum class RoiSpace { Visual, Thermal };

struct RoiSet {
  RoiSpace space = RoiSpace::Visual;
  std::map<Region, Rect> regions;
};

/// Landmark-derived facial regions in visual coordinates. With D the
/// interocular distance (eye-centroid separation):
///   nose       bounding box of points 27-35
///   eyes       landmark bounding boxes dilated 20% about their centres
///   forehead   x-span of the brows, height 0.5*D above the highest brow
///   cheeks     squares of side 0.3*D centred on the jaw/nostril/mouth-corner
///              centroids ({2,31,48} right, {14,35,54} left)
/// Rectangles are clipped to the frame; regions emptied by clipping are
/// dropped. include_eyes=false omits the eye regions.
/// Throws std::runtime_error("face below minimum scale") when D < 4 px.
RoiSet compute_rois(const LandmarkSet& lm, int frame_width, int frame_height,
                    bool include_eyes);

struct RoiWarning {
  Region region;
  std::string reason;
};

/// Maps each rectangle's corners through h, takes the axis-aligned bounding
/// box, clips to the thermal frame and drops regions whose clipped area is
/// below 4 px^2 (recorded in warnings). Coordinates stay real-valued;
/// pixelization happens where pixels are read (pixel_bounds). Throws
/// std::runtime_error("no usable ROI in thermal frame") when nothing
/// survives.
RoiSet transfer_rois(const RoiSet& visual_rois, const Homography& h,
                     int thermal_width, int thermal_height,
                     std::vector<RoiWarning>* warnings = nullptr);

/// Pixel cover of a rectangle: rounded outward, clamped to the frame.
/// Pixel (x, y) belongs to the rect when x in [x0, x1) and y in [y0, y1).
struct PixelRect {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;

  int n_pixels() const { return (x1 - x0) * (y1 - y0); }
};
PixelRect pixel_bounds(const Rect& r, int frame_width, int frame_height);

}  // namespace comfortcam
