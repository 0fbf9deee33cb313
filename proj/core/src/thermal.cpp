#include "comfortcam/thermal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace comfortcam {

double raw_to_celsius(std::uint16_t raw) {
  const double c = raw / 100.0 - 273.15;
  if (c < kMinPlausibleC || c > kMaxPlausibleC)
    throw std::runtime_error("implausible radiometric sample: " +
                             std::to_string(c) + " degC");
  return c;
}

std::uint16_t celsius_to_raw(double celsius) {
  if (!(celsius >= kMinPlausibleC && celsius <= kMaxPlausibleC))
    throw std::runtime_error("implausible radiometric sample: " +
                             std::to_string(celsius) + " degC");
  const double raw = std::floor((celsius + 273.15) * 100.0 + 0.5);
  return static_cast<std::uint16_t>(raw);
}

GrayFrame agc_to_8bit(const ThermalFrame& t) {
  validate(t);
  GrayFrame g;
  g.width = t.width;
  g.height = t.height;
  g.timestamp_ms = t.timestamp_ms;
  g.gray.resize(t.raw.size());

  std::uint16_t lo = t.raw[0], hi = t.raw[0];
  for (const std::uint16_t v : t.raw) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (lo == hi) {
    std::fill(g.gray.begin(), g.gray.end(), std::uint8_t{0});
    return g;
  }
  const double range = hi - lo;
  for (std::size_t i = 0; i < t.raw.size(); ++i) {
    const double v = 255.0 * (t.raw[i] - lo) / range;
    g.gray[i] = static_cast<std::uint8_t>(std::floor(v + 0.5));
  }
  return g;
}

const std::string& roi_kind_name(RoiKind k) {
  static const std::string names[] = {"skin_temperature_C", "pixel_intensity"};
  return names[static_cast<int>(k)];
}

RoiKind roi_kind_from_name(const std::string& name) {
  if (name == "skin_temperature_C") return RoiKind::SkinTemperatureC;
  if (name == "pixel_intensity") return RoiKind::PixelIntensity;
  throw std::invalid_argument("unknown reading kind '" + name + "'");
}

const std::string& roi_stat_name(RoiStat s) {
  static const std::string names[] = {"mean", "max", "p90"};
  return names[static_cast<int>(s)];
}

RoiStat roi_stat_from_name(const std::string& name) {
  if (name == "mean") return RoiStat::Mean;
  if (name == "max") return RoiStat::Max;
  if (name == "p90") return RoiStat::P90;
  throw std::invalid_argument("unknown statistic '" + name + "'");
}

namespace {

double reduce(std::vector<double>& values, RoiStat stat) {
  switch (stat) {
    case RoiStat::Mean: {
      double s = 0.0;
      for (const double v : values) s += v;
      return s / static_cast<double>(values.size());
    }
    case RoiStat::Max:
      return *std::max_element(values.begin(), values.end());
    case RoiStat::P90: {
      std::sort(values.begin(), values.end());
      const std::size_t n = values.size();
      const std::size_t idx = static_cast<std::size_t>(
          std::ceil(0.9 * static_cast<double>(n))) - 1;
      return values[std::min(idx, n - 1)];
    }
  }
  throw std::logic_error("unreachable");
}

template <typename Sample>
RoiReading reduce_rect(std::int64_t timestamp_ms, Region region, RoiKind kind,
                       const Rect& roi, int w, int h, RoiStat stat,
                       Sample sample) {
  const PixelRect px = pixel_bounds(roi, w, h);
  if (px.n_pixels() < 4) throw std::runtime_error("ROI too small");
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(px.n_pixels()));
  for (int y = px.y0; y < px.y1; ++y)
    for (int x = px.x0; x < px.x1; ++x) values.push_back(sample(x, y));
  RoiReading r;
  r.timestamp_ms = timestamp_ms;
  r.region = region;
  r.kind = kind;
  r.value = reduce(values, stat);
  r.n_pixels = px.n_pixels();
  return r;
}

}  // namespace

RoiReading roi_statistic(const ThermalFrame& frame, Region region,
                         const Rect& roi_thermal, RoiKind kind, RoiStat stat) {
  validate(frame);
  if (kind == RoiKind::SkinTemperatureC) {
    if (!frame.radiometric)
      throw std::invalid_argument(
          "skin_temperature_C requires a radiometric frame");
    return reduce_rect(frame.timestamp_ms, region, kind, roi_thermal,
                       frame.width, frame.height, stat,
                       [&](int x, int y) { return raw_to_celsius(frame.at(x, y)); });
  }
  const GrayFrame g = agc_to_8bit(frame);
  return reduce_rect(frame.timestamp_ms, region, kind, roi_thermal, g.width,
                     g.height, stat,
                     [&](int x, int y) { return static_cast<double>(g.at(x, y)); });
}

RoiReading roi_statistic(const GrayFrame& render8, Region region,
                         const Rect& roi_thermal, RoiStat stat) {
  validate(render8);
  return reduce_rect(render8.timestamp_ms, region, RoiKind::PixelIntensity,
                     roi_thermal, render8.width, render8.height, stat,
                     [&](int x, int y) { return static_cast<double>(render8.at(x, y)); });
}

}  // namespace comfortcam
