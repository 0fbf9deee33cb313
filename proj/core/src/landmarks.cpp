#include "comfortcam/landmarks.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

#include "comfortcam/error.hpp"
#include "comfortcam/io_util.hpp"

namespace comfortcam {

void validate(const LandmarkSet& lm, int frame_width, int frame_height) {
  for (int i = 0; i < kLandmarkCount; ++i) {
    const Point2& p = lm.points[i];
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw std::invalid_argument("landmark " + std::to_string(i) +
                                  " is not finite");
    if (p.x < 0 || p.y < 0 || p.x > frame_width - 1 || p.y > frame_height - 1)
      throw std::invalid_argument("landmark " + std::to_string(i) +
                                  " outside frame bounds");
  }
}

std::map<std::int64_t, LandmarkSet> load_landmark_sidecar(
    const std::string& path) {
  std::map<std::int64_t, LandmarkSet> out;
  const auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string line = trim(lines[i]);
    if (line.empty() || line[0] == '#') continue;
    const std::string ctx = path + ":" + std::to_string(i + 1);
    const auto f = split_ws(line);
    if (f.size() != 1 + 2 * kLandmarkCount) {
      const std::size_t pts = f.size() >= 1 ? (f.size() - 1) / 2 : 0;
      throw ParseError(ctx + ": expected 68 landmarks, got " +
                       std::to_string(pts));
    }
    const std::int64_t id = parse_int(f[0], ctx);
    LandmarkSet lm;
    for (int k = 0; k < kLandmarkCount; ++k) {
      lm.points[k].x = parse_double(f[1 + 2 * k], ctx);
      lm.points[k].y = parse_double(f[2 + 2 * k], ctx);
      if (!std::isfinite(lm.points[k].x) || !std::isfinite(lm.points[k].y))
        throw ParseError(ctx + ": non-finite landmark coordinate");
    }
    if (!out.emplace(id, lm).second)
      throw ParseError(ctx + ": duplicate frame id " + std::to_string(id));
  }
  return out;
}

void save_landmark_sidecar(const std::map<std::int64_t, LandmarkSet>& records,
                           const std::string& path, const std::string& config) {
  std::string out = provenance_header(config);
  for (const auto& [id, lm] : records) {
    out += std::to_string(id);
    for (const auto& p : lm.points)
      out += " " + fmt_fixed(p.x, 3) + " " + fmt_fixed(p.y, 3);
    out += "\n";
  }
  write_file(path, out);
}

LandmarkProvider LandmarkProvider::from_sidecar(const std::string& path) {
  auto records = std::make_shared<std::map<std::int64_t, LandmarkSet>>(
      load_landmark_sidecar(path));
  return LandmarkProvider(
      [records](std::int64_t id) -> std::optional<LandmarkSet> {
        const auto it = records->find(id);
        if (it == records->end()) return std::nullopt;
        return it->second;
      });
}

LandmarkProvider LandmarkProvider::from_function(Lookup fn) {
  return LandmarkProvider(std::move(fn));
}

}  // namespace comfortcam
