#include "comfortcam/frame.hpp"

#include <cmath>
#include <stdexcept>

namespace comfortcam {

namespace {
void check_dims(int width, int height) {
  if (width < 1 || height < 1)
    throw std::invalid_argument("frame dimensions must be >= 1");
}
}  // namespace

void validate(const ThermalFrame& f) {
  check_dims(f.width, f.height);
  if (f.raw.size() != static_cast<std::size_t>(f.width) * f.height)
    throw std::invalid_argument("thermal frame buffer size mismatch");
}

void validate(const VisualFrame& f) {
  check_dims(f.width, f.height);
  if (f.rgb.size() != 3 * static_cast<std::size_t>(f.width) * f.height)
    throw std::invalid_argument("visual frame buffer size mismatch");
}

void validate(const GrayFrame& f) {
  check_dims(f.width, f.height);
  if (f.gray.size() != static_cast<std::size_t>(f.width) * f.height)
    throw std::invalid_argument("gray frame buffer size mismatch");
}

GrayFrame to_grayscale(const VisualFrame& v) {
  validate(v);
  GrayFrame g;
  g.width = v.width;
  g.height = v.height;
  g.timestamp_ms = v.timestamp_ms;
  g.gray.resize(static_cast<std::size_t>(v.width) * v.height);
  const std::size_t n = g.gray.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double y = 0.299 * v.rgb[3 * i] + 0.587 * v.rgb[3 * i + 1] +
                     0.114 * v.rgb[3 * i + 2];
    double r = std::floor(y + 0.5);
    if (r < 0.0) r = 0.0;
    if (r > 255.0) r = 255.0;
    g.gray[i] = static_cast<std::uint8_t>(r);
  }
  return g;
}

GrayFrame downscale_area(const GrayFrame& g, int factor) {
  validate(g);
  if (factor < 1 || g.width % factor != 0 || g.height % factor != 0)
    throw std::invalid_argument("downscale factor must divide both dimensions");
  GrayFrame out;
  out.width = g.width / factor;
  out.height = g.height / factor;
  out.timestamp_ms = g.timestamp_ms;
  out.gray.resize(static_cast<std::size_t>(out.width) * out.height);
  const int area = factor * factor;
  for (int y = 0; y < out.height; ++y) {
    for (int x = 0; x < out.width; ++x) {
      std::uint32_t sum = 0;
      for (int dy = 0; dy < factor; ++dy) {
        const std::uint8_t* row =
            g.gray.data() + static_cast<std::size_t>(y * factor + dy) * g.width +
            static_cast<std::size_t>(x) * factor;
        for (int dx = 0; dx < factor; ++dx) sum += row[dx];
      }
      out.gray[static_cast<std::size_t>(y) * out.width + x] =
          static_cast<std::uint8_t>((sum + area / 2) / area);
    }
  }
  return out;
}

}  // namespace comfortcam
