#include "comfortcam/homography.hpp"

#include <cmath>
#include <stdexcept>

#include "comfortcam/error.hpp"
#include "comfortcam/io_util.hpp"

namespace comfortcam {

Point2 Homography::apply(const Point2& p) const {
  const double w = h[6] * p.x + h[7] * p.y + h[8];
  if (w == 0.0) throw std::domain_error("homography maps point to infinity");
  return {(h[0] * p.x + h[1] * p.y + h[2]) / w,
          (h[3] * p.x + h[4] * p.y + h[5]) / w};
}

double Homography::det() const {
  return h[0] * (h[4] * h[8] - h[5] * h[7]) -
         h[1] * (h[3] * h[8] - h[5] * h[6]) +
         h[2] * (h[3] * h[7] - h[4] * h[6]);
}

Homography Homography::inverse() const {
  const double d = det();
  if (std::abs(d) < 1e-300) throw std::domain_error("homography not invertible");
  Homography out;
  out.h[0] = (h[4] * h[8] - h[5] * h[7]) / d;
  out.h[1] = (h[2] * h[7] - h[1] * h[8]) / d;
  out.h[2] = (h[1] * h[5] - h[2] * h[4]) / d;
  out.h[3] = (h[5] * h[6] - h[3] * h[8]) / d;
  out.h[4] = (h[0] * h[8] - h[2] * h[6]) / d;
  out.h[5] = (h[2] * h[3] - h[0] * h[5]) / d;
  out.h[6] = (h[3] * h[7] - h[4] * h[6]) / d;
  out.h[7] = (h[1] * h[6] - h[0] * h[7]) / d;
  out.h[8] = (h[0] * h[4] - h[1] * h[3]) / d;
  return out.normalized();
}

Homography Homography::composed(const Homography& rhs) const {
  Homography out;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += (*this)(r, k) * rhs(k, c);
      out(r, c) = s;
    }
  }
  return out;
}

Homography Homography::normalized() const {
  Homography out = *this;
  const double w = h[8];
  if (w == 0.0) throw std::domain_error("cannot normalize, h33 == 0");
  for (double& v : out.h) v /= w;
  return out;
}

bool is_invertible(const Homography& h) {
  return std::abs(h.normalized().det()) > 1e-12;
}

std::string format_homography(const Homography& h) {
  std::string s;
  for (int i = 0; i < 9; ++i) {
    if (i) s += " ";
    s += fmt_double(h.h[i]);
  }
  return s;
}

Homography parse_homography(const std::string& nine_numbers,
                            const std::string& context) {
  const auto fields = split_ws(nine_numbers);
  if (fields.size() != 9)
    throw ParseError(context + ": expected 9 homography entries, got " +
                     std::to_string(fields.size()));
  Homography h;
  for (int i = 0; i < 9; ++i) h.h[i] = parse_double(fields[i], context);
  return h.normalized();
}

}  // namespace comfortcam
