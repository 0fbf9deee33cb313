#pragma once

#include <array>
#include <string>

namespace comfortcam {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// 3x3 planar projective map, row-major, normalized so h[8] == 1.
struct Homography {
  std::array<double, 9> h{1, 0, 0, 0, 1, 0, 0, 0, 1};

  static Homography identity() { return {}; }

  double operator()(int r, int c) const { return h[3 * r + c]; }
  double& operator()(int r, int c) { return h[3 * r + c]; }

  Point2 apply(const Point2& p) const;
  double det() const;
  Homography inverse() const;            // throws std::domain_error if singular
  Homography composed(const Homography& rhs) const;  // this ∘ rhs
  Homography normalized() const;         // scaled so h[8] == 1
};

/// |det| > 1e-12 after normalization.
bool is_invertible(const Homography& h);

/// Text form: nine numbers, row-major, single line.
std::string format_homography(const Homography& h);
Homography parse_homography(const std::string& nine_numbers,
                            const std::string& context);

}  // namespace comfortcam
