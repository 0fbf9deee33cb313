#include "comfortcam/orb.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "comfortcam/rng.hpp"

namespace comfortcam {

int otsu_threshold(const GrayFrame& g) {
  validate(g);
  std::array<std::int64_t, 256> hist{};
  for (const std::uint8_t v : g.gray) ++hist[v];
  const double total = static_cast<double>(g.gray.size());

  double sum_all = 0.0;
  for (int v = 0; v < 256; ++v) sum_all += static_cast<double>(v) * hist[v];

  int best_t = 0;
  double best_var = 0.0;
  double w0 = 0.0, sum0 = 0.0;
  // Classes: background {p < T}, foreground {p >= T}.
  for (int t = 0; t < 256; ++t) {
    if (t > 0) {
      w0 += hist[t - 1];
      sum0 += static_cast<double>(t - 1) * hist[t - 1];
    }
    const double w1 = total - w0;
    if (w0 == 0.0 || w1 == 0.0) continue;
    const double mu0 = sum0 / w0;
    const double mu1 = (sum_all - sum0) / w1;
    const double var = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
    if (var > best_var) {
      best_var = var;
      best_t = t;
    }
  }
  return best_t;
}

MaskFrame make_mask(const GrayFrame& g) {
  const int t = otsu_threshold(g);
  MaskFrame m;
  m.width = g.width;
  m.height = g.height;
  m.bits.resize(g.gray.size());
  for (std::size_t i = 0; i < g.gray.size(); ++i)
    m.bits[i] = g.gray[i] >= t ? 1 : 0;
  return m;
}

int hamming_distance(const Descriptor& a, const Descriptor& b) {
  int d = 0;
  for (int i = 0; i < 4; ++i) d += std::popcount(a.bits[i] ^ b.bits[i]);
  return d;
}

namespace {

// Bresenham circle of radius 3, clockwise from 12 o'clock.
constexpr int kCircle[16][2] = {
    {0, -3}, {1, -3}, {2, -2}, {3, -1}, {3, 0},  {3, 1},  {2, 2},  {1, 3},
    {0, 3},  {-1, 3}, {-2, 2}, {-3, 1}, {-3, 0}, {-3, -1}, {-2, -2}, {-1, -3}};

bool fast9_corner(const GrayFrame& g, int x, int y, int t) {
  const int p = g.at(x, y);
  int circle[16];
  for (int i = 0; i < 16; ++i)
    circle[i] = g.at(x + kCircle[i][0], y + kCircle[i][1]);

  int bright_run = 0, dark_run = 0;
  int best_bright = 0, best_dark = 0;
  for (int i = 0; i < 32; ++i) {  // doubled loop handles wrap-around arcs
    const int v = circle[i & 15];
    if (v > p + t) {
      ++bright_run;
      best_bright = std::max(best_bright, bright_run);
    } else {
      bright_run = 0;
    }
    if (v < p - t) {
      ++dark_run;
      best_dark = std::max(best_dark, dark_run);
    } else {
      dark_run = 0;
    }
  }
  return best_bright >= 9 || best_dark >= 9;
}

double harris_response(const GrayFrame& g, int x, int y) {
  // 7x7 block of central differences, k = 0.04.
  double a = 0.0, b = 0.0, c = 0.0;
  for (int dy = -3; dy <= 3; ++dy) {
    for (int dx = -3; dx <= 3; ++dx) {
      const int px = x + dx, py = y + dy;
      const double ix = g.at(px + 1, py) - g.at(px - 1, py);
      const double iy = g.at(px, py + 1) - g.at(px, py - 1);
      a += ix * ix;
      b += iy * iy;
      c += ix * iy;
    }
  }
  constexpr double scale = 1.0 / (4.0 * 7 * 255);
  a *= scale * scale;
  b *= scale * scale;
  c *= scale * scale;
  return a * b - c * c - 0.04 * (a + b) * (a + b);
}

constexpr int kCentroidRadius = 15;

double centroid_angle(const GrayFrame& g, int x, int y) {
  double m10 = 0.0, m01 = 0.0;
  for (int dy = -kCentroidRadius; dy <= kCentroidRadius; ++dy) {
    for (int dx = -kCentroidRadius; dx <= kCentroidRadius; ++dx) {
      if (dx * dx + dy * dy > kCentroidRadius * kCentroidRadius) continue;
      const double v = g.at(x + dx, y + dy);
      m10 += dx * v;
      m01 += dy * v;
    }
  }
  double a = std::atan2(m01, m10);
  if (a < 0.0) a += 2.0 * std::numbers::pi;
  return a;
}

struct PatternTables {
  // offsets[bin][2*i] is the first sample of pair i, [2*i+1] the second.
  std::array<std::array<std::array<std::int8_t, 2>, 512>, kOrientationBins> offsets;
};

// 256 fixed test pairs inside a radius-13 disc (rotations keep samples
// within the 16 px border even with the 5x5 smoothing margin), generated
// once from a pinned seed; per-bin tables hold the rotated, rounded offsets.
const PatternTables& pattern_tables() {
  static const PatternTables tables = [] {
    PatternTables t;
    Rng rng(0x0b5e55ed5eedull);
    constexpr double radius = 13.0;
    std::array<std::array<double, 2>, 512> pts;
    for (auto& p : pts) {
      for (;;) {
        const double x = rng.normal(0.0, radius / 2.0);
        const double y = rng.normal(0.0, radius / 2.0);
        if (x * x + y * y <= radius * radius) {
          p = {x, y};
          break;
        }
      }
    }
    for (int b = 0; b < kOrientationBins; ++b) {
      const double a = 2.0 * std::numbers::pi * b / kOrientationBins;
      const double ca = std::cos(a), sa = std::sin(a);
      for (int i = 0; i < 512; ++i) {
        const double rx = ca * pts[i][0] - sa * pts[i][1];
        const double ry = sa * pts[i][0] + ca * pts[i][1];
        t.offsets[b][i] = {static_cast<std::int8_t>(std::lround(rx)),
                           static_cast<std::int8_t>(std::lround(ry))};
      }
    }
    return t;
  }();
  return tables;
}

}  // namespace

int orientation_bin(double angle) {
  const double step = 2.0 * std::numbers::pi / kOrientationBins;
  int bin = static_cast<int>(std::floor(angle / step + 0.5));
  bin %= kOrientationBins;
  if (bin < 0) bin += kOrientationBins;
  return bin;
}

GrayFrame box_smooth5(const GrayFrame& g) {
  validate(g);
  GrayFrame out;
  out.width = g.width;
  out.height = g.height;
  out.timestamp_ms = g.timestamp_ms;
  out.gray.resize(g.gray.size());
  auto clamp = [](int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); };
  for (int y = 0; y < g.height; ++y) {
    for (int x = 0; x < g.width; ++x) {
      int sum = 0;
      for (int dy = -2; dy <= 2; ++dy) {
        const int yy = clamp(y + dy, 0, g.height - 1);
        for (int dx = -2; dx <= 2; ++dx)
          sum += g.at(clamp(x + dx, 0, g.width - 1), yy);
      }
      out.gray[static_cast<std::size_t>(y) * g.width + x] =
          static_cast<std::uint8_t>((sum + 12) / 25);
    }
  }
  return out;
}

Descriptor describe_at(const GrayFrame& smoothed, int cx, int cy, int bin) {
  const auto& offs = pattern_tables().offsets[bin];
  Descriptor d;
  for (int i = 0; i < 256; ++i) {
    const auto& o1 = offs[2 * i];
    const auto& o2 = offs[2 * i + 1];
    const std::uint8_t v1 = smoothed.at(cx + o1[0], cy + o1[1]);
    const std::uint8_t v2 = smoothed.at(cx + o2[0], cy + o2[1]);
    if (v1 < v2) d.bits[i >> 6] |= std::uint64_t{1} << (i & 63);
  }
  return d;
}

std::vector<std::pair<Keypoint, Descriptor>> detect_features(
    const GrayFrame& g, const MaskFrame& mask, int max_kp) {
  validate(g);
  if (mask.width != g.width || mask.height != g.height)
    throw std::invalid_argument("mask dimensions must match the frame");
  if (max_kp < 1) throw std::invalid_argument("max_kp must be >= 1");

  struct Candidate {
    int x, y;
    double response;
  };
  std::vector<Candidate> cands;
  std::vector<double> resp_map(g.gray.size(),
                               -std::numeric_limits<double>::infinity());

  const int border = kPatchBorder;
  for (int y = border; y < g.height - border; ++y) {
    for (int x = border; x < g.width - border; ++x) {
      if (!mask.at(x, y)) continue;
      if (!fast9_corner(g, x, y, kFastThreshold)) continue;
      const double r = harris_response(g, x, y);
      cands.push_back({x, y, r});
      resp_map[static_cast<std::size_t>(y) * g.width + x] = r;
    }
  }

  // 3x3 non-max suppression on the Harris response; ties resolved toward
  // the earlier pixel in scan order so the result is deterministic.
  std::vector<Candidate> kept;
  for (const auto& c : cands) {
    bool is_max = true;
    for (int dy = -1; dy <= 1 && is_max; ++dy) {
      for (int dx = -1; dx <= 1 && is_max; ++dx) {
        if (dx == 0 && dy == 0) continue;
        const double r =
            resp_map[static_cast<std::size_t>(c.y + dy) * g.width + (c.x + dx)];
        if (r > c.response) is_max = false;
        if (r == c.response && (dy < 0 || (dy == 0 && dx < 0))) is_max = false;
      }
    }
    if (is_max) kept.push_back(c);
  }

  std::stable_sort(kept.begin(), kept.end(),
                   [](const Candidate& a, const Candidate& b) {
                     return a.response > b.response;
                   });
  if (static_cast<int>(kept.size()) > max_kp) kept.resize(max_kp);

  const GrayFrame smoothed = box_smooth5(g);
  std::vector<std::pair<Keypoint, Descriptor>> out;
  out.reserve(kept.size());
  for (const auto& c : kept) {
    Keypoint kp;
    kp.x = c.x;
    kp.y = c.y;
    kp.response = c.response;
    kp.angle = centroid_angle(g, c.x, c.y);
    out.emplace_back(kp, describe_at(smoothed, c.x, c.y, orientation_bin(kp.angle)));
  }
  return out;
}

std::vector<Match> match_descriptors(const std::vector<Descriptor>& a,
                                     const std::vector<Descriptor>& b,
                                     double ratio) {
  if (ratio <= 0.0 || ratio > 1.0)
    throw std::invalid_argument("ratio must be in (0, 1]");
  std::vector<Match> out;
  if (a.empty() || b.empty()) return out;

  // Nearest neighbour of every b in a, for the cross-check.
  std::vector<int> nearest_in_a(b.size(), -1);
  for (std::size_t j = 0; j < b.size(); ++j) {
    int best = std::numeric_limits<int>::max();
    for (std::size_t i = 0; i < a.size(); ++i) {
      const int d = hamming_distance(a[i], b[j]);
      if (d < best) {
        best = d;
        nearest_in_a[j] = static_cast<int>(i);
      }
    }
  }

  for (std::size_t i = 0; i < a.size(); ++i) {
    int d1 = std::numeric_limits<int>::max();
    int d2 = std::numeric_limits<int>::max();
    int j1 = -1;
    for (std::size_t j = 0; j < b.size(); ++j) {
      const int d = hamming_distance(a[i], b[j]);
      if (d < d1) {
        d2 = d1;
        d1 = d;
        j1 = static_cast<int>(j);
      } else if (d < d2) {
        d2 = d;
      }
    }
    if (j1 < 0) continue;
    if (d2 != std::numeric_limits<int>::max() &&
        !(static_cast<double>(d1) < ratio * static_cast<double>(d2)))
      continue;
    if (nearest_in_a[static_cast<std::size_t>(j1)] != static_cast<int>(i))
      continue;
    out.push_back({static_cast<int>(i), j1, d1});
  }
  return out;
}

}  // namespace comfortcam
