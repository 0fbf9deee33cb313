#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <filesystem>

#include "comfortcam/calib.hpp"
#include "comfortcam/io_util.hpp"
#include "comfortcam/rng.hpp"

using namespace comfortcam;

namespace {

Homography make_h(std::initializer_list<double> v) {
  Homography h;
  int i = 0;
  for (double x : v) h.h[i++] = x;
  return h.normalized();
}

std::vector<Correspondence> map_points(const std::vector<Point2>& pts,
                                       const Homography& h) {
  std::vector<Correspondence> out;
  for (const auto& p : pts) out.push_back({p, h.apply(p)});
  return out;
}

double max_elem_diff(const Homography& a, const Homography& b) {
  double m = 0.0;
  for (int i = 0; i < 9; ++i) m = std::max(m, std::abs(a.h[i] - b.h[i]));
  return m;
}

Homography random_invertible_h(Rng& rng) {
  // Perturbation of a similarity; h33 fixed at 1.
  for (;;) {
    Homography h;
    const double angle = rng.uniform(-0.5, 0.5);
    const double scale = rng.uniform(0.5, 2.0);
    h.h = {scale * std::cos(angle), -scale * std::sin(angle), rng.uniform(-30, 30),
           scale * std::sin(angle), scale * std::cos(angle),  rng.uniform(-30, 30),
           rng.uniform(-1e-4, 1e-4), rng.uniform(-1e-4, 1e-4), 1.0};
    if (is_invertible(h)) return h;
  }
}

std::vector<Point2> grid_points(int nx, int ny, double step) {
  std::vector<Point2> pts;
  for (int y = 0; y < ny; ++y)
    for (int x = 0; x < nx; ++x)
      pts.push_back({20.0 + x * step, 20.0 + y * step});
  return pts;
}

}  // namespace

TEST_CASE("DLT recovers the identity from 4 points") {
  const std::vector<Point2> pts{{0, 0}, {10, 0}, {0, 10}, {10, 10}};
  const Homography h = estimate_homography_dlt(map_points(pts, Homography::identity()));
  CHECK(max_elem_diff(h, Homography::identity()) < 1e-9);
}

TEST_CASE("DLT recovers a pure translation") {
  const Homography t = make_h({1, 0, 2, 0, 1, 3, 0, 0, 1});
  const std::vector<Point2> pts{{0, 0}, {10, 0}, {0, 10}, {10, 10}};
  const Homography h = estimate_homography_dlt(map_points(pts, t));
  CHECK(max_elem_diff(h, t) < 1e-9);
}

TEST_CASE("DLT is projective-exact on noiseless data from random H") {
  Rng rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    const Homography truth = random_invertible_h(rng);
    std::vector<Point2> pts;
    for (int i = 0; i < 20; ++i)
      pts.push_back({rng.uniform(0, 200), rng.uniform(0, 150)});
    const Homography h = estimate_homography_dlt(map_points(pts, truth));
    CHECK(max_elem_diff(h, truth) < 1e-6);
  }
}

TEST_CASE("DLT rejects short and degenerate inputs") {
  std::vector<Correspondence> three{
      {{0, 0}, {0, 0}}, {{1, 0}, {1, 0}}, {{0, 1}, {0, 1}}};
  CHECK_THROWS_AS(estimate_homography_dlt(three), std::invalid_argument);

  // All four source points on one line.
  std::vector<Correspondence> collinear{
      {{0, 0}, {0, 0}}, {{1, 1}, {1, 1}}, {{2, 2}, {2, 2}}, {{3, 3}, {3, 3}}};
  CHECK_THROWS_WITH_AS(estimate_homography_dlt(collinear),
                       doctest::Contains("degenerate"), std::runtime_error);
}

TEST_CASE("DLT normalization invariance under source scaling") {
  Rng rng(13);
  const Homography truth = random_invertible_h(rng);
  std::vector<Point2> pts;
  for (int i = 0; i < 15; ++i)
    pts.push_back({rng.uniform(0, 100), rng.uniform(0, 100)});
  const auto corrs = map_points(pts, truth);

  const double s = 37.5;
  std::vector<Correspondence> scaled = corrs;
  for (auto& c : scaled) {
    c.src.x *= s;
    c.src.y *= s;
  }
  // Fitting against sources scaled by s must agree with the unscaled fit as
  // a projective map: H == H_scaled ∘ diag(s,s,1), i.e. the unscaled
  // estimate composed with diag(1/s,1/s,1) is the scaled estimate.
  const Homography h_scaled = estimate_homography_dlt(scaled);
  const Homography direct = estimate_homography_dlt(corrs);
  const Homography rescale = make_h({s, 0, 0, 0, s, 0, 0, 0, 1});
  CHECK(max_elem_diff(h_scaled.composed(rescale).normalized(), direct) < 1e-6);
  const Homography inv_scale = make_h({1.0 / s, 0, 0, 0, 1.0 / s, 0, 0, 0, 1});
  CHECK(max_elem_diff(direct.composed(inv_scale).normalized(), h_scaled) < 1e-6);
}

TEST_CASE("RANSAC on all-inlier exact data equals the DLT refit") {
  Rng rng(17);
  const Homography truth = random_invertible_h(rng);
  const auto pts = grid_points(5, 4, 30.0);
  const auto corrs = map_points(pts, truth);
  RansacParams params;
  params.seed = 5;
  const RansacResult r = ransac_homography(corrs, params);
  CHECK(r.n_inliers == static_cast<int>(corrs.size()));
  for (bool b : r.inlier_mask) CHECK(b);
  CHECK(max_elem_diff(r.homography, estimate_homography_dlt(corrs)) < 1e-9);
}

TEST_CASE("RANSAC rejects below the minimal set") {
  std::vector<Correspondence> three{
      {{0, 0}, {0, 0}}, {{1, 0}, {1, 0}}, {{0, 1}, {0, 1}}};
  RansacParams params;
  params.seed = 1;
  CHECK_THROWS_AS(ransac_homography(three, params), std::invalid_argument);
}

TEST_CASE("RANSAC finds planted inliers among uniform outliers") {
  Rng rng(23);
  const Homography truth = random_invertible_h(rng);
  std::vector<Correspondence> corrs;
  std::vector<Point2> inlier_pts;
  for (int i = 0; i < 50; ++i) {
    Point2 p{rng.uniform(0, 160), rng.uniform(0, 120)};
    inlier_pts.push_back(p);
    corrs.push_back({p, truth.apply(p)});
  }
  for (int i = 0; i < 20; ++i) {
    corrs.push_back({{rng.uniform(0, 160), rng.uniform(0, 120)},
                     {rng.uniform(0, 160), rng.uniform(0, 120)}});
  }
  RansacParams params;
  params.seed = 99;
  params.inlier_px = 2.0;
  const RansacResult r = ransac_homography(corrs, params);
  CHECK(r.n_inliers >= 50);

  double mean_err = 0.0;
  for (const auto& p : inlier_pts) {
    const Point2 q = r.homography.apply(p);
    const Point2 qt = truth.apply(p);
    mean_err += std::hypot(q.x - qt.x, q.y - qt.y);
  }
  mean_err /= inlier_pts.size();
  CHECK(mean_err < 0.5);
}

TEST_CASE("fixed seed gives bit-identical RANSAC output") {
  Rng rng(31);
  const Homography truth = random_invertible_h(rng);
  std::vector<Correspondence> corrs;
  for (int i = 0; i < 30; ++i) {
    Point2 p{rng.uniform(0, 160), rng.uniform(0, 120)};
    Point2 q = truth.apply(p);
    q.x += rng.normal(0.0, 0.5);
    q.y += rng.normal(0.0, 0.5);
    corrs.push_back({p, q});
  }
  for (int i = 0; i < 8; ++i)
    corrs.push_back({{rng.uniform(0, 160), rng.uniform(0, 120)},
                     {rng.uniform(0, 160), rng.uniform(0, 120)}});

  RansacParams params;
  params.seed = 1234;
  const RansacResult a = ransac_homography(corrs, params);
  const RansacResult b = ransac_homography(corrs, params);
  CHECK(a.homography.h == b.homography.h);
  CHECK(a.inlier_mask == b.inlier_mask);
  CHECK(a.n_inliers == b.n_inliers);
}

TEST_CASE("returned model respects its own inlier threshold") {
  Rng rng(37);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Homography truth = random_invertible_h(rng);
    std::vector<Correspondence> corrs;
    for (int i = 0; i < 40; ++i) {
      Point2 p{rng.uniform(0, 160), rng.uniform(0, 120)};
      Point2 q = truth.apply(p);
      q.x += rng.normal(0.0, 0.8);
      q.y += rng.normal(0.0, 0.8);
      corrs.push_back({p, q});
    }
    RansacParams params;
    params.seed = seed;
    const RansacResult r = ransac_homography(corrs, params);
    const Homography inv = r.homography.inverse();
    for (std::size_t i = 0; i < corrs.size(); ++i) {
      if (!r.inlier_mask[i]) continue;
      CHECK(symmetric_error_px(r.homography, inv, corrs[i]) < params.inlier_px);
    }
    CHECK(r.mean_error_px <= params.inlier_px);
  }
}

TEST_CASE("calibrate_rig on exact corners has near-zero residual") {
  Rng rng(41);
  const Homography truth = random_invertible_h(rng);
  const auto pts = grid_points(8, 6, 20.0);
  RansacParams params;
  params.seed = 7;
  const RigCalibration rig = calibrate_rig({map_points(pts, truth)}, params);
  CHECK(rig.frames_used == 1);
  CHECK(rig.inlier_fraction == doctest::Approx(1.0));
  CHECK(rig.rms_residual_px < 1e-6);
}

TEST_CASE("calibrate_rig stays within 1 px rms under 0.5 px corner noise") {
  Rng rng(43);
  const Homography truth = random_invertible_h(rng);
  std::vector<std::vector<Correspondence>> frames;
  for (int f = 0; f < 10; ++f) {
    auto corrs = map_points(grid_points(8, 6, 18.0), truth);
    for (auto& c : corrs) {
      c.dst.x += rng.normal(0.0, 0.5);
      c.dst.y += rng.normal(0.0, 0.5);
    }
    frames.push_back(std::move(corrs));
  }
  RansacParams params;
  params.seed = 7;
  const RigCalibration rig = calibrate_rig(frames, params);
  CHECK(rig.frames_used == 10);
  CHECK(rig.rms_residual_px <= 1.0);
}

TEST_CASE("calibrate_rig rejects empty input") {
  RansacParams params;
  params.seed = 1;
  CHECK_THROWS_AS(calibrate_rig({}, params), std::invalid_argument);
}

TEST_CASE("correspondence and rig files round-trip") {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("comfortcam_calib_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const std::string cp = (dir / "corr.txt").string();
  std::vector<Correspondence> corrs{{{1.5, 2.25}, {3, 4}}, {{5, 6}, {7.125, 8}}};
  save_correspondences(corrs, cp, "test");
  const auto back = load_correspondences(cp);
  REQUIRE(back.size() == 2);
  CHECK(back[0].src.x == 1.5);
  CHECK(back[1].dst.x == 7.125);

  const std::string rp = (dir / "rig.txt").string();
  RigCalibration rig;
  rig.prior = make_h({0.125, 0, 1, 0, 0.125, -2, 0, 0, 1});
  rig.rms_residual_px = 0.25;
  rig.frames_used = 3;
  rig.inlier_fraction = 0.96;
  save_rig(rig, rp, "test");
  const RigCalibration rig2 = load_rig(rp);
  CHECK(rig2.prior.h == rig.prior.h);
  CHECK(rig2.rms_residual_px == 0.25);
  CHECK(rig2.frames_used == 3);
  CHECK(rig2.inlier_fraction == 0.96);
}
