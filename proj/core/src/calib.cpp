#include "comfortcam/calib.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "comfortcam/error.hpp"
#include "comfortcam/io_util.hpp"
#include "comfortcam/rng.hpp"

namespace comfortcam {

namespace {

struct NormTransform {
  // x' = (x - cx) * s, y' = (y - cy) * s
  double cx = 0.0, cy = 0.0, s = 1.0;

  Point2 apply(const Point2& p) const { return {(p.x - cx) * s, (p.y - cy) * s}; }

  Homography matrix() const {
    Homography t;
    t.h = {s, 0, -cx * s, 0, s, -cy * s, 0, 0, 1};
    return t;
  }
};

// Hartley normalization: centroid at origin, mean distance sqrt(2).
NormTransform normalizer(const std::vector<Correspondence>& corrs, bool src) {
  NormTransform t;
  const double n = static_cast<double>(corrs.size());
  for (const auto& c : corrs) {
    const Point2& p = src ? c.src : c.dst;
    t.cx += p.x;
    t.cy += p.y;
  }
  t.cx /= n;
  t.cy /= n;
  double mean_dist = 0.0;
  for (const auto& c : corrs) {
    const Point2& p = src ? c.src : c.dst;
    mean_dist += std::hypot(p.x - t.cx, p.y - t.cy);
  }
  mean_dist /= n;
  t.s = mean_dist > 0.0 ? std::sqrt(2.0) / mean_dist : 1.0;
  return t;
}

}  // namespace

Homography estimate_homography_dlt(const std::vector<Correspondence>& corrs) {
  const std::size_t n = corrs.size();
  if (n < 4)
    throw std::invalid_argument("at least 4 correspondences required, got " +
                                std::to_string(n));
  for (const auto& c : corrs) {
    if (!std::isfinite(c.src.x) || !std::isfinite(c.src.y) ||
        !std::isfinite(c.dst.x) || !std::isfinite(c.dst.y))
      throw std::invalid_argument("non-finite correspondence coordinates");
  }

  const NormTransform ts = normalizer(corrs, true);
  const NormTransform td = normalizer(corrs, false);

  // Null vector of the 2n x 9 design matrix via the 9x9 normal matrix
  // eigen-decomposition (equivalent to the SVD null vector).
  Eigen::Matrix<double, 9, 9> m = Eigen::Matrix<double, 9, 9>::Zero();
  Eigen::Matrix<double, 1, 9> row1, row2;
  for (const auto& c : corrs) {
    const Point2 s = ts.apply(c.src);
    const Point2 d = td.apply(c.dst);
    row1 << -s.x, -s.y, -1, 0, 0, 0, d.x * s.x, d.x * s.y, d.x;
    row2 << 0, 0, 0, -s.x, -s.y, -1, d.y * s.x, d.y * s.y, d.y;
    m += row1.transpose() * row1;
    m += row2.transpose() * row2;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 9, 9>> eig(m);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("eigen decomposition failed in DLT");
  // Eigenvalues ascending; singular values of the design matrix are their
  // square roots. A vanishing second-smallest singular value means the null
  // space has dimension >= 2: no unique homography.
  const auto& ev = eig.eigenvalues();
  const double sv_small2 = std::sqrt(std::max(0.0, ev[1]));
  const double sv_large = std::sqrt(std::max(0.0, ev[8]));
  if (sv_small2 <= 1e-9 * sv_large)
    throw std::runtime_error("degenerate configuration");

  const auto hvec = eig.eigenvectors().col(0);
  Homography hn;
  for (int i = 0; i < 9; ++i) hn.h[i] = hvec[i];

  // Denormalize: H = Td^-1 * Hn * Ts.
  const Homography h = td.matrix().inverse().composed(hn).composed(ts.matrix());
  const Homography out = h.normalized();
  if (!is_invertible(out)) throw std::runtime_error("degenerate configuration");
  return out;
}

double symmetric_error_px(const Homography& h, const Homography& h_inv,
                          const Correspondence& c) {
  const Point2 fwd = h.apply(c.src);
  const Point2 bwd = h_inv.apply(c.dst);
  const double ef = std::hypot(fwd.x - c.dst.x, fwd.y - c.dst.y);
  const double eb = std::hypot(bwd.x - c.src.x, bwd.y - c.src.y);
  return 0.5 * (ef + eb);
}

RansacResult ransac_homography(const std::vector<Correspondence>& corrs,
                               const RansacParams& params) {
  const std::size_t n = corrs.size();
  if (n < 4)
    throw std::invalid_argument("at least 4 correspondences required, got " +
                                std::to_string(n));
  if (params.inlier_px <= 0.0)
    throw std::invalid_argument("inlier_px must be > 0");

  Rng rng(derive_seed(params.seed, 0x52414e53ull));  // "RANS"

  auto score = [&](const Homography& h, std::vector<bool>& mask, int& count,
                   double& mean_err) {
    const Homography inv = h.inverse();
    mask.assign(n, false);
    count = 0;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = symmetric_error_px(h, inv, corrs[i]);
      if (e < params.inlier_px) {
        mask[i] = true;
        ++count;
        sum += e;
      }
    }
    mean_err = count > 0 ? sum / count : 0.0;
  };

  std::vector<bool> best_mask;
  Homography best_h;
  int best_count = 0;
  double best_err = 0.0;
  std::vector<Correspondence> minimal(4);
  std::array<std::size_t, 4> idx{};

  for (int iter = 0; iter < params.max_iter; ++iter) {
    // Sample 4 distinct indices.
    for (int k = 0; k < 4; ++k) {
      bool fresh;
      do {
        idx[k] = static_cast<std::size_t>(rng.uniform_int(n));
        fresh = true;
        for (int j = 0; j < k; ++j) fresh = fresh && idx[j] != idx[k];
      } while (!fresh);
      minimal[k] = corrs[idx[k]];
    }
    Homography h;
    try {
      h = estimate_homography_dlt(minimal);
    } catch (const std::runtime_error&) {
      continue;  // degenerate sample
    }
    std::vector<bool> mask;
    int count = 0;
    double err = 0.0;
    try {
      score(h, mask, count, err);
    } catch (const std::domain_error&) {
      continue;  // non-invertible model
    }
    if (count > best_count || (count == best_count && err < best_err)) {
      best_count = count;
      best_err = err;
      best_h = h;
      best_mask = std::move(mask);
    }
  }

  if (best_count < std::max(params.min_inliers, 4))
    throw std::runtime_error("registration failed");

  // Refit on the consensus set, then re-select inliers until the set is
  // stable so the returned mask is consistent with the returned model. The
  // minimal-sample model is the fallback if refitting degenerates.
  RansacResult res;
  res.homography = best_h;
  res.inlier_mask = best_mask;
  res.n_inliers = best_count;
  res.mean_error_px = best_err;
  std::vector<bool> mask = best_mask;
  for (int round = 0; round < 3; ++round) {
    std::vector<Correspondence> inliers;
    inliers.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
      if (mask[i]) inliers.push_back(corrs[i]);
    Homography h;
    try {
      h = estimate_homography_dlt(inliers);
    } catch (const std::runtime_error&) {
      break;  // keep previous round's model
    }
    std::vector<bool> new_mask;
    int count = 0;
    double err = 0.0;
    try {
      score(h, new_mask, count, err);
    } catch (const std::domain_error&) {
      break;
    }
    if (count < 4) break;
    res.homography = h;
    res.inlier_mask = new_mask;
    res.n_inliers = count;
    res.mean_error_px = err;
    if (new_mask == mask) break;
    mask = std::move(new_mask);
  }
  return res;
}

RigCalibration calibrate_rig(
    const std::vector<std::vector<Correspondence>>& frame_sets,
    const RansacParams& params) {
  if (frame_sets.empty())
    throw std::invalid_argument("no correspondence frames supplied");
  std::vector<Correspondence> pooled;
  for (const auto& fs : frame_sets) {
    if (fs.size() < 4)
      throw std::invalid_argument(
          "every correspondence frame needs >= 4 points");
    pooled.insert(pooled.end(), fs.begin(), fs.end());
  }

  const RansacResult r = ransac_homography(pooled, params);

  RigCalibration rig;
  rig.prior = r.homography;
  rig.frames_used = static_cast<int>(frame_sets.size());
  rig.inlier_fraction =
      static_cast<double>(r.n_inliers) / static_cast<double>(pooled.size());
  const Homography inv = r.homography.inverse();
  double ss = 0.0;
  for (std::size_t i = 0; i < pooled.size(); ++i) {
    if (!r.inlier_mask[i]) continue;
    const double e = symmetric_error_px(r.homography, inv, pooled[i]);
    ss += e * e;
  }
  rig.rms_residual_px = std::sqrt(ss / r.n_inliers);
  return rig;
}

std::vector<Correspondence> load_correspondences(const std::string& path) {
  std::vector<Correspondence> out;
  const auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string line = trim(lines[i]);
    if (line.empty() || line[0] == '#') continue;
    const auto f = split_ws(line);
    const std::string ctx = path + ":" + std::to_string(i + 1);
    if (f.size() != 4)
      throw ParseError(ctx + ": expected 'sx sy dx dy'");
    Correspondence c;
    c.src = {parse_double(f[0], ctx), parse_double(f[1], ctx)};
    c.dst = {parse_double(f[2], ctx), parse_double(f[3], ctx)};
    out.push_back(c);
  }
  return out;
}

void save_correspondences(const std::vector<Correspondence>& corrs,
                          const std::string& path, const std::string& config) {
  std::string out = provenance_header(config);
  for (const auto& c : corrs) {
    out += fmt_double(c.src.x) + " " + fmt_double(c.src.y) + " " +
           fmt_double(c.dst.x) + " " + fmt_double(c.dst.y) + "\n";
  }
  write_file(path, out);
}

RigCalibration load_rig(const std::string& path) {
  RigCalibration rig;
  bool have_h = false;
  const auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string line = trim(lines[i]);
    if (line.empty() || line[0] == '#') continue;
    const auto sp = line.find_first_of(" \t");
    if (sp == std::string::npos)
      throw ParseError(path + ":" + std::to_string(i + 1) + ": expected "
                       "'key value'");
    const std::string key = line.substr(0, sp);
    const std::string value = trim(line.substr(sp + 1));
    const std::string ctx = path + " " + key;
    if (key == "homography") {
      rig.prior = parse_homography(value, ctx);
      have_h = true;
    } else if (key == "rms_residual_px") {
      rig.rms_residual_px = parse_double(value, ctx);
    } else if (key == "frames_used") {
      rig.frames_used = static_cast<int>(parse_int(value, ctx));
    } else if (key == "inlier_fraction") {
      rig.inlier_fraction = parse_double(value, ctx);
    } else {
      throw ParseError(ctx + ": unknown key");
    }
  }
  if (!have_h) throw ParseError(path + ": missing homography");
  if (!is_invertible(rig.prior))
    throw ParseError(path + ": prior homography is not invertible");
  return rig;
}

void save_rig(const RigCalibration& rig, const std::string& path,
              const std::string& config) {
  std::string out = provenance_header(config);
  out += "homography " + format_homography(rig.prior) + "\n";
  out += "rms_residual_px " + fmt_double(rig.rms_residual_px) + "\n";
  out += "frames_used " + std::to_string(rig.frames_used) + "\n";
  out += "inlier_fraction " + fmt_double(rig.inlier_fraction) + "\n";
  write_file(path, out);
}

}  // namespace comfortcam
