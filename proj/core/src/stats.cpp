#include "comfortcam/stats.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "comfortcam/io_util.hpp"

namespace comfortcam {

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size())
    throw std::invalid_argument("pearson needs equal-length series");
  const std::size_t n = x.size();
  if (n < 3) throw std::invalid_argument("pearson needs at least 3 samples");

  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw std::runtime_error("undefined correlation");
  double r = sxy / std::sqrt(sxx * syy);
  if (r > 1.0) r = 1.0;
  if (r < -1.0) r = -1.0;
  return r;
}

std::vector<double> resample_nearest(const TimeSeries& s,
                                     const std::vector<std::int64_t>& times_ms) {
  validate(s);
  if (s.size() == 0)
    throw std::invalid_argument("cannot resample an empty series");
  std::vector<double> out;
  out.reserve(times_ms.size());
  for (const std::int64_t t : times_ms) {
    const auto it = std::lower_bound(s.times_ms.begin(), s.times_ms.end(), t);
    if (it == s.times_ms.begin()) {
      out.push_back(s.values.front());
    } else if (it == s.times_ms.end()) {
      out.push_back(s.values.back());
    } else {
      const std::size_t hi = static_cast<std::size_t>(it - s.times_ms.begin());
      const std::size_t lo = hi - 1;
      // Ties go to the earlier sample.
      out.push_back(t - s.times_ms[lo] <= s.times_ms[hi] - t ? s.values[lo]
                                                             : s.values[hi]);
    }
  }
  return out;
}

std::optional<Region> CorrelationTable::best_region(RoiKind kind) const {
  std::optional<Region> best;
  double best_r = 0.0;
  for (const auto& [key, cell] : cells) {
    if (key.kind != kind || !cell.r) continue;
    if (!best || *cell.r > best_r) {
      best = key.region;
      best_r = *cell.r;
    }
  }
  return best;
}

CorrelationTable correlation_table(const FeatureTable& features,
                                   const TimeSeries& room) {
  CorrelationTable t;
  for (const auto& [key, series] : split_series(features)) {
    CorrelationCell cell;
    cell.n = static_cast<int>(series.size());
    const std::vector<double> room_at = resample_nearest(room, series.times_ms);
    try {
      cell.r = pearson(series.values, room_at);
    } catch (const std::exception&) {
      cell.r = std::nullopt;
    }
    t.cells[key] = cell;
  }
  return t;
}

std::string format_correlation_table(const CorrelationTable& t,
                                     const std::string& config) {
  std::string out = provenance_header(config);
  out += "# columns: region,kind,r,n\n";
  for (const RoiKind kind : {RoiKind::SkinTemperatureC, RoiKind::PixelIntensity}) {
    const auto best = t.best_region(kind);
    bool any = false;
    for (const auto& [key, cell] : t.cells) any = any || key.kind == kind;
    if (any)
      out += "# highest " + roi_kind_name(kind) + ": " +
             (best ? region_name(*best) : std::string("undefined")) + "\n";
  }
  for (const auto& [key, cell] : t.cells) {
    out += region_name(key.region) + "," + roi_kind_name(key.kind) + ",";
    out += cell.r ? fmt_double(*cell.r) : std::string("undefined");
    out += "," + std::to_string(cell.n) + "\n";
  }
  return out;
}

double PolyFit::evaluate(double t_ms) const {
  const double span = t_hi > t_lo ? t_hi - t_lo : 1.0;
  const double u = 2.0 * (t_ms - t_lo) / span - 1.0;
  double acc = 0.0;
  for (std::size_t i = coefficients.size(); i-- > 0;)
    acc = acc * u + coefficients[i];
  return acc;
}

PolyFit polyfit_trend(const TimeSeries& s, int degree) {
  validate(s);   // strictly increasing timestamps => no duplicates
  if (degree < 0) throw std::invalid_argument("degree must be >= 0");
  const std::size_t n = s.size();
  const std::size_t terms = static_cast<std::size_t>(degree) + 1;
  if (n < terms)
    throw std::invalid_argument("need at least degree+1 samples, got " +
                                std::to_string(n));

  PolyFit fit;
  fit.t_lo = static_cast<double>(s.times_ms.front());
  fit.t_hi = static_cast<double>(s.times_ms.back());
  const double span = fit.t_hi > fit.t_lo ? fit.t_hi - fit.t_lo : 1.0;

  Eigen::MatrixXd a(n, terms);
  Eigen::VectorXd b(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = 2.0 * (s.times_ms[i] - fit.t_lo) / span - 1.0;
    double p = 1.0;
    for (std::size_t j = 0; j < terms; ++j) {
      a(i, j) = p;
      p *= u;
    }
    b(i) = s.values[i];
  }

  const Eigen::MatrixXd ata = a.transpose() * a;
  const Eigen::VectorXd atb = a.transpose() * b;
  Eigen::LDLT<Eigen::MatrixXd> solver(ata);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("rank-deficient polynomial fit");
  const Eigen::VectorXd c = solver.solve(atb);

  fit.coefficients.assign(c.data(), c.data() + terms);
  fit.fitted.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    fit.fitted[i] = fit.evaluate(static_cast<double>(s.times_ms[i]));
  return fit;
}

ReferenceReport compare_reference(const TimeSeries& camera,
                                  const TimeSeries& reference,
                                  std::int64_t align_tolerance_ms) {
  validate(camera);
  validate(reference);
  ReferenceReport rep;
  for (std::size_t i = 0; i < camera.size(); ++i) {
    const std::int64_t t = camera.times_ms[i];
    const auto it = std::lower_bound(reference.times_ms.begin(),
                                     reference.times_ms.end(), t);
    std::int64_t best_dt = std::numeric_limits<std::int64_t>::max();
    std::size_t best_j = 0;
    if (it != reference.times_ms.end()) {
      best_j = static_cast<std::size_t>(it - reference.times_ms.begin());
      best_dt = *it - t;
    }
    if (it != reference.times_ms.begin()) {
      const std::size_t j = static_cast<std::size_t>(it - reference.times_ms.begin()) - 1;
      const std::int64_t dt = t - reference.times_ms[j];
      if (dt < best_dt) {
        best_dt = dt;
        best_j = j;
      }
    }
    if (best_dt > align_tolerance_ms) continue;
    const double cam = camera.values[i];
    const double ref = reference.values[best_j];
    if (ref == 0.0) continue;  // percent error undefined at 0 degC reference
    rep.per_sample_pct.push_back(std::abs(cam - ref) / std::abs(ref) * 100.0);
    rep.max_abs_c = std::max(rep.max_abs_c, std::abs(cam - ref));
  }
  rep.n_pairs = static_cast<int>(rep.per_sample_pct.size());
  if (rep.n_pairs == 0) throw std::runtime_error("no aligned pairs");
  double sum = 0.0;
  for (const double p : rep.per_sample_pct) sum += p;
  rep.mean_pct = sum / rep.n_pairs;
  return rep;
}

}  // namespace comfortcam
