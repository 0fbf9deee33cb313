#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "comfortcam/conditioning.hpp"
#include "comfortcam/features_io.hpp"

namespace comfortcam {

/// Product-moment correlation. Requires equal lengths >= 3; throws
/// std::runtime_error("undefined correlation") when either side has zero
/// variance.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

/// Value of s at the nearest timestamp for each query time (ties to the
/// earlier sample). s must be non-empty.
std::vector<double> resample_nearest(const TimeSeries& s,
                                     const std::vector<std::int64_t>& times_ms);

struct CorrelationCell {
  std::optional<double> r;   // nullopt == undefined (zero variance)
  int n = 0;
};

/// Per-region, per-kind correlation against the room-temperature series
/// (resampled to each series' timestamps).
struct CorrelationTable {
  std::map<SeriesKey, CorrelationCell> cells;

  /// Region with the highest r for a kind; nullopt when every cell of that
  /// kind is undefined.
  std::optional<Region> best_region(RoiKind kind) const;
};

CorrelationTable correlation_table(const FeatureTable& features,
                                   const TimeSeries& room);

/// "region,kind,r,n" rows; undefined cells print r as "undefined". A
/// "# highest <kind>: <region>" comment per kind records the ordering.
std::string format_correlation_table(const CorrelationTable& t,
                                     const std::string& config);

struct PolyFit {
  std::vector<double> coefficients;   // on the [-1,1]-normalized abscissa
  double t_lo = 0.0, t_hi = 0.0;      // normalization interval in ms
  std::vector<double> fitted;         // at the input timestamps

  double evaluate(double t_ms) const;
};

/// Least-squares polynomial trend (default degree 6) via normal equations on
/// the [-1,1]-normalized abscissa. Requires n >= degree+1 distinct
/// timestamps.
PolyFit polyfit_trend(const TimeSeries& s, int degree = 6);

struct ReferenceReport {
  std::vector<double> per_sample_pct;   // |cam-ref|/ref * 100
  double mean_pct = 0.0;
  double max_abs_c = 0.0;
  int n_pairs = 0;
};

/// Nearest-timestamp alignment of camera vs reference (wearable) series
/// within the tolerance; per-sample percent errors with both sides in degC.
/// Throws std::runtime_error("no aligned pairs") when nothing aligns.
ReferenceReport compare_reference(const TimeSeries& camera,
                                  const TimeSeries& reference,
                                  std::int64_t align_tolerance_ms = 30'000);

}  // namespace comfortcam
