#pragma once

#include <cstdint>
#include <vector>

namespace comfortcam {

/// Ordered samples with strictly increasing timestamps. Gaps (landmark-absent
/// frames) are simply missing entries; they are never interpolated.
struct TimeSeries {
  std::vector<std::int64_t> times_ms;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
};

/// Throws std::invalid_argument on length mismatch or non-increasing times.
void validate(const TimeSeries& s);

struct ConditioningReport {
  int n_outliers_removed = 0;
  std::vector<std::size_t> outlier_indices;   // sorted
  int window = 0;
};

/// Sliding median/MAD outlier rejection: a sample is flagged when
/// |x - median| > k * 1.4826 * max(MAD, eps) over the centred index window
/// (shrunk at the edges) and replaced by the window median. eps floors the
/// MAD at 0.01 in the series' units. Series shorter than 3 pass through
/// unchanged.
std::pair<TimeSeries, std::vector<bool>> hampel_filter(const TimeSeries& s,
                                                       int window = 5,
                                                       double k = 3.0,
                                                       double eps = 0.01);

/// Centred moving average. The window is the index window intersected with
/// a time gate of halfwidth*step*1.5 around the sample (step = median
/// successive timestamp delta), so it shrinks at the edges and across gaps
/// instead of averaging over them. Timestamps are unchanged.
TimeSeries moving_average(const TimeSeries& s, int window = 5);

/// hampel_filter then moving_average with the defaults.
std::pair<TimeSeries, ConditioningReport> condition_series(const TimeSeries& s);

}  // namespace comfortcam
