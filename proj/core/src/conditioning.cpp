#include "comfortcam/conditioning.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace comfortcam {

void validate(const TimeSeries& s) {
  if (s.times_ms.size() != s.values.size())
    throw std::invalid_argument("time series length mismatch");
  for (std::size_t i = 1; i < s.times_ms.size(); ++i)
    if (s.times_ms[i] <= s.times_ms[i - 1])
      throw std::invalid_argument("timestamps must be strictly increasing");
}

namespace {

double median_of(std::vector<double> v) {
  const std::size_t n = v.size();
  std::sort(v.begin(), v.end());
  if (n % 2 == 1) return v[n / 2];
  return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::int64_t nominal_step(const TimeSeries& s) {
  if (s.size() < 2) return 1;
  std::vector<std::int64_t> deltas(s.size() - 1);
  for (std::size_t i = 1; i < s.size(); ++i)
    deltas[i - 1] = s.times_ms[i] - s.times_ms[i - 1];
  std::sort(deltas.begin(), deltas.end());
  return deltas[deltas.size() / 2];
}

}  // namespace

std::pair<TimeSeries, std::vector<bool>> hampel_filter(const TimeSeries& s,
                                                       int window, double k,
                                                       double eps) {
  validate(s);
  if (window < 3 || window % 2 == 0)
    throw std::invalid_argument("hampel window must be odd and >= 3");
  if (k <= 0.0) throw std::invalid_argument("hampel k must be > 0");

  TimeSeries out = s;
  std::vector<bool> mask(s.size(), false);
  if (s.size() < 3) return {out, mask};

  const int half = window / 2;
  const std::size_t n = s.size();
  std::vector<double> win;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= static_cast<std::size_t>(half) ? i - half : 0;
    const std::size_t hi = std::min(n - 1, i + half);
    win.assign(s.values.begin() + static_cast<std::ptrdiff_t>(lo),
               s.values.begin() + static_cast<std::ptrdiff_t>(hi) + 1);
    const double med = median_of(win);
    for (double& w : win) w = std::abs(w - med);
    const double mad = median_of(win);
    const double scale = 1.4826 * std::max(mad, eps);
    if (std::abs(s.values[i] - med) > k * scale) {
      out.values[i] = med;
      mask[i] = true;
    }
  }
  return {out, mask};
}

TimeSeries moving_average(const TimeSeries& s, int window) {
  validate(s);
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  TimeSeries out = s;
  if (s.size() < 2 || window == 1) return out;

  const int half = (window - 1) / 2;
  const std::size_t n = s.size();
  const double gate = half * static_cast<double>(nominal_step(s)) * 1.5;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= static_cast<std::size_t>(half) ? i - half : 0;
    const std::size_t hi = std::min(n - 1, i + half);
    double sum = 0.0;
    int count = 0;
    for (std::size_t j = lo; j <= hi; ++j) {
      if (std::abs(static_cast<double>(s.times_ms[j] - s.times_ms[i])) > gate)
        continue;
      sum += s.values[j];
      ++count;
    }
    out.values[i] = sum / count;
  }
  return out;
}

std::pair<TimeSeries, ConditioningReport> condition_series(const TimeSeries& s) {
  constexpr int kWindow = 5;
  auto [filtered, mask] = hampel_filter(s, kWindow);
  ConditioningReport report;
  report.window = kWindow;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) {
      report.outlier_indices.push_back(i);
      ++report.n_outliers_removed;
    }
  }
  return {moving_average(filtered, kWindow), report};
}

}  // namespace comfortcam
