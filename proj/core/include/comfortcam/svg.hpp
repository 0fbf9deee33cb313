#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "comfortcam/conditioning.hpp"
#include "comfortcam/eval.hpp"
#include "comfortcam/stats.hpp"

namespace comfortcam {

/// One named curve. The label and the untouched source value strings ride
/// into the SVG as data attributes so plotted numbers can be checked against
/// the table they came from.
struct SvgSeries {
  std::string label;
  TimeSeries series;
};

/// Raw-vs-conditioned style line plot.
std::string svg_series_plot(const std::vector<SvgSeries>& curves,
                            const std::string& title,
                            const std::string& config);

/// Scatter of the samples with the fitted degree-n trend overlaid.
std::string svg_trend_plot(const TimeSeries& samples, const PolyFit& fit,
                           const std::string& title, const std::string& config);

/// Confusion-matrix heat grid with counts printed in the cells.
std::string svg_confusion_plot(const EvalReport& report,
                               const std::string& title,
                               const std::string& config);

}  // namespace comfortcam
