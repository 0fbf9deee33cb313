#include "comfortcam/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "comfortcam/io_util.hpp"

namespace comfortcam {

namespace {

constexpr double kWidth = 860.0;
constexpr double kHeight = 520.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 30.0;
constexpr double kMarginTop = 50.0;
constexpr double kMarginBottom = 55.0;

const char* kPalette[] = {"#1f6fb2", "#d1495b", "#3a7d44", "#8d6a9f",
                          "#c77d2e", "#4a4a4a"};

struct Axis {
  double lo = 0.0, hi = 1.0;

  double place(double v, double a, double b) const {
    const double span = hi > lo ? hi - lo : 1.0;
    return a + (v - lo) / span * (b - a);
  }
};

std::string esc(const std::string& s) {
  std::string out;
  for (const char c : s) {
    if (c == '&') out += "&amp;";
    else if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '"') out += "&quot;";
    else out += c;
  }
  return out;
}

std::string header(const std::string& title, const std::string& config) {
  std::string out =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"860\" height=\"520\" "
      "viewBox=\"0 0 860 520\" font-family=\"sans-serif\">\n";
  out += "<!-- comfortcam; config: " + esc(config) + " -->\n";
  out += "<rect width=\"860\" height=\"520\" fill=\"white\"/>\n";
  out += "<text x=\"430\" y=\"28\" text-anchor=\"middle\" font-size=\"16\">" +
         esc(title) + "</text>\n";
  return out;
}

std::string axes(const Axis& x, const Axis& y, const std::string& x_label,
                 const std::string& y_label) {
  std::string out;
  const double x0 = kMarginLeft, x1 = kWidth - kMarginRight;
  const double y0 = kHeight - kMarginBottom, y1 = kMarginTop;
  out += "<line x1=\"" + fmt_fixed(x0, 1) + "\" y1=\"" + fmt_fixed(y0, 1) +
         "\" x2=\"" + fmt_fixed(x1, 1) + "\" y2=\"" + fmt_fixed(y0, 1) +
         "\" stroke=\"black\"/>\n";
  out += "<line x1=\"" + fmt_fixed(x0, 1) + "\" y1=\"" + fmt_fixed(y0, 1) +
         "\" x2=\"" + fmt_fixed(x0, 1) + "\" y2=\"" + fmt_fixed(y1, 1) +
         "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double fx = x.lo + (x.hi - x.lo) * k / 4.0;
    const double px = x.place(fx, x0, x1);
    out += "<text x=\"" + fmt_fixed(px, 1) + "\" y=\"" + fmt_fixed(y0 + 18, 1) +
           "\" text-anchor=\"middle\" font-size=\"11\">" + fmt_double(fx) +
           "</text>\n";
    const double fy = y.lo + (y.hi - y.lo) * k / 4.0;
    const double py = y.place(fy, y0, y1);
    out += "<text x=\"" + fmt_fixed(x0 - 8, 1) + "\" y=\"" + fmt_fixed(py + 4, 1) +
           "\" text-anchor=\"end\" font-size=\"11\">" + fmt_double(fy) +
           "</text>\n";
  }
  out += "<text x=\"" + fmt_fixed(0.5 * (x0 + x1), 1) + "\" y=\"" +
         fmt_fixed(kHeight - 14, 1) +
         "\" text-anchor=\"middle\" font-size=\"12\">" + esc(x_label) +
         "</text>\n";
  out += "<text x=\"18\" y=\"" + fmt_fixed(0.5 * (y0 + y1), 1) +
         "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 18 " +
         fmt_fixed(0.5 * (y0 + y1), 1) + ")\">" + esc(y_label) + "</text>\n";
  return out;
}

}  // namespace

std::string svg_series_plot(const std::vector<SvgSeries>& curves,
                            const std::string& title,
                            const std::string& config) {
  Axis x, y;
  bool first = true;
  for (const auto& c : curves) {
    for (std::size_t i = 0; i < c.series.size(); ++i) {
      const double t = static_cast<double>(c.series.times_ms[i]) / 1000.0;
      const double v = c.series.values[i];
      if (first) {
        x = {t, t};
        y = {v, v};
        first = false;
      }
      x.lo = std::min(x.lo, t);
      x.hi = std::max(x.hi, t);
      y.lo = std::min(y.lo, v);
      y.hi = std::max(y.hi, v);
    }
  }
  if (y.hi == y.lo) y.hi = y.lo + 1.0;
  const double pad = 0.05 * (y.hi - y.lo);
  y.lo -= pad;
  y.hi += pad;

  std::string out = header(title, config);
  out += axes(x, y, "time [s]", "value");
  const double x0 = kMarginLeft, x1 = kWidth - kMarginRight;
  const double y0 = kHeight - kMarginBottom, y1 = kMarginTop;
  for (std::size_t c = 0; c < curves.size(); ++c) {
    const auto& s = curves[c].series;
    std::string pts;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double px = x.place(static_cast<double>(s.times_ms[i]) / 1000.0, x0, x1);
      const double py = y.place(s.values[i], y0, y1);
      pts += fmt_fixed(px, 2) + "," + fmt_fixed(py, 2) + " ";
    }
    out += "<polyline fill=\"none\" stroke=\"" +
           std::string(kPalette[c % 6]) + "\" stroke-width=\"1.5\" points=\"" +
           pts + "\" data-label=\"" + esc(curves[c].label) + "\"/>\n";
    out += "<text x=\"" + fmt_fixed(x1 - 150, 1) + "\" y=\"" +
           fmt_fixed(kMarginTop + 16.0 * (c + 1), 1) + "\" font-size=\"12\" fill=\"" +
           kPalette[c % 6] + "\">" + esc(curves[c].label) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

std::string svg_trend_plot(const TimeSeries& samples, const PolyFit& fit,
                           const std::string& title,
                           const std::string& config) {
  SvgSeries raw{"samples", samples};
  TimeSeries fitted;
  fitted.times_ms = samples.times_ms;
  fitted.values = fit.fitted;
  SvgSeries trend{"degree-" + std::to_string(fit.coefficients.size() - 1) +
                      " trend",
                  fitted};

  // Scatter for the samples, polyline for the trend.
  Axis x, y;
  x.lo = static_cast<double>(samples.times_ms.front()) / 1000.0;
  x.hi = static_cast<double>(samples.times_ms.back()) / 1000.0;
  y.lo = *std::min_element(samples.values.begin(), samples.values.end());
  y.hi = *std::max_element(samples.values.begin(), samples.values.end());
  if (y.hi == y.lo) y.hi = y.lo + 1.0;
  const double pad = 0.05 * (y.hi - y.lo);
  y.lo -= pad;
  y.hi += pad;

  std::string out = header(title, config);
  out += axes(x, y, "time [s]", "value");
  const double x0 = kMarginLeft, x1 = kWidth - kMarginRight;
  const double y0 = kHeight - kMarginBottom, y1 = kMarginTop;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double px = x.place(static_cast<double>(samples.times_ms[i]) / 1000.0, x0, x1);
    const double py = y.place(samples.values[i], y0, y1);
    out += "<circle cx=\"" + fmt_fixed(px, 2) + "\" cy=\"" + fmt_fixed(py, 2) +
           "\" r=\"1.6\" fill=\"#1f6fb2\" data-value=\"" +
           fmt_double(samples.values[i]) + "\"/>\n";
  }
  std::string pts;
  for (std::size_t i = 0; i < fitted.size(); ++i) {
    const double px = x.place(static_cast<double>(fitted.times_ms[i]) / 1000.0, x0, x1);
    const double py = y.place(fitted.values[i], y0, y1);
    pts += fmt_fixed(px, 2) + "," + fmt_fixed(py, 2) + " ";
  }
  out += "<polyline fill=\"none\" stroke=\"#d1495b\" stroke-width=\"2\" points=\"" +
         pts + "\" data-label=\"" + esc(trend.label) + "\"/>\n";
  out += "</svg>\n";
  return out;
}

std::string svg_confusion_plot(const EvalReport& report,
                               const std::string& title,
                               const std::string& config) {
  const int k = static_cast<int>(report.labels.size());
  int max_count = 1;
  for (const auto& row : report.confusion)
    for (const int c : row) max_count = std::max(max_count, c);

  const double grid_x = 180.0, grid_y = 90.0;
  const double cell = std::min(110.0, 360.0 / k);

  std::string out = header(title, config);
  for (int r = 0; r < k; ++r) {
    out += "<text x=\"" + fmt_fixed(grid_x - 10, 1) + "\" y=\"" +
           fmt_fixed(grid_y + cell * r + cell / 2 + 4, 1) +
           "\" text-anchor=\"end\" font-size=\"12\">" +
           label_name(report.labels[r]) + "</text>\n";
    out += "<text x=\"" + fmt_fixed(grid_x + cell * r + cell / 2, 1) + "\" y=\"" +
           fmt_fixed(grid_y - 12, 1) +
           "\" text-anchor=\"middle\" font-size=\"12\">" +
           label_name(report.labels[r]) + "</text>\n";
  }
  for (int r = 0; r < k; ++r) {
    for (int c = 0; c < k; ++c) {
      const int count = report.confusion[r][c];
      const double shade = 1.0 - 0.85 * count / max_count;
      const int gray = static_cast<int>(std::lround(255.0 * shade));
      char color[16];
      std::snprintf(color, sizeof(color), "#%02x%02x%02x", gray, gray, 255);
      out += "<rect x=\"" + fmt_fixed(grid_x + cell * c, 1) + "\" y=\"" +
             fmt_fixed(grid_y + cell * r, 1) + "\" width=\"" +
             fmt_fixed(cell, 1) + "\" height=\"" + fmt_fixed(cell, 1) +
             "\" fill=\"" + color + "\" stroke=\"#666\"/>\n";
      const bool dark = shade < 0.5;
      out += "<text x=\"" + fmt_fixed(grid_x + cell * c + cell / 2, 1) +
             "\" y=\"" + fmt_fixed(grid_y + cell * r + cell / 2 + 5, 1) +
             "\" text-anchor=\"middle\" font-size=\"13\" fill=\"" +
             (dark ? "white" : "black") + "\" data-count=\"" +
             std::to_string(count) + "\">" + std::to_string(count) +
             "</text>\n";
    }
  }
  out += "<text x=\"" + fmt_fixed(grid_x + cell * k / 2, 1) + "\" y=\"" +
         fmt_fixed(grid_y + cell * k + 30, 1) +
         "\" text-anchor=\"middle\" font-size=\"12\">predicted</text>\n";
  out += "<text x=\"" + fmt_fixed(grid_x - 60, 1) + "\" y=\"" +
         fmt_fixed(grid_y + cell * k / 2, 1) +
         "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 " +
         fmt_fixed(grid_x - 60, 1) + " " + fmt_fixed(grid_y + cell * k / 2, 1) +
         ")\">true</text>\n";
  out += "</svg>\n";
  return out;
}

}  // namespace comfortcam
