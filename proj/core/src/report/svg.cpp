#include "wikibox/report/svg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wikibox/ioutil.hpp"

namespace wikibox::report {

namespace {

constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 18;
constexpr int kMarginTop = 42;
constexpr int kMarginBottom = 52;

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) { return format_fixed(v, 2); }

struct Ticks {
  std::vector<double> values;
  double lo = 0.0;
  double hi = 1.0;
};

// Nice 1/2/5 tick steps covering [lo, hi] with roughly `count` marks.
Ticks nice_ticks(double lo, double hi, int count) {
  if (!(hi > lo)) {
    hi = lo + 1.0;
  }
  const double raw_step = (hi - lo) / std::max(count - 1, 1);
  const double mag = std::pow(10.0, std::floor(std::log10(raw_step)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (mag * m >= raw_step) {
      step = mag * m;
      break;
    }
  }
  Ticks ticks;
  ticks.lo = std::floor(lo / step) * step;
  ticks.hi = std::ceil(hi / step) * step;
  for (double v = ticks.lo; v <= ticks.hi + step * 0.5; v += step) {
    // Snap near-zero accumulation error so labels print cleanly.
    const double snapped = std::abs(v) < step * 1e-9 ? 0.0 : v;
    ticks.values.push_back(snapped);
  }
  return ticks;
}

std::string header(int width, int height, const std::string& title) {
  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
         "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " +
         std::to_string(width) + " " + std::to_string(height) + "\">\n";
  svg += "<rect width=\"" + std::to_string(width) + "\" height=\"" +
         std::to_string(height) + "\" fill=\"white\"/>\n";
  svg += "<text x=\"" + num(width / 2.0) +
         "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\">" +
         escape_xml(title) + "</text>\n";
  return svg;
}

std::string axis_labels(const std::string& x_label, const std::string& y_label, int width,
                        int height) {
  std::string svg;
  svg += "<text x=\"" + num((kMarginLeft + width - kMarginRight) / 2.0) + "\" y=\"" +
         num(height - 12.0) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
         escape_xml(x_label) + "</text>\n";
  svg += "<text x=\"18\" y=\"" + num((kMarginTop + height - kMarginBottom) / 2.0) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "transform=\"rotate(-90 18 " +
         num((kMarginTop + height - kMarginBottom) / 2.0) + ")\">" +
         escape_xml(y_label) + "</text>\n";
  return svg;
}

}  // namespace

std::string render_line_chart(const LineChartSpec& spec) {
  if (spec.points.empty()) {
    throw std::invalid_argument("render_line_chart: no points");
  }

  double x_min = spec.points.front().first, x_max = x_min;
  double y_min = spec.points.front().second, y_max = y_min;
  for (const auto& [x, y] : spec.points) {
    x_min = std::min(x_min, x);
    x_max = std::max(x_max, x);
    y_min = std::min(y_min, y);
    y_max = std::max(y_max, y);
  }
  const Ticks y_ticks = nice_ticks(y_min, y_max, 6);
  if (x_max == x_min) x_max = x_min + 1.0;

  const double plot_w = spec.width - kMarginLeft - kMarginRight;
  const double plot_h = spec.height - kMarginTop - kMarginBottom;
  auto x_pos = [&](double x) {
    const double f = (x - x_min) / (x_max - x_min);
    return kMarginLeft + (spec.x_reversed ? (1.0 - f) : f) * plot_w;
  };
  auto y_pos = [&](double y) {
    const double f = (y - y_ticks.lo) / (y_ticks.hi - y_ticks.lo);
    return kMarginTop + (1.0 - f) * plot_h;
  };

  std::string svg = header(spec.width, spec.height, spec.title);

  for (double v : y_ticks.values) {
    const double y = y_pos(v);
    svg += "<line x1=\"" + num(kMarginLeft) + "\" y1=\"" + num(y) + "\" x2=\"" +
           num(spec.width - kMarginRight) + "\" y2=\"" + num(y) +
           "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + num(kMarginLeft - 8.0) + "\" y=\"" + num(y + 4.0) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
           format_double(v) + "</text>\n";
  }

  const Ticks x_ticks = nice_ticks(x_min, x_max, 8);
  for (double v : x_ticks.values) {
    if (v < x_min || v > x_max) continue;
    const double x = x_pos(v);
    svg += "<line x1=\"" + num(x) + "\" y1=\"" + num(spec.height - kMarginBottom) +
           "\" x2=\"" + num(x) + "\" y2=\"" + num(spec.height - kMarginBottom + 5.0) +
           "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + num(x) + "\" y=\"" + num(spec.height - kMarginBottom + 18.0) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
           format_double(v) + "</text>\n";
  }

  svg += "<line x1=\"" + num(kMarginLeft) + "\" y1=\"" + num(kMarginTop) + "\" x2=\"" +
         num(kMarginLeft) + "\" y2=\"" + num(spec.height - kMarginBottom) +
         "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  svg += "<line x1=\"" + num(kMarginLeft) + "\" y1=\"" +
         num(spec.height - kMarginBottom) + "\" x2=\"" + num(spec.width - kMarginRight) +
         "\" y2=\"" + num(spec.height - kMarginBottom) +
         "\" stroke=\"black\" stroke-width=\"1\"/>\n";

  std::string points;
  for (const auto& [x, y] : spec.points) {
    if (!points.empty()) points += ' ';
    points += num(x_pos(x)) + "," + num(y_pos(y));
  }
  svg += "<polyline fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"2\" points=\"" +
         points + "\"/>\n";

  svg += axis_labels(spec.x_label, spec.y_label, spec.width, spec.height);
  svg += "</svg>\n";
  return svg;
}

std::string render_bar_chart(const BarChartSpec& spec) {
  if (spec.values.empty()) {
    throw std::invalid_argument("render_bar_chart: no values");
  }

  double y_max = 0.0;
  for (double v : spec.values) y_max = std::max(y_max, v);
  const Ticks y_ticks = nice_ticks(0.0, y_max > 0.0 ? y_max : 1.0, 6);

  const double plot_w = spec.width - kMarginLeft - kMarginRight;
  const double plot_h = spec.height - kMarginTop - kMarginBottom;
  const std::size_t n = spec.values.size();
  const double slot = plot_w / static_cast<double>(n);
  const double bar_w = slot * 0.8;
  auto y_pos = [&](double y) {
    const double f = (y - y_ticks.lo) / (y_ticks.hi - y_ticks.lo);
    return kMarginTop + (1.0 - f) * plot_h;
  };

  std::string svg = header(spec.width, spec.height, spec.title);

  for (double v : y_ticks.values) {
    const double y = y_pos(v);
    svg += "<line x1=\"" + num(kMarginLeft) + "\" y1=\"" + num(y) + "\" x2=\"" +
           num(spec.width - kMarginRight) + "\" y2=\"" + num(y) +
           "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + num(kMarginLeft - 8.0) + "\" y=\"" + num(y + 4.0) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
           format_double(v) + "</text>\n";
  }

  const double base = y_pos(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = kMarginLeft + slot * static_cast<double>(i) + (slot - bar_w) / 2.0;
    const double top = y_pos(spec.values[i]);
    svg += "<rect x=\"" + num(x) + "\" y=\"" + num(top) + "\" width=\"" + num(bar_w) +
           "\" height=\"" + num(std::max(0.0, base - top)) + "\" fill=\"#1f6fb2\"/>\n";
  }

  const std::size_t label_every = n <= 12 ? 1 : (n + 11) / 12;
  for (std::size_t i = 0; i < n; i += label_every) {
    const double x = kMarginLeft + slot * (static_cast<double>(i) + 0.5);
    svg += "<text x=\"" + num(x) + "\" y=\"" + num(spec.height - kMarginBottom + 18.0) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
           std::to_string(i + 1) + "</text>\n";
  }

  svg += "<line x1=\"" + num(kMarginLeft) + "\" y1=\"" + num(kMarginTop) + "\" x2=\"" +
         num(kMarginLeft) + "\" y2=\"" + num(spec.height - kMarginBottom) +
         "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  svg += "<line x1=\"" + num(kMarginLeft) + "\" y1=\"" +
         num(spec.height - kMarginBottom) + "\" x2=\"" + num(spec.width - kMarginRight) +
         "\" y2=\"" + num(spec.height - kMarginBottom) +
         "\" stroke=\"black\" stroke-width=\"1\"/>\n";

  svg += axis_labels(spec.x_label, spec.y_label, spec.width, spec.height);
  svg += "</svg>\n";
  return svg;
}

}  // namespace wikibox::report
