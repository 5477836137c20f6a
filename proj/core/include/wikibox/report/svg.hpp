#pragma once

#include <string>
#include <utility>
#include <vector>

namespace wikibox::report {

// Dependency-free SVG renderers. All numbers pass through fixed-precision
// formatting, so equal inputs give byte-equal documents.

struct LineChartSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<std::pair<double, double>> points;
  bool x_reversed = false;  // largest x at the left edge
  int width = 760;
  int height = 440;
};

std::string render_line_chart(const LineChartSpec& spec);

struct BarChartSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<double> values;  // bars at ranks 1..n
  int width = 760;
  int height = 440;
};

std::string render_bar_chart(const BarChartSpec& spec);

}  // namespace wikibox::report
