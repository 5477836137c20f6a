#pragma once

#include <cstdint>
#include <vector>

#include "wikibox/dataset.hpp"
#include "wikibox/pageviews.hpp"

namespace wikibox::model {

// Regression input at one day offset t: screens and cumulative views per
// film, revenues as targets, row order equal to dataset order.
struct DesignMatrix {
  int t = 0;
  int window_start = 0;
  std::vector<double> screens;    // x_1
  std::vector<double> cum_views;  // x_2(t), summed from window_start through t
  std::vector<double> revenue;    // y

  std::size_t rows() const { return revenue.size(); }
};

// Sum of daily counts over offsets [t0, t]. Both bounds must lie inside the
// series coverage; zero-filled days count as present.
std::uint64_t cumulative_views(const PageviewSeries& s, int t0, int t);

// Throws DataError when any film's coverage misses part of
// [d.window_start, t], listing the offending films.
DesignMatrix build_design_matrix(const Dataset& d, int t);

}  // namespace wikibox::model
