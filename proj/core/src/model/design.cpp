#include "wikibox/model/design.hpp"

#include <string>

#include "wikibox/errors.hpp"

namespace wikibox::model {

std::uint64_t cumulative_views(const PageviewSeries& s, int t0, int t) {
  if (t < t0) {
    throw std::invalid_argument("cumulative_views: t (" + std::to_string(t) +
                                ") precedes window start (" + std::to_string(t0) + ")");
  }
  if (!s.coverage().contains(OffsetRange{t0, t})) {
    throw DataError("cumulative_views: window [" + std::to_string(t0) + ", " +
                    std::to_string(t) + "] outside coverage [" +
                    std::to_string(s.coverage().lo) + ", " +
                    std::to_string(s.coverage().hi) + "] for " + s.article_url());
  }
  std::uint64_t total = 0;
  auto it = s.daily().lower_bound(t0);
  for (; it != s.daily().end() && it->first <= t; ++it) {
    total += it->second;
  }
  return total;
}

DesignMatrix build_design_matrix(const Dataset& d, int t) {
  if (t < d.window_start || t > 0) {
    throw std::invalid_argument("build_design_matrix: t (" + std::to_string(t) +
                                ") outside [" + std::to_string(d.window_start) + ", 0]");
  }

  std::string missing;
  for (const AlignedFilm& film : d.films) {
    if (!film.views.coverage().contains(OffsetRange{d.window_start, t})) {
      if (!missing.empty()) missing += ", ";
      missing += "'" + film.record.title + "'";
    }
  }
  if (!missing.empty()) {
    throw DataError("insufficient pageview coverage at t=" + std::to_string(t) +
                    " for: " + missing);
  }

  DesignMatrix m;
  m.t = t;
  m.window_start = d.window_start;
  m.screens.reserve(d.films.size());
  m.cum_views.reserve(d.films.size());
  m.revenue.reserve(d.films.size());
  for (const AlignedFilm& film : d.films) {
    m.screens.push_back(static_cast<double>(film.record.screens));
    m.cum_views.push_back(
        static_cast<double>(cumulative_views(film.views, d.window_start, t)));
    m.revenue.push_back(static_cast<double>(film.record.revenue));
  }
  return m;
}

}  // namespace wikibox::model
