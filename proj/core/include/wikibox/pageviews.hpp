#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "wikibox/date.hpp"

namespace wikibox {

// Inclusive range of day offsets relative to a release date.
struct OffsetRange {
  int lo = 0;
  int hi = 0;

  bool contains(int d) const { return d >= lo && d <= hi; }
  bool contains(OffsetRange r) const { return r.lo >= lo && r.hi <= hi; }
  int length() const { return hi - lo + 1; }

  friend bool operator==(OffsetRange, OffsetRange) = default;
};

// Daily article view counts indexed by day offset. Offsets absent from
// `daily` but inside `coverage` are days with zero recorded views.
class PageviewSeries {
 public:
  PageviewSeries(std::string article_url, Date release_date, OffsetRange coverage,
                 std::map<int, std::uint64_t> daily);

  const std::string& article_url() const { return article_url_; }
  const Date& release_date() const { return release_date_; }
  OffsetRange coverage() const { return coverage_; }
  const std::map<int, std::uint64_t>& daily() const { return daily_; }

  // Count at a covered offset; throws DataError outside coverage.
  std::uint64_t at(int offset) const;

  friend bool operator==(const PageviewSeries&, const PageviewSeries&) = default;

 private:
  std::string article_url_;
  Date release_date_;
  OffsetRange coverage_;
  std::map<int, std::uint64_t> daily_;
};

// Series file: {"article_url": ..., "release_date": "YYYY-MM-DD",
// "daily": {"-7": 123, ...}}. Writing stores one entry per covered offset,
// zeros included; reading accepts sparse maps and infers coverage from the
// extreme offsets.
PageviewSeries read_series_json(std::string_view text);
std::string write_series_json(const PageviewSeries& series);

}  // namespace wikibox
