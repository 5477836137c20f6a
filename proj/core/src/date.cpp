#include "wikibox/date.hpp"

#include <charconv>
#include <cstdio>

#include "wikibox/errors.hpp"

namespace wikibox {

namespace {

std::chrono::sys_days checked_sys_days(int year, unsigned month, unsigned day,
                                       std::string_view shown) {
  const std::chrono::year_month_day ymd{std::chrono::year{year},
                                        std::chrono::month{month},
                                        std::chrono::day{day}};
  if (!ymd.ok()) {
    throw DataError("invalid calendar date '" + std::string(shown) + "'");
  }
  return std::chrono::sys_days{ymd};
}

bool parse_uint(std::string_view s, unsigned& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace

Date::Date(int year, unsigned month, unsigned day)
    : days_(checked_sys_days(year, month, day,
                             std::to_string(year) + "-" + std::to_string(month) +
                                 "-" + std::to_string(day))) {}

Date Date::parse(std::string_view iso) {
  if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-') {
    throw DataError("invalid date '" + std::string(iso) + "', expected YYYY-MM-DD");
  }
  unsigned y = 0, m = 0, d = 0;
  if (!parse_uint(iso.substr(0, 4), y) || !parse_uint(iso.substr(5, 2), m) ||
      !parse_uint(iso.substr(8, 2), d)) {
    throw DataError("invalid date '" + std::string(iso) + "', expected YYYY-MM-DD");
  }
  return Date(checked_sys_days(static_cast<int>(y), m, d, iso));
}

std::string Date::to_string() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", year(), month(), day());
  return buf;
}

Date Date::plus_days(int days) const {
  return Date(days_ + std::chrono::days{days});
}

int Date::year() const {
  return static_cast<int>(std::chrono::year_month_day{days_}.year());
}

unsigned Date::month() const {
  return static_cast<unsigned>(std::chrono::year_month_day{days_}.month());
}

unsigned Date::day() const {
  return static_cast<unsigned>(std::chrono::year_month_day{days_}.day());
}

}  // namespace wikibox
