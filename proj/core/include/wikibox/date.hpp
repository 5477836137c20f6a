#pragma once

#include <chrono>
#include <compare>
#include <string>
#include <string_view>

namespace wikibox {

// Calendar date with day precision. Day offsets throughout the project are
// whole days relative to a film's release date: negative before the
// premiere, 0 on release day.
class Date {
 public:
  Date() : days_(std::chrono::sys_days{}) {}
  Date(int year, unsigned month, unsigned day);

  // Strict ISO-8601 "YYYY-MM-DD". Throws DataError on malformed or
  // non-existent calendar dates.
  static Date parse(std::string_view iso);

  std::string to_string() const;

  Date plus_days(int days) const;

  int year() const;
  unsigned month() const;
  unsigned day() const;

  // Whole days from b to a (a - b).
  friend int operator-(const Date& a, const Date& b) {
    return static_cast<int>((a.days_ - b.days_).count());
  }

  auto operator<=>(const Date&) const = default;

 private:
  explicit Date(std::chrono::sys_days d) : days_(d) {}

  std::chrono::sys_days days_;
};

}  // namespace wikibox
