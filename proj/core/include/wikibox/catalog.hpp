#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wikibox/date.hpp"
#include "wikibox/market.hpp"

namespace wikibox {

// One film in one market, as listed by the box-office catalog. Revenue is
// the opening-weekend gross in market-local currency units; regressions are
// always per-market so units stay internally consistent.
struct FilmRecord {
  std::string title;
  Market market;
  Date release_date;
  std::uint64_t revenue = 0;  // strictly positive once parsed
  std::uint32_t screens = 0;

  friend bool operator==(const FilmRecord&, const FilmRecord&) = default;
};

struct RowError {
  std::size_t line = 0;
  std::string field;
  std::string message;

  // "revenue must be positive (line 2)"
  std::string format() const;
};

// Rows either become records or reported errors; nothing is dropped
// silently: records.size() + errors.size() == number of data rows.
struct CatalogParse {
  std::vector<FilmRecord> records;
  std::vector<RowError> errors;

  bool ok() const { return errors.empty(); }
};

// Catalog CSV: header `title,market,release_date,revenue,screens`, ISO-8601
// dates, unsigned decimal integers, RFC 4180 quoting. A malformed header or
// non-CSV payload throws DataError; per-row defects are collected.
CatalogParse parse_catalog(std::string_view bytes, const Market& market);

// Same, but any row error throws a DataError summarizing the defects.
std::vector<FilmRecord> parse_catalog_strict(std::string_view bytes, const Market& market);

std::string serialize_catalog(std::span<const FilmRecord> records);

}  // namespace wikibox
