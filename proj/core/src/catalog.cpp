#include "wikibox/catalog.hpp"

#include <array>
#include <charconv>
#include <map>
#include <utility>

#include "wikibox/csv.hpp"
#include "wikibox/errors.hpp"

namespace wikibox {

namespace {

constexpr std::array<std::string_view, 5> kHeader{"title", "market", "release_date",
                                                  "revenue", "screens"};

template <typename T>
bool parse_unsigned(std::string_view s, T& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace

std::string RowError::format() const {
  return message + " (line " + std::to_string(line) + ")";
}

CatalogParse parse_catalog(std::string_view bytes, const Market& market) {
  const std::vector<csv::Row> rows = csv::parse(bytes);
  if (rows.empty()) {
    throw DataError("catalog is empty, expected a header row");
  }

  const csv::Row& header = rows.front();
  if (header.fields.size() != kHeader.size() ||
      !std::equal(header.fields.begin(), header.fields.end(), kHeader.begin())) {
    throw DataError(
        "catalog header must be exactly "
        "'title,market,release_date,revenue,screens', got '" +
        csv::join(header.fields) + "'");
  }

  CatalogParse out;
  std::map<std::pair<std::string, std::string>, std::size_t> seen;

  for (std::size_t r = 1; r < rows.size(); ++r) {
    const csv::Row& row = rows[r];
    auto fail = [&](std::string field, std::string message) {
      out.errors.push_back({row.line, std::move(field), std::move(message)});
    };

    if (row.fields.size() != kHeader.size()) {
      fail("row", "expected 5 columns, got " + std::to_string(row.fields.size()));
      continue;
    }

    const std::string& title = row.fields[0];
    if (title.empty()) {
      fail("title", "title must be nonempty");
      continue;
    }

    Market row_market = market;
    try {
      row_market = Market::from_code(row.fields[1]);
    } catch (const ConfigError&) {
      fail("market", "unknown market code '" + row.fields[1] + "'");
      continue;
    }
    if (row_market != market) {
      fail("market", std::string("expected market ") + std::string(market.code_name()) +
                         ", got " + row.fields[1]);
      continue;
    }

    Date release;
    try {
      release = Date::parse(row.fields[2]);
    } catch (const DataError& e) {
      fail("release_date", e.what());
      continue;
    }

    std::uint64_t revenue = 0;
    if (!parse_unsigned(row.fields[3], revenue)) {
      fail("revenue", "revenue must be an unsigned integer, got '" + row.fields[3] + "'");
      continue;
    }
    if (revenue == 0) {
      fail("revenue", "revenue must be positive");
      continue;
    }

    std::uint32_t screens = 0;
    if (!parse_unsigned(row.fields[4], screens)) {
      fail("screens", "screens must be a nonnegative integer, got '" + row.fields[4] + "'");
      continue;
    }

    auto key = std::make_pair(title, row.fields[2]);
    auto [it, inserted] = seen.emplace(key, row.line);
    if (!inserted) {
      fail("title", "duplicate (title, release_date): '" + title + "' / " +
                        row.fields[2] + " first seen at line " +
                        std::to_string(it->second));
      continue;
    }

    out.records.push_back(FilmRecord{title, row_market, release, revenue, screens});
  }
  return out;
}

std::vector<FilmRecord> parse_catalog_strict(std::string_view bytes, const Market& market) {
  CatalogParse parsed = parse_catalog(bytes, market);
  if (!parsed.ok()) {
    std::string msg = "catalog has " + std::to_string(parsed.errors.size()) +
                      " bad row(s):";
    const std::size_t shown = std::min<std::size_t>(parsed.errors.size(), 8);
    for (std::size_t i = 0; i < shown; ++i) {
      msg += "\n  " + parsed.errors[i].format();
    }
    if (shown < parsed.errors.size()) msg += "\n  ...";
    throw DataError(msg);
  }
  return std::move(parsed.records);
}

std::string serialize_catalog(std::span<const FilmRecord> records) {
  std::string out = "title,market,release_date,revenue,screens\n";
  for (const FilmRecord& rec : records) {
    const std::string fields[] = {
        rec.title, std::string(rec.market.code_name()), rec.release_date.to_string(),
        std::to_string(rec.revenue), std::to_string(rec.screens)};
    out += csv::join(fields);
    out += '\n';
  }
  return out;
}

}  // namespace wikibox
