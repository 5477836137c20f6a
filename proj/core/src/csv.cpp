#include "wikibox/csv.hpp"

#include "wikibox/errors.hpp"

namespace wikibox::csv {

std::vector<Row> parse(std::string_view text) {
  std::vector<Row> rows;
  std::size_t line = 1;

  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    Row row;
    row.line = line;
    std::string field;
    bool in_quotes = false;
    bool row_done = false;

    while (i < n && !row_done) {
      const char c = text[i];
      if (in_quotes) {
        if (c == '"') {
          if (i + 1 < n && text[i + 1] == '"') {
            field += '"';
            i += 2;
          } else {
            in_quotes = false;
            ++i;
          }
        } else {
          if (c == '\n') ++line;
          field += c;
          ++i;
        }
      } else {
        switch (c) {
          case '"':
            in_quotes = true;
            ++i;
            break;
          case ',':
            row.fields.push_back(std::move(field));
            field.clear();
            ++i;
            break;
          case '\r':
            if (i + 1 < n && text[i + 1] == '\n') ++i;
            [[fallthrough]];
          case '\n':
            ++i;
            ++line;
            row_done = true;
            break;
          default:
            field += c;
            ++i;
            break;
        }
      }
    }
    if (in_quotes) {
      throw DataError("unterminated quoted field starting at line " +
                      std::to_string(row.line));
    }
    row.fields.push_back(std::move(field));
    rows.push_back(std::move(row));
  }

  // A trailing newline does not introduce an empty record.
  if (!rows.empty() && rows.back().fields.size() == 1 && rows.back().fields[0].empty() &&
      !text.empty() && (text.back() == '\n' || text.back() == '\r')) {
    rows.pop_back();
  }
  return rows;
}

std::string escape(std::string_view field) {
  const bool needs_quotes =
      field.find_first_of(",\"\r\n") != std::string_view::npos;
  if (!needs_quotes) return std::string(field);
  std::string out;
  out.reserve(field.size() + 2);
  out += '"';
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string join(std::span<const std::string> fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += escape(fields[i]);
  }
  return out;
}

}  // namespace wikibox::csv
