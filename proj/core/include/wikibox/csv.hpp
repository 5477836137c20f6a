#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wikibox::csv {

// One logical record. `line` is the 1-based line the record starts on;
// quoted fields may span several physical lines.
struct Row {
  std::vector<std::string> fields;
  std::size_t line = 0;
};

// RFC 4180 reader: comma separated, optional CRLF, double-quoted fields with
// "" escapes. Throws DataError on an unterminated quote.
std::vector<Row> parse(std::string_view text);

// Quotes a field only when it needs quoting.
std::string escape(std::string_view field);

std::string join(std::span<const std::string> fields);

}  // namespace wikibox::csv
