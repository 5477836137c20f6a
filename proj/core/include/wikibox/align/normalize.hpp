#pragma once

#include <string>
#include <string_view>

namespace wikibox::align {

// Normalized matching key for a title: Unicode NFC, case-folded, bracketed
// qualifiers like "(Film)" or "(2013年の映画)" removed, remaining punctuation
// and symbols turned into separators, whitespace collapsed. Idempotent and
// deterministic. Used for search-fixture keys and match diagnostics only;
// URLs are always compared exactly.
std::string normalize_title(std::string_view title, std::string_view language);

}  // namespace wikibox::align
