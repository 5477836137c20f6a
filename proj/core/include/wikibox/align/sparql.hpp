#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wikibox/align/language.hpp"

namespace wikibox::align {

// A film-list query over the per-year film (and optionally animated-film)
// categories of one language edition.
struct FilmListQuery {
  std::string language;
  std::vector<std::string> categories;  // full category resource IRIs
  std::string rendered;                 // SPARQL SELECT text
};

// Renders one dcterms:subject branch per (year x category kind), UNION-ed
// together, prefixes declared exactly once. Years are deduplicated and
// sorted. Throws ConfigError for an unsupported language or empty years.
FilmListQuery build_film_list_query(std::string_view language, std::span<const int> years,
                                    bool include_animation,
                                    const LanguageTable& table = LanguageTable::builtin());

// Article URLs of one edition known to be films, with set semantics.
struct FilmList {
  std::string language;
  std::set<std::string> urls;  // canonical article URLs
  std::string source;          // endpoint identifier / retrieval tag

  bool contains(const std::string& url) const { return urls.count(url) != 0; }
};

// Parses a SPARQL 1.1 JSON results payload with a `film` binding per row.
// Resource IRIs are rewritten to canonical article URLs; duplicates collapse.
FilmList parse_film_list(std::string_view sparql_json, std::string_view language,
                         std::string source = {},
                         const LanguageTable& table = LanguageTable::builtin());

// Canonical article URL form: https scheme, lower-case host, /wiki/ path
// with percent-escapes decoded and spaces as underscores.
std::string canonicalize_article_url(std::string_view url);

// Canonicalizes and keeps only article-namespace URLs of the language's
// edition; anything else gets nullopt.
std::optional<std::string> article_url_for_language(
    std::string_view url, std::string_view language,
    const LanguageTable& table = LanguageTable::builtin());

// Runs the query against a SPARQL endpoint over HTTP GET
// (?query=...&format=application/sparql-results+json). http:// only.
FilmList fetch_film_list_http(const std::string& endpoint, const FilmListQuery& query,
                              const LanguageTable& table = LanguageTable::builtin());

}  // namespace wikibox::align
