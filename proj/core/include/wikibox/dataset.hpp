#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "wikibox/catalog.hpp"
#include "wikibox/pageviews.hpp"

namespace wikibox {

enum class AlignmentMethod { automatic, manual };

std::string_view to_string(AlignmentMethod m);
AlignmentMethod alignment_method_from_string(std::string_view s);  // throws DataError

// A catalog record bound to exactly one article URL and its pageview series.
struct AlignedFilm {
  FilmRecord record;
  std::string article_url;
  PageviewSeries views;
  AlignmentMethod alignment_method = AlignmentMethod::automatic;
};

// Per-market regression input. window_start is t0, the fixed day offset
// where cumulative view counting begins (negative).
struct Dataset {
  Market market;
  std::vector<AlignedFilm> films;
  int window_start = -49;
};

// Defects are data, not failures: fatal entries are invariant violations,
// warnings flag films whose coverage misses part of [window_start, 0].
struct ValidationReport {
  std::vector<std::string> warnings;
  std::vector<std::string> fatal;

  bool ok() const { return fatal.empty(); }
  bool clean() const { return fatal.empty() && warnings.empty(); }
};

ValidationReport validate_dataset(const Dataset& d);

// Aligned-dataset manifest entry; catalog_key = (title, release_date)
// identifies the record within the market's catalog.
struct ManifestEntry {
  std::string title;
  Date release_date;
  std::string article_url;
  std::string pageview_file;
  AlignmentMethod alignment_method = AlignmentMethod::automatic;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct Manifest {
  Market market;
  int window_start = -49;
  std::vector<ManifestEntry> films;
};

Manifest read_manifest_json(std::string_view text);
std::string write_manifest_json(const Manifest& manifest);

}  // namespace wikibox
