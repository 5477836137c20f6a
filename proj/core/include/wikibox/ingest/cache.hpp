#pragma once

#include <filesystem>
#include <mutex>
#include <optional>
#include <string>

#include "wikibox/pageviews.hpp"

namespace wikibox::ingest {

// Directory of pageview series files, one per article, plus a sidecar
// (cache_index.json) recording each article's coverage. Writes are
// serialized and atomic (temp file + rename), so interrupted runs never
// leave partial series behind.
class CacheStore {
 public:
  explicit CacheStore(std::filesystem::path dir);

  std::optional<PageviewSeries> load(const std::string& article_url) const;

  // Stores the series, replacing any previous file for the article, and
  // updates the sidecar.
  void store(const PageviewSeries& series);

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path series_path(const std::string& article_url) const;

  // Deterministic filename: a title slug plus a hash of the full URL.
  static std::string series_filename(const std::string& article_url);

 private:
  void update_index(const PageviewSeries& series);

  std::filesystem::path dir_;
  mutable std::mutex mutex_;
};

}  // namespace wikibox::ingest
