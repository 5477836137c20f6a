#include "wikibox/ingest/cache.hpp"

#include <cstdint>

#include <nlohmann/json.hpp>

#include "wikibox/errors.hpp"
#include "wikibox/ioutil.hpp"

namespace wikibox::ingest {

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char c : s) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

constexpr const char* kIndexName = "cache_index.json";

}  // namespace

CacheStore::CacheStore(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::string CacheStore::series_filename(const std::string& article_url) {
  std::string slug;
  const auto wiki_pos = article_url.find("/wiki/");
  const std::string title =
      wiki_pos == std::string::npos ? article_url : article_url.substr(wiki_pos + 6);
  for (char c : title) {
    const bool safe = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                      (c >= '0' && c <= '9') || c == '-' || c == '_';
    slug += safe ? c : '_';
    if (slug.size() >= 48) break;
  }
  if (slug.empty()) slug = "article";

  char hash[17];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(fnv1a(article_url)));
  return slug + "-" + hash + ".json";
}

std::filesystem::path CacheStore::series_path(const std::string& article_url) const {
  return dir_ / series_filename(article_url);
}

std::optional<PageviewSeries> CacheStore::load(const std::string& article_url) const {
  std::lock_guard lock(mutex_);
  const std::filesystem::path path = series_path(article_url);
  if (!std::filesystem::exists(path)) return std::nullopt;
  PageviewSeries series = read_series_json(read_text_file(path));
  if (series.article_url() != article_url) {
    throw DataError("cache file " + path.string() + " holds series for " +
                    series.article_url() + ", expected " + article_url);
  }
  return series;
}

void CacheStore::store(const PageviewSeries& series) {
  std::lock_guard lock(mutex_);
  write_file_atomic(series_path(series.article_url()), write_series_json(series));
  update_index(series);
}

void CacheStore::update_index(const PageviewSeries& series) {
  // Plain (alphabetically keyed) JSON keeps the sidecar byte-stable no
  // matter what order concurrent fetches land in.
  const std::filesystem::path index_path = dir_ / kIndexName;
  nlohmann::json index = nlohmann::json::object();
  if (std::filesystem::exists(index_path)) {
    try {
      index = nlohmann::json::parse(read_text_file(index_path));
    } catch (const nlohmann::json::parse_error&) {
      index = nlohmann::json::object();  // rebuild a broken sidecar
    }
  }
  nlohmann::json entry = nlohmann::json::object();
  entry["file"] = series_filename(series.article_url());
  entry["release_date"] = series.release_date().to_string();
  entry["coverage"] = {series.coverage().lo, series.coverage().hi};
  index[series.article_url()] = std::move(entry);
  write_file_atomic(index_path, index.dump(2) + "\n");
}

}  // namespace wikibox::ingest
