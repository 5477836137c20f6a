#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "wikibox/date.hpp"

namespace wikibox::ingest {

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{100};  // doubled per attempt
};

struct ProviderPolicy {
  int max_concurrent = 4;
  std::chrono::milliseconds min_request_interval{0};
  RetryPolicy retry;
};

// Map of calendar date to view count. Days with no recorded traffic may be
// missing; the fetch layer zero-fills them.
using DailyCounts = std::map<Date, std::uint64_t>;

// Source of per-article daily view counts. Implementations must be safe to
// call concurrently.
class PageviewProvider {
 public:
  virtual ~PageviewProvider() = default;

  // Counts for the inclusive date range. Throws ProviderError on transport
  // trouble (retried by the fetch layer) and DataError on nonsense counts
  // (never retried).
  virtual DailyCounts daily_views(const std::string& article_url, const Date& first,
                                  const Date& last) = 0;
};

// Offline stand-in. File format: JSON object mapping article URLs to
// {"YYYY-MM-DD": count} objects. Articles absent from the fixture simply
// have no recorded days.
class FixturePageviewProvider : public PageviewProvider {
 public:
  static FixturePageviewProvider from_file(const std::filesystem::path& path);
  static FixturePageviewProvider from_json(std::string_view text);

  DailyCounts daily_views(const std::string& article_url, const Date& first,
                          const Date& last) override;

 private:
  std::map<std::string, DailyCounts> by_article_;
};

// Live provider for any service exposing per-article daily counts over
// HTTP with a JSON body, configured by a URL template with {article},
// {start} and {end} placeholders. {article} becomes the URL-encoded article
// title. The response is a flat {"YYYY-MM-DD": count} object, optionally
// nested under a "daily" key. http:// only.
class HttpPageviewProvider : public PageviewProvider {
 public:
  struct Config {
    std::string endpoint_template;
    int timeout_seconds = 10;
  };

  explicit HttpPageviewProvider(Config config);

  DailyCounts daily_views(const std::string& article_url, const Date& first,
                          const Date& last) override;

 private:
  Config config_;
};

}  // namespace wikibox::ingest
