#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "wikibox/align/language.hpp"
#include "wikibox/market.hpp"

namespace wikibox::align {

// Ranked web search restricted to one encyclopedia edition. Implementations
// must be safe to call from multiple threads and enforce their own rate
// limits. Queries are issued as "<title> <film suffix>".
class SearchProvider {
 public:
  virtual ~SearchProvider() = default;

  // Ranked result URLs, unfiltered. Throws ProviderError on transport
  // trouble and QuotaError once the provider's quota is exhausted.
  virtual std::vector<std::string> search(const std::string& title,
                                          const Market& market) = 0;
};

// Offline stand-in reading canned results. File format: JSON object mapping
// "<normalized title>+<film suffix>" to an ordered URL array.
class FixtureSearchProvider : public SearchProvider {
 public:
  static FixtureSearchProvider from_file(const std::filesystem::path& path);
  static FixtureSearchProvider from_json(std::string_view text);

  std::vector<std::string> search(const std::string& title, const Market& market) override;

 private:
  std::map<std::string, std::vector<std::string>> results_;
};

// Live provider hitting a configurable endpoint; {query} in the template is
// replaced by the URL-encoded query string. The response may be a JSON
// array of URL strings or an object with an items[].link array. http:// only.
class HttpSearchProvider : public SearchProvider {
 public:
  struct Config {
    std::string endpoint_template;
    int timeout_seconds = 10;
  };

  explicit HttpSearchProvider(Config config);

  std::vector<std::string> search(const std::string& title, const Market& market) override;

 private:
  Config config_;
};

// Issues "<title> <suffix>" and keeps only article-namespace URLs of the
// market's edition, rank order preserved, duplicates dropped.
std::vector<std::string> resolve_candidates(
    const std::string& title, const Market& market, SearchProvider& provider,
    const LanguageTable& table = LanguageTable::builtin());

}  // namespace wikibox::align
