#pragma once

#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wikibox/catalog.hpp"
#include "wikibox/dataset.hpp"
#include "wikibox/ingest/cache.hpp"
#include "wikibox/ingest/provider.hpp"
#include "wikibox/ingest/rate_limiter.hpp"

namespace wikibox::ingest {

struct FetchRequest {
  std::string article_url;
  Date release_date;
  OffsetRange offsets;  // requires lo <= hi
};

struct SeriesFetch {
  PageviewSeries series;
  int attempts = 0;     // provider calls made, retries included; 0 on a cache hit
  int filled_days = 0;  // fetched days absent from provider responses, stored as 0
};

// Binds one provider to its policy and a shared rate limiter so a whole
// dataset fetch observes one spacing/concurrency budget.
class FetchClient {
 public:
  FetchClient(PageviewProvider& provider, ProviderPolicy policy);

  // Serves from cache when the cached coverage spans the request (zero
  // provider calls), otherwise fetches the missing flanks, merges, and
  // writes through. The returned series' coverage equals req.offsets.
  SeriesFetch fetch_series(const FetchRequest& req, CacheStore& cache);

 private:
  PageviewProvider& provider_;
  ProviderPolicy policy_;
  RateLimiter limiter_;
};

// One-shot convenience wrapper around FetchClient.
SeriesFetch fetch_series(const FetchRequest& req, PageviewProvider& provider,
                         const ProviderPolicy& policy, CacheStore& cache);

struct FilmFetchStatus {
  std::string title;
  std::string article_url;
  std::string status;  // "ok" or "failed: <reason>"
  int attempts = 0;
  int filled_days = 0;

  bool ok() const { return status == "ok"; }
};

struct FetchReport {
  std::vector<FilmFetchStatus> films;  // manifest order

  std::size_t failures() const;
};

std::string write_fetch_report_json(const FetchReport& report);

// Fetches [manifest.window_start, 0] for every manifest entry, up to
// policy.max_concurrent at a time. Films whose fetch ultimately fails (or
// that are missing from the catalog) are excluded from the dataset and
// listed in the report. Throws DataError when the manifest is empty or
// every film fails.
std::pair<Dataset, FetchReport> fetch_dataset(const Manifest& manifest,
                                              std::span<const FilmRecord> catalog,
                                              PageviewProvider& provider,
                                              const ProviderPolicy& policy,
                                              CacheStore& cache);

// Cache-only dataset assembly for evaluation runs. Films without full
// cached coverage are skipped and reported in `skipped`; throws DataError
// when nothing usable remains.
std::pair<Dataset, std::vector<std::string>> load_dataset(
    const Manifest& manifest, std::span<const FilmRecord> catalog, CacheStore& cache);

}  // namespace wikibox::ingest
