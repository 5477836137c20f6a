#include "wikibox/ingest/fetch.hpp"

#include <algorithm>
#include <atomic>
#include <optional>
#include <thread>

#include <nlohmann/json.hpp>

#include "wikibox/errors.hpp"

namespace wikibox::ingest {

namespace {

struct DateSpan {
  Date lo;
  Date hi;

  bool valid() const { return !(hi < lo); }
};

PageviewSeries slice(const std::string& url, const Date& release,
                     const std::map<Date, std::uint64_t>& by_date, OffsetRange offsets) {
  std::map<int, std::uint64_t> daily;
  for (int d = offsets.lo; d <= offsets.hi; ++d) {
    auto it = by_date.find(release.plus_days(d));
    daily[d] = it == by_date.end() ? 0 : it->second;
  }
  return PageviewSeries(url, release, offsets, std::move(daily));
}

}  // namespace

FetchClient::FetchClient(PageviewProvider& provider, ProviderPolicy policy)
    : provider_(provider),
      policy_(policy),
      limiter_(policy.max_concurrent, policy.min_request_interval) {
  if (policy_.retry.max_attempts < 1) {
    throw ConfigError("provider policy: max_attempts must be >= 1");
  }
}

SeriesFetch FetchClient::fetch_series(const FetchRequest& req, CacheStore& cache) {
  if (req.offsets.lo > req.offsets.hi) {
    throw std::invalid_argument("fetch_series: offset range [" +
                                std::to_string(req.offsets.lo) + ", " +
                                std::to_string(req.offsets.hi) + "] is empty");
  }

  const DateSpan wanted{req.release_date.plus_days(req.offsets.lo),
                        req.release_date.plus_days(req.offsets.hi)};

  // Day-keyed picture of what the cache already knows, date space so that a
  // changed release date still reuses overlapping days.
  std::map<Date, std::uint64_t> by_date;
  std::optional<DateSpan> cached_span;
  if (const auto cached = cache.load(req.article_url)) {
    cached_span = DateSpan{
        cached->release_date().plus_days(cached->coverage().lo),
        cached->release_date().plus_days(cached->coverage().hi)};
    for (int d = cached->coverage().lo; d <= cached->coverage().hi; ++d) {
      by_date[cached->release_date().plus_days(d)] = cached->at(d);
    }
  }

  SeriesFetch out{slice(req.article_url, req.release_date, by_date, req.offsets), 0, 0};
  if (cached_span && !(wanted.lo < cached_span->lo) && !(cached_span->hi < wanted.hi)) {
    return out;  // cache hit, provider untouched
  }

  // Fetch the flanks around the cached span (all of it when cold), bridging
  // any gap so coverage stays one contiguous range.
  const DateSpan merged{cached_span && cached_span->lo < wanted.lo ? cached_span->lo
                                                                   : wanted.lo,
                        cached_span && wanted.hi < cached_span->hi ? cached_span->hi
                                                                   : wanted.hi};
  std::vector<DateSpan> flanks;
  if (cached_span) {
    const DateSpan low{merged.lo, cached_span->lo.plus_days(-1)};
    const DateSpan high{cached_span->hi.plus_days(1), merged.hi};
    if (low.valid()) flanks.push_back(low);
    if (high.valid()) flanks.push_back(high);
  } else {
    flanks.push_back(merged);
  }

  for (const DateSpan& flank : flanks) {
    DailyCounts fetched;
    std::string last_failure;
    bool done = false;
    for (int attempt = 1; attempt <= policy_.retry.max_attempts && !done; ++attempt) {
      try {
        RateLimiter::Ticket ticket = limiter_.acquire();
        ++out.attempts;
        fetched = provider_.daily_views(req.article_url, flank.lo, flank.hi);
        done = true;
      } catch (const ProviderError& e) {
        if (!e.retriable()) throw;
        last_failure = e.what();
        if (attempt < policy_.retry.max_attempts) {
          std::this_thread::sleep_for(policy_.retry.initial_backoff * (1 << (attempt - 1)));
        }
      }
    }
    if (!done) {
      throw ProviderError("fetch failed for " + req.article_url + " after " +
                              std::to_string(policy_.retry.max_attempts) +
                              " attempts; last error: " + last_failure,
                          /*retriable=*/false);
    }
    for (Date day = flank.lo; !(flank.hi < day); day = day.plus_days(1)) {
      auto it = fetched.find(day);
      if (it == fetched.end()) {
        by_date[day] = 0;
        ++out.filled_days;
      } else {
        by_date[day] = it->second;
      }
    }
  }

  const OffsetRange merged_offsets{merged.lo - req.release_date,
                                   merged.hi - req.release_date};
  cache.store(slice(req.article_url, req.release_date, by_date, merged_offsets));
  out.series = slice(req.article_url, req.release_date, by_date, req.offsets);
  return out;
}

SeriesFetch fetch_series(const FetchRequest& req, PageviewProvider& provider,
                         const ProviderPolicy& policy, CacheStore& cache) {
  FetchClient client(provider, policy);
  return client.fetch_series(req, cache);
}

std::size_t FetchReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(films.begin(), films.end(),
                    [](const FilmFetchStatus& f) { return !f.ok(); }));
}

std::string write_fetch_report_json(const FetchReport& report) {
  nlohmann::ordered_json films = nlohmann::ordered_json::array();
  for (const FilmFetchStatus& f : report.films) {
    nlohmann::ordered_json row = nlohmann::ordered_json::object();
    row["title"] = f.title;
    row["article_url"] = f.article_url;
    row["status"] = f.status;
    row["attempts"] = f.attempts;
    row["filled_days"] = f.filled_days;
    films.push_back(std::move(row));
  }
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  doc["films"] = std::move(films);
  doc["failures"] = report.failures();
  return doc.dump(2) + "\n";
}

std::pair<Dataset, FetchReport> fetch_dataset(const Manifest& manifest,
                                              std::span<const FilmRecord> catalog,
                                              PageviewProvider& provider,
                                              const ProviderPolicy& policy,
                                              CacheStore& cache) {
  if (manifest.films.empty()) {
    throw DataError("empty dataset: manifest lists no films");
  }

  std::map<std::pair<std::string, std::string>, const FilmRecord*> by_key;
  for (const FilmRecord& record : catalog) {
    by_key[{record.title, record.release_date.to_string()}] = &record;
  }

  FetchClient client(provider, policy);
  const std::size_t n = manifest.films.size();

  struct Slot {
    std::optional<SeriesFetch> fetch;
    const FilmRecord* record = nullptr;
    std::string failure;
  };
  std::vector<Slot> slots(n);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      const ManifestEntry& entry = manifest.films[i];
      Slot& slot = slots[i];
      auto found = by_key.find({entry.title, entry.release_date.to_string()});
      if (found == by_key.end()) {
        slot.failure = "not in catalog";
        continue;
      }
      slot.record = found->second;
      try {
        slot.fetch = client.fetch_series(
            FetchRequest{entry.article_url, entry.release_date,
                         OffsetRange{manifest.window_start, 0}},
            cache);
      } catch (const std::exception& e) {
        slot.failure = e.what();
      }
    }
  };

  const std::size_t workers =
      std::min<std::size_t>(std::max(policy.max_concurrent, 1), n);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  Dataset dataset{manifest.market, {}, manifest.window_start};
  FetchReport report;
  report.films.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const ManifestEntry& entry = manifest.films[i];
    Slot& slot = slots[i];
    FilmFetchStatus status;
    status.title = entry.title;
    status.article_url = entry.article_url;
    if (slot.fetch) {
      status.status = "ok";
      status.attempts = slot.fetch->attempts;
      status.filled_days = slot.fetch->filled_days;
      dataset.films.push_back(AlignedFilm{*slot.record, entry.article_url,
                                          std::move(slot.fetch->series),
                                          entry.alignment_method});
    } else {
      status.status = "failed: " + slot.failure;
    }
    report.films.push_back(std::move(status));
  }

  if (dataset.films.empty()) {
    throw DataError("every film failed to fetch (" + std::to_string(n) + " of " +
                    std::to_string(n) + ")");
  }
  return {std::move(dataset), std::move(report)};
}

std::pair<Dataset, std::vector<std::string>> load_dataset(
    const Manifest& manifest, std::span<const FilmRecord> catalog, CacheStore& cache) {
  if (manifest.films.empty()) {
    throw DataError("empty dataset: manifest lists no films");
  }

  std::map<std::pair<std::string, std::string>, const FilmRecord*> by_key;
  for (const FilmRecord& record : catalog) {
    by_key[{record.title, record.release_date.to_string()}] = &record;
  }

  Dataset dataset{manifest.market, {}, manifest.window_start};
  std::vector<std::string> skipped;
  const OffsetRange window{manifest.window_start, 0};

  for (const ManifestEntry& entry : manifest.films) {
    auto found = by_key.find({entry.title, entry.release_date.to_string()});
    if (found == by_key.end()) {
      skipped.push_back("'" + entry.title + "': not in catalog");
      continue;
    }
    const auto cached = cache.load(entry.article_url);
    if (!cached) {
      skipped.push_back("'" + entry.title + "': not in cache");
      continue;
    }
    if (cached->release_date() != entry.release_date) {
      skipped.push_back("'" + entry.title + "': cached series has release date " +
                        cached->release_date().to_string() + ", expected " +
                        entry.release_date.to_string());
      continue;
    }
    if (!cached->coverage().contains(window)) {
      skipped.push_back("'" + entry.title + "': cached coverage [" +
                        std::to_string(cached->coverage().lo) + ", " +
                        std::to_string(cached->coverage().hi) + "] misses [" +
                        std::to_string(window.lo) + ", 0]");
      continue;
    }
    std::map<int, std::uint64_t> daily;
    for (int d = window.lo; d <= window.hi; ++d) daily[d] = cached->at(d);
    dataset.films.push_back(
        AlignedFilm{*found->second, entry.article_url,
                    PageviewSeries(entry.article_url, entry.release_date, window,
                                   std::move(daily)),
                    entry.alignment_method});
  }

  if (dataset.films.empty()) {
    std::string msg = "no usable films in cache:";
    for (const std::string& s : skipped) msg += "\n  " + s;
    throw DataError(msg);
  }
  return {std::move(dataset), std::move(skipped)};
}

}  // namespace wikibox::ingest
