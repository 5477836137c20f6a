#include <doctest.h>

#include <httplib.h>

#include <atomic>
#include <chrono>
#include <mutex>
#include <random>
#include <thread>

#include "support/paths.hpp"
#include "wikibox/align/search.hpp"
#include "wikibox/align/sparql.hpp"
#include "wikibox/errors.hpp"
#include "wikibox/ingest/cache.hpp"
#include "wikibox/ingest/fetch.hpp"
#include "wikibox/ingest/provider.hpp"
#include "wikibox/ioutil.hpp"

using namespace wikibox;
using namespace wikibox::ingest;
using namespace std::chrono;

namespace {

const Market kJA = Market::from_code("JA");
const Date kRelease = Date::parse("2013-06-07");

// Provider with canned per-date counts, scriptable failures and
// instrumentation for concurrency and spacing assertions.
class ScriptedProvider : public PageviewProvider {
 public:
  DailyCounts canned;
  int fail_first = 0;
  std::vector<std::string> quota_urls;

  DailyCounts daily_views(const std::string& article_url, const Date& first,
                          const Date& last) override {
    int my_call = 0;
    {
      std::lock_guard lock(mutex_);
      my_call = ++calls_;
      starts_.push_back(steady_clock::now());
      ++in_flight_;
      max_in_flight_ = std::max(max_in_flight_, in_flight_);
      ranges_.emplace_back(first, last);
    }
    std::this_thread::sleep_for(5ms);
    {
      std::lock_guard lock(mutex_);
      --in_flight_;
    }
    for (const std::string& quota : quota_urls) {
      if (article_url == quota) throw QuotaError("scripted quota exhaustion");
    }
    if (my_call <= fail_first) {
      throw ProviderError("scripted transport failure #" + std::to_string(my_call));
    }
    DailyCounts out;
    for (auto day = canned.lower_bound(first); day != canned.end() && !(last < day->first);
         ++day) {
      out.insert(*day);
    }
    return out;
  }

  int calls() {
    std::lock_guard lock(mutex_);
    return calls_;
  }
  int max_in_flight() {
    std::lock_guard lock(mutex_);
    return max_in_flight_;
  }
  std::vector<steady_clock::time_point> starts() {
    std::lock_guard lock(mutex_);
    return starts_;
  }
  std::vector<std::pair<Date, Date>> ranges() {
    std::lock_guard lock(mutex_);
    return ranges_;
  }

 private:
  std::mutex mutex_;
  int calls_ = 0;
  int in_flight_ = 0;
  int max_in_flight_ = 0;
  std::vector<steady_clock::time_point> starts_;
  std::vector<std::pair<Date, Date>> ranges_;
};

DailyCounts counts_around_release(std::initializer_list<std::pair<int, std::uint64_t>> day_counts) {
  DailyCounts out;
  for (const auto& [offset, count] : day_counts) {
    out[kRelease.plus_days(offset)] = count;
  }
  return out;
}

ProviderPolicy quick_policy() {
  ProviderPolicy policy;
  policy.max_concurrent = 4;
  policy.min_request_interval = milliseconds(0);
  policy.retry = {3, milliseconds(5)};
  return policy;
}

FetchRequest request(OffsetRange offsets,
                     std::string url = "https://ja.wikipedia.org/wiki/作品A") {
  return FetchRequest{std::move(url), kRelease, offsets};
}

}  // namespace

TEST_CASE("fixture provider passes counts through") {
  FixturePageviewProvider provider = FixturePageviewProvider::from_json(R"json({
    "https://ja.wikipedia.org/wiki/作品A": {
      "2013-06-05": 5, "2013-06-06": 7, "2013-06-07": 11
    }
  })json");

  testsupport::TempDir tmp("fetch");
  CacheStore cache(tmp.path());
  const SeriesFetch got =
      fetch_series(request({-2, 0}), provider, quick_policy(), cache);

  CHECK(got.series.coverage() == OffsetRange{-2, 0});
  CHECK(got.series.at(-2) == 5);
  CHECK(got.series.at(-1) == 7);
  CHECK(got.series.at(0) == 11);
  CHECK(got.filled_days == 0);
  CHECK(got.attempts == 1);
}

TEST_CASE("absent days are zero-filled and counted") {
  FixturePageviewProvider provider = FixturePageviewProvider::from_json(R"json({
    "https://ja.wikipedia.org/wiki/作品A": {"2013-06-05": 5, "2013-06-07": 11}
  })json");

  testsupport::TempDir tmp("fetch");
  CacheStore cache(tmp.path());
  const SeriesFetch got =
      fetch_series(request({-2, 0}), provider, quick_policy(), cache);

  CHECK(got.series.at(-2) == 5);
  CHECK(got.series.at(-1) == 0);
  CHECK(got.series.at(0) == 11);
  CHECK(got.filled_days == 1);
}

TEST_CASE("a warm cache short-circuits the provider") {
  ScriptedProvider provider;
  provider.canned = counts_around_release({{-2, 5}, {-1, 7}, {0, 11}});

  testsupport::TempDir tmp("fetch");
  CacheStore cache(tmp.path());
  const SeriesFetch cold = fetch_series(request({-2, 0}), provider, quick_policy(), cache);
  CHECK(cold.attempts == 1);
  CHECK(provider.calls() == 1);

  const SeriesFetch warm = fetch_series(request({-2, 0}), provider, quick_policy(), cache);
  CHECK(warm.attempts == 0);
  CHECK(provider.calls() == 1);
  CHECK(warm.series == cold.series);

  // A narrower window is also served from cache.
  const SeriesFetch narrow =
      fetch_series(request({-1, 0}), provider, quick_policy(), cache);
  CHECK(narrow.attempts == 0);
  CHECK(narrow.series.coverage() == OffsetRange{-1, 0});
}

TEST_CASE("transient failures are retried with backoff") {
  ScriptedProvider provider;
  provider.canned = counts_around_release({{-1, 3}, {0, 4}});
  provider.fail_first = 2;

  ProviderPolicy policy = quick_policy();
  policy.retry = {3, milliseconds(10)};

  testsupport::TempDir tmp("fetch");
  CacheStore cache(tmp.path());
  const auto t0 = steady_clock::now();
  const SeriesFetch got = fetch_series(request({-1, 0}), provider, policy, cache);
  const auto elapsed = duration_cast<milliseconds>(steady_clock::now() - t0);

  CHECK(got.attempts == 3);
  CHECK(got.series.at(0) == 4);
  // Two waits: 10ms then 20ms.
  CHECK(elapsed.count() >= 30);
}

TEST_CASE("retries stop at max_attempts") {
  ScriptedProvider provider;
  provider.fail_first = 100;
  ProviderPolicy policy = quick_policy();
  policy.retry = {2, milliseconds(1)};

  testsupport::TempDir tmp("fetch");
  CacheStore cache(tmp.path());
  CHECK_THROWS_WITH_AS(fetch_series(request({-1, 0}), provider, policy, cache),
                       doctest::Contains("after 2 attempts"), ProviderError);
  CHECK(provider.calls() == 2);
}

TEST_CASE("quota exhaustion is not retried") {
  ScriptedProvider provider;
  provider.quota_urls = {"https://ja.wikipedia.org/wiki/作品A"};

  testsupport::TempDir tmp("fetch");
  CacheStore cache(tmp.path());
  CHECK_THROWS_AS(fetch_series(request({-1, 0}), provider, quick_policy(), cache),
                  QuotaError);
  CHECK(provider.calls() == 1);
}

TEST_CASE("policy sanity checks") {
  ScriptedProvider provider;
  ProviderPolicy policy = quick_policy();
  policy.retry.max_attempts = 0;
  CHECK_THROWS_AS(FetchClient(provider, policy), ConfigError);

  testsupport::TempDir tmp("fetch");
  CacheStore cache(tmp.path());
  CHECK_THROWS_AS(fetch_series(request({2, -2}), provider, quick_policy(), cache),
                  std::invalid_argument);
}

TEST_CASE("an extended window fetches only the missing flank") {
  ScriptedProvider provider;
  for (int d = -30; d <= 0; ++d) {
    provider.canned[kRelease.plus_days(d)] = static_cast<std::uint64_t>(100 + d);
  }

  testsupport::TempDir tmp("fetch");
  CacheStore cache(tmp.path());
  fetch_series(request({-10, 0}), provider, quick_policy(), cache);
  CHECK(provider.calls() == 1);

  const SeriesFetch wide = fetch_series(request({-20, 0}), provider, quick_policy(), cache);
  CHECK(provider.calls() == 2);
  CHECK(wide.series.coverage() == OffsetRange{-20, 0});

  const auto ranges = provider.ranges();
  REQUIRE(ranges.size() == 2);
  CHECK(ranges[1].first == kRelease.plus_days(-20));
  CHECK(ranges[1].second == kRelease.plus_days(-11));

  // Cached file now spans the union.
  const auto cached = cache.load("https://ja.wikipedia.org/wiki/作品A");
  REQUIRE(cached.has_value());
  CHECK(cached->coverage() == OffsetRange{-20, 0});
}

TEST_CASE("a shifted release date reuses overlapping cached days") {
  ScriptedProvider provider;
  for (int d = -40; d <= 10; ++d) {
    provider.canned[kRelease.plus_days(d)] = static_cast<std::uint64_t>(500 + d);
  }

  testsupport::TempDir tmp("fetch");
  CacheStore cache(tmp.path());
  fetch_series(request({-10, 0}), provider, quick_policy(), cache);
  CHECK(provider.calls() == 1);

  // Same article, release three days later: dates shift, cached days help.
  FetchRequest shifted{"https://ja.wikipedia.org/wiki/作品A", kRelease.plus_days(3),
                       OffsetRange{-10, 0}};
  const SeriesFetch got = fetch_series(shifted, provider, quick_policy(), cache);
  CHECK(provider.calls() == 2);
  const auto ranges = provider.ranges();
  // Only the three new trailing dates are fetched.
  CHECK(ranges[1].first == kRelease.plus_days(1));
  CHECK(ranges[1].second == kRelease.plus_days(3));
  // Offsets are relative to the new release date.
  CHECK(got.series.at(0) == 500 + 3);
  CHECK(got.series.at(-10) == 500 - 7);
}

namespace {

Manifest fixture_manifest(int n_films, int window_start = -5) {
  Manifest manifest{kJA, window_start, {}};
  for (int i = 0; i < n_films; ++i) {
    const std::string title = "Film " + std::to_string(i);
    const std::string url = "https://ja.wikipedia.org/wiki/作品" + std::to_string(i);
    manifest.films.push_back(ManifestEntry{title, kRelease.plus_days(i), url,
                                           CacheStore::series_filename(url),
                                           AlignmentMethod::automatic});
  }
  return manifest;
}

std::vector<FilmRecord> fixture_catalog(int n_films) {
  std::vector<FilmRecord> records;
  for (int i = 0; i < n_films; ++i) {
    records.push_back(FilmRecord{"Film " + std::to_string(i), kJA, kRelease.plus_days(i),
                                 1'000'000ull + static_cast<std::uint64_t>(i), 200});
  }
  return records;
}

DailyCounts full_canned(int n_films, int window_start = -5) {
  DailyCounts canned;
  for (int i = 0; i < n_films; ++i) {
    for (int d = window_start - 2; d <= 2; ++d) {
      canned[kRelease.plus_days(i + d)] = static_cast<std::uint64_t>(10 + i);
    }
  }
  return canned;
}

}  // namespace

TEST_CASE("fetch_dataset assembles films and a report in manifest order") {
  const Manifest manifest = fixture_manifest(3);
  const auto catalog = fixture_catalog(3);
  ScriptedProvider provider;
  provider.canned = full_canned(3);

  testsupport::TempDir tmp("dataset");
  CacheStore cache(tmp.path());
  auto [dataset, report] =
      fetch_dataset(manifest, catalog, provider, quick_policy(), cache);

  CHECK(dataset.films.size() == 3);
  CHECK(dataset.window_start == -5);
  REQUIRE(report.films.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(report.films[i].title == manifest.films[i].title);
    CHECK(report.films[i].ok());
    CHECK(report.films[i].attempts == 1);
  }
  CHECK(report.failures() == 0);

  const std::string json = write_fetch_report_json(report);
  for (const char* key :
       {"\"article_url\"", "\"status\"", "\"attempts\"", "\"filled_days\""}) {
    CHECK(json.find(key) != std::string::npos);
  }
}

TEST_CASE("a permanently failing film is excluded but reported") {
  const Manifest manifest = fixture_manifest(3);
  const auto catalog = fixture_catalog(3);
  ScriptedProvider provider;
  provider.canned = full_canned(3);
  provider.quota_urls = {manifest.films[1].article_url};

  testsupport::TempDir tmp("dataset");
  CacheStore cache(tmp.path());
  auto [dataset, report] =
      fetch_dataset(manifest, catalog, provider, quick_policy(), cache);

  CHECK(dataset.films.size() == 2);
  CHECK(report.failures() == 1);
  CHECK(!report.films[1].ok());
  CHECK(report.films[1].status.find("failed:") == 0);
}

TEST_CASE("a manifest entry missing from the catalog is a per-film failure") {
  Manifest manifest = fixture_manifest(2);
  manifest.films[1].title = "Not In Catalog";
  const auto catalog = fixture_catalog(2);
  ScriptedProvider provider;
  provider.canned = full_canned(2);

  testsupport::TempDir tmp("dataset");
  CacheStore cache(tmp.path());
  auto [dataset, report] =
      fetch_dataset(manifest, catalog, provider, quick_policy(), cache);
  CHECK(dataset.films.size() == 1);
  CHECK(report.films[1].status == "failed: not in catalog");
}

TEST_CASE("fetch_dataset fatal cases") {
  ScriptedProvider provider;
  testsupport::TempDir tmp("dataset");
  CacheStore cache(tmp.path());

  const Manifest empty{kJA, -5, {}};
  CHECK_THROWS_AS(fetch_dataset(empty, {}, provider, quick_policy(), cache), DataError);

  Manifest manifest = fixture_manifest(2);
  provider.quota_urls = {manifest.films[0].article_url, manifest.films[1].article_url};
  CHECK_THROWS_WITH_AS(
      fetch_dataset(manifest, fixture_catalog(2), provider, quick_policy(), cache),
      doctest::Contains("every film failed"), DataError);
}

TEST_CASE("warm-cache rerun is idempotent: zero calls, identical bytes") {
  const Manifest manifest = fixture_manifest(4);
  const auto catalog = fixture_catalog(4);
  ScriptedProvider provider;
  provider.canned = full_canned(4);

  testsupport::TempDir tmp("dataset");
  CacheStore cache(tmp.path());
  fetch_dataset(manifest, catalog, provider, quick_policy(), cache);
  const int calls_after_first = provider.calls();

  std::vector<std::string> bytes_first;
  for (const auto& entry : manifest.films) {
    bytes_first.push_back(read_text_file(cache.series_path(entry.article_url)));
  }

  auto [dataset, report] =
      fetch_dataset(manifest, catalog, provider, quick_policy(), cache);
  CHECK(provider.calls() == calls_after_first);
  for (const auto& film : report.films) {
    CHECK(film.attempts == 0);
  }
  for (std::size_t i = 0; i < manifest.films.size(); ++i) {
    CHECK(read_text_file(cache.series_path(manifest.films[i].article_url)) ==
          bytes_first[i]);
  }
  CHECK(dataset.films.size() == 4);
}

TEST_CASE("zero-fill accounting sums to the provider's absent days") {
  std::mt19937_64 rng(606);
  std::uniform_int_distribution<int> coin(0, 3);

  const int n_films = 5;
  const int window_start = -8;
  const Manifest manifest = fixture_manifest(n_films, window_start);
  const auto catalog = fixture_catalog(n_films);

  ScriptedProvider provider;
  int absent = 0;
  for (int i = 0; i < n_films; ++i) {
    const Date release = manifest.films[i].release_date;
    for (int d = window_start; d <= 0; ++d) {
      if (coin(rng) == 0) {
        ++absent;  // day withheld from the provider
      } else {
        provider.canned[release.plus_days(d)] = 7;
      }
    }
  }
  // Release dates are staggered one day apart, so withheld days for one
  // film may be served for another; count per-request absences instead.
  testsupport::TempDir tmp("dataset");
  CacheStore cache(tmp.path());
  auto [dataset, report] =
      fetch_dataset(manifest, catalog, provider, quick_policy(), cache);

  int filled = 0;
  int truly_absent = 0;
  for (int i = 0; i < n_films; ++i) {
    const Date release = manifest.films[i].release_date;
    for (int d = window_start; d <= 0; ++d) {
      if (!provider.canned.count(release.plus_days(d))) ++truly_absent;
    }
  }
  for (const auto& film : report.films) filled += film.filled_days;
  CHECK(filled == truly_absent);
}

TEST_CASE("rate limiter bounds concurrency and spacing") {
  const int n_films = 8;
  const Manifest manifest = fixture_manifest(n_films);
  const auto catalog = fixture_catalog(n_films);
  ScriptedProvider provider;
  provider.canned = full_canned(n_films);

  ProviderPolicy policy;
  policy.max_concurrent = 3;
  policy.min_request_interval = milliseconds(20);
  policy.retry = {1, milliseconds(1)};

  testsupport::TempDir tmp("dataset");
  CacheStore cache(tmp.path());
  fetch_dataset(manifest, catalog, provider, policy, cache);

  CHECK(provider.max_in_flight() <= 3);

  auto starts = provider.starts();
  std::sort(starts.begin(), starts.end());
  REQUIRE(starts.size() == static_cast<std::size_t>(n_films));
  for (std::size_t i = 1; i < starts.size(); ++i) {
    const auto gap = duration_cast<microseconds>(starts[i] - starts[i - 1]);
    // Scheduling noise between the limiter gate and the recorded
    // timestamp only ever widens the gap upstream; allow 2ms of slack.
    CHECK(gap.count() >= 18'000);
  }
}

// ---------------------------------------------------------------------------
// Live-HTTP plumbing against an in-process server.

namespace {

struct LocalServer {
  httplib::Server server;
  std::thread thread;
  int port = 0;

  // Call after installing handlers.
  void start() {
    port = server.bind_to_any_port("127.0.0.1");
    thread = std::thread([this] { server.listen_after_bind(); });
    while (!server.is_running()) std::this_thread::sleep_for(1ms);
  }

  ~LocalServer() {
    server.stop();
    if (thread.joinable()) thread.join();
  }
};

}  // namespace

TEST_CASE("http pageview provider with retries against a local server") {
  LocalServer local;
  std::atomic<int> hits{0};
  local.server.Get("/views", [&](const httplib::Request& req, httplib::Response& res) {
    if (hits.fetch_add(1) < 2) {
      res.status = 500;
      return;
    }
    CHECK(req.has_param("article"));
    CHECK(req.get_param_value("start") == "2013-06-05");
    CHECK(req.get_param_value("end") == "2013-06-07");
    res.set_content(R"json({"daily": {"2013-06-05": 4, "2013-06-07": 9}})json",
                    "application/json");
  });
  local.start();
  const int port = local.port;

  HttpPageviewProvider provider(HttpPageviewProvider::Config{
      "http://127.0.0.1:" + std::to_string(port) +
      "/views?article={article}&start={start}&end={end}"});

  ProviderPolicy policy = quick_policy();
  testsupport::TempDir tmp("http");
  CacheStore cache(tmp.path());
  const SeriesFetch got = fetch_series(request({-2, 0}), provider, policy, cache);
  CHECK(got.attempts == 3);
  CHECK(got.series.at(-2) == 4);
  CHECK(got.series.at(-1) == 0);
  CHECK(got.series.at(0) == 9);
  CHECK(got.filled_days == 1);
}

TEST_CASE("http pageview provider rejects negative counts without retrying") {
  LocalServer local;
  std::atomic<int> hits{0};
  local.server.Get("/views", [&](const httplib::Request&, httplib::Response& res) {
    hits.fetch_add(1);
    res.set_content(R"json({"2013-06-06": -3})json", "application/json");
  });
  local.start();
  const int port = local.port;

  HttpPageviewProvider provider(HttpPageviewProvider::Config{
      "http://127.0.0.1:" + std::to_string(port) +
      "/views?article={article}&start={start}&end={end}"});

  testsupport::TempDir tmp("http");
  CacheStore cache(tmp.path());
  CHECK_THROWS_AS(fetch_series(request({-1, 0}), provider, quick_policy(), cache),
                  DataError);
  CHECK(hits.load() == 1);
}

TEST_CASE("http search provider maps status codes to error kinds") {
  LocalServer local;
  local.server.Get("/search", [&](const httplib::Request& req, httplib::Response& res) {
    const std::string q = req.get_param_value("q");
    if (q.find("quota") != std::string::npos) {
      res.status = 429;
      return;
    }
    res.set_content(
        R"json(["https://ja.wikipedia.org/wiki/ゼロ・グラビティ",
                "https://en.wikipedia.org/wiki/Gravity_(film)"])json",
        "application/json");
  });
  local.start();
  const int port = local.port;

  align::HttpSearchProvider provider(align::HttpSearchProvider::Config{
      "http://127.0.0.1:" + std::to_string(port) + "/search?q={query}"});

  const auto candidates = align::resolve_candidates("Gravity", kJA, provider);
  REQUIRE(candidates.size() == 1);
  CHECK(candidates[0] == "https://ja.wikipedia.org/wiki/ゼロ・グラビティ");

  CHECK_THROWS_AS(provider.search("quota trigger", kJA), QuotaError);
}

TEST_CASE("film list fetch over the SPARQL GET protocol") {
  LocalServer local;
  local.server.Get("/sparql", [&](const httplib::Request& req, httplib::Response& res) {
    CHECK(req.get_param_value("format") == "application/sparql-results+json");
    CHECK(req.get_param_value("query").find("SELECT ?film") != std::string::npos);
    res.set_content(
        R"json({"results":{"bindings":[
          {"film":{"type":"uri","value":"http://ja.dbpedia.org/resource/カミヨ"}}
        ]}})json",
        "application/json");
  });
  local.start();
  const int port = local.port;

  const align::FilmListQuery query =
      align::build_film_list_query("ja", std::vector<int>{2013}, false);
  const align::FilmList list = align::fetch_film_list_http(
      "http://127.0.0.1:" + std::to_string(port) + "/sparql", query);
  CHECK(list.urls.size() == 1);
  CHECK(list.contains("https://ja.wikipedia.org/wiki/カミヨ"));
}
