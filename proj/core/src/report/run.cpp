#include "wikibox/report/run.hpp"

#include <algorithm>
#include <charconv>
#include <memory>
#include <numeric>
#include <ostream>
#include <set>

#include "wikibox/align/language.hpp"
#include "wikibox/align/search.hpp"
#include "wikibox/align/sparql.hpp"
#include "wikibox/csv.hpp"
#include "wikibox/errors.hpp"
#include "wikibox/ioutil.hpp"
#include "wikibox/model/regression.hpp"
#include "wikibox/report/svg.hpp"

namespace wikibox::report {

namespace fs = std::filesystem;

void RunConfig::validate() const {
  if (window_start >= 0) {
    throw ConfigError("window_start must be negative, got " +
                      std::to_string(window_start));
  }
  if (loocv_t < window_start || loocv_t > 0) {
    throw ConfigError("loocv day " + std::to_string(loocv_t) + " must lie in [" +
                      std::to_string(window_start) + ", 0]");
  }
  if (top_n_errors < 1) {
    throw ConfigError("top_n_errors must be at least 1");
  }
  if (policy.max_concurrent < 1) {
    throw ConfigError("max_concurrent must be at least 1");
  }
  if (policy.retry.max_attempts < 1) {
    throw ConfigError("max_attempts must be at least 1");
  }
}

RunConfig RunConfig::from_flat(const FlatConfig& flat) {
  static const std::set<std::string> kKnown{
      "market",           "catalog",
      "film_list",        "sparql_endpoint",
      "film_list_years",  "film_list_animation",
      "search_fixture",   "search_endpoint_template",
      "pageview_fixture", "endpoint_template",
      "min_request_interval_ms", "max_concurrent",
      "max_attempts",     "backoff_ms",
      "overrides",        "language_table",
      "cache_dir",        "out_dir",
      "window_start",     "loocv_t",
      "intercept",        "top_n_errors"};
  for (const auto& [key, _] : flat.entries()) {
    if (!kKnown.count(key)) {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }

  RunConfig config;
  if (auto market = flat.get("market")) config.market = Market::from_code(*market);
  if (auto v = flat.get("catalog")) config.catalog_path = *v;
  if (auto v = flat.get("film_list")) config.film_list_path = *v;
  if (auto v = flat.get("sparql_endpoint")) config.sparql_endpoint = *v;
  if (auto v = flat.get("film_list_years")) {
    config.film_list_years.clear();
    std::string_view rest = *v;
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string_view token = rest.substr(0, comma);
      int year = 0;
      auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), year);
      if (ec != std::errc{} || ptr != token.data() + token.size()) {
        throw ConfigError("film_list_years: bad year '" + std::string(token) + "'");
      }
      config.film_list_years.push_back(year);
      rest.remove_prefix(comma == std::string_view::npos ? rest.size() : comma + 1);
    }
  }
  config.film_list_animation = flat.get_bool("film_list_animation", true);
  if (auto v = flat.get("search_fixture")) config.search_fixture_path = *v;
  if (auto v = flat.get("search_endpoint_template")) config.search_endpoint_template = *v;
  if (auto v = flat.get("pageview_fixture")) config.pageview_fixture_path = *v;
  if (auto v = flat.get("endpoint_template")) config.pageview_endpoint_template = *v;
  if (auto v = flat.get("overrides")) config.overrides_path = *v;
  if (auto v = flat.get("language_table")) config.language_table_path = *v;
  if (auto v = flat.get("cache_dir")) config.cache_dir = *v;
  if (auto v = flat.get("out_dir")) config.out_dir = *v;
  config.window_start = flat.get_int("window_start", config.window_start);
  config.loocv_t = flat.get_int("loocv_t", config.loocv_t);
  config.with_intercept = flat.get_bool("intercept", true);
  config.top_n_errors = flat.get_int("top_n_errors", config.top_n_errors);
  config.policy.min_request_interval =
      std::chrono::milliseconds(flat.get_int("min_request_interval_ms", 0));
  config.policy.max_concurrent = flat.get_int("max_concurrent", 4);
  config.policy.retry.max_attempts = flat.get_int("max_attempts", 3);
  config.policy.retry.initial_backoff =
      std::chrono::milliseconds(flat.get_int("backoff_ms", 100));
  return config;
}

void RunConfig::apply_fixture_dir(const fs::path& dir) {
  if (catalog_path.empty()) catalog_path = dir / "catalog.csv";
  film_list_path = dir / "film_list.sparql.json";
  search_fixture_path = dir / "search_fixture.json";
  pageview_fixture_path = dir / "pageviews.json";
  const fs::path overrides = dir / "manual_overrides.json";
  if (fs::exists(overrides)) overrides_path = overrides;
}

namespace {

const align::LanguageTable& language_table_for(const RunConfig& config,
                                               std::unique_ptr<align::LanguageTable>& own) {
  if (config.language_table_path.empty()) {
    return align::LanguageTable::builtin();
  }
  own = std::make_unique<align::LanguageTable>(
      align::LanguageTable::from_json_file(config.language_table_path));
  return *own;
}

std::vector<FilmRecord> load_catalog(const RunConfig& config) {
  if (config.catalog_path.empty()) {
    throw ConfigError("no catalog path configured");
  }
  return parse_catalog_strict(read_text_file(config.catalog_path), config.market);
}

align::FilmList load_film_list(const RunConfig& config,
                               const align::LanguageTable& table) {
  const std::string language(config.market.wiki_language());
  if (!config.film_list_path.empty()) {
    return align::parse_film_list(read_text_file(config.film_list_path), language,
                                  "fixture:" + config.film_list_path.filename().string(),
                                  table);
  }
  if (!config.sparql_endpoint.empty()) {
    const align::FilmListQuery query =
        align::build_film_list_query(language, config.film_list_years,
                                     config.film_list_animation, table);
    return align::fetch_film_list_http(config.sparql_endpoint, query, table);
  }
  throw ConfigError("no film list source: set film_list or sparql_endpoint");
}

std::unique_ptr<align::SearchProvider> make_search_provider(const RunConfig& config) {
  if (!config.search_fixture_path.empty()) {
    return std::make_unique<align::FixtureSearchProvider>(
        align::FixtureSearchProvider::from_file(config.search_fixture_path));
  }
  if (!config.search_endpoint_template.empty()) {
    return std::make_unique<align::HttpSearchProvider>(
        align::HttpSearchProvider::Config{config.search_endpoint_template});
  }
  throw ConfigError("no search source: set search_fixture or search_endpoint_template");
}

std::unique_ptr<ingest::PageviewProvider> make_pageview_provider(const RunConfig& config) {
  if (!config.pageview_fixture_path.empty()) {
    return std::make_unique<ingest::FixturePageviewProvider>(
        ingest::FixturePageviewProvider::from_file(config.pageview_fixture_path));
  }
  if (!config.pageview_endpoint_template.empty()) {
    return std::make_unique<ingest::HttpPageviewProvider>(
        ingest::HttpPageviewProvider::Config{config.pageview_endpoint_template});
  }
  throw ConfigError("no pageview source: set pageview_fixture or endpoint_template");
}

fs::path cache_dir_for(const RunConfig& config) {
  return config.cache_dir.empty() ? config.out_dir / "cache" : config.cache_dir;
}

// Revenue-descending order with the exclude-top tie-break: release date
// ascending, then title.
std::vector<std::size_t> revenue_order(const Dataset& dataset) {
  std::vector<std::size_t> order(dataset.films.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const FilmRecord& fa = dataset.films[a].record;
    const FilmRecord& fb = dataset.films[b].record;
    if (fa.revenue != fb.revenue) return fa.revenue > fb.revenue;
    if (fa.release_date != fb.release_date) return fa.release_date < fb.release_date;
    return fa.title < fb.title;
  });
  return order;
}

void write_evaluation_artifacts(const Dataset& dataset,
                                const model::EvaluationReport& report,
                                const RunConfig& config, const fs::path& out_dir,
                                std::ostream& log) {
  // r2_evolution.csv
  {
    std::string csv = "t,r_squared\n";
    for (const auto& [t, r2] : report.r2_evolution) {
      csv += std::to_string(t) + "," + format_double(r2) + "\n";
    }
    write_file_atomic(out_dir / "r2_evolution.csv", csv);
  }

  // Per-day fit records.
  for (const auto& [t, _] : report.r2_evolution) {
    const model::DesignMatrix m = model::build_design_matrix(dataset, t);
    const model::RegressionFit fit = model::fit_ols(m, config.with_intercept);
    write_file_atomic(out_dir / "fits" / ("fit_t" + std::to_string(t) + ".json"),
                      model::write_fit_json(fit));
  }

  // relative_errors.csv: top earners first.
  const std::vector<std::size_t> order = revenue_order(dataset);
  const std::size_t shown =
      std::min<std::size_t>(static_cast<std::size_t>(config.top_n_errors), order.size());
  std::vector<double> bar_values;
  {
    std::string csv = "rank,title,revenue,prediction,relative_error\n";
    for (std::size_t rank = 0; rank < shown; ++rank) {
      const std::size_t i = order[rank];
      const model::PerFilmError& film = report.per_film[i];
      const std::string fields[] = {
          std::to_string(rank + 1), film.title,
          std::to_string(dataset.films[i].record.revenue),
          format_double(film.prediction), format_double(film.relative_error)};
      csv += csv::join(fields);
      csv += '\n';
      bar_values.push_back(film.relative_error);
    }
    write_file_atomic(out_dir / "relative_errors.csv", csv);
  }

  // Figures.
  {
    LineChartSpec spec;
    spec.title = "R² evolution (" + std::string(config.market.code_name()) + ", n=" +
                 std::to_string(dataset.films.size()) + ")";
    spec.x_label = "days before release";
    spec.y_label = "R²";
    for (const auto& [t, r2] : report.r2_evolution) {
      spec.points.emplace_back(static_cast<double>(-t), r2);
    }
    spec.x_reversed = true;
    write_file_atomic(out_dir / "r2_evolution.svg", render_line_chart(spec));
  }
  {
    BarChartSpec spec;
    spec.title = "Relative error, top " + std::to_string(shown) + " films by revenue (" +
                 std::string(config.market.code_name()) + ")";
    spec.x_label = "rank (by revenue, descending)";
    spec.y_label = "relative error";
    spec.values = bar_values;
    write_file_atomic(out_dir / "relative_errors.svg", render_bar_chart(spec));
  }

  write_file_atomic(out_dir / "evaluation_report.json",
                    model::write_evaluation_json(report));

  double best_r2 = report.r2_evolution.front().second;
  int best_t = report.r2_evolution.front().first;
  for (const auto& [t, r2] : report.r2_evolution) {
    if (r2 > best_r2) {
      best_r2 = r2;
      best_t = t;
    }
  }
  log << "evaluated " << dataset.films.size() << " films; mean relative error at t="
      << report.loocv_t << ": " << format_double(mean_relative_error(report))
      << "; max in-sample R² " << format_double(best_r2) << " at t=" << best_t
      << "; LOOCV R² "
      << format_double(model::loocv_r_squared(dataset, report.loocv_t,
                                              config.with_intercept))
      << "\n";
}

std::pair<Dataset, Manifest> load_cached_dataset(const RunConfig& config,
                                                 std::ostream& log) {
  const fs::path manifest_path = config.out_dir / "manifest.json";
  const Manifest manifest = read_manifest_json(read_text_file(manifest_path));
  if (manifest.market != config.market) {
    throw DataError("manifest market " + std::string(manifest.market.code_name()) +
                    " does not match configured market " +
                    std::string(config.market.code_name()));
  }
  const std::vector<FilmRecord> catalog = load_catalog(config);
  ingest::CacheStore cache(cache_dir_for(config));
  auto [dataset, skipped] = ingest::load_dataset(manifest, catalog, cache);
  for (const std::string& s : skipped) {
    log << "skipping " << s << "\n";
  }

  const ValidationReport validation = validate_dataset(dataset);
  for (const std::string& w : validation.warnings) {
    log << "warning: " << w << "\n";
  }
  if (!validation.ok()) {
    std::string msg = "dataset validation failed:";
    for (const std::string& f : validation.fatal) msg += "\n  " + f;
    throw DataError(msg);
  }
  return {std::move(dataset), manifest};
}

}  // namespace

align::AlignmentSummary run_align(const RunConfig& config, std::ostream& log) {
  config.validate();
  std::unique_ptr<align::LanguageTable> owned_table;
  const align::LanguageTable& table = language_table_for(config, owned_table);

  const std::vector<FilmRecord> catalog = load_catalog(config);
  const align::FilmList film_list = load_film_list(config, table);
  std::unique_ptr<align::SearchProvider> provider = make_search_provider(config);

  std::map<std::string, std::string> overrides;
  if (!config.overrides_path.empty()) {
    overrides = align::read_overrides_json(read_text_file(config.overrides_path));
  }

  auto [results, summary] = align::align_catalog(catalog, film_list, *provider,
                                                 overrides, table,
                                                 config.policy.max_concurrent);

  for (const std::string& w : summary.warnings) {
    log << "warning: " << w << "\n";
  }
  log << "aligned " << summary.aligned() << "/" << summary.total << " films ("
      << summary.aligned_auto << " automatic, " << summary.aligned_manual
      << " manual), " << summary.unaligned << " unaligned\n";

  if (summary.aligned() == 0) {
    throw DataError("no films aligned");
  }

  // Article URLs must be unique within a dataset; when two records land on
  // the same article, the earlier catalog entry keeps it.
  Manifest manifest{config.market, config.window_start, {}};
  std::set<std::string> taken;
  for (const align::AlignmentResult& result : results) {
    if (!result.aligned()) continue;
    if (!taken.insert(*result.url).second) {
      log << "warning: '" << result.title << "' aligned to already-taken "
          << *result.url << "; dropping it from the manifest\n";
      continue;
    }
    manifest.films.push_back(ManifestEntry{
        result.title, result.release_date, *result.url,
        ingest::CacheStore::series_filename(*result.url), result.method});
  }

  write_file_atomic(config.out_dir / "manifest.json", write_manifest_json(manifest));
  write_file_atomic(config.out_dir / "alignment_summary.json",
                    align::write_summary_json(summary));
  write_file_atomic(config.out_dir / "alignment_results.json",
                    align::write_results_json(results));
  return summary;
}

ingest::FetchReport run_fetch(const RunConfig& config, std::ostream& log) {
  config.validate();
  const Manifest manifest =
      read_manifest_json(read_text_file(config.out_dir / "manifest.json"));
  const std::vector<FilmRecord> catalog = load_catalog(config);
  std::unique_ptr<ingest::PageviewProvider> provider = make_pageview_provider(config);
  ingest::CacheStore cache(cache_dir_for(config));

  auto [dataset, report] =
      ingest::fetch_dataset(manifest, catalog, *provider, config.policy, cache);

  int filled = 0;
  int attempts = 0;
  for (const auto& film : report.films) {
    filled += film.filled_days;
    attempts += film.attempts;
  }
  log << "fetched " << dataset.films.size() << "/" << manifest.films.size()
      << " films (" << attempts << " provider calls, " << filled
      << " zero-filled days, " << report.failures() << " failures)\n";
  for (const auto& film : report.films) {
    if (!film.ok()) {
      log << "failed: " << film.title << " (" << film.article_url << "): "
          << film.status << "\n";
    }
  }

  write_file_atomic(config.out_dir / "fetch_report.json",
                    write_fetch_report_json(report));
  return report;
}

model::EvaluationReport run_evaluate(const RunConfig& config, std::ostream& log) {
  config.validate();
  auto [dataset, manifest] = load_cached_dataset(config, log);
  const model::EvaluationReport report =
      model::evaluate_dataset(dataset, config.loocv_t,
                              OffsetRange{dataset.window_start, -1},
                              config.with_intercept);
  write_evaluation_artifacts(dataset, report, config, config.out_dir, log);
  return report;
}

model::EvaluationReport run_ablate_top(const RunConfig& config, std::size_t k,
                                       std::ostream& log) {
  config.validate();
  auto [dataset, manifest] = load_cached_dataset(config, log);
  const Dataset ablated = model::exclude_top_grossing(dataset, k);
  log << "excluded top " << k << " grossing films, " << ablated.films.size()
      << " remain\n";
  const model::EvaluationReport report =
      model::evaluate_dataset(ablated, config.loocv_t,
                              OffsetRange{ablated.window_start, -1},
                              config.with_intercept);
  write_evaluation_artifacts(ablated, report, config,
                             config.out_dir / ("ablate_top_" + std::to_string(k)), log);
  return report;
}

void run_pipeline(const RunConfig& config, std::ostream& log) {
  run_align(config, log);
  run_fetch(config, log);
  run_evaluate(config, log);
}

int exit_code_for(const std::exception& e) {
  if (const auto* error = dynamic_cast<const Error*>(&e)) {
    return static_cast<int>(error->kind());
  }
  if (dynamic_cast<const std::invalid_argument*>(&e) != nullptr) {
    return 2;
  }
  return 1;
}

}  // namespace wikibox::report
