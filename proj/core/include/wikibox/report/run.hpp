#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "wikibox/align/align.hpp"
#include "wikibox/ingest/fetch.hpp"
#include "wikibox/market.hpp"
#include "wikibox/model/evaluate.hpp"
#include "wikibox/report/config.hpp"

namespace wikibox::report {

// Everything one pipeline run needs. Input sources come in fixture
// (file-backed) and live (endpoint) flavors; fixtures win when both are set.
struct RunConfig {
  Market market = Market::from_code("US");

  std::filesystem::path catalog_path;
  std::filesystem::path film_list_path;  // SPARQL results JSON
  std::string sparql_endpoint;
  std::vector<int> film_list_years{2012, 2013};
  bool film_list_animation = true;

  std::filesystem::path search_fixture_path;
  std::string search_endpoint_template;  // {query} placeholder

  std::filesystem::path pageview_fixture_path;
  std::string pageview_endpoint_template;  // {article},{start},{end}

  std::filesystem::path overrides_path;
  std::filesystem::path language_table_path;

  std::filesystem::path cache_dir;
  std::filesystem::path out_dir = "out";

  int window_start = -49;
  int loocv_t = -7;
  bool with_intercept = true;
  int top_n_errors = 50;

  ingest::ProviderPolicy policy;

  // Enforces window_start < 0, window_start <= loocv_t <= 0 and sane policy
  // numbers; throws ConfigError.
  void validate() const;

  // Reads the flat key=value document; unknown keys are rejected so typos
  // fail loudly.
  static RunConfig from_flat(const FlatConfig& flat);

  // Points catalog, film list, search, pageviews and overrides at the
  // conventional file names inside a fixture directory.
  void apply_fixture_dir(const std::filesystem::path& dir);
};

// Writes manifest.json, alignment_summary.json and alignment_results.json;
// throws DataError when not a single film aligns.
align::AlignmentSummary run_align(const RunConfig& config, std::ostream& log);

// Materializes pageview series into the cache and writes fetch_report.json.
ingest::FetchReport run_fetch(const RunConfig& config, std::ostream& log);

// Writes r2_evolution.csv/.svg, relative_errors.csv/.svg, per-day fit JSON
// under fits/, and evaluation_report.json.
model::EvaluationReport run_evaluate(const RunConfig& config, std::ostream& log);

// run_evaluate on the dataset minus its k top-grossing films, into
// out_dir/ablate_top_<k>/.
model::EvaluationReport run_ablate_top(const RunConfig& config, std::size_t k,
                                       std::ostream& log);

void run_pipeline(const RunConfig& config, std::ostream& log);

// 1 usage/config, 2 data, 3 provider.
int exit_code_for(const std::exception& e);

}  // namespace wikibox::report
