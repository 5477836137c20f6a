#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "wikibox/errors.hpp"
#include "wikibox/report/config.hpp"
#include "wikibox/report/run.hpp"

namespace {

struct CliFlags {
  std::optional<std::string> config_path;
  std::optional<std::string> market;
  std::optional<std::string> out_dir;
  std::optional<std::string> catalog;
  std::optional<std::string> cache_dir;
  std::optional<std::string> fixtures_dir;
  std::optional<int> window_start;
  std::optional<int> loocv_day;
  std::optional<int> top_n;
  bool no_intercept = false;
};

wikibox::report::RunConfig build_config(const CliFlags& flags) {
  wikibox::report::FlatConfig flat;
  if (flags.config_path) {
    flat = wikibox::report::FlatConfig::load(*flags.config_path);
  }
  auto config = wikibox::report::RunConfig::from_flat(flat);

  if (flags.market) config.market = wikibox::Market::from_code(*flags.market);
  if (flags.out_dir) config.out_dir = *flags.out_dir;
  if (flags.catalog) config.catalog_path = *flags.catalog;
  if (flags.cache_dir) config.cache_dir = *flags.cache_dir;
  if (flags.window_start) config.window_start = *flags.window_start;
  if (flags.loocv_day) config.loocv_t = *flags.loocv_day;
  if (flags.top_n) config.top_n_errors = *flags.top_n;
  if (flags.no_intercept) config.with_intercept = false;
  if (flags.fixtures_dir) config.apply_fixture_dir(*flags.fixtures_dir);
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "wikibox: opening-weekend box-office forecasting from encyclopedia "
      "pageview time series"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  CliFlags flags;
  app.add_option("--config", flags.config_path, "flat key=value configuration file");
  app.add_option("--market", flags.market, "market code (US, UK, AU, DE, JA)");
  app.add_option("--out", flags.out_dir, "output directory (default ./out)");
  app.add_option("--catalog", flags.catalog, "catalog CSV path");
  app.add_option("--cache", flags.cache_dir, "pageview cache directory");
  app.add_option("--fixtures", flags.fixtures_dir,
                 "fixture directory (film_list.sparql.json, search_fixture.json, "
                 "pageviews.json, manual_overrides.json, catalog.csv)");
  app.add_option("--window-start", flags.window_start,
                 "day offset where cumulative counting starts (negative)");
  app.add_option("--loocv-day", flags.loocv_day,
                 "day offset used for cross-validated predictions");
  app.add_option("--top-n", flags.top_n, "rows in the relative-error report");
  app.add_flag("--no-intercept", flags.no_intercept,
               "fit y = a1*screens + a2*views without a constant term");

  auto* align_cmd = app.add_subcommand(
      "align", "map catalog titles to article URLs, write manifest + summary");
  auto* fetch_cmd = app.add_subcommand(
      "fetch", "materialize pageview series into the cache, write fetch report");
  auto* evaluate_cmd = app.add_subcommand(
      "evaluate", "LOOCV errors, per-day fits, R² evolution, CSV/SVG artifacts");
  auto* ablate_cmd = app.add_subcommand(
      "ablate-top", "evaluate with the k top-grossing films removed");
  std::size_t ablate_k = 0;
  ablate_cmd->add_option("k", ablate_k, "how many top earners to drop")->required();
  auto* pipeline_cmd =
      app.add_subcommand("pipeline", "align, fetch and evaluate in one go");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    const wikibox::report::RunConfig config = build_config(flags);
    if (align_cmd->parsed()) {
      wikibox::report::run_align(config, std::cout);
    } else if (fetch_cmd->parsed()) {
      wikibox::report::run_fetch(config, std::cout);
    } else if (evaluate_cmd->parsed()) {
      wikibox::report::run_evaluate(config, std::cout);
    } else if (ablate_cmd->parsed()) {
      wikibox::report::run_ablate_top(config, ablate_k, std::cout);
    } else if (pipeline_cmd->parsed()) {
      wikibox::report::run_pipeline(config, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return wikibox::report::exit_code_for(e);
  }
  return 0;
}
