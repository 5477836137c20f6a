#include <benchmark/benchmark.h>

#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "wikibox/align/normalize.hpp"
#include "wikibox/catalog.hpp"
#include "wikibox/model/design.hpp"
#include "wikibox/model/evaluate.hpp"
#include "wikibox/model/regression.hpp"
#include "wikibox/report/svg.hpp"

using namespace wikibox;

namespace {

Dataset synthetic_dataset(std::size_t n_films, int window_start = -49) {
  std::mt19937_64 rng(4001);
  std::uniform_int_distribution<int> screens(80, 900);
  std::uniform_real_distribution<double> level(500.0, 20000.0);
  std::normal_distribution<double> noise(0.0, 1.0);

  const Market market = Market::from_code("US");
  Dataset d{market, {}, window_start};
  for (std::size_t i = 0; i < n_films; ++i) {
    const int s = screens(rng);
    std::map<int, std::uint64_t> daily;
    double total = 0.0;
    for (int t = window_start; t <= 0; ++t) {
      const double v = level(rng);
      total += v;
      daily[t] = static_cast<std::uint64_t>(v);
    }
    const double revenue = 9000.0 * s + 25.0 * total + 2.0e5 * std::abs(noise(rng)) + 1.0;
    FilmRecord record{"Bench Film " + std::to_string(i), market,
                      Date(2013, 3, 1).plus_days(static_cast<int>(i % 200)),
                      static_cast<std::uint64_t>(revenue),
                      static_cast<std::uint32_t>(s)};
    PageviewSeries views("https://en.wikipedia.org/wiki/Bench_Film_" + std::to_string(i),
                         record.release_date, OffsetRange{window_start, 0},
                         std::move(daily));
    d.films.push_back(AlignedFilm{std::move(record),
                                  views.article_url(), std::move(views),
                                  AlignmentMethod::automatic});
  }
  return d;
}

void BM_FitOls(benchmark::State& state) {
  const Dataset d = synthetic_dataset(static_cast<std::size_t>(state.range(0)));
  const model::DesignMatrix m = model::build_design_matrix(d, -7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(model::fit_ols(m, true));
  }
}
BENCHMARK(BM_FitOls)->Arg(50)->Arg(150)->Arg(300);

void BM_BuildDesignMatrix(benchmark::State& state) {
  const Dataset d = synthetic_dataset(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(model::build_design_matrix(d, -7));
  }
}
BENCHMARK(BM_BuildDesignMatrix)->Arg(150);

void BM_Loocv(benchmark::State& state) {
  const Dataset d = synthetic_dataset(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(model::loocv_predictions(d, -7, true));
  }
}
BENCHMARK(BM_Loocv)->Arg(50)->Arg(150)->Arg(300);

void BM_R2Evolution(benchmark::State& state) {
  const Dataset d = synthetic_dataset(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(model::r2_evolution(d, -49, -1, true));
  }
}
BENCHMARK(BM_R2Evolution)->Arg(150)->Arg(300);

void BM_ParseCatalog(benchmark::State& state) {
  const Dataset d = synthetic_dataset(static_cast<std::size_t>(state.range(0)));
  std::vector<FilmRecord> records;
  for (const auto& film : d.films) records.push_back(film.record);
  const std::string text = serialize_catalog(records);
  const Market market = Market::from_code("US");
  for (auto _ : state) {
    benchmark::DoNotOptimize(parse_catalog(text, market));
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_ParseCatalog)->Arg(300);

void BM_NormalizeTitle(benchmark::State& state) {
  const std::vector<std::string> titles{
      "Star Trek: Into Darkness", "42 (Film)", "風立ちぬ_(2013年の映画)",
      "Die UNENDLICHE Geschichte, Teil 2", "  Frozen "};
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        align::normalize_title(titles[i % titles.size()], "en"));
    ++i;
  }
}
BENCHMARK(BM_NormalizeTitle);

void BM_RenderLineChart(benchmark::State& state) {
  report::LineChartSpec spec;
  spec.title = "R² evolution";
  spec.x_label = "days before release";
  spec.y_label = "R²";
  spec.x_reversed = true;
  for (int day = 49; day >= 1; --day) {
    spec.points.emplace_back(day, 0.2 + 0.01 * ((49 - day) % 30));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(report::render_line_chart(spec));
  }
}
BENCHMARK(BM_RenderLineChart);

}  // namespace

BENCHMARK_MAIN();
