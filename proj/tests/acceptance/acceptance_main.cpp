// Acceptance suite: nine fixed criteria, one pass/fail line each.
// Run all: wikibox_acceptance
// Run one: wikibox_acceptance --criterion N

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "support/oracles.hpp"
#include "support/synth.hpp"
#include "wikibox/align/align.hpp"
#include "wikibox/align/search.hpp"
#include "wikibox/align/sparql.hpp"
#include "wikibox/catalog.hpp"
#include "wikibox/ioutil.hpp"
#include "wikibox/model/evaluate.hpp"
#include "wikibox/model/ols.hpp"
#include "wikibox/model/regression.hpp"

namespace fs = std::filesystem;
using namespace wikibox;
using namespace std::chrono;

namespace {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool condition, const std::string& message) {
  if (!condition) throw Failure(message);
}

fs::path fixture_dir() { return fs::path(WIKIBOX_FIXTURE_DIR); }

// --------------------------------------------------------------------------
// 1. fit_ols vs the normal-equations brute-force oracle: 1,000 seeded
//    full-rank instances, n <= 200, 2-3 parameters, 1e-8 relative.

void criterion_ols_oracle() {
  std::mt19937_64 rng(1729);
  std::uniform_real_distribution<double> feature(0.1, 10.0);
  std::uniform_real_distribution<double> coef(-5.0, 5.0);
  std::normal_distribution<double> noise(0.0, 0.5);
  std::uniform_int_distribution<std::size_t> n_dist(4, 200);

  for (int trial = 0; trial < 1000; ++trial) {
    const bool with_intercept = trial % 2 == 0;
    const std::size_t n = n_dist(rng);
    std::vector<double> x1(n), x2(n), y(n);
    const double a1 = coef(rng), a2 = coef(rng), a0 = coef(rng);
    for (std::size_t i = 0; i < n; ++i) {
      x1[i] = feature(rng);
      x2[i] = feature(rng);
      y[i] = a1 * x1[i] + a2 * x2[i] + (with_intercept ? a0 : 0.0) + noise(rng);
    }
    const model::LinearFit fit = model::fit_linear({x1, x2}, y, with_intercept);
    const std::vector<double> oracle =
        testsupport::normal_equations_fit({x1, x2}, y, with_intercept);
    std::vector<double> got = fit.coefficients;
    if (with_intercept) got.push_back(*fit.intercept);

    const double diff = testsupport::max_rel_diff(got, oracle);
    require(diff < 1e-8, "trial " + std::to_string(trial) + ": coefficient deviation " +
                             std::to_string(diff) + " exceeds 1e-8");
  }
}

// --------------------------------------------------------------------------
// 2. Noiseless recovery: coefficients within 1e-9, R^2 = 1 within 1e-12.

void criterion_exact_recovery() {
  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> feature(0.5, 50.0);
  std::uniform_real_distribution<double> coef(0.1, 8.0);
  std::uniform_int_distribution<std::size_t> n_dist(3, 120);

  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = n_dist(rng);
    std::vector<double> x1(n), x2(n), y(n);
    const double a1 = coef(rng), a2 = coef(rng);
    for (std::size_t i = 0; i < n; ++i) {
      x1[i] = feature(rng);
      x2[i] = feature(rng);
      y[i] = a1 * x1[i] + a2 * x2[i];
    }
    const model::LinearFit fit = model::fit_linear({x1, x2}, y, false);
    require(testsupport::rel_diff(fit.coefficients[0], a1) < 1e-9,
            "alpha_screens off at trial " + std::to_string(trial));
    require(testsupport::rel_diff(fit.coefficients[1], a2) < 1e-9,
            "alpha_views off at trial " + std::to_string(trial));
    require(std::abs(fit.r_squared - 1.0) < 1e-12,
            "R^2 not 1 at trial " + std::to_string(trial) + ": " +
                std::to_string(fit.r_squared));
  }
}

// --------------------------------------------------------------------------
// 3. LOOCV equals a naive per-fold refit, 100 seeded datasets of 20 films.

void criterion_loocv_equivalence() {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const Dataset d = testsupport::make_random_dataset(seed, 20);
    const int t = -7;
    const bool with_intercept = seed % 2 == 0;
    const std::vector<double> p = model::loocv_predictions(d, t, with_intercept);
    const model::DesignMatrix full = model::build_design_matrix(d, t);

    for (std::size_t held = 0; held < d.films.size(); ++held) {
      Dataset fold{d.market, {}, d.window_start};
      for (std::size_t i = 0; i < d.films.size(); ++i) {
        if (i != held) fold.films.push_back(d.films[i]);
      }
      const model::DesignMatrix m = model::build_design_matrix(fold, t);
      const std::vector<double> beta = testsupport::normal_equations_fit(
          {m.screens, m.cum_views}, m.revenue, with_intercept);
      double expected = beta[0] * full.screens[held] + beta[1] * full.cum_views[held];
      if (with_intercept) expected += beta[2];

      const double diff = testsupport::rel_diff(p[held], expected);
      require(diff < 1e-9, "seed " + std::to_string(seed) + " fold " +
                               std::to_string(held) + ": deviation " +
                               std::to_string(diff));
    }
  }
}

// --------------------------------------------------------------------------
// 4. The worked relative-error examples: an over-prediction of one million
//    on a ten-million film scores 0.1; the hundred-thousand film predicted
//    at one million scores 9.0.

void criterion_relative_error_examples() {
  const std::vector<double> e = model::relative_errors(
      std::vector<double>{10'000'000.0, 100'000.0},
      std::vector<double>{11'000'000.0, 1'000'000.0});
  require(e[0] == 0.1, "expected exactly 0.1, got " + format_double(e[0]));
  require(e[1] == 9.0, "expected exactly 9.0, got " + format_double(e[1]));
}

// --------------------------------------------------------------------------
// 5. On accruing-information synthetics, R^2 at t=-1 beats t=-30 in at
//    least 95 of 100 seeds.

void criterion_evolution_trend() {
  int rising = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const Dataset d = testsupport::make_accruing_dataset(seed, 300);
    const auto series = model::r2_evolution(d, -30, -1, true);
    const double early = series.front().second;
    const double late = series.back().second;
    if (late > early) ++rising;
  }
  require(rising >= 95, "R^2(-1) exceeded R^2(-30) in only " + std::to_string(rising) +
                            "/100 seeds");
}

// --------------------------------------------------------------------------
// 6. The bundled Japanese fixture aligns exactly 73 of 104 films and every
//    aligned URL is a film-list member.

void criterion_alignment_yield() {
  const fs::path dir = fixture_dir() / "ja";
  const std::vector<FilmRecord> catalog =
      parse_catalog_strict(read_text_file(dir / "catalog.csv"), Market::from_code("JA"));
  require(catalog.size() == 104, "fixture catalog has " +
                                     std::to_string(catalog.size()) + " films, not 104");

  const align::FilmList list =
      align::parse_film_list(read_text_file(dir / "ja_films_2012_2013.json"), "ja");
  require(list.urls.size() == 769, "fixture film list has " +
                                       std::to_string(list.urls.size()) +
                                       " URLs, not 769");

  align::FixtureSearchProvider provider =
      align::FixtureSearchProvider::from_file(dir / "search_fixture.json");
  const auto overrides =
      align::read_overrides_json(read_text_file(dir / "manual_overrides.json"));

  const auto [results, summary] = align::align_catalog(catalog, list, provider, overrides);
  require(summary.aligned() == 73, "aligned " + std::to_string(summary.aligned()) +
                                       " films, expected exactly 73");
  require(summary.total == 104, "summary total mismatch");

  for (const align::AlignmentResult& result : results) {
    if (result.aligned()) {
      require(list.contains(*result.url),
              "aligned URL not in the film list: " + *result.url);
    }
  }
}

// --------------------------------------------------------------------------
// 7. The Japanese film-list query matches the bundled golden file modulo
//    whitespace and carries all four category branches.

void criterion_sparql_golden() {
  const align::FilmListQuery query =
      align::build_film_list_query("ja", std::vector<int>{2012, 2013}, true);

  for (const char* category : {"2012年の映画", "2013年の映画", "2012年のアニメ映画",
                               "2013年のアニメ映画"}) {
    require(query.rendered.find(std::string("c:") + category) != std::string::npos,
            std::string("missing category branch ") + category);
  }

  auto strip = [](const std::string& text) {
    std::string out;
    for (char c : text) {
      if (c != ' ' && c != '\t' && c != '\n' && c != '\r') out += c;
    }
    return out;
  };
  const std::string golden =
      read_text_file(fixture_dir() / "golden" / "ja_films_2012_2013.rq");
  require(strip(query.rendered) == strip(golden),
          "rendered query deviates from the golden file beyond whitespace");
}

// --------------------------------------------------------------------------
// 8. Two full pipeline runs over the fixtures are byte-identical and fast.

int run_cli(const std::string& args) {
  const std::string cmd = std::string(WIKIBOX_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return status == -1 ? -1 : WEXITSTATUS(status);
}

void criterion_pipeline_determinism() {
  const fs::path base =
      fs::temp_directory_path() /
      ("wikibox_acceptance_" +
       std::to_string(steady_clock::now().time_since_epoch().count()));
  fs::create_directories(base);
  struct Cleanup {
    fs::path path;
    ~Cleanup() {
      std::error_code ec;
      fs::remove_all(path, ec);
    }
  } cleanup{base};

  const std::string fixtures = (fixture_dir() / "ja").string();
  const auto started = steady_clock::now();
  for (const char* tag : {"a", "b"}) {
    const int rc = run_cli("pipeline --market JA --fixtures '" + fixtures + "' --out '" +
                           (base / tag).string() + "'");
    require(rc == 0, std::string("pipeline run ") + tag + " exited with " +
                         std::to_string(rc));
  }
  const auto elapsed = duration_cast<seconds>(steady_clock::now() - started);
  require(elapsed.count() < 60, "two pipeline runs took " +
                                    std::to_string(elapsed.count()) + "s, budget is 60");

  std::map<fs::path, std::string> tree_a;
  for (const auto& entry : fs::recursive_directory_iterator(base / "a")) {
    if (entry.is_regular_file()) {
      tree_a[fs::relative(entry.path(), base / "a")] = read_text_file(entry.path());
    }
  }
  std::size_t checked = 0;
  for (const auto& entry : fs::recursive_directory_iterator(base / "b")) {
    if (!entry.is_regular_file()) continue;
    const fs::path rel = fs::relative(entry.path(), base / "b");
    auto it = tree_a.find(rel);
    require(it != tree_a.end(), "run b produced extra file " + rel.string());
    require(read_text_file(entry.path()) == it->second,
            "artifact differs between runs: " + rel.string());
    ++checked;
  }
  require(checked == tree_a.size(), "runs produced different file sets");
  require(checked > 60, "suspiciously few artifacts: " + std::to_string(checked));
}

// --------------------------------------------------------------------------
// 9. Scale equivariance over 200 seeded trials: targets scaled by c scale
//    coefficients and predictions by c (1e-12) leaving R^2 and the errors
//    alone (1e-12); scaling a feature column divides its coefficient and
//    preserves fitted values and R^2 (1e-10).

void criterion_invariance_suite() {
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> scale_dist(0.001, 1000.0);

  for (int trial = 0; trial < 200; ++trial) {
    const Dataset d = testsupport::make_random_dataset(3000 + trial, 20);
    const model::DesignMatrix m = model::build_design_matrix(d, -5);
    const bool with_intercept = trial % 2 == 0;
    const double c = scale_dist(rng);

    const model::LinearFit base =
        model::fit_linear({m.screens, m.cum_views}, m.revenue, with_intercept);

    {  // target scaling
      std::vector<double> y = m.revenue;
      for (double& v : y) v *= c;
      const model::LinearFit scaled =
          model::fit_linear({m.screens, m.cum_views}, y, with_intercept);
      require(testsupport::rel_diff(scaled.coefficients[0], c * base.coefficients[0]) <
                  1e-12,
              "target scale: alpha_screens trial " + std::to_string(trial));
      require(testsupport::rel_diff(scaled.coefficients[1], c * base.coefficients[1]) <
                  1e-12,
              "target scale: alpha_views trial " + std::to_string(trial));
      require(std::abs(scaled.r_squared - base.r_squared) < 1e-12,
              "target scale: R^2 drifted at trial " + std::to_string(trial));
      const std::vector<double> e0 = model::relative_errors(m.revenue, base.fitted);
      const std::vector<double> e1 = model::relative_errors(y, scaled.fitted);
      for (std::size_t i = 0; i < e0.size(); ++i) {
        require(std::abs(e0[i] - e1[i]) < 1e-12,
                "target scale: relative error drifted at trial " + std::to_string(trial));
      }
    }

    {  // feature scaling
      std::vector<double> views = m.cum_views;
      for (double& v : views) v *= c;
      const model::LinearFit scaled =
          model::fit_linear({m.screens, views}, m.revenue, with_intercept);
      require(testsupport::rel_diff(scaled.coefficients[1], base.coefficients[1] / c) <
                  1e-10,
              "feature scale: alpha_views trial " + std::to_string(trial));
      require(std::abs(scaled.r_squared - base.r_squared) < 1e-10,
              "feature scale: R^2 drifted at trial " + std::to_string(trial));
      for (std::size_t i = 0; i < base.fitted.size(); ++i) {
        require(testsupport::rel_diff(scaled.fitted[i], base.fitted[i]) < 1e-10,
                "feature scale: fitted value drifted at trial " + std::to_string(trial));
      }
    }
  }
}

struct Criterion {
  int id;
  const char* name;
  std::function<void()> run;
};

const std::vector<Criterion> kCriteria{
    {1, "OLS oracle suite (1,000 instances vs normal equations, 1e-8)",
     criterion_ols_oracle},
    {2, "exact recovery on noiseless linear data (1e-9 / 1e-12)",
     criterion_exact_recovery},
    {3, "LOOCV equals naive per-fold refit (100 seeds, 1e-9)",
     criterion_loocv_equivalence},
    {4, "relative-error worked examples (0.1 and 9.0, exact)",
     criterion_relative_error_examples},
    {5, "R^2 evolution rises on accruing synthetics (95%+ of 100 seeds)",
     criterion_evolution_trend},
    {6, "Japanese fixture aligns exactly 73/104, all members of the list",
     criterion_alignment_yield},
    {7, "film-list query matches the golden file modulo whitespace",
     criterion_sparql_golden},
    {8, "pipeline artifacts byte-identical across runs, under 60s",
     criterion_pipeline_determinism},
    {9, "scale-equivariance suite (200 seeded trials)",
     criterion_invariance_suite},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[i + 1]);
      ++i;
    }
  }

  int failures = 0;
  for (const Criterion& criterion : kCriteria) {
    if (only != 0 && criterion.id != only) continue;
    const auto started = steady_clock::now();
    try {
      criterion.run();
      const double secs =
          duration_cast<milliseconds>(steady_clock::now() - started).count() / 1000.0;
      std::printf("PASS  criterion %d: %s  (%.2fs)\n", criterion.id, criterion.name,
                  secs);
    } catch (const std::exception& e) {
      ++failures;
      std::printf("FAIL  criterion %d: %s\n      %s\n", criterion.id, criterion.name,
                  e.what());
    }
  }
  if (failures != 0) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  return 0;
}
