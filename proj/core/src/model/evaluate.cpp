#include "wikibox/model/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "wikibox/errors.hpp"

namespace wikibox::model {

std::vector<double> loocv_predictions(const Dataset& d, int t, bool with_intercept) {
  const DesignMatrix full = build_design_matrix(d, t);
  const std::size_t n = full.rows();
  const std::size_t params = with_intercept ? 3 : 2;
  if (n < params + 1) {
    throw DataError("LOOCV needs at least " + std::to_string(params + 1) +
                    " films for " + std::to_string(params) + " parameters, got " +
                    std::to_string(n));
  }

  std::vector<double> predictions(n, 0.0);
  std::vector<double> screens(n - 1), views(n - 1), revenue(n - 1);
  for (std::size_t held_out = 0; held_out < n; ++held_out) {
    std::size_t w = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == held_out) continue;
      screens[w] = full.screens[i];
      views[w] = full.cum_views[i];
      revenue[w] = full.revenue[i];
      ++w;
    }
    try {
      const LinearFit fit = fit_linear({screens, views}, revenue, with_intercept);
      double p = fit.intercept.value_or(0.0);
      p += fit.coefficients[0] * full.screens[held_out];
      p += fit.coefficients[1] * full.cum_views[held_out];
      predictions[held_out] = p;
    } catch (const DataError& e) {
      throw DataError("LOOCV fold " + std::to_string(held_out) + " ('" +
                      d.films[held_out].record.title + "' held out): " + e.what());
    }
  }
  return predictions;
}

std::vector<double> relative_errors(std::span<const double> y, std::span<const double> p) {
  if (y.size() != p.size()) {
    throw std::invalid_argument("relative_errors: length mismatch (" +
                                std::to_string(y.size()) + " vs " +
                                std::to_string(p.size()) + ")");
  }
  std::vector<double> errors(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!(y[i] > 0.0)) {
      throw DataError("relative error undefined: revenue at index " + std::to_string(i) +
                      " is not positive");
    }
    errors[i] = std::abs(y[i] - p[i]) / y[i];
  }
  return errors;
}

std::vector<std::pair<int, double>> r2_evolution(const Dataset& d, int t_lo, int t_hi,
                                                 bool with_intercept) {
  if (t_lo > t_hi) {
    throw std::invalid_argument("r2_evolution: empty day range");
  }
  if (t_lo < d.window_start || t_hi > 0) {
    throw std::invalid_argument("r2_evolution: range [" + std::to_string(t_lo) + ", " +
                                std::to_string(t_hi) + "] outside [" +
                                std::to_string(d.window_start) + ", 0]");
  }
  std::vector<std::pair<int, double>> series;
  series.reserve(static_cast<std::size_t>(t_hi - t_lo + 1));
  for (int t = t_lo; t <= t_hi; ++t) {
    try {
      const DesignMatrix m = build_design_matrix(d, t);
      series.emplace_back(t, fit_ols(m, with_intercept).r_squared);
    } catch (const Error& e) {
      throw DataError("r2_evolution at t=" + std::to_string(t) + ": " + e.what());
    }
  }
  return series;
}

double loocv_r_squared(const Dataset& d, int t, bool with_intercept) {
  const DesignMatrix m = build_design_matrix(d, t);
  const std::vector<double> p = loocv_predictions(d, t, with_intercept);
  return with_intercept ? r_squared_centered(m.revenue, p)
                        : r_squared_uncentered(m.revenue, p);
}

Dataset exclude_top_grossing(const Dataset& d, std::size_t k) {
  const std::size_t n = d.films.size();
  if (k >= n) {
    throw std::invalid_argument("exclude_top_grossing: k (" + std::to_string(k) +
                                ") must be smaller than the dataset (" +
                                std::to_string(n) + ")");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const FilmRecord& fa = d.films[a].record;
    const FilmRecord& fb = d.films[b].record;
    if (fa.revenue != fb.revenue) return fa.revenue > fb.revenue;
    if (fa.release_date != fb.release_date) return fa.release_date < fb.release_date;
    return fa.title < fb.title;
  });

  std::vector<bool> drop(n, false);
  for (std::size_t i = 0; i < k; ++i) drop[order[i]] = true;

  Dataset out{d.market, {}, d.window_start};
  out.films.reserve(n - k);
  for (std::size_t i = 0; i < n; ++i) {
    if (!drop[i]) out.films.push_back(d.films[i]);
  }
  return out;
}

EvaluationReport evaluate_dataset(const Dataset& d, int loocv_t, OffsetRange evo_range,
                                  bool with_intercept) {
  EvaluationReport report;
  report.loocv_t = loocv_t;

  const DesignMatrix at_loocv = build_design_matrix(d, loocv_t);
  const std::vector<double> predictions = loocv_predictions(d, loocv_t, with_intercept);
  const std::vector<double> errors = relative_errors(at_loocv.revenue, predictions);

  report.per_film.reserve(d.films.size());
  for (std::size_t i = 0; i < d.films.size(); ++i) {
    report.per_film.push_back(PerFilmError{d.films[i].record.title,
                                           d.films[i].record.release_date,
                                           at_loocv.revenue[i], predictions[i],
                                           errors[i]});
  }
  report.r2_evolution = r2_evolution(d, evo_range.lo, evo_range.hi, with_intercept);
  return report;
}

double mean_relative_error(const EvaluationReport& report) {
  if (report.per_film.empty()) return 0.0;
  double sum = 0.0;
  for (const PerFilmError& f : report.per_film) sum += f.relative_error;
  return sum / static_cast<double>(report.per_film.size());
}

std::string write_evaluation_json(const EvaluationReport& report) {
  nlohmann::ordered_json per_film = nlohmann::ordered_json::array();
  for (const PerFilmError& f : report.per_film) {
    nlohmann::ordered_json row = nlohmann::ordered_json::object();
    row["title"] = f.title;
    row["release_date"] = f.release_date.to_string();
    row["revenue"] = f.revenue;
    row["prediction"] = f.prediction;
    row["relative_error"] = f.relative_error;
    per_film.push_back(std::move(row));
  }
  nlohmann::ordered_json evolution = nlohmann::ordered_json::array();
  for (const auto& [t, r2] : report.r2_evolution) {
    nlohmann::ordered_json row = nlohmann::ordered_json::object();
    row["t"] = t;
    row["r_squared"] = r2;
    evolution.push_back(std::move(row));
  }
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  doc["loocv_t"] = report.loocv_t;
  doc["per_film"] = std::move(per_film);
  doc["r2_evolution"] = std::move(evolution);
  return doc.dump(2) + "\n";
}

}  // namespace wikibox::model
