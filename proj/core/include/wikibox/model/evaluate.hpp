#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wikibox/dataset.hpp"
#include "wikibox/model/design.hpp"
#include "wikibox/model/regression.hpp"

namespace wikibox::model {

// Leave-one-out predictions at day offset t: film i is predicted by a model
// fitted on every other film. Output order equals dataset order. Requires
// n >= parameter count + 1.
std::vector<double> loocv_predictions(const Dataset& d, int t, bool with_intercept);

// e_i = |y_i - p_i| / y_i. All y_i must be strictly positive.
std::vector<double> relative_errors(std::span<const double> y, std::span<const double> p);

// One in-sample fit per day offset in [t_lo, t_hi], ordered by increasing t.
std::vector<std::pair<int, double>> r2_evolution(const Dataset& d, int t_lo, int t_hi,
                                                 bool with_intercept);

// R-squared of the LOOCV predictions against actual revenues at one day.
// A held-out counterpart to the in-sample evolution series.
double loocv_r_squared(const Dataset& d, int t, bool with_intercept);

// Drops the k films with the largest revenue; ties broken by earlier
// release date, then title order. Remaining film order is preserved.
Dataset exclude_top_grossing(const Dataset& d, std::size_t k);

struct PerFilmError {
  std::string title;
  Date release_date;
  double revenue = 0.0;
  double prediction = 0.0;
  double relative_error = 0.0;
};

struct EvaluationReport {
  int loocv_t = -7;
  std::vector<PerFilmError> per_film;  // dataset order
  std::vector<std::pair<int, double>> r2_evolution;
};

EvaluationReport evaluate_dataset(const Dataset& d, int loocv_t, OffsetRange evo_range,
                                  bool with_intercept);

double mean_relative_error(const EvaluationReport& report);

std::string write_evaluation_json(const EvaluationReport& report);

}  // namespace wikibox::model
