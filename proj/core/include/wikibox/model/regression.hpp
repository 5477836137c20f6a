#pragma once

#include <optional>
#include <string>

#include "wikibox/model/design.hpp"
#include "wikibox/model/ols.hpp"

namespace wikibox::model {

// Fitted per-day model y = alpha_screens * x1 + alpha_views * x2(t)
// (+ intercept). The intercept is optional: the equation form omits it, the
// default fit includes it; both are first-class and the flag is recorded.
struct RegressionFit {
  double alpha_screens = 0.0;
  double alpha_views = 0.0;
  std::optional<double> intercept;
  int t = 0;
  std::size_t n = 0;
  std::size_t rank = 0;
  double r_squared = 0.0;
};

// Least-squares coefficients for the design matrix, minimum-norm on rank
// deficiency. R-squared is mean-centered with an intercept, uncentered
// without (a through-origin fit scored against the mean can go negative in
// misleading ways).
RegressionFit fit_ols(const DesignMatrix& m, bool with_intercept);

double predict(const RegressionFit& f, double screens, double cum_views);

// In-sample R-squared of `f` evaluated on `m`; at most 1, unbounded below
// for coefficients far from the least-squares ones.
double r_squared(const RegressionFit& f, const DesignMatrix& m);

// {"t": ..., "n": ..., "rank": ..., "with_intercept": ..., "alpha_screens":
// ..., "alpha_views": ..., "intercept"?: ..., "r_squared": ...}
std::string write_fit_json(const RegressionFit& f);

}  // namespace wikibox::model
