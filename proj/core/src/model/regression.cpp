#include "wikibox/model/regression.hpp"

#include <nlohmann/json.hpp>

#include "wikibox/errors.hpp"

namespace wikibox::model {

RegressionFit fit_ols(const DesignMatrix& m, bool with_intercept) {
  const LinearFit fit =
      fit_linear({m.screens, m.cum_views}, m.revenue, with_intercept);

  RegressionFit out;
  out.alpha_screens = fit.coefficients[0];
  out.alpha_views = fit.coefficients[1];
  out.intercept = fit.intercept;
  out.t = m.t;
  out.n = m.rows();
  out.rank = fit.rank;
  out.r_squared = fit.r_squared;
  return out;
}

double predict(const RegressionFit& f, double screens, double cum_views) {
  return f.alpha_screens * screens + f.alpha_views * cum_views +
         f.intercept.value_or(0.0);
}

double r_squared(const RegressionFit& f, const DesignMatrix& m) {
  if (m.rows() == 0) {
    throw std::invalid_argument("r_squared: empty design matrix");
  }
  std::vector<double> fitted(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    fitted[i] = predict(f, m.screens[i], m.cum_views[i]);
  }
  return f.intercept ? r_squared_centered(m.revenue, fitted)
                     : r_squared_uncentered(m.revenue, fitted);
}

std::string write_fit_json(const RegressionFit& f) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  doc["t"] = f.t;
  doc["n"] = f.n;
  doc["rank"] = f.rank;
  doc["with_intercept"] = f.intercept.has_value();
  doc["alpha_screens"] = f.alpha_screens;
  doc["alpha_views"] = f.alpha_views;
  if (f.intercept) doc["intercept"] = *f.intercept;
  doc["r_squared"] = f.r_squared;
  return doc.dump(2) + "\n";
}

}  // namespace wikibox::model
