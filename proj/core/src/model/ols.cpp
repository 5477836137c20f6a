#include "wikibox/model/ols.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "wikibox/errors.hpp"

namespace wikibox::model {

namespace {

double column_norm(const ColMatrix& a, std::size_t col, std::size_t from_row) {
  double scale = 0.0;
  for (std::size_t i = from_row; i < a.rows(); ++i) {
    scale = std::max(scale, std::abs(a(i, col)));
  }
  if (scale == 0.0) return 0.0;
  double ssq = 0.0;
  for (std::size_t i = from_row; i < a.rows(); ++i) {
    const double v = a(i, col) / scale;
    ssq += v * v;
  }
  return scale * std::sqrt(ssq);
}

// One right-side reflector of the trapezoidal reduction: acts on column k
// and the trailing columns r..n-1 of the rows above it.
struct RightReflector {
  std::size_t k = 0;
  double beta = 0.0;
  std::vector<double> w;  // length n - r, tail of the Householder vector
};

}  // namespace

LstsqSolution solve_least_squares(ColMatrix a, std::span<const double> b) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (b.size() != m) {
    throw std::invalid_argument("solve_least_squares: rhs length does not match rows");
  }
  if (m < n) {
    throw std::invalid_argument("solve_least_squares: fewer rows than columns");
  }
  if (n == 0) return {{}, 0};

  std::vector<double> rhs(b.begin(), b.end());
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);

  // Column-pivoted Householder QR, applied to the rhs as we go.
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    double best = column_norm(a, k, k);
    for (std::size_t j = k + 1; j < n; ++j) {
      const double norm = column_norm(a, j, k);
      if (norm > best) {
        best = norm;
        pivot = j;
      }
    }
    if (pivot != k) {
      for (std::size_t i = 0; i < m; ++i) std::swap(a(i, k), a(i, pivot));
      std::swap(perm[k], perm[pivot]);
    }

    const double sigma = best;
    if (sigma == 0.0) {
      a(k, k) = 0.0;
      continue;  // trailing block is all zero in this column
    }

    const double x0 = a(k, k);
    const double alpha = x0 >= 0.0 ? -sigma : sigma;
    const double v0 = x0 - alpha;
    const double beta = -v0 / alpha;  // 2 / (v'v) after scaling v so v[0] = 1

    for (std::size_t i = k + 1; i < m; ++i) a(i, k) /= v0;

    for (std::size_t j = k + 1; j < n; ++j) {
      double s = a(k, j);
      for (std::size_t i = k + 1; i < m; ++i) s += a(i, k) * a(i, j);
      s *= beta;
      a(k, j) -= s;
      for (std::size_t i = k + 1; i < m; ++i) a(i, j) -= s * a(i, k);
    }
    double s = rhs[k];
    for (std::size_t i = k + 1; i < m; ++i) s += a(i, k) * rhs[i];
    s *= beta;
    rhs[k] -= s;
    for (std::size_t i = k + 1; i < m; ++i) rhs[i] -= s * a(i, k);

    a(k, k) = alpha;
  }

  // Numerical rank from the pivoted diagonal.
  const double r00 = std::abs(a(0, 0));
  const double tol =
      r00 * static_cast<double>(std::max(m, n)) * std::numeric_limits<double>::epsilon();
  std::size_t rank = 0;
  while (rank < n && std::abs(a(rank, rank)) > tol) ++rank;

  if (rank == 0) {
    return {std::vector<double>(n, 0.0), 0};
  }

  // Reduce the trapezoidal factor [R11 R12] (rank x n) to [T 0] with right
  // Householders so that the free part of the solution can be zeroed for
  // the minimum-norm answer.
  std::vector<RightReflector> reflectors;
  if (rank < n) {
    const std::size_t tail = n - rank;
    for (std::size_t kk = rank; kk-- > 0;) {
      double scale = std::abs(a(kk, kk));
      for (std::size_t j = 0; j < tail; ++j) {
        scale = std::max(scale, std::abs(a(kk, rank + j)));
      }
      if (scale == 0.0) continue;
      double ssq = 0.0;
      {
        const double v = a(kk, kk) / scale;
        ssq += v * v;
      }
      for (std::size_t j = 0; j < tail; ++j) {
        const double v = a(kk, rank + j) / scale;
        ssq += v * v;
      }
      const double sigma = scale * std::sqrt(ssq);
      const double x0 = a(kk, kk);
      const double alpha = x0 >= 0.0 ? -sigma : sigma;
      const double v0 = x0 - alpha;
      const double beta = -v0 / alpha;

      RightReflector refl;
      refl.k = kk;
      refl.beta = beta;
      refl.w.resize(tail);
      for (std::size_t j = 0; j < tail; ++j) refl.w[j] = a(kk, rank + j) / v0;

      // Apply to the rows above kk.
      for (std::size_t i = 0; i < kk; ++i) {
        double s = a(i, kk);
        for (std::size_t j = 0; j < tail; ++j) s += a(i, rank + j) * refl.w[j];
        s *= beta;
        a(i, kk) -= s;
        for (std::size_t j = 0; j < tail; ++j) a(i, rank + j) -= s * refl.w[j];
      }
      a(kk, kk) = alpha;
      for (std::size_t j = 0; j < tail; ++j) a(kk, rank + j) = 0.0;

      reflectors.push_back(std::move(refl));
    }
  }

  // Back substitution on the triangular factor.
  std::vector<double> u(n, 0.0);
  for (std::size_t i = rank; i-- > 0;) {
    double s = rhs[i];
    for (std::size_t j = i + 1; j < rank; ++j) s -= a(i, j) * u[j];
    u[i] = s / a(i, i);
  }

  // Undo the right reflectors (earliest applied last in the reduction, so
  // apply in reverse of construction order) and the column permutation.
  for (auto it = reflectors.rbegin(); it != reflectors.rend(); ++it) {
    double s = u[it->k];
    for (std::size_t j = 0; j < it->w.size(); ++j) s += u[rank + j] * it->w[j];
    s *= it->beta;
    u[it->k] -= s;
    for (std::size_t j = 0; j < it->w.size(); ++j) u[rank + j] -= s * it->w[j];
  }

  std::vector<double> x(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) x[perm[j]] = u[j];
  return {std::move(x), rank};
}

namespace {

double sum_squared_residuals(std::span<const double> y, std::span<const double> fitted) {
  double ss = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double r = y[i] - fitted[i];
    ss += r * r;
  }
  return ss;
}

}  // namespace

double r_squared_centered(std::span<const double> y, std::span<const double> fitted) {
  if (y.size() != fitted.size() || y.empty()) {
    throw std::invalid_argument("r_squared: length mismatch or empty input");
  }
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double ss_tot = 0.0;
  for (double v : y) {
    const double c = v - mean;
    ss_tot += c * c;
  }
  if (ss_tot == 0.0) {
    throw DataError("degenerate targets: zero total sum of squares about the mean");
  }
  return 1.0 - sum_squared_residuals(y, fitted) / ss_tot;
}

double r_squared_uncentered(std::span<const double> y, std::span<const double> fitted) {
  if (y.size() != fitted.size() || y.empty()) {
    throw std::invalid_argument("r_squared: length mismatch or empty input");
  }
  double ss_tot = 0.0;
  for (double v : y) ss_tot += v * v;
  if (ss_tot == 0.0) {
    throw DataError("degenerate targets: zero total sum of squares about zero");
  }
  return 1.0 - sum_squared_residuals(y, fitted) / ss_tot;
}

LinearFit fit_linear(const std::vector<std::vector<double>>& columns,
                     std::span<const double> y, bool with_intercept) {
  const std::size_t n = y.size();
  for (const auto& col : columns) {
    if (col.size() != n) {
      throw std::invalid_argument("fit_linear: feature column length mismatch");
    }
  }
  const std::size_t params = columns.size() + (with_intercept ? 1 : 0);
  if (params == 0) {
    throw std::invalid_argument("fit_linear: no parameters to fit");
  }
  if (n < params) {
    throw DataError("underdetermined fit: " + std::to_string(n) + " rows for " +
                    std::to_string(params) + " parameters");
  }

  LinearFit fit;
  fit.fitted.assign(n, 0.0);

  if (columns.empty()) {
    // Intercept-only model: the least-squares constant is the target mean.
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(n);
    fit.intercept = mean;
    fit.rank = 1;
    std::fill(fit.fitted.begin(), fit.fitted.end(), mean);
    fit.r_squared = r_squared_centered(y, fit.fitted);
    return fit;
  }

  ColMatrix a(n, params);
  for (std::size_t j = 0; j < columns.size(); ++j) {
    for (std::size_t i = 0; i < n; ++i) a(i, j) = columns[j][i];
  }
  if (with_intercept) {
    for (std::size_t i = 0; i < n; ++i) a(i, params - 1) = 1.0;
  }

  LstsqSolution solution = solve_least_squares(std::move(a), y);
  fit.rank = solution.rank;
  if (with_intercept) {
    fit.intercept = solution.coefficients.back();
    solution.coefficients.pop_back();
  }
  fit.coefficients = std::move(solution.coefficients);

  for (std::size_t i = 0; i < n; ++i) {
    double v = fit.intercept.value_or(0.0);
    for (std::size_t j = 0; j < fit.coefficients.size(); ++j) {
      v += fit.coefficients[j] * columns[j][i];
    }
    fit.fitted[i] = v;
  }
  fit.r_squared = with_intercept ? r_squared_centered(y, fit.fitted)
                                 : r_squared_uncentered(y, fit.fitted);
  return fit;
}

}  // namespace wikibox::model
