#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace wikibox::model {

// Dense column-major matrix. Row counts run to a few hundred films, column
// counts stay tiny (two features plus an optional intercept).
class ColMatrix {
 public:
  ColMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return data_[j * rows_ + i]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

struct LstsqSolution {
  std::vector<double> coefficients;  // minimum-norm when rank deficient
  std::size_t rank = 0;
};

// Least squares min ||Ax - b|| via a complete orthogonal decomposition:
// column-pivoted Householder QR, then right Householder reflections on the
// upper trapezoidal factor when the numerical rank falls short. Returns the
// minimum-norm solution for rank-deficient systems. Requires rows >= cols.
LstsqSolution solve_least_squares(ColMatrix a, std::span<const double> b);

struct LinearFit {
  std::vector<double> coefficients;  // one per feature column
  std::optional<double> intercept;
  std::size_t rank = 0;  // of the full solved system, intercept column included
  double r_squared = 0.0;
  std::vector<double> fitted;
};

// Fits y on the given feature columns, appending a ones column when
// with_intercept is set. R-squared is mean-centered with an intercept and
// uncentered (about zero) without one; a zero total sum of squares throws
// DataError, as does an underdetermined system.
LinearFit fit_linear(const std::vector<std::vector<double>>& columns,
                     std::span<const double> y, bool with_intercept);

double r_squared_centered(std::span<const double> y, std::span<const double> fitted);
double r_squared_uncentered(std::span<const double> y, std::span<const double> fitted);

}  // namespace wikibox::model
