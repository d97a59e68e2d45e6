#pragma once

#include <optional>

#include <Eigen/Dense>

#include "rspca/random.hpp"

namespace rspca {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Object-by-feature data matrix (m rows, n columns), all entries finite.
class DataMatrix {
 public:
  explicit DataMatrix(Matrix values);

  Index rows() const noexcept { return values_.rows(); }
  Index cols() const noexcept { return values_.cols(); }
  const Matrix& values() const noexcept { return values_; }
  double frobenius_norm() const { return values_.norm(); }

 private:
  Matrix values_;
};

/// Symmetric n x n matrix A, usually X^T X, possibly divided by its largest
/// row norm so that every row has l2 norm at most one.
class Covariance {
 public:
  /// Wraps an explicit symmetric matrix. Throws InputError if it is empty,
  /// non-finite or not symmetric to 1e-12 relative.
  static Covariance from_symmetric(Matrix a, bool scale_to_unit_rows = false);

  Index dim() const noexcept { return matrix_.rows(); }
  const Matrix& matrix() const noexcept { return matrix_; }

  /// Largest row l2 norm of the matrix before any scaling.
  double max_row_norm() const noexcept { return max_row_norm_; }
  /// Divisor applied to the raw matrix (1 when unscaled).
  double scale_factor() const noexcept { return scale_factor_; }
  bool scaled() const noexcept { return scale_factor_ != 1.0; }

  /// Cached ||A||_2 (top eigenvalue), if one has been recorded.
  std::optional<double> spectral_norm() const noexcept { return spectral_norm_; }
  void set_spectral_norm(double value) { spectral_norm_ = value; }

 private:
  Covariance(Matrix a, double max_row_norm, double scale_factor);

  Matrix matrix_;
  double max_row_norm_;
  double scale_factor_;
  std::optional<double> spectral_norm_;
};

struct SingularPair {
  double value = 0.0;
  Vector vector;
  int iterations = 0;
  double residual = 0.0;
};

struct PowerIterationOptions {
  double tol = 1e-9;
  int max_iter = 10'000;
  Seed seed = 0;
};

/// Subtracts each column's mean. Throws InputError on non-finite entries.
DataMatrix center_columns(const DataMatrix& x);

/// A = X^T X, optionally divided by its largest row norm.
Covariance covariance(const DataMatrix& x, bool scale_to_unit_rows);

/// Top eigenpair of a symmetric PSD matrix by power iteration from a seeded
/// Gaussian start. Stops once ||Av - lambda v|| <= tol * lambda. The vector is
/// oriented so its largest-magnitude entry is positive (lowest index on ties).
/// Throws ConvergenceError after max_iter iterations.
SingularPair top_singular_pair(const Matrix& a, const PowerIterationOptions& opts = {});
SingularPair top_singular_pair(const Covariance& a, const PowerIterationOptions& opts = {});

/// Same iteration from an explicit nonzero start vector.
SingularPair top_singular_pair_from(const Matrix& a, Vector start,
                                    const PowerIterationOptions& opts = {});

/// Flips v in place so that its largest-magnitude entry is positive.
void orient(Vector& v);

/// Largest row l2 norm.
double max_row_norm(const Matrix& a);

}  // namespace rspca
