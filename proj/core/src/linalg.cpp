#include "rspca/linalg.hpp"

#include <cmath>
#include <string>

#include "rspca/errors.hpp"

namespace rspca {

namespace {

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw InputError(std::string(what) + ": non-finite entry");
}

}  // namespace

DataMatrix::DataMatrix(Matrix values) : values_(std::move(values)) {
  if (values_.rows() < 1 || values_.cols() < 1) throw InputError("data matrix must be at least 1x1");
  require_finite(values_, "data matrix");
}

Covariance::Covariance(Matrix a, double max_row_norm, double scale_factor)
    : matrix_(std::move(a)), max_row_norm_(max_row_norm), scale_factor_(scale_factor) {}

Covariance Covariance::from_symmetric(Matrix a, bool scale_to_unit_rows) {
  if (a.rows() < 1 || a.rows() != a.cols()) throw InputError("covariance must be square and non-empty");
  require_finite(a, "covariance");
  const double max_abs = a.cwiseAbs().maxCoeff();
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * max_abs) {
    throw InputError("covariance is not symmetric");
  }
  // Exact symmetry downstream; averaging only touches rounding-level noise.
  a = 0.5 * (a + a.transpose()).eval();
  const double row_norm = rspca::max_row_norm(a);
  double factor = 1.0;
  if (scale_to_unit_rows && row_norm > 0.0) {
    factor = row_norm;
    a /= factor;
  }
  return Covariance(std::move(a), row_norm, factor);
}

DataMatrix center_columns(const DataMatrix& x) {
  Matrix centered = x.values();
  centered.rowwise() -= centered.colwise().mean();
  return DataMatrix(std::move(centered));
}

Covariance covariance(const DataMatrix& x, bool scale_to_unit_rows) {
  Matrix a(x.cols(), x.cols());
  a.noalias() = x.values().transpose() * x.values();
  return Covariance::from_symmetric(std::move(a), scale_to_unit_rows);
}

double max_row_norm(const Matrix& a) {
  return a.rows() == 0 ? 0.0 : a.rowwise().norm().maxCoeff();
}

void orient(Vector& v) {
  Index best = 0;
  double best_abs = -1.0;
  for (Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > best_abs) {
      best_abs = std::abs(v[i]);
      best = i;
    }
  }
  if (v.size() > 0 && v[best] < 0.0) v = -v;
}

SingularPair top_singular_pair_from(const Matrix& a, Vector v, const PowerIterationOptions& opts) {
  if (a.rows() < 1 || a.rows() != a.cols()) throw InputError("power iteration needs a square non-empty matrix");
  if (v.size() != a.rows()) throw InputError("start vector has the wrong length");
  if (!(opts.tol > 0.0)) throw InputError("power iteration tolerance must be positive");
  const double start_norm = v.norm();
  if (!(start_norm > 0.0)) throw InputError("start vector is zero");
  v /= start_norm;

  SingularPair out;
  Vector av(a.rows());
  double residual = 0.0;
  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    av.noalias() = a * v;
    const double lambda = v.dot(av);
    residual = (av - lambda * v).norm();
    if (residual <= opts.tol * std::abs(lambda)) {
      out.value = lambda;
      out.vector = std::move(v);
      out.iterations = iter;
      out.residual = residual;
      orient(out.vector);
      return out;
    }
    v = av / av.norm();
  }
  throw ConvergenceError("power iteration did not converge in " + std::to_string(opts.max_iter) +
                             " iterations",
                         v, residual);
}

SingularPair top_singular_pair(const Matrix& a, const PowerIterationOptions& opts) {
  Rng rng(opts.seed);
  Vector start(a.rows());
  for (Index i = 0; i < start.size(); ++i) start[i] = rng.normal();
  return top_singular_pair_from(a, std::move(start), opts);
}

SingularPair top_singular_pair(const Covariance& a, const PowerIterationOptions& opts) {
  return top_singular_pair(a.matrix(), opts);
}

}  // namespace rspca
