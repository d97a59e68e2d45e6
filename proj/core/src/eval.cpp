#include "rspca/eval.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "rspca/errors.hpp"

namespace rspca {

double spectral_norm(const Covariance& a) {
  if (auto cached = a.spectral_norm()) return *cached;
  return top_singular_pair(a).value;
}

double f_metric(const Vector& x, const Covariance& a) {
  if (x.size() != a.dim()) throw InputError("vector and covariance sizes differ");
  const double norm = spectral_norm(a);
  if (!(norm > 0.0)) throw InputError("f metric undefined for a zero covariance");
  return x.dot(a.matrix() * x) / norm;
}

double f_metric(const SparseDirection& x, const Covariance& a) {
  return f_metric(x.to_dense(), a);
}

std::vector<double> captured_variance(const DataMatrix& x, const std::vector<Vector>& components) {
  const double total = x.values().squaredNorm();
  if (!(total > 0.0)) throw InputError("captured variance undefined for a zero data matrix");
  std::vector<double> cumulative;
  cumulative.reserve(components.size());
  double running = 0.0;
  for (const Vector& v : components) {
    if (v.size() != x.cols()) throw InputError("component length differs from feature count");
    running += (x.values() * v).squaredNorm();
    cumulative.push_back(100.0 * running / total);
  }
  return cumulative;
}

namespace {

double binomial(Index n, Index k) {
  double c = 1.0;
  for (Index i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  return c;
}

// Advances a sorted index combination of {0..n-1}; false after the last one.
bool next_combination(std::vector<Index>& idx, Index n) {
  const auto k = static_cast<Index>(idx.size());
  for (Index i = k - 1; i >= 0; --i) {
    if (idx[i] < n - k + i) {
      ++idx[i];
      for (Index j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

SparseOptimum exhaustive_sparse_pca(const Covariance& a, Index k) {
  const Index n = a.dim();
  if (k < 1) throw InputError("k must be positive");
  const Index size = std::min(k, n);
  if (n > 20 || binomial(n, size) > 1e6) {
    throw GuardError("exhaustive search limited to n <= 20 and C(n, k) <= 1e6");
  }

  std::vector<Index> idx(static_cast<std::size_t>(size));
  for (Index i = 0; i < size; ++i) idx[i] = i;

  SparseOptimum best;
  best.value = -std::numeric_limits<double>::infinity();
  Matrix sub(size, size);
  Eigen::SelfAdjointEigenSolver<Matrix> solver;
  do {
    for (Index r = 0; r < size; ++r) {
      for (Index c = 0; c < size; ++c) sub(r, c) = a.matrix()(idx[r], idx[c]);
    }
    solver.compute(sub);
    const double value = solver.eigenvalues()[size - 1];
    const double slack = 1e-12 * std::max(1.0, std::abs(best.value));
    if (best.support.empty() || value > best.value + slack) {
      best.value = value;
      best.support = idx;
      Vector local = solver.eigenvectors().col(size - 1);
      best.vector = Vector::Zero(n);
      for (Index r = 0; r < size; ++r) best.vector[idx[r]] = local[r];
    }
  } while (next_combination(idx, n));
  orient(best.vector);
  return best;
}

double frequency_floor(double p, std::size_t trials) {
  return p - 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

BoundCheckReport verify_theorem1(const Covariance& input, const BoundCheckOptions& opts) {
  if (!(opts.epsilon > 0.0 && opts.epsilon <= 1.0)) throw InputError("epsilon must lie in (0, 1]");
  if (opts.trials == 0) throw InputError("trial count must be positive");

  const bool unit_rows = max_row_norm(input.matrix()) <= 1.0 + 1e-12;
  const Covariance a = unit_rows ? input : Covariance::from_symmetric(input.matrix(), true);
  const Matrix& am = a.matrix();
  const Index n = a.dim();
  const double k = static_cast<double>(opts.k);

  BoundCheckReport r;
  r.trials = opts.trials;
  r.n = n;
  r.k = opts.k;
  r.epsilon = opts.epsilon;
  r.s = opts.s_override != 0
            ? opts.s_override
            : static_cast<std::size_t>(std::ceil(200.0 * k / (opts.epsilon * opts.epsilon)));
  r.covariance_scale = unit_rows ? input.scale_factor() : input.scale_factor() * a.scale_factor();
  const double s = static_cast<double>(r.s);

  const DenseDirection relaxed = solve_relaxed(RelaxationProblem(a, opts.k), opts.solver);
  const Vector& xt = relaxed.x;
  r.relaxed_objective = relaxed.objective;
  if (opts.use_exhaustive) {
    r.reference_label = "exhaustive";
    r.reference_value = exhaustive_sparse_pca(a, opts.k).value;
  } else {
    r.reference_label = "relaxation";
    r.reference_value = relaxed.objective;
  }

  const Vector p = keep_probabilities(xt, r.s);
  r.expected_nnz = expected_nnz(p);
  double nnz_variance = 0.0;
  for (Index i = 0; i < n; ++i) {
    nnz_variance += p[i] * (1.0 - p[i]);
    if (p[i] > 0.0) {
      const double excess = 1.0 / p[i] - 1.0;
      r.exact_sq_residual += excess * xt[i] * xt[i];
      r.exact_expectation_gap += excess * am(i, i) * xt[i] * xt[i];
    }
  }

  r.norm_bound_lemma = 1.0 + 2.0 * std::sqrt(k / s);
  r.norm_bound_theorem = 1.0 + 0.15 * opts.epsilon;
  r.sq_residual_bound = k / s;
  r.cross_term_bound = std::sqrt(8.0 * k / s);
  r.quad_term_bound = std::sqrt(24.0 * k * k / (s * s) + 6.0 * k * k / (s * s * s) + 54.0 * std::sqrt(k) / s);

  const Vector a_xt = am * xt;
  std::size_t nnz_sum = 0;
  std::size_t norm_ok = 0, norm_ok_thm = 0, additive_ok = 0, joint_ok = 0, cross_ok = 0, quad_ok = 0;
  double sq_residual_sum = 0.0;
  double form_sum = 0.0;
  double form_sq_sum = 0.0;
  for (std::size_t t = 0; t < opts.trials; ++t) {
    const SparseDirection rounded = sparsify(xt, r.s, derive_seed(opts.seed, t));
    const Vector xh = rounded.to_dense();
    const Vector diff = xt - xh;
    const Vector a_diff = am * diff;
    const double norm = xh.norm();
    const double form = xh.dot(am * xh);

    nnz_sum += rounded.nnz();
    const bool lemma_norm = norm <= r.norm_bound_lemma;
    const bool additive = form >= r.reference_value - opts.epsilon;
    norm_ok += lemma_norm;
    norm_ok_thm += norm <= r.norm_bound_theorem;
    additive_ok += additive;
    joint_ok += lemma_norm && additive;
    sq_residual_sum += diff.squaredNorm();
    cross_ok += std::abs(a_xt.dot(diff)) <= r.cross_term_bound;
    quad_ok += std::abs(diff.dot(a_diff)) <= r.quad_term_bound;
    form_sum += form;
    form_sq_sum += form * form;
  }

  const double count = static_cast<double>(opts.trials);
  r.mean_nnz = static_cast<double>(nnz_sum) / count;
  r.nnz_standard_error = std::sqrt(nnz_variance / count);
  r.sparsity_ok = r.expected_nnz <= s &&
                  std::abs(r.mean_nnz - r.expected_nnz) <= 3.0 * r.nnz_standard_error + 1e-12;
  r.frac_norm_ok = static_cast<double>(norm_ok) / count;
  r.frac_norm_ok_theorem = static_cast<double>(norm_ok_thm) / count;
  r.frac_additive_ok = static_cast<double>(additive_ok) / count;
  r.frac_joint_ok = static_cast<double>(joint_ok) / count;
  r.mean_sq_residual = sq_residual_sum / count;
  r.cross_term_frac = static_cast<double>(cross_ok) / count;
  r.quad_term_frac = static_cast<double>(quad_ok) / count;

  const double mean_form = form_sum / count;
  const double form_var = std::max(0.0, form_sq_sum / count - mean_form * mean_form);
  r.expectation_gap = mean_form - relaxed.objective;
  r.expectation_gap_standard_error = std::sqrt(form_var / count);
  return r;
}

}  // namespace rspca
