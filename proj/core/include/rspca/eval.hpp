#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "rspca/baselines.hpp"
#include "rspca/linalg.hpp"
#include "rspca/relax.hpp"
#include "rspca/rounding.hpp"

namespace rspca {

/// ||A||_2, taken from the cache when present.
double spectral_norm(const Covariance& a);

/// f(x) = x^T A x / ||A||_2. Throws InputError when ||A||_2 == 0.
double f_metric(const Vector& x, const Covariance& a);
double f_metric(const SparseDirection& x, const Covariance& a);

struct EvalReport {
  std::string method;
  NormalizationMode normalization = NormalizationMode::kSvdBased;
  double f_value = 0.0;
  std::size_t nnz = 0;
  double sparsity_ratio = 0.0;
  double captured_variance_pct = 0.0;
};

/// Cumulative percentage of ||X||_F^2 captured by the prefixes of `components`:
/// entry K is 100 * sum_{i<=K} ||X v_i||^2 / ||X||_F^2.
std::vector<double> captured_variance(const DataMatrix& x, const std::vector<Vector>& components);

struct SparseOptimum {
  double value = 0.0;
  Vector vector;
  std::vector<Index> support;
};

/// Exact solution of max x^T A x s.t. ||x||_2 <= 1, ||x||_0 <= k by
/// enumerating every support of size min(k, n). Ties go to the
/// lexicographically smallest support. Throws GuardError unless n <= 20 and
/// C(n, k) <= 1e6.
SparseOptimum exhaustive_sparse_pca(const Covariance& a, Index k);

struct BoundCheckOptions {
  Index k = 1;
  double epsilon = 1.0;
  std::size_t trials = 1000;
  Seed seed = 0;
  /// Overrides s = ceil(200 k / eps^2) when nonzero.
  std::size_t s_override = 0;
  /// Compare claim 3 against the exhaustive optimum (requires a guarded
  /// instance); otherwise against the relaxation objective.
  bool use_exhaustive = true;
  SolverConfig solver;
};

struct BoundCheckReport {
  std::size_t trials = 0;
  Index n = 0;
  Index k = 0;
  double epsilon = 0.0;
  std::size_t s = 0;
  double covariance_scale = 1.0;

  double relaxed_objective = 0.0;
  /// "exhaustive" or "relaxation".
  std::string reference_label;
  double reference_value = 0.0;

  // Claim 1: expected sparsity.
  double expected_nnz = 0.0;
  double mean_nnz = 0.0;
  double nnz_standard_error = 0.0;
  bool sparsity_ok = false;

  // Claim 2: norm bound, both in lemma form 1 + 2 sqrt(k/s) and theorem form 1 + 0.15 eps.
  double norm_bound_lemma = 0.0;
  double norm_bound_theorem = 0.0;
  double frac_norm_ok = 0.0;
  double frac_norm_ok_theorem = 0.0;

  // Claim 3: additive error against the reference value.
  double frac_additive_ok = 0.0;
  double frac_joint_ok = 0.0;

  // E ||x_hat - x_tilde||^2 <= k/s.
  double mean_sq_residual = 0.0;
  double exact_sq_residual = 0.0;
  double sq_residual_bound = 0.0;

  // |x_tilde^T A (x_tilde - x_hat)| <= sqrt(8k/s).
  double cross_term_bound = 0.0;
  double cross_term_frac = 0.0;

  // |(x_tilde - x_hat)^T A (x_tilde - x_hat)| <= (24k^2/s^2 + 6k^2/s^3 + 54 sqrt(k)/s)^(1/2).
  double quad_term_bound = 0.0;
  double quad_term_frac = 0.0;

  // E[x_hat^T A x_hat] - x_tilde^T A x_tilde >= 0.
  double expectation_gap = 0.0;
  double expectation_gap_standard_error = 0.0;
  double exact_expectation_gap = 0.0;
};

/// Monte Carlo check of every probabilistic bound on the rounding of one
/// relaxed solution. Covariances whose rows exceed unit norm are rescaled first.
BoundCheckReport verify_theorem1(const Covariance& a, const BoundCheckOptions& opts);

/// p - 3 sqrt(p (1 - p) / N): the Monte Carlo floor for a frequency claimed at p.
double frequency_floor(double p, std::size_t trials);

}  // namespace rspca
