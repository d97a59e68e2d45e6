#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "rspca/linalg.hpp"

namespace rspca {

/// Length-n vector stored as sorted (index, value) pairs.
class SparseDirection {
 public:
  SparseDirection() = default;
  explicit SparseDirection(Index dim) : dim_(dim) {}

  /// Keeps the nonzero entries of a dense vector.
  static SparseDirection from_dense(const Vector& x);

  Index dim() const noexcept { return dim_; }
  std::size_t nnz() const noexcept { return support_.size(); }
  bool empty() const noexcept { return support_.empty(); }
  const std::vector<Index>& support() const noexcept { return support_; }
  const std::vector<double>& values() const noexcept { return values_; }

  /// Appends an entry; indices must arrive in increasing order and value != 0.
  void push_back(Index i, double value);

  Vector to_dense() const;
  double norm() const;

  friend bool operator==(const SparseDirection&, const SparseDirection&) = default;

 private:
  Index dim_ = 0;
  std::vector<Index> support_;
  std::vector<double> values_;
};

struct RoundingPlan {
  /// Expected-sparsity target.
  std::size_t s = 1;
  std::size_t trials = 32;
  Seed seed = 0;
  /// Trials with ||x_hat||_2 above this cap are only used if no trial meets it.
  double norm_cap = std::numeric_limits<double>::infinity();

  /// Cap 1 + 0.15 * epsilon used by the two-criterion selection.
  static double norm_cap_for(double epsilon) { return 1.0 + 0.15 * epsilon; }
};

/// p_i = min(s |x_i| / ||x||_1, 1). All zero for x = 0. Throws InputError for s = 0.
///
/// Guarantees sum(p) <= s when summed in index order: if rounding pushes the
/// sum past s the unsaturated entries are shrunk by a few ulps.
Vector keep_probabilities(const Vector& x, std::size_t s);

/// sum(p) in index order; the expected nnz of sparsify.
double expected_nnz(const Vector& p);

/// Keeps x_i / p_i with probability p_i, else 0. Draws exactly one uniform
/// per coordinate in index order, so the outcome depends only on (x, s, seed).
SparseDirection sparsify(const Vector& x, std::size_t s, Seed seed);

struct BestOfResult {
  SparseDirection direction;
  /// Quadratic form x_hat^T A x_hat of the chosen trial.
  double quadratic_form = 0.0;
  std::size_t trial = 0;
  /// False when no trial met the norm cap and the best overall was returned.
  bool norm_cap_met = true;
};

/// Runs sparsify plan.trials times with seeds plan.seed + t and returns the
/// trial maximizing x_hat^T A x_hat among those within plan.norm_cap.
BestOfResult sparsify_best_of(const Vector& x, const Covariance& a, const RoundingPlan& plan);

}  // namespace rspca
