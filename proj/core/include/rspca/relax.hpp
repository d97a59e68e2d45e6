#pragma once

#include <vector>

#include "rspca/linalg.hpp"

namespace rspca {

/// max x^T A x  subject to  ||x||_2 <= 1, ||x||_1 <= sqrt(k).
struct RelaxationProblem {
  /// Throws InputError unless 1 <= k <= A.dim().
  RelaxationProblem(const Covariance& cov, Index sparsity);

  double budget() const;

  const Covariance& a;
  Index k;
};

struct SolverConfig {
  int max_iter = 5'000;
  double tol = 1e-8;
  int restarts = 8;
  Seed seed = 0;
};

/// A stationary point of the l1-constrained problem.
struct DenseDirection {
  Vector x;
  double objective = 0.0;
  bool converged = false;
  int iterations = 0;
  /// Run that produced x: 0 is the top-eigenvector start, r >= 1 the
  /// random start seeded with seed + (r - 1).
  int run = 0;
};

/// Smallest soft threshold delta >= 0 for which
/// S(v, delta) / max(1, ||S(v, delta)||_2) has l1 norm <= budget.
/// Bisection to 1e-12 * ||v||_inf.
double feasible_threshold(const Vector& v, double budget);

/// w = S(v, delta) / max(1, ||S(v, delta)||_2) with delta = feasible_threshold(v, budget).
///
/// This is not the Euclidean projection onto the intersection of the two
/// balls; it is the threshold-then-clip map. Requires budget >= 1.
Vector project_feasible(const Vector& v, double budget);

/// argmax <c, w> over ||w||_2 <= 1, ||w||_1 <= budget: the soft-thresholded c
/// normalized to unit length, threshold chosen by bisection. Returns zero for c = 0.
Vector linear_maximizer(const Vector& c, double budget);

/// Soft-threshold power method: x <- linear_maximizer(A x, sqrt(k)), run from
/// the clipped top eigenvector and from cfg.restarts seeded random feasible
/// starts. Returns the run with the largest objective (lowest run index on ties).
/// When `trace` is given, each run appends the objective of every candidate it
/// evaluated, including a final rejected one.
DenseDirection solve_relaxed(const RelaxationProblem& prob, const SolverConfig& cfg = {},
                             std::vector<std::vector<double>>* trace = nullptr);

}  // namespace rspca
