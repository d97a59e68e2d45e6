#pragma once

#include <vector>

#include "rspca/baselines.hpp"
#include "rspca/eval.hpp"
#include "rspca/linalg.hpp"
#include "rspca/relax.hpp"
#include "rspca/rounding.hpp"

namespace rspca {

struct RspcaOptions {
  Index k = 1;
  RoundingPlan plan;
  SolverConfig solver;
  NormalizationMode mode = NormalizationMode::kSvdBased;
  bool scale_rows = true;
};

struct RspcaResult {
  /// Unit-norm sparse direction in feature space; empty when degenerate.
  SparseDirection direction;
  /// Rounded vector before normalization.
  SparseDirection rounded;
  DenseDirection relaxed;
  double covariance_scale = 1.0;
  bool norm_cap_met = true;
  /// Set when X (hence A) is zero or rounding kept no coordinate.
  bool degenerate = false;
};

/// Relaxation, best-of-t rounding and normalization on A = X^T X.
RspcaResult rspca(const DataMatrix& x, const RspcaOptions& opts);

/// X (I - v v^T). Throws InputError unless | ||v|| - 1 | <= 1e-8.
DataMatrix deflate_step(const DataMatrix& x, const Vector& v);

struct ComponentSet {
  /// Left vectors (length m), from rspca on the transposed residual.
  std::vector<Vector> u;
  /// Right vectors (length n).
  std::vector<Vector> v;
  std::vector<EvalReport> reports;
  /// Cumulative captured variance of v_1..v_K on the original X.
  std::vector<double> cumulative_variance;
  NormalizationMode mode = NormalizationMode::kSvdBased;
  /// True when the loop stopped early on a vanishing residual or a
  /// degenerate component.
  bool truncated = false;
};

struct DeflationOptions {
  Index components = 1;
  RspcaOptions rspca;
  /// Also extract u_i from Y = X^T.
  bool compute_left = true;
};

/// Alternates rspca on X and Y = X^T with rank-one residual projection.
/// Component i uses plan/solver seeds offset by i.
ComponentSet compute_k_components(const DataMatrix& x, const DeflationOptions& opts);

}  // namespace rspca
