#include "rspca/deflation.hpp"

#include <algorithm>
#include <cmath>

#include "rspca/errors.hpp"

namespace rspca {

RspcaResult rspca(const DataMatrix& x, const RspcaOptions& opts) {
  const Covariance a = covariance(x, opts.scale_rows);
  RspcaResult out;
  out.covariance_scale = a.scale_factor();
  out.direction = SparseDirection(a.dim());
  out.rounded = SparseDirection(a.dim());
  if (a.matrix().isZero(0.0)) {
    out.degenerate = true;
    out.relaxed.x = Vector::Zero(a.dim());
    out.relaxed.converged = true;
    return out;
  }

  const Index k = std::min(opts.k, a.dim());
  out.relaxed = solve_relaxed(RelaxationProblem(a, k), opts.solver);
  BestOfResult best = sparsify_best_of(out.relaxed.x, a, opts.plan);
  out.norm_cap_met = best.norm_cap_met;
  out.rounded = std::move(best.direction);
  if (out.rounded.empty()) {
    out.degenerate = true;
    return out;
  }
  out.direction = normalize(out.rounded, a, opts.mode);
  return out;
}

DataMatrix deflate_step(const DataMatrix& x, const Vector& v) {
  if (v.size() != x.cols()) throw InputError("deflation vector length differs from column count");
  if (std::abs(v.norm() - 1.0) > 1e-8) throw InputError("deflation vector must have unit norm");
  Matrix residual = x.values();
  const Vector xv = residual * v;
  residual.noalias() -= xv * v.transpose();
  return DataMatrix(std::move(residual));
}

namespace {

RspcaOptions offset_seeds(const RspcaOptions& base, Index component) {
  RspcaOptions opts = base;
  const auto offset = static_cast<std::uint64_t>(component);
  opts.plan.seed = derive_seed(base.plan.seed, offset);
  opts.solver.seed = derive_seed(base.solver.seed, offset);
  return opts;
}

}  // namespace

ComponentSet compute_k_components(const DataMatrix& x, const DeflationOptions& opts) {
  const Index limit = std::min(x.rows(), x.cols());
  if (opts.components < 1 || opts.components > limit) {
    throw InputError("component count must satisfy 1 <= K <= min(m, n)");
  }

  ComponentSet out;
  out.mode = opts.rspca.mode;
  const double original_norm = x.frobenius_norm();
  Covariance original = covariance(x, opts.rspca.scale_rows);
  const bool zero_data = original.matrix().isZero(0.0);
  if (!zero_data) original.set_spectral_norm(spectral_norm(original));

  DataMatrix residual = x;
  DataMatrix residual_t(x.values().transpose());
  for (Index i = 0; i < opts.components; ++i) {
    if (i > 0) {
      residual = deflate_step(residual, out.v.back());
      if (opts.compute_left) residual_t = deflate_step(residual_t, out.u.back());
      if (residual.frobenius_norm() < 1e-12 * original_norm) {
        out.truncated = true;
        break;
      }
    }

    const RspcaOptions step = offset_seeds(opts.rspca, i);
    RspcaResult right = rspca(residual, step);
    if (right.degenerate) {
      out.truncated = true;
      break;
    }
    Vector left;
    if (opts.compute_left) {
      RspcaResult l = rspca(residual_t, step);
      if (l.degenerate) {
        out.truncated = true;
        break;
      }
      left = l.direction.to_dense();
    }

    Vector v = right.direction.to_dense();
    EvalReport report;
    report.method = "rspca";
    report.normalization = opts.rspca.mode;
    report.nnz = right.direction.nnz();
    report.sparsity_ratio = static_cast<double>(report.nnz) / static_cast<double>(x.cols());
    report.f_value = zero_data ? 0.0 : f_metric(v, original);
    out.v.push_back(std::move(v));
    if (opts.compute_left) out.u.push_back(std::move(left));
    out.reports.push_back(std::move(report));
  }

  if (!out.v.empty() && original_norm > 0.0) {
    out.cumulative_variance = captured_variance(x, out.v);
    for (std::size_t i = 0; i < out.reports.size(); ++i) {
      out.reports[i].captured_variance_pct = out.cumulative_variance[i];
    }
  }
  return out;
}

}  // namespace rspca
