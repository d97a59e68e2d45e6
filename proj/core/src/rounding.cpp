#include "rspca/rounding.hpp"

#include <cmath>

#include "rspca/errors.hpp"

namespace rspca {

SparseDirection SparseDirection::from_dense(const Vector& x) {
  SparseDirection out(x.size());
  for (Index i = 0; i < x.size(); ++i) {
    if (x[i] != 0.0) out.push_back(i, x[i]);
  }
  return out;
}

void SparseDirection::push_back(Index i, double value) {
  if (i < 0 || i >= dim_) throw InputError("sparse index out of range");
  if (!support_.empty() && i <= support_.back()) throw InputError("sparse indices must increase");
  if (value == 0.0) return;
  support_.push_back(i);
  values_.push_back(value);
}

Vector SparseDirection::to_dense() const {
  Vector x = Vector::Zero(dim_);
  for (std::size_t j = 0; j < support_.size(); ++j) x[support_[j]] = values_[j];
  return x;
}

double SparseDirection::norm() const {
  double sum = 0.0;
  for (double v : values_) sum += v * v;
  return std::sqrt(sum);
}

double expected_nnz(const Vector& p) {
  double sum = 0.0;
  for (Index i = 0; i < p.size(); ++i) sum += p[i];
  return sum;
}

Vector keep_probabilities(const Vector& x, std::size_t s) {
  if (s == 0) throw InputError("sparsity target s must be positive");
  Vector p = Vector::Zero(x.size());
  const double l1 = x.lpNorm<1>();
  if (l1 == 0.0) return p;
  const double target = static_cast<double>(s);
  for (Index i = 0; i < x.size(); ++i) p[i] = std::min(target * std::abs(x[i]) / l1, 1.0);

  double shrink = 1.0;
  while (expected_nnz(p) > target) {
    shrink -= 4.0 * std::numeric_limits<double>::epsilon();
    for (Index i = 0; i < x.size(); ++i) {
      if (p[i] < 1.0) p[i] = std::min(shrink * target * std::abs(x[i]) / l1, 1.0);
    }
  }
  return p;
}

SparseDirection sparsify(const Vector& x, std::size_t s, Seed seed) {
  const Vector p = keep_probabilities(x, s);
  Rng rng(seed);
  SparseDirection out(x.size());
  for (Index i = 0; i < x.size(); ++i) {
    const double u = rng.uniform();
    if (p[i] == 1.0) {
      out.push_back(i, x[i]);
    } else if (u < p[i]) {
      out.push_back(i, x[i] / p[i]);
    }
  }
  return out;
}

BestOfResult sparsify_best_of(const Vector& x, const Covariance& a, const RoundingPlan& plan) {
  if (plan.s == 0 || plan.trials == 0) throw InputError("rounding plan needs s >= 1 and trials >= 1");
  if (x.size() != a.dim()) throw InputError("direction and covariance sizes differ");

  BestOfResult capped;
  BestOfResult overall;
  bool have_capped = false;
  bool have_overall = false;
  for (std::size_t t = 0; t < plan.trials; ++t) {
    SparseDirection candidate = sparsify(x, plan.s, derive_seed(plan.seed, t));
    const Vector dense = candidate.to_dense();
    const double form = dense.dot(a.matrix() * dense);
    if (!have_overall || form > overall.quadratic_form) {
      overall = {candidate, form, t, false};
      have_overall = true;
    }
    if (candidate.norm() <= plan.norm_cap && (!have_capped || form > capped.quadratic_form)) {
      capped = {std::move(candidate), form, t, true};
      have_capped = true;
    }
  }
  return have_capped ? capped : overall;
}

}  // namespace rspca
