#include "rspca/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rspca/errors.hpp"

namespace rspca {

std::string_view to_string(NormalizationMode mode) {
  return mode == NormalizationMode::kNaive ? "naive" : "svd";
}

NormalizationMode parse_normalization(std::string_view name) {
  if (name == "naive") return NormalizationMode::kNaive;
  if (name == "svd" || name == "svd_based") return NormalizationMode::kSvdBased;
  throw InputError("unknown normalization '" + std::string(name) + "'");
}

SparseDirection keep_top_k(const Vector& v, Index k) {
  if (k < 1 || k > v.size()) throw InputError("k must satisfy 1 <= k <= n");
  std::vector<Index> order(static_cast<std::size_t>(v.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&v](Index i, Index j) { return std::abs(v[i]) > std::abs(v[j]); });
  order.resize(static_cast<std::size_t>(k));
  std::sort(order.begin(), order.end());

  SparseDirection out(v.size());
  for (Index i : order) {
    if (v[i] != 0.0) out.push_back(i, v[i]);
  }
  return out;
}

SparseDirection max_comp(const Covariance& a, Index k, Seed seed) {
  return keep_top_k(top_singular_pair(a, {.seed = seed}).vector, k);
}

SparseDirection threshold_top_vector(const Covariance& a, Index k, Seed seed) {
  return max_comp(a, k, seed);
}

SparseDirection normalize(const SparseDirection& x, const Covariance& a, NormalizationMode mode) {
  if (x.empty()) throw InputError("cannot normalize a zero vector");
  if (x.dim() != a.dim()) throw InputError("direction and covariance sizes differ");

  const double norm = x.norm();
  const auto& support = x.support();
  const auto nnz = static_cast<Index>(support.size());

  Vector naive(nnz);
  for (Index j = 0; j < nnz; ++j) naive[j] = x.values()[j] / norm;

  Vector local = naive;
  if (mode == NormalizationMode::kSvdBased) {
    Matrix sub(nnz, nnz);
    for (Index r = 0; r < nnz; ++r) {
      for (Index c = 0; c < nnz; ++c) sub(r, c) = a.matrix()(support[r], support[c]);
    }
    try {
      local = top_singular_pair_from(sub, naive, {.tol = 1e-10}).vector;
    } catch (const ConvergenceError& e) {
      local = e.last_iterate();
      orient(local);
    }
  }

  SparseDirection out(x.dim());
  for (Index j = 0; j < nnz; ++j) out.push_back(support[j], local[j]);
  return out;
}

}  // namespace rspca
