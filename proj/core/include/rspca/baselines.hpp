#pragma once

#include <string_view>

#include "rspca/linalg.hpp"
#include "rspca/rounding.hpp"

namespace rspca {

enum class NormalizationMode { kNaive, kSvdBased };

std::string_view to_string(NormalizationMode mode);
/// Accepts "naive", "svd" or "svd_based". Throws InputError otherwise.
NormalizationMode parse_normalization(std::string_view name);

/// Keeps the k largest-magnitude entries of v (lowest index wins ties);
/// zero entries are never kept.
SparseDirection keep_top_k(const Vector& v, Index k);

/// MaxComp: truncate the top eigenvector of A to its k largest entries.
/// No renormalization. Propagates ConvergenceError.
SparseDirection max_comp(const Covariance& a, Index k, Seed seed = 0);

/// Thresholding the top eigenvector; the same keep-top-k rule as max_comp.
SparseDirection threshold_top_vector(const Covariance& a, Index k, Seed seed = 0);

/// Rescales a sparse vector to unit length.
///
/// kNaive divides by ||x||_2. kSvdBased replaces the values with the top
/// eigenvector of the principal submatrix of A on the support, padded with
/// zeros. The power iteration is warm-started from the naive vector, and the
/// Rayleigh quotient of a PSD power iteration never decreases, so the result
/// is never worse than naive on f. Throws InputError for an empty x.
SparseDirection normalize(const SparseDirection& x, const Covariance& a, NormalizationMode mode);

}  // namespace rspca
