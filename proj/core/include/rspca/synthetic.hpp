#pragma once

#include <utility>
#include <vector>

#include "rspca/linalg.hpp"

namespace rspca {

/// Sylvester Hadamard matrix scaled by 1/sqrt(n). Throws InputError unless n is a power of two.
Matrix hadamard_orthonormal(Index n);

/// Product of n/4 plane rotations on the disjoint 0-based index pairs
/// (n/2 + 2j, n/2 + 2j + 1), j = 0..n/4-1, each with entries
/// (i,i) = cos t, (i,j) = -sin t, (j,i) = sin t, (j,j) = cos t.
class GivensComposition {
 public:
  /// Throws InputError unless n is a positive multiple of 4.
  GivensComposition(Index n, double theta);

  Index dim() const noexcept { return n_; }
  double theta() const noexcept { return theta_; }
  std::vector<std::pair<Index, Index>> planes() const;

  /// Left-multiplies m (n rows) in place: m <- G m.
  void apply(Matrix& m) const;
  /// Dense G.
  Matrix matrix() const;

 private:
  Index n_;
  double theta_;
};

struct SyntheticSpec {
  Index m = 128;
  Index n = 4096;
  double theta = 0.27 * 3.14159265358979323846;
  double sigma1 = 100.0;
  double noise_std = 1e-3;
  Seed seed = 0;
  /// Singular values sigma_i = exp(-i) for i = 2..m unless disabled, in which
  /// case only sigma_1 is nonzero.
  bool decaying_tail = true;
};

struct SyntheticData {
  DataMatrix x;
  /// Right singular vectors of the noiseless part: the first m columns of G V~ (n x m).
  Matrix v;
  /// Left singular vectors (m x m Hadamard).
  Matrix u;
  /// sigma_1..sigma_m.
  Vector sigma;
};

/// X = U Sigma V^T + E with Hadamard U and V~, V = G(theta) V~, and E i.i.d.
/// N(0, noise_std^2) filled row-major from Rng(seed).
SyntheticData generate(const SyntheticSpec& spec);

/// Throws InputError describing the first violated constraint.
void validate(const SyntheticSpec& spec);

}  // namespace rspca
