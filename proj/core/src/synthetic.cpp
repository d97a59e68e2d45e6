#include "rspca/synthetic.hpp"

#include <bit>
#include <cmath>
#include <numbers>

#include "rspca/errors.hpp"

namespace rspca {

namespace {

bool power_of_two(Index n) { return n > 0 && std::has_single_bit(static_cast<std::uint64_t>(n)); }

// First `cols` columns of the normalized Sylvester Hadamard matrix of order n.
Matrix hadamard_columns(Index n, Index cols) {
  if (!power_of_two(n)) throw InputError("Hadamard order must be a power of two");
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  Matrix h(n, cols);
  // H[i][j] = (-1)^popcount(i & j).
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < n; ++i) {
      const auto bits = std::popcount(static_cast<std::uint64_t>(i & j));
      h(i, j) = (bits % 2 == 0) ? scale : -scale;
    }
  }
  return h;
}

}  // namespace

Matrix hadamard_orthonormal(Index n) { return hadamard_columns(n, n); }

GivensComposition::GivensComposition(Index n, double theta) : n_(n), theta_(theta) {
  if (n < 4 || n % 4 != 0) throw InputError("Givens composition needs n divisible by 4");
}

std::vector<std::pair<Index, Index>> GivensComposition::planes() const {
  std::vector<std::pair<Index, Index>> out;
  for (Index j = 0; j < n_ / 4; ++j) out.emplace_back(n_ / 2 + 2 * j, n_ / 2 + 2 * j + 1);
  return out;
}

void GivensComposition::apply(Matrix& m) const {
  if (m.rows() != n_) throw InputError("Givens composition applied to a matrix with wrong row count");
  const double c = std::cos(theta_);
  const double s = std::sin(theta_);
  for (const auto& [i, j] : planes()) {
    for (Index col = 0; col < m.cols(); ++col) {
      const double a = m(i, col);
      const double b = m(j, col);
      m(i, col) = c * a - s * b;
      m(j, col) = s * a + c * b;
    }
  }
}

Matrix GivensComposition::matrix() const {
  Matrix g = Matrix::Identity(n_, n_);
  apply(g);
  return g;
}

void validate(const SyntheticSpec& spec) {
  if (!power_of_two(spec.m) || !power_of_two(spec.n)) throw InputError("m and n must be powers of two");
  if (spec.n % 4 != 0) throw InputError("n must be divisible by 4");
  if (spec.m > spec.n) throw InputError("m must not exceed n");
  if (!(spec.theta > 0.0 && spec.theta < std::numbers::pi / 2)) throw InputError("theta must lie in (0, pi/2)");
  if (!(spec.sigma1 > 0.0)) throw InputError("sigma_1 must be positive");
  if (!(spec.noise_std >= 0.0)) throw InputError("noise standard deviation must be nonnegative");
}

SyntheticData generate(const SyntheticSpec& spec) {
  validate(spec);
  const Matrix u = hadamard_orthonormal(spec.m);

  // Only the first m columns of V meet a nonzero singular value.
  Matrix v = hadamard_columns(spec.n, spec.m);
  GivensComposition(spec.n, spec.theta).apply(v);

  Vector sigma = Vector::Zero(spec.m);
  sigma[0] = spec.sigma1;
  if (spec.decaying_tail) {
    for (Index i = 1; i < spec.m; ++i) sigma[i] = std::exp(-static_cast<double>(i + 1));
  }

  Matrix x = u * sigma.asDiagonal() * v.transpose();
  if (spec.noise_std > 0.0) {
    Rng rng(spec.seed);
    for (Index r = 0; r < x.rows(); ++r) {
      for (Index c = 0; c < x.cols(); ++c) x(r, c) += spec.noise_std * rng.normal();
    }
  }
  return {DataMatrix(std::move(x)), std::move(v), u, std::move(sigma)};
}

}  // namespace rspca
