#pragma once

#include <cstdint>
#include <random>

namespace rspca {

using Seed = std::uint64_t;

/// Seeded generator with a platform-independent sampling contract.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The distributions from <random> are not, so uniforms are built
/// from the top 53 bits of one engine draw and normals use the Box-Muller
/// transform (two uniforms per pair, cosine branch first).
class Rng {
 public:
  explicit Rng(Seed seed);

  /// Uniform on [0, 1).
  double uniform();
  /// Standard normal.
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

/// Seed for the i-th independent stream derived from a base seed.
constexpr Seed derive_seed(Seed base, std::uint64_t index) noexcept { return base + index; }

}  // namespace rspca
