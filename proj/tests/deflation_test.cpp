#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "rspca/deflation.hpp"
#include "rspca/errors.hpp"

using namespace rspca;

TEST(Rspca, AxisAlignedRow) {
  Matrix x = Matrix::Zero(1, 5);
  x(0, 0) = 1.0;
  RspcaOptions opts;
  opts.k = 1;
  const RspcaResult r = rspca::rspca(DataMatrix(x), opts);
  EXPECT_FALSE(r.degenerate);
  EXPECT_EQ(r.direction.to_dense(), Vector::Unit(5, 0));
}

TEST(Rspca, ZeroDataIsDegenerate) {
  RspcaOptions opts;
  opts.k = 2;
  const RspcaResult r = rspca::rspca(DataMatrix(Matrix::Zero(3, 4)), opts);
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.direction.nnz(), 0u);
  EXPECT_EQ(r.direction.dim(), 4);
}

TEST(Rspca, PlantedThreeSparseRankOne) {
  std::mt19937_64 gen(1);
  for (int t = 0; t < 5; ++t) {
    Vector v = Vector::Zero(12);
    // Equal magnitudes, random signs and positions.
    std::vector<Index> idx{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
    std::shuffle(idx.begin(), idx.end(), gen);
    std::vector<Index> support(idx.begin(), idx.begin() + 3);
    std::sort(support.begin(), support.end());
    for (Index i : support) v[i] = (gen() % 2 ? 1.0 : -1.0) / std::sqrt(3.0);
    const Vector u = oracle::random_matrix(8, 1, gen).col(0).normalized();
    const DataMatrix x(7.0 * u * v.transpose());

    RspcaOptions opts;
    opts.k = 3;
    opts.plan.s = 3;
    opts.plan.seed = static_cast<Seed>(t);
    opts.solver.seed = static_cast<Seed>(t);
    const RspcaResult r = rspca::rspca(x, opts);
    EXPECT_EQ(r.direction.support(), support);
    const Covariance a = covariance(x, true);
    EXPECT_NEAR(f_metric(r.direction, a), 1.0, 1e-6);
  }
}

TEST(DeflateStep, RankOneAnnihilated) {
  Vector u(3), v(4);
  u << 1, -2, 0.5;
  v << 0.5, 0.5, -0.5, 0.5;
  const DataMatrix r = deflate_step(DataMatrix(u * v.transpose()), v);
  EXPECT_LT(r.values().cwiseAbs().maxCoeff(), 1e-15);
}

TEST(DeflateStep, OrthogonalDirectionLeavesXUnchanged) {
  Matrix x = Matrix::Zero(2, 3);
  x(0, 0) = 1;
  x(1, 1) = 2;
  const DataMatrix r = deflate_step(DataMatrix(x), Vector::Unit(3, 2));
  EXPECT_EQ(r.values(), x);
}

TEST(DeflateStep, CoordinateVectorZeroesColumn) {
  std::mt19937_64 gen(2);
  const Matrix x = oracle::random_matrix(4, 5, gen);
  const Matrix r = deflate_step(DataMatrix(x), Vector::Unit(5, 2)).values();
  for (Index c = 0; c < 5; ++c) {
    if (c == 2) {
      EXPECT_EQ(r.col(c), Vector::Zero(4));
    } else {
      EXPECT_EQ(r.col(c), x.col(c));
    }
  }
}

TEST(DeflateStep, RejectsNonUnit) {
  EXPECT_THROW(deflate_step(DataMatrix(Matrix::Ones(2, 2)), Vector::Ones(2)), InputError);
}

TEST(ComputeKComponents, RankOneTruncatesAfterFirst) {
  Vector u(3), v(4);
  u << 1, 2, 3;
  v << 0.5, 0.5, 0.5, 0.5;
  DeflationOptions opts;
  opts.components = 2;
  opts.rspca.k = 4;
  opts.rspca.plan.s = 4;
  const ComponentSet set = compute_k_components(DataMatrix(u * v.transpose()), opts);
  EXPECT_TRUE(set.truncated);
  EXPECT_EQ(set.v.size(), 1u);
  EXPECT_NEAR(set.cumulative_variance[0], 100.0, 1e-9);
}

TEST(ComputeKComponents, DiagonalRecoversAxes) {
  Matrix x = Matrix::Zero(2, 5);
  x(0, 0) = 3;
  x(1, 1) = 2;
  DeflationOptions opts;
  opts.components = 2;
  opts.rspca.k = 1;
  const ComponentSet set = compute_k_components(DataMatrix(x), opts);
  ASSERT_EQ(set.v.size(), 2u);
  EXPECT_NEAR(std::abs(set.v[0][0]), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(set.v[1][1]), 1.0, 1e-12);
  ASSERT_EQ(set.u.size(), 2u);
  EXPECT_NEAR(std::abs(set.u[0][0]), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(set.u[1][1]), 1.0, 1e-12);
  EXPECT_NEAR(set.cumulative_variance[0], 100.0 * 9.0 / 13.0, 1e-9);
  EXPECT_NEAR(set.cumulative_variance[1], 100.0, 1e-9);
  EXPECT_NEAR(set.reports[0].f_value, 1.0, 1e-9);
  EXPECT_NEAR(set.reports[1].f_value, 4.0 / 9.0, 1e-9);
}

TEST(ComputeKComponents, PlantedRankTwoCapturesEverything) {
  // Two disjoint sparse right vectors, orthogonal left vectors.
  Vector v1 = Vector::Zero(10), v2 = Vector::Zero(10);
  v1.head(3).setConstant(1.0 / std::sqrt(3.0));
  v2.segment(5, 2).setConstant(1.0 / std::sqrt(2.0));
  Vector u1 = Vector::Zero(6), u2 = Vector::Zero(6);
  u1.head(3).setConstant(1.0 / std::sqrt(3.0));
  u2.tail(3).setConstant(1.0 / std::sqrt(3.0));
  const DataMatrix x(5.0 * u1 * v1.transpose() + 2.0 * u2 * v2.transpose());
  DeflationOptions opts;
  opts.components = 2;
  opts.rspca.k = 3;
  opts.rspca.plan.s = 3;
  const ComponentSet set = compute_k_components(x, opts);
  ASSERT_EQ(set.v.size(), 2u);
  EXPECT_NEAR(set.cumulative_variance[1], 100.0, 1e-6);
  EXPECT_NEAR(std::abs(set.v[0].dot(v1)), 1.0, 1e-9);
  EXPECT_NEAR(std::abs(set.v[1].dot(v2)), 1.0, 1e-9);
}

TEST(ComputeKComponents, ValidatesCount) {
  DeflationOptions opts;
  opts.components = 3;
  EXPECT_THROW(compute_k_components(DataMatrix(Matrix::Ones(2, 5)), opts), InputError);
  opts.components = 0;
  EXPECT_THROW(compute_k_components(DataMatrix(Matrix::Ones(2, 5)), opts), InputError);
}

TEST(ComputeKComponents, DeterministicForSeeds) {
  std::mt19937_64 gen(3);
  const DataMatrix x(oracle::random_matrix(8, 6, gen));
  DeflationOptions opts;
  opts.components = 3;
  opts.rspca.k = 2;
  opts.rspca.plan.seed = 4;
  const ComponentSet a = compute_k_components(x, opts);
  const ComponentSet b = compute_k_components(x, opts);
  ASSERT_EQ(a.v.size(), b.v.size());
  for (std::size_t i = 0; i < a.v.size(); ++i) EXPECT_EQ(a.v[i], b.v[i]);
}
