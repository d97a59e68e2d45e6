#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "rspca/errors.hpp"
#include "rspca/eval.hpp"
#include "rspca/experiment.hpp"

using namespace rspca;

namespace {

Covariance diag(std::initializer_list<double> values) {
  Vector d(static_cast<Index>(values.size()));
  Index i = 0;
  for (double x : values) d[i++] = x;
  return Covariance::from_symmetric(d.asDiagonal().toDenseMatrix());
}

}  // namespace

TEST(FMetric, TopVectorScoresOne) {
  std::mt19937_64 gen(1);
  const Matrix am = oracle::random_unit_row_psd(7, gen);
  const Covariance a = Covariance::from_symmetric(am);
  EXPECT_NEAR(f_metric(Vector(oracle::jacobi_eigen(am).vectors.col(0)), a), 1.0, 1e-8);
}

TEST(FMetric, ZeroVectorAndEigenvalueRatio) {
  const Covariance a = diag({4, 1});
  EXPECT_EQ(f_metric(Vector::Zero(2), a), 0.0);
  EXPECT_NEAR(f_metric(Vector::Unit(2, 1), a), 0.25, 1e-9);
}

TEST(FMetric, ZeroCovarianceRejected) {
  EXPECT_THROW(f_metric(Vector::Ones(2), Covariance::from_symmetric(Matrix::Zero(2, 2))), InputError);
}

TEST(FMetric, UsesCachedNorm) {
  Covariance a = diag({4, 1});
  a.set_spectral_norm(8.0);
  EXPECT_DOUBLE_EQ(f_metric(Vector::Unit(2, 0), a), 0.5);
}

TEST(CapturedVariance, AllSingularVectorsCaptureEverything) {
  std::mt19937_64 gen(2);
  const Matrix x = oracle::random_matrix(6, 4, gen);
  const auto eig = oracle::jacobi_eigen(x.transpose() * x);
  std::vector<Vector> vs;
  for (Index i = 0; i < 4; ++i) vs.push_back(eig.vectors.col(i));
  const auto cv = captured_variance(DataMatrix(x), vs);
  EXPECT_NEAR(cv.back(), 100.0, 1e-9);
  for (std::size_t i = 1; i < cv.size(); ++i) EXPECT_GE(cv[i], cv[i - 1]);
}

TEST(CapturedVariance, RankOne) {
  Vector u(3), v(4);
  u << 1, 2, 2;
  v << 0.5, 0.5, 0.5, 0.5;
  const auto cv = captured_variance(DataMatrix(u * v.transpose()), {v});
  EXPECT_NEAR(cv[0], 100.0, 1e-12);
}

TEST(CapturedVariance, HandArithmetic) {
  Matrix x = Matrix::Zero(3, 5);
  x(0, 0) = 3;
  x(1, 1) = 2;
  x(2, 2) = 1;
  const auto cv = captured_variance(DataMatrix(x), {Vector::Unit(5, 0), Vector::Unit(5, 1)});
  EXPECT_NEAR(cv[0], 100.0 * 9.0 / 14.0, 1e-12);
  EXPECT_NEAR(cv[1], 100.0 * 13.0 / 14.0, 1e-12);
  EXPECT_THROW(captured_variance(DataMatrix(Matrix::Zero(2, 2)), {Vector::Unit(2, 0)}), InputError);
}

TEST(Exhaustive, FullSupportIsSpectralNorm) {
  std::mt19937_64 gen(3);
  const Matrix am = oracle::random_unit_row_psd(6, gen);
  const SparseOptimum opt = exhaustive_sparse_pca(Covariance::from_symmetric(am), 6);
  const auto eig = oracle::jacobi_eigen(am);
  EXPECT_NEAR(opt.value, eig.values[0], 1e-12);
  EXPECT_NEAR(std::abs(opt.vector.dot(eig.vectors.col(0))), 1.0, 1e-10);
}

TEST(Exhaustive, DiagonalPicksLargestEntry) {
  const SparseOptimum opt = exhaustive_sparse_pca(diag({0.3, 0.9, 0.5, 0.9}), 1);
  EXPECT_DOUBLE_EQ(opt.value, 0.9);
  EXPECT_EQ(opt.support, (std::vector<Index>{1}));
  EXPECT_EQ(opt.vector, Vector::Unit(4, 1));
}

TEST(Exhaustive, TridiagonalTieGoesToLowestSupport) {
  Matrix am(3, 3);
  am << 1, .4, 0, .4, 1, .4, 0, .4, 1;
  const Covariance a = Covariance::from_symmetric(am, true);
  const SparseOptimum opt = exhaustive_sparse_pca(a, 2);
  EXPECT_NEAR(opt.value, 1.4 / std::sqrt(1.32), 1e-12);
  EXPECT_EQ(opt.support, (std::vector<Index>{0, 1}));
}

TEST(Exhaustive, MatchesBitmaskOracle) {
  std::mt19937_64 gen(4);
  for (int t = 0; t < 20; ++t) {
    const Index n = 4 + t % 7;
    const int k = 1 + t % 4;
    const Matrix am = oracle::random_unit_row_psd(n, gen, 1 + t % 3);
    const SparseOptimum opt = exhaustive_sparse_pca(Covariance::from_symmetric(am), k);
    EXPECT_NEAR(opt.value, oracle::brute_force_sparse_pca(am, k), 1e-10);
    EXPECT_NEAR(opt.vector.dot(am * opt.vector), opt.value, 1e-10);
    EXPECT_LE(static_cast<int>((opt.vector.array() != 0.0).count()), k);
  }
}

TEST(Exhaustive, Guards) {
  EXPECT_THROW(exhaustive_sparse_pca(Covariance::from_symmetric(Matrix::Identity(21, 21)), 1), GuardError);
  EXPECT_NO_THROW(exhaustive_sparse_pca(Covariance::from_symmetric(Matrix::Identity(8, 8)), 4));
}

TEST(FrequencyFloor, Values) {
  EXPECT_NEAR(frequency_floor(0.75, 1000), 0.75 - 3.0 * std::sqrt(0.1875 / 1000.0), 1e-15);
  EXPECT_GT(frequency_floor(0.75, 1000), 0.70);
  EXPECT_LT(frequency_floor(0.875, 1000), 0.845);
}

TEST(VerifyTheorem1, AxisInstanceAllPass) {
  Matrix am = Matrix::Zero(4, 4);
  am(0, 0) = 1.0;
  BoundCheckOptions opts;
  opts.k = 1;
  opts.epsilon = 0.5;
  opts.trials = 200;
  const BoundCheckReport r = verify_theorem1(Covariance::from_symmetric(am), opts);
  EXPECT_TRUE(judge(r).all());
  EXPECT_EQ(r.s, 800u);
  EXPECT_DOUBLE_EQ(r.mean_nnz, 1.0);
  EXPECT_DOUBLE_EQ(r.frac_norm_ok, 1.0);
  EXPECT_DOUBLE_EQ(r.reference_value, 1.0);
  EXPECT_EQ(r.reference_label, "exhaustive");
}

// Small s so that the rounding is genuinely random and the bounds bind.
TEST(VerifyTheorem1, NontrivialRoundingMeetsBounds) {
  std::mt19937_64 gen(5);
  for (int t = 0; t < 5; ++t) {
    const Matrix am = oracle::random_unit_row_psd(10, gen, 2);
    BoundCheckOptions opts;
    opts.k = 2;
    opts.epsilon = 1.0;
    opts.trials = 2000;
    opts.seed = static_cast<Seed>(100 * t);
    opts.s_override = 4;
    const BoundCheckReport r = verify_theorem1(Covariance::from_symmetric(am), opts);
    EXPECT_LT(r.expected_nnz, 10.0);
    EXPECT_TRUE(r.sparsity_ok);
    EXPECT_LE(r.expected_nnz, 4.0);
    EXPECT_LE(r.exact_sq_residual, r.sq_residual_bound + 1e-12);
    EXPECT_GE(r.exact_expectation_gap, 0.0);
    EXPECT_NEAR(r.expectation_gap, r.exact_expectation_gap, 5.0 * r.expectation_gap_standard_error + 1e-12);
    const BoundVerdicts v = judge(r);
    EXPECT_TRUE(v.sq_residual);
    EXPECT_TRUE(v.cross_term);
    EXPECT_TRUE(v.quad_term);
    EXPECT_TRUE(v.expectation);
  }
}

TEST(VerifyTheorem1, ExactResidualMatchesEnumeration) {
  std::mt19937_64 gen(6);
  const Matrix am = oracle::random_unit_row_psd(6, gen);
  BoundCheckOptions opts;
  opts.k = 2;
  opts.trials = 10;
  opts.s_override = 2;
  const BoundCheckReport r = verify_theorem1(Covariance::from_symmetric(am), opts);

  SolverConfig solver;
  const Vector xt = solve_relaxed(RelaxationProblem(Covariance::from_symmetric(am), 2), solver).x;
  const Vector p = keep_probabilities(xt, 2);
  double sq = 0.0, gap = 0.0;
  for (const auto& o : oracle::rounding_outcomes(xt, p)) {
    sq += o.probability * (o.x_hat - xt).squaredNorm();
    gap += o.probability * o.x_hat.dot(am * o.x_hat);
  }
  gap -= xt.dot(am * xt);
  EXPECT_NEAR(r.exact_sq_residual, sq, 1e-10);
  EXPECT_NEAR(r.exact_expectation_gap, gap, 1e-10);
}

TEST(VerifyTheorem1, RescalesAndValidates) {
  Matrix am = Matrix::Zero(3, 3);
  am(0, 0) = 5.0;
  BoundCheckOptions opts;
  opts.trials = 10;
  const BoundCheckReport r = verify_theorem1(Covariance::from_symmetric(am), opts);
  EXPECT_DOUBLE_EQ(r.covariance_scale, 5.0);
  opts.epsilon = 0.0;
  EXPECT_THROW(verify_theorem1(Covariance::from_symmetric(am), opts), InputError);
  opts.epsilon = 1.5;
  EXPECT_THROW(verify_theorem1(Covariance::from_symmetric(am), opts), InputError);
}
