#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "rspca/errors.hpp"
#include "rspca/rounding.hpp"

using namespace rspca;

namespace {

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Index>(values.size()));
  Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

}  // namespace

TEST(KeepProbabilities, Saturated) {
  EXPECT_EQ(keep_probabilities(vec({0.5, 0.5}), 2), vec({1, 1}));
}

TEST(KeepProbabilities, UnitL1) {
  const Vector p = keep_probabilities(vec({0.6, 0.3, 0.1}), 1);
  EXPECT_NEAR(p[0], 0.6, 1e-15);
  EXPECT_NEAR(p[1], 0.3, 1e-15);
  EXPECT_NEAR(p[2], 0.1, 1e-15);
}

TEST(KeepProbabilities, HandEvaluated) {
  const Vector p = keep_probabilities(vec({4, 2, 1, 1}), 2);
  EXPECT_EQ(p, vec({1, 0.5, 0.25, 0.25}));
  EXPECT_EQ(expected_nnz(p), 2.0);
}

TEST(KeepProbabilities, ZeroVectorAndZeroTarget) {
  EXPECT_EQ(keep_probabilities(Vector::Zero(3), 2), Vector::Zero(3));
  EXPECT_THROW(keep_probabilities(vec({1, 2}), 0), InputError);
}

TEST(KeepProbabilities, SumNeverExceedsTargetExactly) {
  std::mt19937_64 gen(31);
  for (int t = 0; t < 500; ++t) {
    const Index n = 3 + t % 40;
    const Vector x = oracle::random_matrix(n, 1, gen).col(0);
    const std::size_t s = 1 + static_cast<std::size_t>(t % 7);
    const Vector p = keep_probabilities(x, s);
    ASSERT_LE(expected_nnz(p), static_cast<double>(s)) << "trial " << t;
    ASSERT_GE(p.minCoeff(), 0.0);
    ASSERT_LE(p.maxCoeff(), 1.0);
  }
}

TEST(Sparsify, DeterministicInputForEverySeed) {
  const Vector x = vec({0.5, 0.5, 0, 0});
  for (Seed seed = 0; seed < 50; ++seed) {
    EXPECT_EQ(sparsify(x, 2, seed).to_dense(), x);
  }
}

TEST(Sparsify, ZeroVector) {
  const SparseDirection d = sparsify(Vector::Zero(5), 3, 1);
  EXPECT_EQ(d.nnz(), 0u);
  EXPECT_EQ(d.dim(), 5);
}

TEST(Sparsify, KeptEntriesAreRescaled) {
  const Vector x = vec({4, 2, 1, 1});
  const Vector p = keep_probabilities(x, 2);
  for (Seed seed = 0; seed < 100; ++seed) {
    const SparseDirection d = sparsify(x, 2, seed);
    for (std::size_t j = 0; j < d.nnz(); ++j) {
      const Index i = d.support()[j];
      EXPECT_DOUBLE_EQ(d.values()[j], x[i] / p[i]);
    }
  }
}

TEST(Sparsify, OneUniformPerCoordinateInIndexOrder) {
  const Vector x = vec({0.1, 0.2, 0.3, 0.4});
  const Vector p = keep_probabilities(x, 2);
  for (Seed seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    Vector expected = Vector::Zero(4);
    for (Index i = 0; i < 4; ++i) {
      if (rng.uniform() < p[i]) expected[i] = x[i] / p[i];
    }
    EXPECT_EQ(sparsify(x, 2, seed).to_dense(), expected);
  }
}

TEST(Sparsify, UnbiasedAgainstOutcomeEnumeration) {
  const Vector x = vec({0.5, -0.3, 0.15, 0.05});
  const Vector p = keep_probabilities(x, 2);
  Vector mean = Vector::Zero(4);
  double total = 0.0;
  for (const auto& o : oracle::rounding_outcomes(x, p)) {
    mean += o.probability * o.x_hat;
    total += o.probability;
  }
  EXPECT_NEAR(total, 1.0, 1e-14);
  EXPECT_LT((mean - x).cwiseAbs().maxCoeff(), 1e-14);

  // Monte Carlo mean of the implementation agrees.
  const int n = 20000;
  Vector mc = Vector::Zero(4);
  for (int t = 0; t < n; ++t) mc += sparsify(x, 2, static_cast<Seed>(t)).to_dense();
  mc /= n;
  for (Index i = 0; i < 4; ++i) {
    const double sd = std::abs(x[i]) * std::sqrt((1.0 / p[i] - 1.0) / n);
    EXPECT_NEAR(mc[i], x[i], 4.0 * sd + 1e-15);
  }
}

TEST(SparsifyBestOf, SingleTrialEqualsSparsify) {
  const Vector x = vec({0.6, 0.3, 0.1});
  const Covariance a = Covariance::from_symmetric(Matrix::Identity(3, 3));
  for (Seed seed = 0; seed < 10; ++seed) {
    RoundingPlan plan;
    plan.s = 2;
    plan.trials = 1;
    plan.seed = seed;
    const BestOfResult r = sparsify_best_of(x, a, plan);
    EXPECT_EQ(r.direction, sparsify(x, 2, seed));
    EXPECT_EQ(r.trial, 0u);
  }
}

TEST(SparsifyBestOf, DeterministicInputUnchanged) {
  const Vector x = vec({0.5, 0.5, 0.0});
  const Covariance a = Covariance::from_symmetric(Matrix::Identity(3, 3));
  RoundingPlan plan;
  plan.s = 2;
  plan.trials = 17;
  const BestOfResult r = sparsify_best_of(x, a, plan);
  EXPECT_EQ(r.direction.to_dense(), x);
  EXPECT_DOUBLE_EQ(r.quadratic_form, x.squaredNorm());
}

TEST(SparsifyBestOf, AtLeastMedianOfOutcomeDistribution) {
  const Vector x = vec({0.6, 0.3, 0.1});
  const Covariance a = Covariance::from_symmetric(Matrix::Identity(3, 3), true);
  const Vector p = keep_probabilities(x, 2);

  // Median single-trial quadratic form from the exact outcome distribution.
  auto outcomes = oracle::rounding_outcomes(x, p);
  std::sort(outcomes.begin(), outcomes.end(), [&](const auto& l, const auto& r) {
    return l.x_hat.dot(a.matrix() * l.x_hat) < r.x_hat.dot(a.matrix() * r.x_hat);
  });
  double cumulative = 0.0;
  double median = 0.0;
  for (const auto& o : outcomes) {
    cumulative += o.probability;
    if (cumulative >= 0.5) {
      median = o.x_hat.dot(a.matrix() * o.x_hat);
      break;
    }
  }

  for (Seed seed = 0; seed < 20; ++seed) {
    RoundingPlan plan;
    plan.s = 2;
    plan.trials = 64;
    plan.seed = seed;
    EXPECT_GE(sparsify_best_of(x, a, plan).quadratic_form, median);
  }
}

TEST(SparsifyBestOf, PicksMaximumAmongCappedTrials) {
  std::mt19937_64 gen(41);
  const Matrix am = oracle::random_unit_row_psd(8, gen);
  const Covariance a = Covariance::from_symmetric(am);
  const Vector x = oracle::random_matrix(8, 1, gen).col(0).normalized();
  RoundingPlan plan;
  plan.s = 3;
  plan.trials = 40;
  plan.seed = 5;
  plan.norm_cap = 1.6;
  const BestOfResult r = sparsify_best_of(x, a, plan);

  double best = -1.0;
  std::size_t best_t = 0;
  for (std::size_t t = 0; t < plan.trials; ++t) {
    const Vector xh = sparsify(x, plan.s, plan.seed + t).to_dense();
    if (xh.norm() > plan.norm_cap) continue;
    const double form = xh.dot(am * xh);
    if (form > best) {
      best = form;
      best_t = t;
    }
  }
  ASSERT_GE(best, 0.0) << "instance should have a capped trial";
  EXPECT_TRUE(r.norm_cap_met);
  EXPECT_EQ(r.trial, best_t);
  EXPECT_DOUBLE_EQ(r.quadratic_form, best);
  EXPECT_LE(r.direction.norm(), plan.norm_cap);
}

TEST(SparsifyBestOf, FallsBackWhenNoTrialMeetsCap) {
  const Vector x = vec({0.5, 0.5});
  const Covariance a = Covariance::from_symmetric(Matrix::Identity(2, 2));
  RoundingPlan plan;
  plan.s = 2;
  plan.trials = 3;
  plan.norm_cap = 0.1;
  const BestOfResult r = sparsify_best_of(x, a, plan);
  EXPECT_FALSE(r.norm_cap_met);
  EXPECT_EQ(r.direction.to_dense(), x);
}

TEST(SparseDirection, PushBackContract) {
  SparseDirection d(4);
  d.push_back(1, 2.0);
  d.push_back(2, 0.0);
  EXPECT_EQ(d.nnz(), 1u);
  EXPECT_THROW(d.push_back(1, 1.0), InputError);
  EXPECT_THROW(d.push_back(4, 1.0), InputError);
  EXPECT_DOUBLE_EQ(d.norm(), 2.0);
  EXPECT_EQ(SparseDirection::from_dense(d.to_dense()), d);
}
