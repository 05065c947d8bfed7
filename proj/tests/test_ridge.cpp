#include <gtest/gtest.h>

#include "derivkit/config.hpp"
#include "derivkit/errors.hpp"
#include "derivkit/ridge.hpp"
#include "test_support.hpp"

namespace derivkit {
namespace {

using testing::random_matrix;
using testing::rel_diff;

Eigen::MatrixXd normal_equation_ridge(const Eigen::MatrixXd& x, const Eigen::MatrixXd& l, double alpha) {
  const Eigen::MatrixXd gram =
      x.transpose() * x + alpha * Eigen::MatrixXd::Identity(x.cols(), x.cols());
  return gram.ldlt().solve(x.transpose() * l);
}

TEST(RidgeFit, MatchesNormalEquations) {
  RandomStream rng(10, {1});
  const Eigen::MatrixXd x = random_matrix(rng, 8, 3);
  const Eigen::MatrixXd l = random_matrix(rng, 8, 3);
  EXPECT_LE(rel_diff(ridge_fit(x, l, 0.5).coef, normal_equation_ridge(x, l, 0.5)), 1e-10);
}

TEST(RidgeFit, IdentityFeatures) {
  RandomStream rng(10, {2});
  const Eigen::MatrixXd l = random_matrix(rng, 6, 6);
  const auto fit = ridge_fit(Eigen::MatrixXd::Identity(6, 6), l, 0.0);
  EXPECT_LE(rel_diff(fit.coef, l), 1e-14);
  EXPECT_FALSE(fit.rank_deficient);
}

TEST(RidgeFit, InfiniteShrinkage) {
  RandomStream rng(10, {3});
  const Eigen::MatrixXd x = random_matrix(rng, 20, 5) / 5.0;
  const Eigen::MatrixXd l = random_matrix(rng, 20, 5) / 5.0;
  const auto fit = ridge_fit(x, l, 1e12);
  EXPECT_LE(fit.coef.norm(), 1.01 * (x.transpose() * l).norm() / 1e12);
}

TEST(RidgeFit, RankDeficientWithoutRegularizationIsMinimumNorm) {
  RandomStream rng(10, {4});
  Eigen::MatrixXd x = random_matrix(rng, 10, 4);
  x.col(3) = x.col(0) + x.col(1);
  const Eigen::MatrixXd l = random_matrix(rng, 10, 2);
  const auto fit = ridge_fit(x, l, 0.0);
  EXPECT_TRUE(fit.rank_deficient);
  const Eigen::MatrixXd oracle = x.completeOrthogonalDecomposition().solve(l);
  EXPECT_LE(rel_diff(fit.coef, oracle), 1e-10);
}

TEST(RidgeFit, Preconditions) {
  RandomStream rng(10, {5});
  const Eigen::MatrixXd x = random_matrix(rng, 3, 5);
  const Eigen::MatrixXd l = random_matrix(rng, 3, 5);
  EXPECT_THROW(ridge_fit(x, l, 0.0), ArgumentError);
  EXPECT_THROW(ridge_fit(x, l, -1.0), ArgumentError);
  EXPECT_NO_THROW(ridge_fit(x, l, 0.1));
  EXPECT_THROW(ridge_fit(x, random_matrix(rng, 4, 5), 0.1), ArgumentError);
}

TEST(RidgeFit, ShrinkageIsMonotone) {
  for (std::uint64_t k = 0; k < 20; ++k) {
    RandomStream rng(11, {k});
    const Eigen::MatrixXd x = random_matrix(rng, 30, 6);
    const Eigen::MatrixXd l = random_matrix(rng, 30, 6);
    double previous = std::numeric_limits<double>::infinity();
    for (double alpha : logspace(-4.0, 3.0, 20)) {
      const double norm = ridge_fit(x, l, alpha).coef.norm();
      EXPECT_LE(norm, previous * (1.0 + 1e-12));
      previous = norm;
    }
  }
}

TEST(RidgeCv, SingleCandidateEqualsPlainFit) {
  RandomStream rng(12, {1});
  const Eigen::MatrixXd x = random_matrix(rng, 40, 5);
  const Eigen::MatrixXd l = random_matrix(rng, 40, 5);
  const auto fit = ridge_cv_fit(x, l, {0.3}, 2);
  EXPECT_EQ(fit.alpha, 0.3);
  EXPECT_LE(rel_diff(fit.coef, ridge_fit(x, l, 0.3).coef), 1e-12);
}

TEST(RidgeCv, NoiselessLinearDataSelectsSmallestAlpha) {
  RandomStream rng(12, {2});
  const Eigen::MatrixXd x = random_matrix(rng, 400, 8);
  const Eigen::MatrixXd a0 = random_matrix(rng, 8, 8);
  const auto alphas = logspace(-4.0, 3.0, 20);
  const auto fit = ridge_cv_fit(x, x * a0, alphas, 2);
  EXPECT_EQ(fit.alpha, alphas.front());
  EXPECT_LE(rel_diff(fit.coef, a0), 1e-3);
}

TEST(RidgeCv, ScoresMatchExplicitFoldRefits) {
  RandomStream rng(12, {3});
  const Eigen::MatrixXd x = random_matrix(rng, 31, 4);
  const Eigen::MatrixXd l = x * random_matrix(rng, 4, 3) + 0.5 * random_matrix(rng, 31, 3);
  const std::vector<double> alphas = {0.01, 1.0, 30.0};
  const int folds = 3;
  const auto fit = ridge_cv_fit(x, l, alphas, folds);
  ASSERT_EQ(fit.cv_scores.size(), alphas.size());
  for (std::size_t a = 0; a < alphas.size(); ++a) {
    double total = 0.0;
    for (int k = 0; k < folds; ++k) {
      const Eigen::Index begin = 31 * k / folds;
      const Eigen::Index end = 31 * (k + 1) / folds;
      Eigen::MatrixXd xt(31 - (end - begin), 4);
      Eigen::MatrixXd lt(31 - (end - begin), 3);
      xt << x.topRows(begin), x.bottomRows(31 - end);
      lt << l.topRows(begin), l.bottomRows(31 - end);
      const Eigen::MatrixXd coef = normal_equation_ridge(xt, lt, alphas[a]);
      const Eigen::MatrixXd resid = x.middleRows(begin, end - begin) * coef - l.middleRows(begin, end - begin);
      total += resid.squaredNorm() / static_cast<double>(resid.size());
    }
    EXPECT_NEAR(fit.cv_scores[a], total / folds, 1e-10 * total);
  }
  const auto best = std::min_element(fit.cv_scores.begin(), fit.cv_scores.end()) - fit.cv_scores.begin();
  EXPECT_EQ(fit.alpha, alphas[static_cast<std::size_t>(best)]);
  // Refit on all rows solves the normal equations.
  const Eigen::MatrixXd lhs =
      (x.transpose() * x + fit.alpha * Eigen::MatrixXd::Identity(4, 4)) * fit.coef;
  EXPECT_LE(rel_diff(lhs, x.transpose() * l), 1e-8);
}

TEST(RidgeCv, ScoreInvariantToRowPermutationWithinFolds) {
  RandomStream rng(12, {4});
  const Eigen::MatrixXd x = random_matrix(rng, 20, 4);
  const Eigen::MatrixXd l = random_matrix(rng, 20, 4);
  Eigen::PermutationMatrix<Eigen::Dynamic> perm(20);
  // Reverse each half separately.
  for (int i = 0; i < 10; ++i) {
    perm.indices()(i) = 9 - i;
    perm.indices()(10 + i) = 19 - i;
  }
  const std::vector<double> alphas = {0.01, 0.1, 1.0};
  const auto a = ridge_cv_fit(x, l, alphas, 2);
  const auto b = ridge_cv_fit(perm * x, perm * l, alphas, 2);
  for (std::size_t k = 0; k < alphas.size(); ++k) EXPECT_NEAR(a.cv_scores[k], b.cv_scores[k], 1e-12 * a.cv_scores[k]);
}

TEST(RidgeCv, TiesGoToTheSmallerAlpha) {
  // Zero labels make every candidate score exactly 0.
  RandomStream rng(12, {5});
  const Eigen::MatrixXd x = random_matrix(rng, 20, 3);
  const auto fit = ridge_cv_fit(x, Eigen::MatrixXd::Zero(20, 3), {0.5, 0.1, 2.0}, 2);
  EXPECT_EQ(fit.alpha, 0.1);
}

TEST(RidgeCv, Preconditions) {
  RandomStream rng(12, {6});
  const Eigen::MatrixXd x = random_matrix(rng, 10, 3);
  EXPECT_THROW(ridge_cv_fit(x, x, {}, 2), ArgumentError);
  EXPECT_THROW(ridge_cv_fit(x, x, {1.0}, 1), ArgumentError);
  EXPECT_THROW(ridge_cv_fit(x, x, {1.0}, 11), ArgumentError);
}

}  // namespace
}  // namespace derivkit
