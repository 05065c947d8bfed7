#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "derivkit/errors.hpp"
#include "derivkit/metrics.hpp"
#include "derivkit/rng.hpp"

namespace derivkit {
namespace {

double sorted_percentile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = (static_cast<double>(v.size()) - 1.0) * q / 100.0;
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

TEST(Percentile, MatchesSortAndInterpolate) {
  RandomStream rng(3, {1});
  for (std::size_t n : {1u, 2u, 7u, 100u, 1001u}) {
    std::vector<double> v(n);
    for (double& x : v) x = rng.normal();
    for (double q : {0.0, 12.5, 50.0, 75.0, 95.0, 100.0}) {
      EXPECT_NEAR(percentile(v, q), sorted_percentile(v, q), 1e-12) << n << " " << q;
    }
  }
}

TEST(Percentile, SmallCases) {
  const std::vector<double> v = {4.0, 1.0, 3.0, 2.0};
  EXPECT_DOUBLE_EQ(percentile(v, 50.0), 2.5);
  EXPECT_DOUBLE_EQ(percentile(v, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(percentile(v, 100.0), 4.0);
  EXPECT_THROW(percentile(std::vector<double>{}, 50.0), ArgumentError);
  EXPECT_THROW(percentile(v, 101.0), ArgumentError);
}

TEST(EvalError, ConstantOffset) {
  Eigen::VectorXd truth(100);
  for (Eigen::Index i = 0; i < truth.size(); ++i) truth(i) = i % 2 == 0 ? 1.0 : -1.0;
  const Eigen::VectorXd est = truth.array() + 0.1;
  EXPECT_NEAR(eval_error(est, truth), 0.1, 1e-15);
  EXPECT_EQ(eval_error(truth, truth), 0.0);
}

TEST(EvalError, ScaleInvariant) {
  RandomStream rng(4, {1});
  Eigen::VectorXd truth(200), est(200);
  for (Eigen::Index i = 0; i < 200; ++i) {
    truth(i) = rng.normal();
    est(i) = truth(i) + 0.2 * rng.normal();
  }
  EXPECT_NEAR(eval_error(3.0 * est, 3.0 * truth), eval_error(est, truth), 1e-14);
  EXPECT_GE(eval_error(est, truth), 0.0);
}

TEST(EvalError, Failures) {
  EXPECT_THROW(eval_error(Eigen::VectorXd::Ones(10), Eigen::VectorXd::Zero(10)), NumericalError);
  EXPECT_THROW(eval_error(Eigen::VectorXd::Ones(10), Eigen::VectorXd::Ones(9)), ArgumentError);
  Eigen::VectorXd est = Eigen::VectorXd::Ones(10);
  est(3) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_EQ(eval_error(est, Eigen::VectorXd::Ones(10)), std::numeric_limits<double>::infinity());
}

}  // namespace
}  // namespace derivkit
