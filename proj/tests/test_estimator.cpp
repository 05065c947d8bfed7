#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <thread>

#include "derivkit/errors.hpp"
#include "derivkit/estimator.hpp"
#include "test_support.hpp"

namespace derivkit {
namespace {

using testing::random_matrix;
using testing::random_vector;
using testing::small_full_shape_dictionary;
using testing::tiny_dictionary;

// Materializes every (window start, offset) estimate and groups by instant.
SlidingEstimate brute_force_sliding(const Eigen::VectorXd& s, const Eigen::MatrixXd& dense_map) {
  const Eigen::Index n = s.size();
  const Eigen::Index n_w = dense_map.rows();
  std::map<Eigen::Index, std::vector<double>> groups;
  for (Eigen::Index i = 0; i + n_w <= n; ++i) {
    const Eigen::VectorXd out = dense_map.transpose() * s.segment(i, n_w);
    for (Eigen::Index k = 0; k < n_w; ++k) groups[i + k].push_back(out(k));
  }
  SlidingEstimate result{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  for (const auto& [m, values] : groups) {
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    result.values(m) = mean;
    result.sigma(m) = std::sqrt(var / static_cast<double>(values.size()));
  }
  return result;
}

CompressedMap random_map(std::uint64_t seed, Eigen::Index n_w) {
  RandomStream rng(seed, {0});
  return compress(random_matrix(rng, n_w, n_w) / std::sqrt(static_cast<double>(n_w)), 1e-6);
}

TEST(WindowCount, PlateauAndEdges) {
  EXPECT_EQ(window_count(2000, 50, 1), 1);
  EXPECT_EQ(window_count(2000, 50, 49), 49);
  for (Eigen::Index m = 50; m <= 1951; ++m) ASSERT_EQ(window_count(2000, 50, m), 50) << m;
  EXPECT_EQ(window_count(2000, 50, 1952), 49);
  EXPECT_EQ(window_count(2000, 50, 2000), 1);
  for (Eigen::Index m = 1; m <= 50; ++m) EXPECT_EQ(window_count(50, 50, m), 1);
  // Short series: never more windows than there are starts.
  EXPECT_EQ(window_count(60, 50, 30), 11);
}

TEST(WindowCount, MatchesEnumeration) {
  for (Eigen::Index n : {8, 9, 15, 16, 40}) {
    for (Eigen::Index m = 1; m <= n; ++m) {
      Eigen::Index count = 0;
      for (Eigen::Index i = 1; i <= n - 8 + 1; ++i) {
        for (Eigen::Index k = 0; k < 8; ++k) count += (i + k == m);
      }
      EXPECT_EQ(window_count(n, 8, m), count) << n << " " << m;
    }
  }
}

TEST(SlidingEstimate, MatchesBruteForce) {
  for (Eigen::Index n_w : {8, 50}) {
    const auto map = random_map(30 + static_cast<std::uint64_t>(n_w), n_w);
    RandomStream rng(31, {static_cast<std::uint64_t>(n_w)});
    const Eigen::VectorXd s = random_vector(rng, 300);
    const auto fast = sliding_estimate(s, map);
    const auto slow = brute_force_sliding(s, map.dense());
    const double scale = std::max(1.0, slow.values.cwiseAbs().maxCoeff());
    EXPECT_LE((fast.values - slow.values).cwiseAbs().maxCoeff(), 1e-12 * scale);
    EXPECT_LE((fast.sigma - slow.sigma).cwiseAbs().maxCoeff(), 1e-12 * scale);
  }
}

TEST(SlidingEstimate, SingleWindow) {
  const auto map = random_map(32, 8);
  RandomStream rng(32, {1});
  const Eigen::VectorXd s = random_vector(rng, 8);
  const auto est = sliding_estimate(s, map);
  EXPECT_LE((est.values - map.apply(s)).norm(), 1e-14);
  EXPECT_TRUE(est.sigma.isZero());
}

TEST(SlidingEstimate, SigmaZeroOnlyWhereOneWindowContributes) {
  const auto map = random_map(33, 8);
  RandomStream rng(33, {1});
  const Eigen::VectorXd s = random_vector(rng, 40);
  const auto est = sliding_estimate(s, map);
  EXPECT_EQ(est.sigma(0), 0.0);
  EXPECT_EQ(est.sigma(39), 0.0);
  for (Eigen::Index m = 1; m < 39; ++m) EXPECT_GT(est.sigma(m), 0.0) << m;
  EXPECT_TRUE((est.sigma.array() >= 0.0).all());
}

TEST(SlidingEstimate, Linear) {
  const auto map = random_map(34, 8);
  RandomStream rng(34, {1});
  const Eigen::VectorXd s = random_vector(rng, 100);
  const auto a = sliding_estimate(s, map);
  const auto b = sliding_estimate(-2.5 * s, map);
  EXPECT_LE((b.values + 2.5 * a.values).norm(), 1e-13 * a.values.norm());
  EXPECT_LE((b.sigma - 2.5 * a.sigma).norm(), 1e-12 * a.sigma.norm());
}

TEST(SlidingEstimate, RejectsShortSeries) {
  EXPECT_THROW(sliding_estimate(Eigen::VectorXd::Zero(7), random_map(35, 8)), ArgumentError);
}

TEST(SelectBandwidth, ConstantSeriesPicksFirstIndex) {
  const Estimator est(small_full_shape_dictionary());
  EXPECT_EQ(est.select_bandwidth(Eigen::VectorXd::Constant(300, 0.7)), 1);
  EXPECT_EQ(est.select_bandwidth(Eigen::VectorXd::Zero(300)), 1);
}

TEST(SelectBandwidth, SinusoidAtTenthDesignPulsation) {
  const auto& dict = small_full_shape_dictionary();
  const Estimator est(dict);
  RandomStream rng(40, {1});
  Eigen::VectorXd s(1000);
  for (Eigen::Index t = 0; t < s.size(); ++t) s(t) = std::sin(dict.space().design.at(10) * t + 0.2) + 0.01 * rng.normal();
  const int j = est.select_bandwidth(s);
  EXPECT_TRUE(j == 10 || j == 11) << j;
}

TEST(SelectBandwidth, TopBandwidthCaseStopsAtTheMatchingDesignPoint) {
  const auto& dict = small_full_shape_dictionary();
  const Estimator est(dict);
  // 0.95 wbar is within 1e-4 of design point 20.
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto c = make_benchmark_case(dict.space().grid, 0.95, 0.0, 2000, 0, 500 + seed);
    const int j = est.select_bandwidth(c.noisy);
    EXPECT_TRUE(j == 19 || j == 20) << seed << " " << j;
  }
}

TEST(SelectBandwidth, ScaleInvariant) {
  const auto& dict = small_full_shape_dictionary();
  const Estimator est(dict);
  for (double w : {0.05, 0.3, 0.7}) {
    const auto c = make_benchmark_case(dict.space().grid, w, 0.03, 500, 0, 41);
    const int j = est.select_bandwidth(c.noisy);
    for (double alpha : {-3.0, 1e-3, 250.0}) {
      EXPECT_EQ(est.select_bandwidth(Eigen::VectorXd(alpha * c.noisy)), j) << w << " " << alpha;
    }
  }
}

TEST(EstimateNoise, NoiselessSeriesGetsTheZeroLevel) {
  const auto& dict = small_full_shape_dictionary();
  const Estimator est(dict);
  const auto c = make_benchmark_case(dict.space().grid, 0.2, 0.0, 1000, 0, 42);
  const auto sel = est.analyze(c.noisy);
  EXPECT_LE(sel.noise.sigma_star, 0.01);
  EXPECT_EQ(sel.noise.l_star, 1);
}

TEST(EstimateNoise, RecoversTheLevelWithinOneStep) {
  const auto& dict = small_full_shape_dictionary();
  const Estimator est(dict);
  const int target = dict.nearest_noise_index(0.05);
  int within = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const double w = 0.1 + 0.04 * static_cast<double>(seed);
    const auto c = make_benchmark_case(dict.space().grid, w, 0.05, 1000, 0, 100 + seed);
    const auto sel = est.analyze(c.noisy);
    within += std::abs(sel.noise.l_star - target) <= 1;
  }
  EXPECT_GE(within, 16);
}

TEST(EstimateNoise, PriorSetsThePilot) {
  const auto& dict = small_full_shape_dictionary();
  const Estimator est(dict);
  const auto c = make_benchmark_case(dict.space().grid, 0.3, 0.03, 600, 0, 43);
  EXPECT_EQ(est.estimate_noise(c.noisy, 5, 0.03).pilot, dict.nearest_noise_index(0.03));
  EXPECT_EQ(est.estimate_noise(c.noisy, 5).pilot, dict.nearest_noise_index(0.05));
}

TEST(EstDeriv, TimeScalingIsExact) {
  const auto& dict = small_full_shape_dictionary();
  const Estimator est(dict);
  const auto c = make_benchmark_case(dict.space().grid, 0.25, 0.02, 300, 1, 44);
  for (double tau : {0.01, 0.5, 7.0}) {
    const auto a = est.est_deriv(c.noisy, 1, tau);
    const auto b = est.est_deriv(c.noisy, 1, 1.0);
    EXPECT_LE((a.values - b.values / tau).cwiseAbs().maxCoeff(), 1e-12 * b.values.cwiseAbs().maxCoeff() / tau);
    EXPECT_LE((a.sigma - b.sigma / tau).cwiseAbs().maxCoeff(), 1e-12 * b.sigma.cwiseAbs().maxCoeff() / tau);
    EXPECT_EQ(a.j_star, b.j_star);
    EXPECT_EQ(a.l_star, b.l_star);
  }
}

TEST(EstDeriv, ZeroSeries) {
  const Estimator est(tiny_dictionary());
  for (int d = 0; d <= 1; ++d) {
    const auto out = est.est_deriv(Eigen::VectorXd::Zero(30), d, 1.0);
    EXPECT_TRUE(out.values.isZero());
    EXPECT_TRUE(out.sigma.isZero());
    EXPECT_EQ(out.values.size(), 30);
  }
}

TEST(EstDeriv, OutputShapeAndSigmaSign) {
  const auto& dict = small_full_shape_dictionary();
  const Estimator est(dict);
  const auto c = make_benchmark_case(dict.space().grid, 0.4, 0.05, 257, 1, 45);
  const auto out = est.est_deriv(c.noisy, 1, 1.0);
  EXPECT_EQ(out.values.size(), 257);
  EXPECT_EQ(out.sigma.size(), 257);
  EXPECT_TRUE((out.sigma.array() >= 0.0).all());
  EXPECT_TRUE(out.values.allFinite());
}

TEST(EstDeriv, Preconditions) {
  const Estimator est(tiny_dictionary());
  const Eigen::VectorXd s = Eigen::VectorXd::Ones(20);
  EXPECT_THROW(est.est_deriv(s, 2, 1.0), ArgumentError);
  EXPECT_THROW(est.est_deriv(s, -1, 1.0), ArgumentError);
  EXPECT_THROW(est.est_deriv(s, 1, 0.0), ArgumentError);
  EXPECT_THROW(est.est_deriv(Eigen::VectorXd::Ones(7), 1, 1.0), ArgumentError);
  EXPECT_THROW(Estimator(tiny_dictionary(), EstimatorOptions{0.0, 0.05, 1}), ArgumentError);
}

TEST(EstDeriv, ConcurrentCallsAgree) {
  const auto& dict = small_full_shape_dictionary();
  const Estimator est(dict);
  const auto c = make_benchmark_case(dict.space().grid, 0.5, 0.04, 400, 1, 46);
  const auto reference = est.est_deriv(c.noisy, 1, 1.0);
  std::vector<DerivativeEstimate> results(4);
  {
    std::vector<std::jthread> threads;
    for (std::size_t i = 0; i < results.size(); ++i) {
      threads.emplace_back([&, i] { results[i] = est.est_deriv(c.noisy, 1, 1.0); });
    }
  }
  for (const auto& r : results) {
    EXPECT_TRUE(r.values == reference.values);
    EXPECT_TRUE(r.sigma == reference.sigma);
  }
}

}  // namespace
}  // namespace derivkit
