#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "derivkit/basis.hpp"
#include "derivkit/config.hpp"

namespace derivkit {

// One (j, l) block of learning data. Row kappa of labels[d] is the exact
// d-th derivative of a random band-limited window normalized to unit
// infinity norm; features are labels[0] plus white noise of std nu_l.
struct TrainingSet {
  Eigen::MatrixXd features;
  std::vector<Eigen::MatrixXd> labels;
  int j = 0;
  int l = 0;
  std::uint64_t seed = 0;
};

// Grids shared by training and benchmark generation.
struct SignalSpace {
  PulsationGrid grid;
  DesignGrid design;
  std::vector<double> noise_levels;
  int n_w = 0;

  static SignalSpace from_config(const DictionaryConfig& config);
  double noise_level(int l) const { return noise_levels.at(static_cast<std::size_t>(l - 1)); }
};

// Random stream for row kappa of block (j, l): keys (j, l, kappa).
TrainingSet make_training_set(const SignalSpace& space, int j, int l, int d_max, int n_samples,
                              std::uint64_t seed);

// A validation series with its ground-truth derivatives.
struct BenchmarkCase {
  Eigen::VectorXd noisy;
  std::vector<Eigen::VectorXd> clean;  // clean[d], d = 0..d_max
  double bandwidth_fraction = 0.0;     // cut-off as a fraction of wbar
  double noise_level = 0.0;
  std::uint64_t seed = 0;
};

BenchmarkCase make_benchmark_case(const PulsationGrid& grid, double bandwidth_fraction, double noise_level,
                                  Eigen::Index n, int d_max, std::uint64_t seed);

}  // namespace derivkit
