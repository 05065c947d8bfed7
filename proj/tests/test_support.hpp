#pragma once

#include <Eigen/Dense>

#include "derivkit/dictionary.hpp"
#include "derivkit/rng.hpp"

namespace derivkit::testing {

// Trained once per process; n_r = 2, q = 2, d_max = 1, n_w = 8.
inline const ModelDictionary& tiny_dictionary() {
  static const ModelDictionary dict = train_dictionary(DictionaryConfig::tiny(), 5);
  return dict;
}

// Full grids and noise table with few training rows and d <= 1; enough for
// bandwidth and noise selection tests.
inline const ModelDictionary& small_full_shape_dictionary() {
  static const ModelDictionary dict = [] {
    DictionaryConfig config;
    config.d_max = 1;
    config.n_samples = 150;
    return train_dictionary(config, 8);
  }();
  return dict;
}

inline Eigen::MatrixXd random_matrix(RandomStream& rng, Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = rng.normal();
  }
  return m;
}

inline Eigen::VectorXd random_vector(RandomStream& rng, Eigen::Index n) { return random_matrix(rng, n, 1); }

inline double rel_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const double scale = b.norm();
  return scale == 0.0 ? a.norm() : (a - b).norm() / scale;
}

}  // namespace derivkit::testing
