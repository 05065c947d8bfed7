#pragma once

#include <cstdint>
#include <vector>

namespace derivkit {

// Everything that shapes a trained dictionary.
struct DictionaryConfig {
  int n_per_period = 5;
  int n_grid = 200;
  int n_r = 21;
  int n_w = 50;
  int d_max = 4;
  int n_samples = 500;
  int folds = 2;
  double tol = 1e-3;
  // Noise standard deviations relative to unit-amplitude signals; q entries.
  std::vector<double> noise_levels = default_noise_levels();
  // Ridge regularization candidates.
  std::vector<double> alphas = default_alphas();

  int q() const { return static_cast<int>(noise_levels.size()); }

  // {0.00, 0.01, ..., 0.20}
  static std::vector<double> default_noise_levels();
  // 20 values log-spaced over [1e-4, 1e3].
  static std::vector<double> default_alphas();
  // Full shape with fewer training rows; quick to train, still usable by the
  // benchmark (`train --mini`).
  static DictionaryConfig mini();
  // Minimal shape for unit tests.
  static DictionaryConfig tiny();

  void validate() const;
};

std::vector<double> logspace(double lo_exp, double hi_exp, int count);

}  // namespace derivkit
