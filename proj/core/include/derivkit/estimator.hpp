#pragma once

#include <Eigen/Dense>
#include <optional>

#include "derivkit/dictionary.hpp"

namespace derivkit {

struct DerivativeEstimate {
  Eigen::VectorXd values;  // signal units / tau^d
  Eigen::VectorXd sigma;   // same units, >= 0
  int d = 0;
  double tau = 1.0;
  int j_star = 0;
  int l_star = 0;
  double sigma_star = 0.0;
};

// Number of (window start, offset) pairs that estimate instant m (1-based)
// when windows of length n_w slide over a series of length n.
Eigen::Index window_count(Eigen::Index n, Eigen::Index n_w, Eigen::Index m);

struct SlidingEstimate {
  Eigen::VectorXd values;
  Eigen::VectorXd sigma;
};

// Applies the map to every length-n_w slice of s and averages the overlapping
// outputs per instant; sigma is the population standard deviation of the
// same estimates (0 where only one window contributes).
SlidingEstimate sliding_estimate(const Eigen::VectorXd& s, const CompressedMap& map);

struct NoiseEstimate {
  double sigma_star = 0.0;
  int l_star = 1;
  int pilot = 1;
};

struct Selection {
  int j_star = 1;
  NoiseEstimate noise;
};

struct EstimatorOptions {
  // Relative residual drop below which more bandwidth stops paying off.
  double bandwidth_threshold = 0.1;
  // Pilot noise level when the caller gives none.
  double default_noise_level = 0.05;
  // Noise-estimation passes; each pass uses the previous l* as its pilot.
  int noise_passes = 1;
};

class Estimator {
 public:
  explicit Estimator(const ModelDictionary& dict, EstimatorOptions options = {});

  const ModelDictionary& dictionary() const { return *dict_; }
  const EstimatorOptions& options() const { return options_; }

  int select_bandwidth(const Eigen::VectorXd& s) const;
  NoiseEstimate estimate_noise(const Eigen::VectorXd& s, int j_star, std::optional<double> prior_noise = {}) const;
  Selection analyze(const Eigen::VectorXd& s, std::optional<double> prior_noise = {}) const;

  // Reconstruction with an already computed selection.
  DerivativeEstimate reconstruct(const Eigen::VectorXd& s, const Selection& selection, int d, double tau) const;

  DerivativeEstimate est_deriv(const Eigen::VectorXd& s, int d, double tau,
                               std::optional<double> noise_level = {}) const;

 private:
  void check_length(const Eigen::VectorXd& s) const;

  const ModelDictionary* dict_;
  EstimatorOptions options_;
};

}  // namespace derivkit
