#include "derivkit/estimator.hpp"

#include <algorithm>
#include <cmath>

#include "derivkit/basis.hpp"
#include "derivkit/errors.hpp"

namespace derivkit {

Eigen::Index window_count(Eigen::Index n, Eigen::Index n_w, Eigen::Index m) {
  if (n_w < 1 || n < n_w || m < 1 || m > n) return 0;
  return std::min({m, n_w, n - n_w + 1, n - m + 1});
}

SlidingEstimate sliding_estimate(const Eigen::VectorXd& s, const CompressedMap& map) {
  const Eigen::Index n = s.size();
  const Eigen::Index n_w = map.window();
  if (n < n_w) throw ArgumentError("series is shorter than the model window");

  const Eigen::Index starts = n - n_w + 1;
  Eigen::MatrixXd windows(n_w, starts);
  for (Eigen::Index i = 0; i < starts; ++i) windows.col(i) = s.segment(i, n_w);
  const Eigen::MatrixXd outputs = map.apply_columns(windows);

  // Window estimate (i, k) lands on instant i + k. Reductions run in
  // increasing i so results do not depend on how outputs were computed.
  SlidingEstimate out;
  out.values = Eigen::VectorXd::Zero(n);
  out.sigma = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < starts; ++i) {
    out.values.segment(i, n_w) += outputs.col(i);
    counts.segment(i, n_w).array() += 1.0;
  }
  out.values.array() /= counts.array();
  for (Eigen::Index i = 0; i < starts; ++i) {
    out.sigma.segment(i, n_w).array() += (outputs.col(i) - out.values.segment(i, n_w)).array().square();
  }
  out.sigma = (out.sigma.array() / counts.array()).sqrt();
  return out;
}

Estimator::Estimator(const ModelDictionary& dict, EstimatorOptions options) : dict_(&dict), options_(options) {
  if (!(options_.bandwidth_threshold > 0.0)) throw ArgumentError("bandwidth threshold must be > 0");
  if (options_.noise_passes < 1) throw ArgumentError("at least one noise-estimation pass is required");
}

void Estimator::check_length(const Eigen::VectorXd& s) const {
  if (s.size() < dict_->window()) {
    throw ArgumentError("series length " + std::to_string(s.size()) + " is shorter than the model window " +
                        std::to_string(dict_->window()));
  }
}

int Estimator::select_bandwidth(const Eigen::VectorXd& s) const {
  check_length(s);
  const SignalSpace& space = dict_->space();
  const TrigProjector projector(space.grid, s.size(), space.design.values.back());
  const std::vector<double> e = projector.residual_curve(s, space.design.values);

  const double last = e.back();
  const double span = e.front() - last;
  if (!(span > 0.0)) return 1;
  const double limit = options_.bandwidth_threshold * span;
  for (std::size_t j = 0; j < e.size(); ++j) {
    if (e[j] - last <= limit) return static_cast<int>(j) + 1;
  }
  return static_cast<int>(e.size());
}

NoiseEstimate Estimator::estimate_noise(const Eigen::VectorXd& s, int j_star,
                                        std::optional<double> prior_noise) const {
  check_length(s);
  NoiseEstimate out;
  out.pilot = dict_->nearest_noise_index(prior_noise.value_or(options_.default_noise_level));
  int pilot = out.pilot;
  for (int pass = 0; pass < options_.noise_passes; ++pass) {
    const SlidingEstimate filtered = sliding_estimate(s, dict_->at({j_star, pilot, 0}));
    const Eigen::ArrayXd residual = (s - filtered.values).array();
    out.sigma_star = std::sqrt((residual - residual.mean()).square().mean());
    out.l_star = dict_->nearest_noise_index(out.sigma_star);
    pilot = out.l_star;
  }
  return out;
}

Selection Estimator::analyze(const Eigen::VectorXd& s, std::optional<double> prior_noise) const {
  Selection selection;
  selection.j_star = select_bandwidth(s);
  selection.noise = estimate_noise(s, selection.j_star, prior_noise);
  return selection;
}

DerivativeEstimate Estimator::reconstruct(const Eigen::VectorXd& s, const Selection& selection, int d,
                                          double tau) const {
  check_length(s);
  if (d < 0 || d > dict_->config().d_max) {
    throw ArgumentError("derivation order " + std::to_string(d) + " is outside the trained range 0.." +
                        std::to_string(dict_->config().d_max));
  }
  if (!(tau > 0.0)) throw ArgumentError("sampling period must be > 0");

  const SlidingEstimate raw = sliding_estimate(s, dict_->at({selection.j_star, selection.noise.l_star, d}));
  const double scale = std::pow(tau, -d);
  DerivativeEstimate out;
  out.values = raw.values * scale;
  out.sigma = raw.sigma * scale;
  out.d = d;
  out.tau = tau;
  out.j_star = selection.j_star;
  out.l_star = selection.noise.l_star;
  out.sigma_star = selection.noise.sigma_star;
  return out;
}

DerivativeEstimate Estimator::est_deriv(const Eigen::VectorXd& s, int d, double tau,
                                        std::optional<double> noise_level) const {
  if (d < 0 || d > dict_->config().d_max) {
    throw ArgumentError("derivation order " + std::to_string(d) + " is outside the trained range 0.." +
                        std::to_string(dict_->config().d_max));
  }
  if (!(tau > 0.0)) throw ArgumentError("sampling period must be > 0");
  return reconstruct(s, analyze(s, noise_level), d, tau);
}

}  // namespace derivkit
