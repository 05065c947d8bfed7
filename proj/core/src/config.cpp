#include "derivkit/config.hpp"

#include <algorithm>
#include <cmath>

#include "derivkit/errors.hpp"

namespace derivkit {

std::vector<double> logspace(double lo_exp, double hi_exp, int count) {
  if (count < 1) throw ArgumentError("logspace needs at least one point");
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double xi = count == 1 ? lo_exp : lo_exp + (hi_exp - lo_exp) * i / (count - 1);
    out[static_cast<std::size_t>(i)] = std::pow(10.0, xi);
  }
  return out;
}

std::vector<double> DictionaryConfig::default_noise_levels() {
  std::vector<double> levels(21);
  for (int i = 0; i < 21; ++i) levels[static_cast<std::size_t>(i)] = i / 100.0;
  return levels;
}

std::vector<double> DictionaryConfig::default_alphas() { return logspace(-4.0, 3.0, 20); }

DictionaryConfig DictionaryConfig::tiny() {
  DictionaryConfig config;
  config.n_r = 2;
  config.n_w = 8;
  config.d_max = 1;
  config.n_samples = 32;
  config.noise_levels = {0.0, 0.05};
  return config;
}

DictionaryConfig DictionaryConfig::mini() {
  DictionaryConfig config;
  config.n_samples = 200;
  return config;
}

void DictionaryConfig::validate() const {
  if (n_per_period < 2 || n_grid < 2) throw ArgumentError("invalid pulsation grid size");
  if (n_r < 2) throw ArgumentError("n_r must be >= 2");
  if (n_w < 2) throw ArgumentError("n_w must be >= 2");
  if (d_max < 0) throw ArgumentError("d_max must be >= 0");
  if (folds < 2) throw ArgumentError("folds must be >= 2");
  if (n_samples < folds) throw ArgumentError("n_samples must cover every fold");
  if (!(tol > 0.0 && tol < 1.0)) throw ArgumentError("tol must lie in (0, 1)");
  if (noise_levels.empty()) throw ArgumentError("noise table is empty");
  if (!std::is_sorted(noise_levels.begin(), noise_levels.end())) throw ArgumentError("noise table must be sorted");
  if (noise_levels.front() < 0.0) throw ArgumentError("noise levels must be >= 0");
  if (alphas.empty()) throw ArgumentError("alpha candidate list is empty");
  if (n_r > 65535 || q() > 65535 || d_max > 65535) throw ArgumentError("dictionary index exceeds 16 bits");
}

}  // namespace derivkit
