#include "derivkit/synth.hpp"

#include "derivkit/errors.hpp"
#include "derivkit/rng.hpp"

namespace derivkit {

namespace {

// Stream tags keep training rows and benchmark series on disjoint streams.
constexpr std::uint64_t kTrainingTag = 0x7472;
constexpr std::uint64_t kBenchmarkTag = 0x6265;

// Draws coefficients until the 0-derivative trajectory is nonzero, then
// writes every derivative normalized by its infinity norm.
void draw_trajectory(const std::vector<BasisMatrix>& bases, RandomStream& rng,
                     std::vector<Eigen::VectorXd>& out) {
  const Eigen::Index cols = bases.front().values.cols();
  Eigen::VectorXd coeffs(cols);
  Eigen::VectorXd base;
  double scale = 0.0;
  while (scale == 0.0) {
    for (Eigen::Index c = 0; c < cols; ++c) coeffs(c) = rng.normal();
    base = bases.front().values * coeffs;
    scale = base.lpNorm<Eigen::Infinity>();
  }
  out.resize(bases.size());
  out[0] = base.array() / scale;
  for (std::size_t d = 1; d < bases.size(); ++d) {
    out[d] = (bases[d].values * coeffs).array() / scale;
  }
}

std::vector<BasisMatrix> derivative_bases(const PulsationGrid& grid, Eigen::Index n, double cutoff, int d_max) {
  std::vector<BasisMatrix> bases;
  bases.reserve(static_cast<std::size_t>(d_max) + 1);
  for (int d = 0; d <= d_max; ++d) bases.push_back(eval_basis(grid, n, cutoff, d));
  return bases;
}

}  // namespace

SignalSpace SignalSpace::from_config(const DictionaryConfig& config) {
  SignalSpace space;
  space.grid = make_grid(config.n_per_period, config.n_grid);
  space.design = make_design_grid(space.grid, config.n_r);
  space.noise_levels = config.noise_levels;
  space.n_w = config.n_w;
  return space;
}

TrainingSet make_training_set(const SignalSpace& space, int j, int l, int d_max, int n_samples,
                              std::uint64_t seed) {
  if (j < 1 || j > static_cast<int>(space.design.size())) throw ArgumentError("bandwidth index out of range");
  if (l < 1 || l > static_cast<int>(space.noise_levels.size())) throw ArgumentError("noise index out of range");
  if (d_max < 0) throw ArgumentError("d_max must be >= 0");
  if (n_samples < 1) throw ArgumentError("n_samples must be >= 1");

  const Eigen::Index n_w = space.n_w;
  const double nu = space.noise_level(l);
  const auto bases = derivative_bases(space.grid, n_w, space.design.at(j), d_max);

  TrainingSet set;
  set.j = j;
  set.l = l;
  set.seed = seed;
  set.features.resize(n_samples, n_w);
  set.labels.assign(static_cast<std::size_t>(d_max) + 1, Eigen::MatrixXd(n_samples, n_w));

  std::vector<Eigen::VectorXd> rows;
  for (int kappa = 0; kappa < n_samples; ++kappa) {
    RandomStream rng(seed, {kTrainingTag, static_cast<std::uint64_t>(j), static_cast<std::uint64_t>(l),
                            static_cast<std::uint64_t>(kappa)});
    draw_trajectory(bases, rng, rows);
    for (int d = 0; d <= d_max; ++d) set.labels[static_cast<std::size_t>(d)].row(kappa) = rows[static_cast<std::size_t>(d)];
    for (Eigen::Index t = 0; t < n_w; ++t) set.features(kappa, t) = rows[0](t) + nu * rng.normal();
  }
  return set;
}

BenchmarkCase make_benchmark_case(const PulsationGrid& grid, double bandwidth_fraction, double noise_level,
                                  Eigen::Index n, int d_max, std::uint64_t seed) {
  if (!(bandwidth_fraction > 0.0 && bandwidth_fraction <= 1.0)) throw ArgumentError("bandwidth fraction must lie in (0, 1]");
  if (noise_level < 0.0) throw ArgumentError("noise level must be >= 0");
  if (n < 1) throw ArgumentError("series length must be >= 1");
  if (d_max < 0) throw ArgumentError("d_max must be >= 0");

  const double cutoff = grid.snap(bandwidth_fraction * grid.max_pulsation);
  const auto bases = derivative_bases(grid, n, cutoff, d_max);

  BenchmarkCase out;
  out.bandwidth_fraction = bandwidth_fraction;
  out.noise_level = noise_level;
  out.seed = seed;
  RandomStream rng(seed, {kBenchmarkTag});
  draw_trajectory(bases, rng, out.clean);
  out.noisy.resize(n);
  for (Eigen::Index t = 0; t < n; ++t) out.noisy(t) = out.clean[0](t) + noise_level * rng.normal();
  return out;
}

}  // namespace derivkit
