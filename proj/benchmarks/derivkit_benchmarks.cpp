// Microbenchmarks. Set DERIVKIT_DICT to a trained dictionary file to time the
// estimator against it; otherwise a small dictionary is trained at startup.

#include <benchmark/benchmark.h>

#include <cstdlib>
#include <memory>

#include "derivkit/baselines.hpp"
#include "derivkit/dictionary.hpp"
#include "derivkit/estimator.hpp"
#include "derivkit/rng.hpp"

namespace {

using namespace derivkit;

const ModelDictionary& shared_dictionary() {
  static const std::unique_ptr<ModelDictionary> dict = [] {
    if (const char* path = std::getenv("DERIVKIT_DICT")) return std::make_unique<ModelDictionary>(ModelDictionary::load(path));
    DictionaryConfig config = DictionaryConfig::tiny();
    config.n_r = 4;
    config.d_max = 4;
    return std::make_unique<ModelDictionary>(train_dictionary(config, 1));
  }();
  return *dict;
}

Eigen::VectorXd test_series(Eigen::Index n) {
  const auto& dict = shared_dictionary();
  return make_benchmark_case(dict.space().grid, 0.3, 0.05, n, 0, 11).noisy;
}

void BM_EstDeriv(benchmark::State& state) {
  const Estimator estimator(shared_dictionary());
  const Eigen::VectorXd s = test_series(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(estimator.est_deriv(s, 1, 1.0).values.data());
}
BENCHMARK(BM_EstDeriv)->Arg(100)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_SlidingEstimate(benchmark::State& state) {
  const auto& dict = shared_dictionary();
  const CompressedMap& map = dict.at({dict.config().n_r, 1, 1});
  const Eigen::VectorXd s = test_series(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sliding_estimate(s, map).values.data());
}
BENCHMARK(BM_SlidingEstimate)->Arg(100)->Arg(2000)->Unit(benchmark::kMicrosecond);

void BM_ResidualCurve(benchmark::State& state) {
  const auto& space = shared_dictionary().space();
  const Eigen::VectorXd s = test_series(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(residual_curve(space.grid, s, space.design).data());
}
BENCHMARK(BM_ResidualCurve)->Arg(100)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_RidgeCrossValidation(benchmark::State& state) {
  const DictionaryConfig config;
  const auto space = SignalSpace::from_config(config);
  const auto data = make_training_set(space, 10, 5, 1, static_cast<int>(state.range(0)), 3);
  for (auto _ : state) {
    const RidgeCrossValidator cv(data.features, config.alphas, config.folds);
    benchmark::DoNotOptimize(cv.fit(data.labels[1]).coef.data());
  }
}
BENCHMARK(BM_RidgeCrossValidation)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_Kalman(benchmark::State& state) {
  const Eigen::VectorXd s = test_series(2000);
  for (auto _ : state) benchmark::DoNotOptimize(kalman_filter(s, {1e-3, 10.0, 4}).derivatives[1].data());
}
BENCHMARK(BM_Kalman)->Unit(benchmark::kMillisecond);

void BM_Aostd(benchmark::State& state) {
  const Eigen::VectorXd s = test_series(2000);
  const StdParams params = StdParams::levant(0.1, 4);
  for (auto _ : state) benchmark::DoNotOptimize(aostd_differentiate(s, params).derivatives[1].data());
}
BENCHMARK(BM_Aostd)->Unit(benchmark::kMillisecond);

void BM_SavGol(benchmark::State& state) {
  const Eigen::VectorXd s = test_series(2000);
  const SavGolParams params{static_cast<int>(state.range(0)), 4};
  for (auto _ : state) benchmark::DoNotOptimize(savgol_differentiate(s, 2, params).data());
}
BENCHMARK(BM_SavGol)->Arg(21)->Arg(201)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
