#include "derivkit/bench.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <variant>

#include "derivkit/baselines.hpp"
#include "derivkit/errors.hpp"
#include "derivkit/metrics.hpp"
#include "derivkit/parallel.hpp"
#include "derivkit/rng.hpp"

namespace derivkit {

namespace {

constexpr std::uint64_t kCaseSeedTag = 0x6361;
constexpr char kProposed[] = "proposed";

ParamList describe(const BaselineParams& params) {
  return std::visit(
      [](const auto& p) -> ParamList {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, KalmanParams>) {
          return {{"nu_s", p.nu_s}, {"rho", p.rho}};
        } else if constexpr (std::is_same_v<T, SpectralParams>) {
          return {{"mu_f", p.mu_f}};
        } else if constexpr (std::is_same_v<T, SavGolParams>) {
          return {{"window", p.window}, {"order", p.order}};
        } else {
          return {{"L", p.L}, {"n_order", p.n_order}};
        }
      },
      params);
}

std::optional<double> finite_or_empty(double e) {
  if (std::isfinite(e)) return e;
  return std::nullopt;
}

void run_proposed(const Estimator& estimator, const BenchmarkCase& bench_case, CaseEntry& entry) {
  entry.coverage.assign(kBenchmarkMaxOrder, {});
  entry.instants = static_cast<std::uint64_t>(bench_case.noisy.size());
  Selection selection;
  try {
    selection = estimator.analyze(bench_case.noisy);
  } catch (const std::exception& ex) {
    for (int d = 1; d <= kBenchmarkMaxOrder; ++d) entry.entries.push_back({kProposed, d, std::nullopt, {}, ex.what()});
    entry.instants = 0;
    return;
  }
  const ParamList params = {{"j_star", selection.j_star},
                            {"l_star", selection.noise.l_star},
                            {"sigma_star", selection.noise.sigma_star}};
  for (int d = 1; d <= kBenchmarkMaxOrder; ++d) {
    MethodEntry result{kProposed, d, std::nullopt, params, {}};
    try {
      const auto est = estimator.reconstruct(bench_case.noisy, selection, d, 1.0);
      const auto& truth = bench_case.clean[static_cast<std::size_t>(d)];
      result.error = finite_or_empty(eval_error(est.values, truth));
      if (!result.error) result.failure = "non-finite estimate";
      entry.coverage[static_cast<std::size_t>(d - 1)] = coverage_hits(est.values, est.sigma, truth);
    } catch (const std::exception& ex) {
      result.failure = ex.what();
    }
    entry.entries.push_back(std::move(result));
  }
}

void run_baseline(Method method, const BenchmarkCase& bench_case, CaseEntry& entry) {
  std::vector<int> orders;
  for (int d = 1; d <= kBenchmarkMaxOrder; ++d) orders.push_back(d);
  const std::string name = to_string(method);
  try {
    const auto tuned = best_tuned_orders(tuning_grid(method, kBenchmarkMaxOrder), bench_case, orders);
    for (std::size_t i = 0; i < orders.size(); ++i) {
      ParamList params = describe(tuned[i].params);
      params.emplace_back("grid_index", static_cast<double>(tuned[i].grid_index));
      entry.entries.push_back({name, orders[i], tuned[i].error, std::move(params), {}});
    }
  } catch (const std::exception& ex) {
    for (int d : orders) entry.entries.push_back({name, d, std::nullopt, {}, ex.what()});
  }
}

}  // namespace

std::string to_string(Scale scale) { return scale == Scale::full ? "full" : "mini"; }

Scale scale_from_string(const std::string& name) {
  if (name == "full") return Scale::full;
  if (name == "mini") return Scale::mini;
  throw ArgumentError("scale must be 'full' or 'mini', got '" + name + "'");
}

const std::vector<double>& benchmark_bandwidths() {
  static const std::vector<double> values = {0.01, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95};
  return values;
}

const std::vector<double>& benchmark_noise_levels() {
  static const std::vector<double> values = {0.01, 0.02, 0.03, 0.04, 0.05, 0.06, 0.07, 0.1};
  return values;
}

std::vector<CaseSlot> benchmark_slots(Scale scale) {
  const std::size_t nb = benchmark_bandwidths().size();
  const std::size_t nn = benchmark_noise_levels().size();
  std::vector<CaseSlot> slots;
  for (std::size_t b = 0; b < nb; ++b) {
    for (std::size_t l = 0; l < nn; ++l) {
      if (scale == Scale::mini && (b + l) % 4 != 0) continue;
      slots.push_back({b * nn + l, b, l});
    }
  }
  return slots;
}

std::uint64_t case_seed(std::uint64_t seed, std::size_t index) {
  return RandomStream(seed, {kCaseSeedTag, index}).next_u64();
}

std::vector<BenchmarkCase> build_benchmark(const PulsationGrid& grid, std::uint64_t seed, Scale scale) {
  std::vector<BenchmarkCase> cases;
  for (const CaseSlot& slot : benchmark_slots(scale)) {
    cases.push_back(make_benchmark_case(grid, benchmark_bandwidths()[slot.bandwidth_index],
                                        benchmark_noise_levels()[slot.noise_index], kBenchmarkLength,
                                        kBenchmarkMaxOrder, case_seed(seed, slot.index)));
  }
  return cases;
}

std::array<std::uint64_t, 4> coverage_hits(const Eigen::VectorXd& estimate, const Eigen::VectorXd& sigma,
                                           const Eigen::VectorXd& truth) {
  if (estimate.size() != truth.size() || sigma.size() != truth.size()) {
    throw ArgumentError("coverage inputs must have equal lengths");
  }
  std::array<std::uint64_t, 4> hits{};
  for (Eigen::Index m = 0; m < truth.size(); ++m) {
    const double err = std::abs(estimate(m) - truth(m));
    for (std::size_t k = 0; k < hits.size(); ++k) hits[k] += err <= kCoverageMultipliers[k] * sigma(m);
  }
  return hits;
}

std::vector<double> ErrorReport::errors(const std::string& method, int d) const {
  std::vector<double> out;
  for (const CaseEntry& c : cases) {
    for (const MethodEntry& e : c.entries) {
      if (e.method == method && e.d == d && e.error) out.push_back(*e.error);
    }
  }
  return out;
}

std::vector<PercentileRow> ErrorReport::percentiles() const {
  std::vector<PercentileRow> rows;
  for (const std::string& method : methods) {
    for (int d = 1; d <= kBenchmarkMaxOrder; ++d) {
      PercentileRow row{method, d, 0, {}};
      const auto values = errors(method, d);
      row.count = values.size();
      for (std::size_t k = 0; k < kReportPercentiles.size(); ++k) {
        row.values[k] = values.empty() ? std::nan("") : percentile(values, kReportPercentiles[k]);
      }
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<CoverageRow> ErrorReport::coverage() const {
  std::vector<CoverageRow> rows;
  if (std::find(methods.begin(), methods.end(), kProposed) == methods.end()) return rows;
  for (int d = 1; d <= kBenchmarkMaxOrder; ++d) {
    CoverageRow row{d, 0, {}};
    std::array<std::uint64_t, 4> hits{};
    for (const CaseEntry& c : cases) {
      if (c.coverage.size() < static_cast<std::size_t>(d)) continue;
      row.instants += c.instants;
      for (std::size_t k = 0; k < hits.size(); ++k) hits[k] += c.coverage[static_cast<std::size_t>(d - 1)][k];
    }
    for (std::size_t k = 0; k < hits.size(); ++k) {
      row.ratios[k] = row.instants == 0 ? 0.0 : static_cast<double>(hits[k]) / static_cast<double>(row.instants);
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<NoiseRow> ErrorReport::error_vs_noise() const {
  std::vector<NoiseRow> rows;
  for (const std::string& method : methods) {
    for (int d = 1; d <= kBenchmarkMaxOrder; ++d) {
      std::map<double, std::vector<double>> by_noise;
      for (const CaseEntry& c : cases) {
        for (const MethodEntry& e : c.entries) {
          if (e.method == method && e.d == d && e.error) by_noise[c.noise_level].push_back(*e.error);
        }
      }
      for (const auto& [nu, values] : by_noise) rows.push_back({method, d, nu, values.size(), percentile(values, 50.0)});
    }
  }
  return rows;
}

void ErrorReport::validate() const {
  for (const CaseEntry& c : cases) {
    for (const MethodEntry& e : c.entries) {
      if (e.error && !(*e.error >= 0.0)) throw NumericalError("negative or NaN error in case " + std::to_string(c.index));
    }
    for (const auto& hits : c.coverage) {
      for (std::size_t k = 0; k < hits.size(); ++k) {
        if (hits[k] > c.instants || (k > 0 && hits[k] < hits[k - 1])) {
          throw NumericalError("inconsistent coverage counts in case " + std::to_string(c.index));
        }
      }
    }
  }
  for (const CoverageRow& row : coverage()) {
    for (std::size_t k = 0; k < row.ratios.size(); ++k) {
      if (row.ratios[k] < 0.0 || row.ratios[k] > 1.0 || (k > 0 && row.ratios[k] < row.ratios[k - 1])) {
        throw NumericalError("coverage ratios out of range or not monotone for d = " + std::to_string(row.d));
      }
    }
  }
}

std::vector<std::string> parse_methods(const std::string& comma_list) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  std::stringstream stream(comma_list);
  std::string name;
  while (std::getline(stream, name, ',')) {
    if (name.empty()) throw ArgumentError("empty method name in '" + comma_list + "'");
    if (name != kProposed) method_from_string(name);
    if (!seen.insert(name).second) throw ArgumentError("method listed twice: " + name);
    out.push_back(name);
  }
  if (out.empty()) throw ArgumentError("no methods given");
  return out;
}

ErrorReport run_bench(const ModelDictionary& dict, const BenchOptions& options) {
  if (dict.config().d_max < kBenchmarkMaxOrder) {
    throw ArgumentError("benchmark needs a dictionary trained up to d = " + std::to_string(kBenchmarkMaxOrder));
  }
  for (const std::string& m : options.methods) {
    if (m != kProposed) method_from_string(m);
  }

  ErrorReport report;
  report.scale = to_string(options.scale);
  report.seed = options.seed;
  report.dictionary_seed = dict.seed();
  report.bandwidth_threshold = options.estimator.bandwidth_threshold;
  report.methods = options.methods;

  const auto slots = benchmark_slots(options.scale);
  report.cases.resize(slots.size());
  const Estimator estimator(dict, options.estimator);

  parallel_for(slots.size(), [&](std::size_t i) {
    const CaseSlot& slot = slots[i];
    CaseEntry& entry = report.cases[i];
    entry.index = slot.index;
    entry.bandwidth_fraction = benchmark_bandwidths()[slot.bandwidth_index];
    entry.noise_level = benchmark_noise_levels()[slot.noise_index];
    entry.seed = case_seed(options.seed, slot.index);
    const BenchmarkCase bench_case = make_benchmark_case(dict.space().grid, entry.bandwidth_fraction,
                                                         entry.noise_level, kBenchmarkLength, kBenchmarkMaxOrder,
                                                         entry.seed);
    for (const std::string& m : options.methods) {
      if (m == kProposed) {
        run_proposed(estimator, bench_case, entry);
      } else {
        run_baseline(method_from_string(m), bench_case, entry);
      }
    }
  });

  report.validate();
  return report;
}

}  // namespace derivkit
