#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "derivkit/basis.hpp"
#include "derivkit/estimator.hpp"
#include "derivkit/synth.hpp"

namespace derivkit {

enum class Scale { full, mini };

std::string to_string(Scale scale);
Scale scale_from_string(const std::string& name);

inline constexpr Eigen::Index kBenchmarkLength = 2000;
inline constexpr int kBenchmarkMaxOrder = 4;
inline constexpr std::array<double, 4> kCoverageMultipliers = {0.5, 1.0, 2.0, 3.0};

// Bandwidths (fractions of wbar) and noise levels of the validation grid.
const std::vector<double>& benchmark_bandwidths();
const std::vector<double>& benchmark_noise_levels();

// Where a case sits in the 12 x 8 grid; index = bandwidth_index * 8 + noise_index.
struct CaseSlot {
  std::size_t index = 0;
  std::size_t bandwidth_index = 0;
  std::size_t noise_index = 0;
};

// Full: all 96 pairs. Mini: the 24 pairs with (bandwidth_index + noise_index)
// divisible by 4, which keeps every noise level and both bandwidth ends.
std::vector<CaseSlot> benchmark_slots(Scale scale);
std::uint64_t case_seed(std::uint64_t seed, std::size_t index);

std::vector<BenchmarkCase> build_benchmark(const PulsationGrid& grid, std::uint64_t seed, Scale scale);

// hits[k] counts instants with |est - truth| <= kCoverageMultipliers[k] * sigma.
std::array<std::uint64_t, 4> coverage_hits(const Eigen::VectorXd& estimate, const Eigen::VectorXd& sigma,
                                           const Eigen::VectorXd& truth);

// ---------------------------------------------------------------------------
// Report model.

using ParamList = std::vector<std::pair<std::string, double>>;

struct MethodEntry {
  std::string method;
  int d = 0;
  std::optional<double> error;  // empty when the method failed on this case
  ParamList params;
  std::string failure;
};

struct CaseEntry {
  std::size_t index = 0;
  double bandwidth_fraction = 0.0;
  double noise_level = 0.0;
  std::uint64_t seed = 0;
  std::vector<MethodEntry> entries;
  // Proposed method only: coverage hits per d = 1..4 and instants per d.
  std::vector<std::array<std::uint64_t, 4>> coverage;
  std::uint64_t instants = 0;
};

struct PercentileRow {
  std::string method;
  int d = 0;
  std::size_t count = 0;
  std::array<double, 4> values{};  // at kReportPercentiles
};

inline constexpr std::array<double, 4> kReportPercentiles = {50.0, 75.0, 90.0, 95.0};

struct CoverageRow {
  int d = 0;
  std::uint64_t instants = 0;
  std::array<double, 4> ratios{};  // at kCoverageMultipliers
};

struct NoiseRow {
  std::string method;
  int d = 0;
  double noise_level = 0.0;
  std::size_t count = 0;
  double median = 0.0;
};

struct ErrorReport {
  static constexpr int kSchemaVersion = 1;

  std::string scale;
  std::uint64_t seed = 0;
  std::uint64_t dictionary_seed = 0;
  double bandwidth_threshold = 0.0;
  std::vector<std::string> methods;
  std::vector<CaseEntry> cases;

  std::vector<PercentileRow> percentiles() const;
  std::vector<CoverageRow> coverage() const;
  std::vector<NoiseRow> error_vs_noise() const;
  // Errors of one method and order over all cases where it succeeded.
  std::vector<double> errors(const std::string& method, int d) const;

  // Checks e >= 0, ratios in [0, 1] and nondecreasing in the threshold.
  // Throws NumericalError on violation.
  void validate() const;
};

struct BenchOptions {
  Scale scale = Scale::mini;
  std::uint64_t seed = 0;
  std::vector<std::string> methods = {"proposed", "kalman", "spectral", "savgol", "aostd"};
  EstimatorOptions estimator;
};

// Canonical method names; throws ArgumentError on unknown or repeated names.
std::vector<std::string> parse_methods(const std::string& comma_list);

ErrorReport run_bench(const ModelDictionary& dict, const BenchOptions& options);

}  // namespace derivkit
