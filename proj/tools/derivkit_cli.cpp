// derivkit command-line tool: train / estimate / bench / report.
//
// Exit codes: 0 ok, 2 bad arguments, 3 I/O or file format error,
// 4 numerical failure.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "derivkit/bench.hpp"
#include "derivkit/dictionary.hpp"
#include "derivkit/errors.hpp"
#include "derivkit/estimator.hpp"
#include "derivkit/report.hpp"
#include "derivkit/series_io.hpp"

namespace {

using namespace derivkit;

constexpr int kExitOk = 0;
constexpr int kExitArgument = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumerical = 4;

struct TrainArgs {
  std::string out;
  std::optional<int> n_samples;
  std::optional<double> tol;
  std::uint64_t seed = 1;
  bool mini = false;
};

struct EstimateArgs {
  std::string dict;
  std::string in;
  std::string out;
  int d = 1;
  double tau = 1.0;
  std::optional<double> noise_level;
  double threshold = EstimatorOptions{}.bandwidth_threshold;
};

struct BenchArgs {
  std::string dict;
  std::string scale = "mini";
  std::string methods = "proposed,kalman,spectral,savgol,aostd";
  std::uint64_t seed = 0;
  std::string out;
  double threshold = EstimatorOptions{}.bandwidth_threshold;
};

struct ReportArgs {
  std::string in;
  std::string table = "coverage";
  std::string csv;
  std::string json;
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw IoError("failed writing " + path);
}

int run_train(const TrainArgs& args) {
  DictionaryConfig config = args.mini ? DictionaryConfig::mini() : DictionaryConfig{};
  if (args.n_samples) config.n_samples = *args.n_samples;
  if (args.tol) config.tol = *args.tol;
  config.validate();
  TrainingSummary summary;
  const ModelDictionary dict = train_dictionary(config, args.seed, &summary);
  dict.save(args.out);
  std::size_t total_rank = 0;
  for (const DictKey& key : dict.keys()) total_rank += static_cast<std::size_t>(dict.at(key).rank());
  std::cerr << "trained " << dict.size() << " maps, mean rank "
            << static_cast<double>(total_rank) / static_cast<double>(dict.size()) << ", wrote " << args.out << "\n";
  return kExitOk;
}

int run_estimate(const EstimateArgs& args) {
  if (!(args.tau > 0.0)) throw ArgumentError("--tau must be > 0");
  const ModelDictionary dict = ModelDictionary::load(args.dict);
  const Eigen::VectorXd s = read_series_csv(args.in);
  EstimatorOptions options;
  options.bandwidth_threshold = args.threshold;
  const Estimator estimator(dict, options);
  const DerivativeEstimate est = estimator.est_deriv(s, args.d, args.tau, args.noise_level);
  if (!est.values.allFinite() || !est.sigma.allFinite()) throw NumericalError("estimate is not finite");
  write_estimate_csv(args.out, est.values, est.sigma);
  std::cerr << "j* = " << est.j_star << ", l* = " << est.l_star << ", sigma* = " << est.sigma_star << "\n";
  return kExitOk;
}

int run_bench_command(const BenchArgs& args) {
  BenchOptions options;
  options.scale = scale_from_string(args.scale);
  options.seed = args.seed;
  options.methods = parse_methods(args.methods);
  options.estimator.bandwidth_threshold = args.threshold;
  const ModelDictionary dict = ModelDictionary::load(args.dict);
  const ErrorReport report = run_bench(dict, options);
  save_report(report, args.out);
  for (const PercentileRow& row : report.percentiles()) {
    std::cerr << row.method << " d=" << row.d << " median e = " << row.values[0] << " (" << row.count << " cases)\n";
  }
  return kExitOk;
}

int run_report(const ReportArgs& args) {
  const ErrorReport report = load_report(args.in);
  std::string text;
  if (args.table == "coverage") {
    text = coverage_csv(report);
  } else if (args.table == "percentiles") {
    text = percentiles_csv(report);
  } else if (args.table == "noise") {
    text = noise_csv(report);
  } else {
    throw ArgumentError("unknown table '" + args.table + "'");
  }
  if (args.csv.empty()) {
    std::cout << text;
  } else {
    write_text(args.csv, text);
  }
  if (!args.json.empty()) write_text(args.json, report_to_json(report));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Derivative reconstruction of noisy time series with confidence intervals"};
  app.require_subcommand(1);

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Train and save a model dictionary");
  train_cmd->add_option("--out", train.out, "Output dictionary file")->required();
  train_cmd->add_option("--n-samples", train.n_samples, "Training rows per (bandwidth, noise) block")
      ->check(CLI::PositiveNumber);
  train_cmd->add_option("--tol", train.tol, "Relative Frobenius compression tolerance");
  train_cmd->add_option("--seed", train.seed, "Training seed")->capture_default_str();
  train_cmd->add_flag("--mini", train.mini, "Reduced training set (fewer rows per block)");

  EstimateArgs estimate;
  auto* estimate_cmd = app.add_subcommand("estimate", "Estimate a derivative with its standard deviation");
  estimate_cmd->add_option("--dict", estimate.dict, "Dictionary file")->required();
  estimate_cmd->add_option("--in", estimate.in, "Input series CSV (header, one value per row)")->required();
  estimate_cmd->add_option("--d", estimate.d, "Derivative order")->required();
  estimate_cmd->add_option("--tau", estimate.tau, "Sampling period")->required();
  estimate_cmd->add_option("--noise-level", estimate.noise_level, "Known noise level (skips the pilot guess)");
  estimate_cmd->add_option("--threshold", estimate.threshold, "Bandwidth selection threshold")
      ->capture_default_str();
  estimate_cmd->add_option("--out", estimate.out, "Output CSV (index,value,sigma)")->required();

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run the validation benchmark");
  bench_cmd->add_option("--dict", bench.dict, "Dictionary file")->required();
  bench_cmd->add_option("--scale", bench.scale, "full or mini")->capture_default_str();
  bench_cmd->add_option("--methods", bench.methods, "Comma-separated methods")->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed, "Benchmark seed")->capture_default_str();
  bench_cmd->add_option("--threshold", bench.threshold, "Bandwidth selection threshold")->capture_default_str();
  bench_cmd->add_option("--out", bench.out, "Output JSON report")->required();

  ReportArgs report;
  auto* report_cmd = app.add_subcommand("report", "Extract CSV tables from a JSON report");
  report_cmd->add_option("--in", report.in, "JSON report")->required();
  report_cmd->add_option("--table", report.table, "coverage, percentiles or noise")->capture_default_str();
  report_cmd->add_option("--csv", report.csv, "Output CSV (stdout if omitted)");
  report_cmd->add_option("--json", report.json, "Re-emit the parsed report as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitArgument;
  }

  try {
    if (*train_cmd) return run_train(train);
    if (*estimate_cmd) return run_estimate(estimate);
    if (*bench_cmd) return run_bench_command(bench);
    if (*report_cmd) return run_report(report);
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitArgument;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitArgument;
}
