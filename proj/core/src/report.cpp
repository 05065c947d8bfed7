#include "derivkit/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "derivkit/errors.hpp"

namespace derivkit {

namespace {

using Json = nlohmann::ordered_json;

Json number_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, x);
  return {buffer, result.ptr};
}

Json entry_to_json(const MethodEntry& e) {
  Json params = Json::object();
  for (const auto& [name, value] : e.params) params[name] = value;
  Json out;
  out["method"] = e.method;
  out["d"] = e.d;
  out["error"] = e.error ? Json(*e.error) : Json(nullptr);
  out["params"] = std::move(params);
  if (!e.failure.empty()) out["failure"] = e.failure;
  return out;
}

MethodEntry entry_from_json(const Json& j) {
  MethodEntry e;
  e.method = j.at("method").get<std::string>();
  e.d = j.at("d").get<int>();
  if (!j.at("error").is_null()) e.error = j.at("error").get<double>();
  for (const auto& [name, value] : j.at("params").items()) e.params.emplace_back(name, value.get<double>());
  if (j.contains("failure")) e.failure = j.at("failure").get<std::string>();
  return e;
}

Json aggregates_to_json(const ErrorReport& report) {
  Json percentiles = Json::array();
  for (const PercentileRow& row : report.percentiles()) {
    Json values = Json::array();
    for (double v : row.values) values.push_back(number_or_null(v));
    percentiles.push_back({{"method", row.method}, {"d", row.d}, {"count", row.count}, {"values", values}});
  }
  Json coverage = Json::array();
  for (const CoverageRow& row : report.coverage()) {
    coverage.push_back({{"d", row.d}, {"instants", row.instants}, {"ratios", row.ratios}});
  }
  Json noise = Json::array();
  for (const NoiseRow& row : report.error_vs_noise()) {
    noise.push_back({{"method", row.method},
                     {"d", row.d},
                     {"noise_level", row.noise_level},
                     {"count", row.count},
                     {"median", row.median}});
  }
  Json out;
  out["percentile_levels"] = kReportPercentiles;
  out["percentiles"] = std::move(percentiles);
  out["coverage_multipliers"] = kCoverageMultipliers;
  out["coverage"] = std::move(coverage);
  out["error_vs_noise"] = std::move(noise);
  return out;
}

}  // namespace

std::string report_to_json(const ErrorReport& report) {
  report.validate();
  Json root;
  root["schema_version"] = ErrorReport::kSchemaVersion;
  root["scale"] = report.scale;
  root["seed"] = report.seed;
  root["dictionary_seed"] = report.dictionary_seed;
  root["bandwidth_threshold"] = report.bandwidth_threshold;
  root["methods"] = report.methods;
  Json cases = Json::array();
  for (const CaseEntry& c : report.cases) {
    Json jc;
    jc["index"] = c.index;
    jc["bandwidth_fraction"] = c.bandwidth_fraction;
    jc["noise_level"] = c.noise_level;
    jc["seed"] = c.seed;
    jc["instants"] = c.instants;
    jc["coverage"] = c.coverage;
    Json results = Json::array();
    for (const MethodEntry& e : c.entries) results.push_back(entry_to_json(e));
    jc["results"] = std::move(results);
    cases.push_back(std::move(jc));
  }
  root["cases"] = std::move(cases);
  root["aggregates"] = aggregates_to_json(report);
  return root.dump(1) + "\n";
}

ErrorReport report_from_json(std::string_view text) {
  ErrorReport report;
  try {
    const Json root = Json::parse(text);
    const int version = root.at("schema_version").get<int>();
    if (version != ErrorReport::kSchemaVersion) {
      throw VersionMismatchError("report schema version " + std::to_string(version) + " is not supported");
    }
    report.scale = root.at("scale").get<std::string>();
    report.seed = root.at("seed").get<std::uint64_t>();
    report.dictionary_seed = root.at("dictionary_seed").get<std::uint64_t>();
    report.bandwidth_threshold = root.at("bandwidth_threshold").get<double>();
    report.methods = root.at("methods").get<std::vector<std::string>>();
    for (const Json& jc : root.at("cases")) {
      CaseEntry c;
      c.index = jc.at("index").get<std::size_t>();
      c.bandwidth_fraction = jc.at("bandwidth_fraction").get<double>();
      c.noise_level = jc.at("noise_level").get<double>();
      c.seed = jc.at("seed").get<std::uint64_t>();
      c.instants = jc.at("instants").get<std::uint64_t>();
      c.coverage = jc.at("coverage").get<std::vector<std::array<std::uint64_t, 4>>>();
      for (const Json& je : jc.at("results")) c.entries.push_back(entry_from_json(je));
      report.cases.push_back(std::move(c));
    }
  } catch (const Json::exception& ex) {
    throw FormatError(std::string("malformed report: ") + ex.what());
  }
  try {
    report.validate();
  } catch (const NumericalError& ex) {
    throw FormatError(std::string("inconsistent report: ") + ex.what());
  }
  return report;
}

void save_report(const ErrorReport& report, const std::filesystem::path& path) {
  const std::string text = report_to_json(report);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

ErrorReport load_report(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return report_from_json(buffer.str());
}

std::string coverage_csv(const ErrorReport& report) {
  std::ostringstream out;
  out << "d,instants,half_sigma,sigma,two_sigma,three_sigma\n";
  for (const CoverageRow& row : report.coverage()) {
    out << row.d << ',' << row.instants;
    for (double r : row.ratios) out << ',' << format_number(r);
    out << '\n';
  }
  return out.str();
}

std::string percentiles_csv(const ErrorReport& report) {
  std::ostringstream out;
  out << "method,d,count,p50,p75,p90,p95\n";
  for (const PercentileRow& row : report.percentiles()) {
    out << row.method << ',' << row.d << ',' << row.count;
    for (double v : row.values) out << ',' << format_number(v);
    out << '\n';
  }
  return out.str();
}

std::string noise_csv(const ErrorReport& report) {
  std::ostringstream out;
  out << "method,d,noise_level,count,median_error\n";
  for (const NoiseRow& row : report.error_vs_noise()) {
    out << row.method << ',' << row.d << ',' << format_number(row.noise_level) << ',' << row.count << ','
        << format_number(row.median) << '\n';
  }
  return out.str();
}

}  // namespace derivkit
