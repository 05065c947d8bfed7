#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "derivkit/bench.hpp"

namespace derivkit {

// JSON text with cases in index order and aggregates appended; no timings,
// so equal inputs give equal bytes.
std::string report_to_json(const ErrorReport& report);
// FormatError on malformed input or a schema version mismatch.
ErrorReport report_from_json(std::string_view text);

void save_report(const ErrorReport& report, const std::filesystem::path& path);
ErrorReport load_report(const std::filesystem::path& path);

// CSV tables.
std::string coverage_csv(const ErrorReport& report);
std::string percentiles_csv(const ErrorReport& report);
std::string noise_csv(const ErrorReport& report);

}  // namespace derivkit
