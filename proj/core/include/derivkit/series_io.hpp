#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <iosfwd>

namespace derivkit {

// Series CSV: one header line, then one numeric value per row. Blank lines are
// skipped. FormatError on anything else.
Eigen::VectorXd read_series_csv(std::istream& in);
Eigen::VectorXd read_series_csv(const std::filesystem::path& path);

// Columns index (0-based), value, sigma.
void write_estimate_csv(std::ostream& out, const Eigen::VectorXd& values, const Eigen::VectorXd& sigma);
void write_estimate_csv(const std::filesystem::path& path, const Eigen::VectorXd& values,
                        const Eigen::VectorXd& sigma);

}  // namespace derivkit
