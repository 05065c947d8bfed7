#include "derivkit/series_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "derivkit/errors.hpp"

namespace derivkit {

namespace {

std::string_view trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r");
  return text.substr(first, last - first + 1);
}

}  // namespace

Eigen::VectorXd read_series_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("series CSV is empty; expected a header line");
  std::vector<double> values;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view field = trim(line);
    if (field.empty()) continue;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
      throw FormatError("line " + std::to_string(line_no) + ": expected one number, got '" + std::string(field) + "'");
    }
    if (!std::isfinite(value)) throw FormatError("line " + std::to_string(line_no) + ": value is not finite");
    values.push_back(value);
  }
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

Eigen::VectorXd read_series_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_series_csv(in);
}

void write_estimate_csv(std::ostream& out, const Eigen::VectorXd& values, const Eigen::VectorXd& sigma) {
  if (values.size() != sigma.size()) throw ArgumentError("values and sigma lengths differ");
  out << "index,value,sigma\n";
  char a[32];
  char b[32];
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const auto ra = std::to_chars(a, a + sizeof a, values(i));
    const auto rb = std::to_chars(b, b + sizeof b, sigma(i));
    out << i << ',' << std::string_view(a, ra.ptr) << ',' << std::string_view(b, rb.ptr) << '\n';
  }
}

void write_estimate_csv(const std::filesystem::path& path, const Eigen::VectorXd& values,
                        const Eigen::VectorXd& sigma) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_estimate_csv(out, values, sigma);
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace derivkit
