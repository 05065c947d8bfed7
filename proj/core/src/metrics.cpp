#include "derivkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "derivkit/errors.hpp"

namespace derivkit {

double percentile(std::span<const double> values, double q) {
  if (values.empty()) throw ArgumentError("percentile of an empty sample");
  if (!(q >= 0.0 && q <= 100.0)) throw ArgumentError("percentile level must lie in [0, 100]");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double pos = (static_cast<double>(sorted.size()) - 1.0) * q / 100.0;
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double eval_error(const Eigen::VectorXd& estimate, const Eigen::VectorXd& truth) {
  if (estimate.size() != truth.size()) throw ArgumentError("estimate and truth lengths differ");
  if (truth.size() < 1) throw ArgumentError("cannot score empty series");
  if (!estimate.allFinite()) return std::numeric_limits<double>::infinity();
  const Eigen::VectorXd abs_err = (estimate - truth).cwiseAbs();
  const Eigen::VectorXd abs_truth = truth.cwiseAbs();
  const double denom = percentile({abs_truth.data(), static_cast<std::size_t>(abs_truth.size())}, 50.0);
  if (!(denom > 0.0)) throw NumericalError("median of |truth| is zero; relative error undefined");
  return percentile({abs_err.data(), static_cast<std::size_t>(abs_err.size())}, 95.0) / denom;
}

}  // namespace derivkit
