#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

namespace derivkit {

// Percentile with linear interpolation between order statistics
// (type 7: position (n - 1) * q / 100). q in [0, 100].
double percentile(std::span<const double> values, double q);

// Relative reconstruction error:
//   percentile(|est - truth|, 95) / percentile(|truth|, 50).
// A non-finite estimate scores +inf. Throws NumericalError when the
// denominator is zero.
double eval_error(const Eigen::VectorXd& estimate, const Eigen::VectorXd& truth);

}  // namespace derivkit
