#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

namespace derivkit {

// Log-spaced pulsations (rad/sample) from 1e-3 * wbar up to wbar,
// where wbar = 2*pi / n_per_period is the highest pulsation that still has
// n_per_period samples per period.
struct PulsationGrid {
  std::vector<double> values;
  double max_pulsation = 0.0;
  int n_per_period = 0;

  std::size_t size() const { return values.size(); }
  // Number of grid pulsations <= cutoff.
  std::size_t count_up_to(double cutoff) const;
  // Grid member closest to the given pulsation.
  double snap(double pulsation) const;
};

PulsationGrid make_grid(int n_per_period, int n_grid);

// Cut-off pulsations indexing the model dictionary: a linear ramp from the
// smallest grid pulsation to wbar, each point snapped to the nearest grid
// member so that truncated column sets stay nested.
struct DesignGrid {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  // 1-based, matching the bandwidth index j used by the dictionary.
  double at(int j) const { return values.at(static_cast<std::size_t>(j - 1)); }
};

DesignGrid make_design_grid(const PulsationGrid& grid, int n_r);

// Columns [1, sin(W1 t), cos(W1 t), sin(W2 t), ...] for grid pulsations
// <= cutoff, differentiated `order` times, at t = 0, 1, ..., n-1.
struct BasisMatrix {
  Eigen::MatrixXd values;
  int order = 0;
  double cutoff = 0.0;
};

BasisMatrix eval_basis(const PulsationGrid& grid, Eigen::Index n, double cutoff, int order);

// Orthonormal basis of the truncated trigonometric spans for every cut-off up
// to max_cutoff, built once for a given series length.
//
// Columns are equalized to unit norm and orthogonalized in pulsation order
// with classical Gram-Schmidt plus re-orthogonalization; a column whose
// remaining component falls under the drop tolerance is numerically
// dependent and skipped. The spans are therefore nested by construction,
// which makes the residual curve monotone.
class TrigProjector {
 public:
  TrigProjector(const PulsationGrid& grid, Eigen::Index n, double max_cutoff);

  Eigen::Index length() const { return q_.rows(); }
  // Dimension of the numerically independent span for cutoff.
  Eigen::Index rank(double cutoff) const;

  Eigen::VectorXd project(const Eigen::VectorXd& s, double cutoff) const;
  // || (P(cutoff) - I) s ||_2 for each cut-off.
  std::vector<double> residual_curve(const Eigen::VectorXd& s, std::span<const double> cutoffs) const;

 private:
  std::vector<double> pulsations_;
  Eigen::MatrixXd q_;
  // prefix_rank_[k] = accepted columns after the constant and the first k
  // grid pulsations.
  std::vector<Eigen::Index> prefix_rank_;
};

Eigen::VectorXd project(const PulsationGrid& grid, const Eigen::VectorXd& s, double cutoff);

std::vector<double> residual_curve(const PulsationGrid& grid, const Eigen::VectorXd& s,
                                   const DesignGrid& design);

}  // namespace derivkit
