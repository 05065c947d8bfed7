#include "derivkit/basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "derivkit/errors.hpp"

namespace derivkit {

namespace {

// Relative slack when comparing a pulsation to a cut-off; cut-offs are grid
// members, so this only absorbs representation noise from callers.
constexpr double kCutoffSlack = 1e-12;
// Relative norm under which an equalized column counts as dependent.
constexpr double kDropTolerance = 1e-9;

bool within_cutoff(double pulsation, double cutoff) {
  return pulsation <= cutoff * (1.0 + kCutoffSlack);
}

}  // namespace

std::size_t PulsationGrid::count_up_to(double cutoff) const {
  return static_cast<std::size_t>(
      std::count_if(values.begin(), values.end(), [&](double w) { return within_cutoff(w, cutoff); }));
}

double PulsationGrid::snap(double pulsation) const {
  if (values.empty()) throw ArgumentError("snap on an empty pulsation grid");
  auto it = std::lower_bound(values.begin(), values.end(), pulsation);
  if (it == values.end()) return values.back();
  if (it == values.begin()) return values.front();
  const double above = *it;
  const double below = *(it - 1);
  return (pulsation - below <= above - pulsation) ? below : above;
}

PulsationGrid make_grid(int n_per_period, int n_grid) {
  if (n_per_period < 2) throw ArgumentError("n_per_period must be >= 2");
  if (n_grid < 2) throw ArgumentError("n_grid must be >= 2");
  PulsationGrid grid;
  grid.n_per_period = n_per_period;
  grid.max_pulsation = 2.0 * std::numbers::pi / n_per_period;
  grid.values.resize(static_cast<std::size_t>(n_grid));
  for (int i = 0; i < n_grid; ++i) {
    const double xi = -3.0 + 3.0 * i / (n_grid - 1);
    grid.values[static_cast<std::size_t>(i)] = std::pow(10.0, xi) * grid.max_pulsation;
  }
  grid.values.back() = grid.max_pulsation;
  return grid;
}

DesignGrid make_design_grid(const PulsationGrid& grid, int n_r) {
  if (n_r < 2) throw ArgumentError("n_r must be >= 2");
  const double lo = grid.values.front();
  const double hi = grid.max_pulsation;
  DesignGrid design;
  design.values.resize(static_cast<std::size_t>(n_r));
  for (int j = 0; j < n_r; ++j) {
    const double raw = lo + (hi - lo) * j / (n_r - 1);
    design.values[static_cast<std::size_t>(j)] = grid.snap(raw);
  }
  return design;
}

BasisMatrix eval_basis(const PulsationGrid& grid, Eigen::Index n, double cutoff, int order) {
  if (n < 1) throw ArgumentError("basis length must be >= 1");
  if (order < 0) throw ArgumentError("derivation order must be >= 0");
  if (!within_cutoff(cutoff, grid.max_pulsation)) throw ArgumentError("cutoff exceeds the maximum pulsation");

  const std::size_t n_pulsations = grid.count_up_to(cutoff);
  BasisMatrix basis;
  basis.order = order;
  basis.cutoff = cutoff;
  basis.values.resize(n, static_cast<Eigen::Index>(2 * n_pulsations + 1));
  basis.values.col(0).setConstant(order == 0 ? 1.0 : 0.0);

  // d-th derivative of sin(wt) is w^d sin(wt + d pi/2); the phase shift is a
  // quarter-turn rotation of the (sin, cos) pair, applied exactly.
  const int quarter_turns = order % 4;
  for (std::size_t k = 0; k < n_pulsations; ++k) {
    const double w = grid.values[k];
    const double gain = std::pow(w, order);
    const Eigen::Index sin_col = static_cast<Eigen::Index>(2 * k + 1);
    for (Eigen::Index t = 0; t < n; ++t) {
      const double phase = w * static_cast<double>(t);
      const double sn = std::sin(phase);
      const double cs = std::cos(phase);
      double rotated_sin = 0.0;
      double rotated_cos = 0.0;
      switch (quarter_turns) {
        case 0: rotated_sin = sn; rotated_cos = cs; break;
        case 1: rotated_sin = cs; rotated_cos = -sn; break;
        case 2: rotated_sin = -sn; rotated_cos = -cs; break;
        default: rotated_sin = -cs; rotated_cos = sn; break;
      }
      basis.values(t, sin_col) = gain * rotated_sin;
      basis.values(t, sin_col + 1) = gain * rotated_cos;
    }
  }
  return basis;
}

TrigProjector::TrigProjector(const PulsationGrid& grid, Eigen::Index n, double max_cutoff) {
  const BasisMatrix basis = eval_basis(grid, n, max_cutoff, 0);
  const std::size_t n_pulsations = grid.count_up_to(max_cutoff);
  pulsations_.assign(grid.values.begin(), grid.values.begin() + static_cast<std::ptrdiff_t>(n_pulsations));

  const Eigen::Index max_rank = std::min<Eigen::Index>(n, basis.values.cols());
  q_.resize(n, max_rank);
  Eigen::Index rank = 0;

  auto absorb = [&](Eigen::Index col) {
    if (rank == max_rank) return;
    Eigen::VectorXd v = basis.values.col(col);
    const double norm0 = v.norm();
    if (norm0 == 0.0) return;
    v /= norm0;
    double norm = 1.0;
    for (int pass = 0; pass < 3 && rank > 0; ++pass) {
      const Eigen::VectorXd h = q_.leftCols(rank).transpose() * v;
      v.noalias() -= q_.leftCols(rank) * h;
      const double next = v.norm();
      const bool settled = next > 0.5 * norm;
      norm = next;
      if (settled && pass >= 1) break;
    }
    if (norm <= kDropTolerance) return;
    q_.col(rank++) = v / norm;
  };

  prefix_rank_.reserve(n_pulsations + 1);
  absorb(0);
  prefix_rank_.push_back(rank);
  for (std::size_t k = 0; k < n_pulsations; ++k) {
    const Eigen::Index sin_col = static_cast<Eigen::Index>(2 * k + 1);
    absorb(sin_col);
    absorb(sin_col + 1);
    prefix_rank_.push_back(rank);
  }
  q_.conservativeResize(n, rank);
}

Eigen::Index TrigProjector::rank(double cutoff) const {
  const auto included = static_cast<std::size_t>(std::count_if(
      pulsations_.begin(), pulsations_.end(), [&](double w) { return within_cutoff(w, cutoff); }));
  return prefix_rank_[included];
}

Eigen::VectorXd TrigProjector::project(const Eigen::VectorXd& s, double cutoff) const {
  if (s.size() != q_.rows()) throw ArgumentError("series length does not match the projector");
  const Eigen::Index k = rank(cutoff);
  const Eigen::VectorXd coeffs = q_.leftCols(k).transpose() * s;
  return q_.leftCols(k) * coeffs;
}

std::vector<double> TrigProjector::residual_curve(const Eigen::VectorXd& s,
                                                  std::span<const double> cutoffs) const {
  if (s.size() != q_.rows()) throw ArgumentError("series length does not match the projector");
  const Eigen::VectorXd coeffs = q_.transpose() * s;
  std::vector<double> curve;
  curve.reserve(cutoffs.size());
  for (double cutoff : cutoffs) {
    const Eigen::Index k = rank(cutoff);
    curve.push_back((s - q_.leftCols(k) * coeffs.head(k)).norm());
  }
  return curve;
}

Eigen::VectorXd project(const PulsationGrid& grid, const Eigen::VectorXd& s, double cutoff) {
  if (s.size() < 1) throw ArgumentError("cannot project an empty series");
  return TrigProjector(grid, s.size(), cutoff).project(s, cutoff);
}

std::vector<double> residual_curve(const PulsationGrid& grid, const Eigen::VectorXd& s,
                                   const DesignGrid& design) {
  if (s.size() < 1) throw ArgumentError("cannot compute residuals of an empty series");
  const TrigProjector projector(grid, s.size(), design.values.back());
  return projector.residual_curve(s, design.values);
}

}  // namespace derivkit
