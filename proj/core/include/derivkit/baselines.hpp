#pragma once

#include <Eigen/Dense>
#include <string>
#include <variant>
#include <vector>

#include "derivkit/synth.hpp"

namespace derivkit {

// ---------------------------------------------------------------------------
// Kalman filter on the integrator chain x_i' = x_{i+1}, x_{D+1}' = 0,
// discretized exactly with h = 1. R = 1 and Q = nu_s diag(rho, ..., rho^{D+1}).

struct KalmanParams {
  double nu_s = 1.0;
  double rho = 1.0;
  int d_max = 4;
};

struct KalmanTrace {
  std::vector<Eigen::VectorXd> derivatives;  // derivatives[d][k]
  // Smallest eigenvalue of the symmetrized posterior covariance seen over the
  // run, relative to its largest absolute eigenvalue. Only filled when
  // tracking is requested; +inf otherwise.
  double min_relative_eigenvalue = 0.0;
};

KalmanTrace kalman_filter(const Eigen::VectorXd& s, const KalmanParams& params, bool track_eigenvalues = false);
std::vector<Eigen::VectorXd> kalman_differentiate(const Eigen::VectorXd& s, int d_max, KalmanParams params);

// ---------------------------------------------------------------------------
// Spectral differentiation: multiply bin k by (i w_k)^d exp(-mu_f w_k^2),
// w_k the signed bin pulsation in rad/sample. No windowing or detrending.

struct SpectralParams {
  double mu_f = 0.0;
};

Eigen::VectorXd spectral_differentiate(const Eigen::VectorXd& s, int d, const SpectralParams& params);

// ---------------------------------------------------------------------------
// Savitzky-Golay: least-squares polynomial of degree `order` on each centered
// window, differentiated at the center. Edge samples use the first/last full
// window evaluated at their offset.

struct SavGolParams {
  int window = 5;
  int order = 2;
};

bool savgol_valid(const SavGolParams& params, int d, Eigen::Index n);
// Weights w such that sum_i w_i s[start + i] is the d-th derivative of the
// fitted polynomial at position `at` within the window (0 .. window-1).
Eigen::VectorXd savgol_weights(const SavGolParams& params, int d, int at);
Eigen::VectorXd savgol_differentiate(const Eigen::VectorXd& s, int d, const SavGolParams& params);

// ---------------------------------------------------------------------------
// Implicit arbitrary-order sliding-mode differentiator (AO-STD).

struct StdParams {
  double L = 1.0;
  int n_order = 4;
  // lambdas[i] multiplies the correction of z_i, i = 0..n_order.
  std::vector<double> lambdas;
  double h = 1.0;

  // Standard gains for the non-recursive form (n = 4: z_0..z_4 take
  // 5, 10.03, 9.30, 4.57, 1.1). Orders 1..5.
  static StdParams levant(double L, int n_order);
};

struct AostdTrace {
  std::vector<Eigen::VectorXd> derivatives;  // derivatives[i][k] = z_{i,k}
  // Relative residual of the implicit relation at every step (0 at k = 0).
  Eigen::VectorXd residual;
  // Steps where the root solve did not converge; those reuse the previous
  // sigma.
  std::vector<Eigen::Index> flagged;
};

AostdTrace aostd_differentiate(const Eigen::VectorXd& s, const StdParams& params);

// ---------------------------------------------------------------------------
// Ground-truth-optimal tuning.

enum class Method { kalman, spectral, savgol, aostd };

std::string to_string(Method method);
Method method_from_string(const std::string& name);

using BaselineParams = std::variant<KalmanParams, SpectralParams, SavGolParams, StdParams>;

// Full tuning grid in grid order. Chain-based methods use d_max as their
// chain length.
std::vector<BaselineParams> tuning_grid(Method method, int d_max);

struct TunedResult {
  BaselineParams params;
  double error = 0.0;
  std::size_t grid_index = 0;
};

// Evaluates every grid setting on case_.noisy and keeps the one with the
// lowest error against case_.clean[d]; ties keep the earlier setting.
// Invalid or failed settings are skipped; NumericalError if none succeeds.
TunedResult best_tuned(Method method, const BenchmarkCase& case_, int d);
TunedResult best_tuned(const std::vector<BaselineParams>& grid, const BenchmarkCase& case_, int d);

// Same selection for several orders at once; chain-based methods run each
// setting once and score every order from the same trajectory.
std::vector<TunedResult> best_tuned_orders(const std::vector<BaselineParams>& grid, const BenchmarkCase& case_,
                                           const std::vector<int>& orders);

}  // namespace derivkit
