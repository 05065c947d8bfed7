#include "derivkit/baselines.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "derivkit/errors.hpp"

namespace derivkit {

namespace {

// Chain states stay small; fixed capacity avoids heap traffic per step.
constexpr int kMaxChain = 12;
using ChainMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxChain, kMaxChain>;
using ChainVector = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxChain, 1>;

double factorial(int k) {
  double out = 1.0;
  for (int i = 2; i <= k; ++i) out *= i;
  return out;
}

double signum(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace

KalmanTrace kalman_filter(const Eigen::VectorXd& s, const KalmanParams& params, bool track_eigenvalues) {
  if (params.d_max < 1) throw ArgumentError("Kalman chain needs d_max >= 1");
  if (params.d_max + 1 > kMaxChain) throw ArgumentError("Kalman chain too long");
  if (!(params.nu_s > 0.0) || !(params.rho >= 1.0)) throw ArgumentError("Kalman needs nu_s > 0 and rho >= 1");
  const int dim = params.d_max + 1;
  const Eigen::Index n = s.size();

  ChainMatrix phi = ChainMatrix::Zero(dim, dim);
  for (int a = 0; a < dim; ++a) {
    for (int b = a; b < dim; ++b) phi(a, b) = 1.0 / factorial(b - a);
  }
  ChainMatrix q = ChainMatrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) q(i, i) = params.nu_s * std::pow(params.rho, i + 1);

  KalmanTrace trace;
  trace.derivatives.assign(static_cast<std::size_t>(dim), Eigen::VectorXd::Zero(n));
  trace.min_relative_eigenvalue = std::numeric_limits<double>::infinity();
  if (n == 0) return trace;

  ChainVector x = ChainVector::Zero(dim);
  x(0) = s(0);
  ChainMatrix p = ChainMatrix::Identity(dim, dim);
  for (Eigen::Index k = 0; k < n; ++k) {
    if (k > 0) {
      x = phi * x;
      p = phi * p * phi.transpose() + q;
    }
    // Joseph-form update with H = e_0, R = 1.
    const double innovation_var = p(0, 0) + 1.0;
    const ChainVector gain = p.col(0) / innovation_var;
    x += gain * (s(k) - x(0));
    ChainMatrix a = ChainMatrix::Identity(dim, dim);
    a.col(0) -= gain;
    p = a * p * a.transpose() + gain * gain.transpose();
    p = 0.5 * (p + p.transpose()).eval();
    if (track_eigenvalues) {
      const Eigen::SelfAdjointEigenSolver<ChainMatrix> eig(p, Eigen::EigenvaluesOnly);
      const double largest = eig.eigenvalues().cwiseAbs().maxCoeff();
      if (largest > 0.0) {
        trace.min_relative_eigenvalue = std::min(trace.min_relative_eigenvalue, eig.eigenvalues().minCoeff() / largest);
      }
    }
    for (int i = 0; i < dim; ++i) trace.derivatives[static_cast<std::size_t>(i)](k) = x(i);
  }
  return trace;
}

std::vector<Eigen::VectorXd> kalman_differentiate(const Eigen::VectorXd& s, int d_max, KalmanParams params) {
  params.d_max = d_max;
  return kalman_filter(s, params).derivatives;
}

Eigen::VectorXd spectral_differentiate(const Eigen::VectorXd& s, int d, const SpectralParams& params) {
  const Eigen::Index n = s.size();
  if (n < 2) throw ArgumentError("spectral differentiation needs at least 2 samples");
  if (d < 0) throw ArgumentError("derivation order must be >= 0");
  if (!(params.mu_f >= 0.0)) throw ArgumentError("mu_f must be >= 0");

  std::vector<std::complex<double>> time(static_cast<std::size_t>(n));
  for (Eigen::Index t = 0; t < n; ++t) time[static_cast<std::size_t>(t)] = s(t);
  std::vector<std::complex<double>> freq;
  Eigen::FFT<double> fft;
  fft.fwd(freq, time);

  // i^d cycles through 1, i, -1, -i.
  const std::complex<double> i_pow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index signed_k = (k <= n / 2) ? k : k - n;
    const double w = 2.0 * std::numbers::pi * static_cast<double>(signed_k) / static_cast<double>(n);
    const double gain = std::pow(w, d) * std::exp(-params.mu_f * w * w);
    freq[static_cast<std::size_t>(k)] *= i_pow[d % 4] * gain;
  }
  fft.inv(time, freq);

  Eigen::VectorXd out(n);
  for (Eigen::Index t = 0; t < n; ++t) out(t) = time[static_cast<std::size_t>(t)].real();
  return out;
}

bool savgol_valid(const SavGolParams& params, int d, Eigen::Index n) {
  return params.window >= 1 && params.window % 2 == 1 && params.order >= 0 && params.order < params.window &&
         d >= 0 && d <= params.order && params.window <= n;
}

Eigen::VectorXd savgol_weights(const SavGolParams& params, int d, int at) {
  if (params.window < 1 || params.window % 2 == 0 || params.order < 0 || params.order >= params.window) {
    throw ArgumentError("invalid Savitzky-Golay window/order");
  }
  if (d < 0 || d > params.order) throw ArgumentError("derivative order exceeds the polynomial order");
  if (at < 0 || at >= params.window) throw ArgumentError("evaluation position outside the window");

  const int half = (params.window - 1) / 2;
  const double scale = std::max(half, 1);
  const int terms = params.order + 1;
  Eigen::MatrixXd vander(params.window, terms);
  for (int i = 0; i < params.window; ++i) {
    const double u = (i - half) / scale;
    for (int k = 0; k < terms; ++k) vander(i, k) = std::pow(u, k);
  }

  // d-th derivative of sum_k c_k u^k at u0, converted back to sample units.
  const double u0 = (at - half) / scale;
  Eigen::VectorXd g = Eigen::VectorXd::Zero(terms);
  for (int k = d; k < terms; ++k) {
    g(k) = factorial(k) / factorial(k - d) * std::pow(u0, k - d) / std::pow(scale, d);
  }

  // c = R^{-1} Q^T y, so g^T c = (Q R^{-T} g)^T y.
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(vander);
  const Eigen::MatrixXd r = qr.matrixQR().topRows(terms).triangularView<Eigen::Upper>();
  const Eigen::VectorXd z = r.transpose().triangularView<Eigen::Lower>().solve(g);
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(params.window, terms);
  return q * z;
}

Eigen::VectorXd savgol_differentiate(const Eigen::VectorXd& s, int d, const SavGolParams& params) {
  const Eigen::Index n = s.size();
  if (!savgol_valid(params, d, n)) throw ArgumentError("invalid Savitzky-Golay settings for this series");
  const int window = params.window;
  const int half = (window - 1) / 2;
  Eigen::VectorXd out(n);

  const Eigen::VectorXd center = savgol_weights(params, d, half);
  for (Eigen::Index m = half; m < n - half; ++m) out(m) = center.dot(s.segment(m - half, window));

  for (int m = 0; m < half; ++m) {
    out(m) = savgol_weights(params, d, m).dot(s.head(window));
    const Eigen::Index tail = n - half + m;
    out(tail) = savgol_weights(params, d, half + 1 + m).dot(s.tail(window));
  }
  return out;
}

StdParams StdParams::levant(double L, int n_order) {
  // Gains of the non-recursive homogeneous differentiator, listed from the
  // discontinuous term (z_n) up to z_0.
  static const std::vector<std::vector<double>> kGains = {
      {1.1, 1.5},
      {1.1, 2.12, 2.0},
      {1.1, 3.06, 4.16, 3.0},
      {1.1, 4.57, 9.30, 10.03, 5.0},
      {1.1, 6.75, 20.26, 32.24, 23.72, 7.0},
  };
  if (n_order < 1 || n_order > 5) throw ArgumentError("standard gain table covers orders 1..5");
  const auto& row = kGains[static_cast<std::size_t>(n_order - 1)];
  StdParams params;
  params.L = L;
  params.n_order = n_order;
  params.lambdas.assign(row.rbegin(), row.rend());
  return params;
}

AostdTrace aostd_differentiate(const Eigen::VectorXd& s, const StdParams& params) {
  const int order = params.n_order;
  if (order < 1) throw ArgumentError("AO-STD order must be >= 1");
  if (static_cast<int>(params.lambdas.size()) != order + 1) throw ArgumentError("AO-STD needs n_order + 1 gains");
  if (!(params.L > 0.0) || !(params.h > 0.0)) throw ArgumentError("AO-STD needs L > 0 and h > 0");
  for (double lambda : params.lambdas) {
    if (!(lambda > 0.0)) throw ArgumentError("AO-STD gains must be positive");
  }

  constexpr double kTolerance = 1e-12;
  constexpr int kMaxIterations = 200;
  const Eigen::Index n = s.size();
  const int dim = order + 1;
  const double h = params.h;

  // z_{i,k+1} = z_{i,k} + h z_{i+1,k+1} - gain_i |sigma|^expo_i sign(sigma);
  // unrolled into z_0 this gives sigma + sign(sigma) * phi(|sigma|) = w with
  // phi(a) = sum_i coef_i a^expo_i and w the explicit part of z_0 - y.
  std::vector<double> gain(static_cast<std::size_t>(dim));
  std::vector<double> expo(static_cast<std::size_t>(dim));
  std::vector<double> coef(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) {
    const auto u = static_cast<std::size_t>(i);
    gain[u] = h * params.lambdas[u] * std::pow(params.L, static_cast<double>(i + 1) / (order + 1));
    expo[u] = static_cast<double>(order - i) / (order + 1);
    coef[u] = std::pow(h, i) * gain[u];
  }
  const double floor_coef = coef[static_cast<std::size_t>(order)];

  auto phi = [&](double a) {
    double total = floor_coef;
    for (int i = 0; i < order; ++i) total += coef[static_cast<std::size_t>(i)] * std::pow(a, expo[static_cast<std::size_t>(i)]);
    return total;
  };
  auto phi_slope = [&](double a) {
    double total = 0.0;
    for (int i = 0; i < order; ++i) {
      const auto u = static_cast<std::size_t>(i);
      total += coef[u] * expo[u] * std::pow(a, expo[u] - 1.0);
    }
    return total;
  };

  AostdTrace trace;
  trace.derivatives.assign(static_cast<std::size_t>(dim), Eigen::VectorXd::Zero(n));
  trace.residual = Eigen::VectorXd::Zero(n);
  if (n == 0) return trace;

  ChainVector z = ChainVector::Zero(dim);
  z(0) = s(0);
  trace.derivatives[0](0) = z(0);
  double prev_sigma = 0.0;

  for (Eigen::Index k = 1; k < n; ++k) {
    double explicit_part = 0.0;
    for (int i = dim - 1; i >= 0; --i) explicit_part = z(i) + h * explicit_part;
    const double w = explicit_part - s(k);
    const double target = std::abs(w);

    // Magnitude a = |sigma_{k+1}| and the selected element of sign(sigma).
    double a = 0.0;
    double sgn = 0.0;
    bool converged = true;
    if (target <= floor_coef) {
      // Inside the set-valued band: sigma = 0 and sign(sigma) = w / floor.
      sgn = w / floor_coef;
    } else {
      double lo = 0.0;
      double hi = target - floor_coef;
      a = 0.5 * hi;
      converged = false;
      const double f_tolerance = kTolerance * std::max(1.0, target);
      for (int iter = 0; iter < kMaxIterations; ++iter) {
        const double f = a + phi(a) - target;
        if (f > 0.0) {
          hi = a;
        } else {
          lo = a;
        }
        double next = a - f / (1.0 + phi_slope(a));
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        const double step = std::abs(next - a);
        a = next;
        // The a^(1/(n+1)) term makes the slope blow up near 0, so a small
        // step alone does not imply a small residual.
        if (step <= kTolerance * std::max(1.0, a) && std::abs(a + phi(a) - target) <= f_tolerance) {
          converged = true;
          break;
        }
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(hi, 1e-300)) {
          converged = std::abs(a + phi(a) - target) <= f_tolerance;
          break;
        }
      }
      sgn = signum(w);
    }
    if (!converged) {
      trace.flagged.push_back(k);
      a = std::abs(prev_sigma);
      sgn = signum(prev_sigma);
    }

    z(order) -= gain[static_cast<std::size_t>(order)] * sgn;
    for (int i = order - 1; i >= 0; --i) {
      const auto u = static_cast<std::size_t>(i);
      z(i) += h * z(i + 1) - gain[u] * std::pow(a, expo[u]) * sgn;
    }

    const double sigma = (target <= floor_coef) ? 0.0 : signum(w) * a;
    trace.residual(k) = std::abs((z(0) - s(k)) - sigma) / std::max(1.0, target);
    prev_sigma = sigma;
    for (int i = 0; i < dim; ++i) trace.derivatives[static_cast<std::size_t>(i)](k) = z(i);
  }
  return trace;
}

}  // namespace derivkit
