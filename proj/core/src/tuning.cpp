#include "derivkit/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "derivkit/config.hpp"
#include "derivkit/errors.hpp"
#include "derivkit/metrics.hpp"

namespace derivkit {

std::string to_string(Method method) {
  switch (method) {
    case Method::kalman:
      return "kalman";
    case Method::spectral:
      return "spectral";
    case Method::savgol:
      return "savgol";
    case Method::aostd:
      return "aostd";
  }
  throw ArgumentError("unknown method");
}

Method method_from_string(const std::string& name) {
  if (name == "kalman") return Method::kalman;
  if (name == "spectral") return Method::spectral;
  if (name == "savgol") return Method::savgol;
  if (name == "aostd") return Method::aostd;
  throw ArgumentError("unknown baseline method: " + name);
}

std::vector<BaselineParams> tuning_grid(Method method, int d_max) {
  std::vector<BaselineParams> grid;
  switch (method) {
    case Method::kalman:
      for (double nu_s : logspace(-21.0, 21.0, 25)) {
        for (double rho : logspace(0.0, 8.0, 10)) grid.emplace_back(KalmanParams{nu_s, rho, d_max});
      }
      break;
    case Method::spectral:
      for (double mu : logspace(-6.0, 0.0, 50)) grid.emplace_back(SpectralParams{mu});
      break;
    case Method::savgol:
      for (int window : {1, 5, 11, 21, 41, 51, 101, 201, 401, 501}) {
        for (int order : {2, 3, 4, 5}) grid.emplace_back(SavGolParams{window, order});
      }
      break;
    case Method::aostd:
      for (double L : logspace(-6.0, 6.0, 100)) grid.emplace_back(StdParams::levant(L, d_max));
      break;
  }
  return grid;
}

namespace {

// Derivative series for each requested order, or nothing when the setting
// does not apply to an order.
std::vector<std::optional<Eigen::VectorXd>> run_setting(const BaselineParams& params, const Eigen::VectorXd& s,
                                                       const std::vector<int>& orders) {
  std::vector<std::optional<Eigen::VectorXd>> out(orders.size());
  const int top = *std::max_element(orders.begin(), orders.end());
  if (const auto* kp = std::get_if<KalmanParams>(&params)) {
    if (top > kp->d_max) return out;
    const auto chain = kalman_filter(s, *kp).derivatives;
    for (std::size_t i = 0; i < orders.size(); ++i) out[i] = chain[static_cast<std::size_t>(orders[i])];
  } else if (const auto* sp = std::get_if<SpectralParams>(&params)) {
    for (std::size_t i = 0; i < orders.size(); ++i) out[i] = spectral_differentiate(s, orders[i], *sp);
  } else if (const auto* gp = std::get_if<SavGolParams>(&params)) {
    for (std::size_t i = 0; i < orders.size(); ++i) {
      if (savgol_valid(*gp, orders[i], s.size())) out[i] = savgol_differentiate(s, orders[i], *gp);
    }
  } else if (const auto* ap = std::get_if<StdParams>(&params)) {
    if (top > ap->n_order) return out;
    const auto trace = aostd_differentiate(s, *ap);
    for (std::size_t i = 0; i < orders.size(); ++i) out[i] = trace.derivatives[static_cast<std::size_t>(orders[i])];
  }
  return out;
}

}  // namespace

std::vector<TunedResult> best_tuned_orders(const std::vector<BaselineParams>& grid, const BenchmarkCase& case_,
                                           const std::vector<int>& orders) {
  if (grid.empty()) throw ArgumentError("empty tuning grid");
  if (orders.empty()) return {};
  for (int d : orders) {
    if (d < 0 || d >= static_cast<int>(case_.clean.size())) throw ArgumentError("no ground truth for requested order");
  }

  std::vector<std::optional<TunedResult>> best(orders.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    std::vector<std::optional<Eigen::VectorXd>> estimates;
    try {
      estimates = run_setting(grid[g], case_.noisy, orders);
    } catch (const std::exception&) {
      continue;
    }
    for (std::size_t i = 0; i < orders.size(); ++i) {
      if (!estimates[i]) continue;
      const double err = eval_error(*estimates[i], case_.clean[static_cast<std::size_t>(orders[i])]);
      if (!std::isfinite(err)) continue;
      if (!best[i] || err < best[i]->error) best[i] = TunedResult{grid[g], err, g};
    }
  }

  std::vector<TunedResult> out;
  out.reserve(orders.size());
  for (std::size_t i = 0; i < orders.size(); ++i) {
    if (!best[i]) throw NumericalError("no tuning setting succeeded for d = " + std::to_string(orders[i]));
    out.push_back(*best[i]);
  }
  return out;
}

TunedResult best_tuned(const std::vector<BaselineParams>& grid, const BenchmarkCase& case_, int d) {
  return best_tuned_orders(grid, case_, {d}).front();
}

TunedResult best_tuned(Method method, const BenchmarkCase& case_, int d) {
  const int d_max = static_cast<int>(case_.clean.size()) - 1;
  return best_tuned(tuning_grid(method, std::max(d_max, 1)), case_, d);
}

}  // namespace derivkit
