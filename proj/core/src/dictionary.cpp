#include "derivkit/dictionary.hpp"

#include <cmath>
#include <string>

#include "derivkit/errors.hpp"
#include "derivkit/parallel.hpp"

namespace derivkit {

namespace {
constexpr double kRankFloor = 1e-12;

std::string describe(DictKey key) {
  return "(j=" + std::to_string(key.j) + ", l=" + std::to_string(key.l) + ", d=" + std::to_string(key.d) + ")";
}
}  // namespace

Eigen::VectorXd CompressedMap::apply(const Eigen::VectorXd& y) const {
  if (y.size() != window()) throw ArgumentError("window length does not match the map");
  const Eigen::VectorXd inner = s.cwiseProduct(u.transpose() * y);
  return v * inner;
}

Eigen::MatrixXd CompressedMap::apply_columns(const Eigen::MatrixXd& windows) const {
  if (windows.rows() != window()) throw ArgumentError("window length does not match the map");
  const Eigen::MatrixXd inner = s.asDiagonal() * (u.transpose() * windows);
  return v * inner;
}

Eigen::MatrixXd CompressedMap::dense() const { return u * s.asDiagonal() * v.transpose(); }

CompressedMap compress(const Eigen::MatrixXd& a, double tol) {
  if (!(tol > 0.0 && tol < 1.0)) throw ArgumentError("compression tolerance must lie in (0, 1)");
  if (a.rows() != a.cols()) throw ArgumentError("compress expects a square map");

  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double total = sv.squaredNorm();

  Eigen::Index keep = 0;
  if (total > 0.0) {
    const double floor = kRankFloor * sv(0);
    Eigen::Index usable = 0;
    while (usable < sv.size() && sv(usable) > floor) ++usable;
    // tail[r] = energy discarded when keeping r values
    const double budget = tol * tol * total;
    double tail = sv.squaredNorm();
    for (keep = 0; keep < usable; ++keep) {
      if (tail <= budget) break;
      tail -= sv(keep) * sv(keep);
    }
  }

  CompressedMap out;
  out.u = svd.matrixU().leftCols(keep);
  out.s = sv.head(keep);
  out.v = svd.matrixV().leftCols(keep);
  out.rel_err = total > 0.0 ? (out.dense() - a).norm() / std::sqrt(total) : 0.0;
  return out;
}

ModelDictionary::ModelDictionary(DictionaryConfig config, std::uint64_t seed, std::vector<CompressedMap> entries)
    : config_(std::move(config)), seed_(seed), entries_(std::move(entries)) {
  config_.validate();
  space_ = SignalSpace::from_config(config_);
  const std::size_t expected =
      static_cast<std::size_t>(config_.n_r) * static_cast<std::size_t>(config_.q()) *
      static_cast<std::size_t>(config_.d_max + 1);
  if (entries_.size() != expected) throw ArgumentError("dictionary is incomplete");
  for (const CompressedMap& entry : entries_) {
    if (entry.window() != config_.n_w || entry.v.rows() != config_.n_w) {
      throw ArgumentError("dictionary entry has the wrong window length");
    }
  }
}

bool ModelDictionary::contains(DictKey key) const {
  return key.j >= 1 && key.j <= config_.n_r && key.l >= 1 && key.l <= config_.q() && key.d >= 0 &&
         key.d <= config_.d_max;
}

std::size_t ModelDictionary::slot(DictKey key) const {
  if (!contains(key)) throw ArgumentError("dictionary key out of range " + describe(key));
  return (static_cast<std::size_t>(key.j - 1) * static_cast<std::size_t>(config_.q()) +
          static_cast<std::size_t>(key.l - 1)) *
             static_cast<std::size_t>(config_.d_max + 1) +
         static_cast<std::size_t>(key.d);
}

const CompressedMap& ModelDictionary::at(DictKey key) const { return entries_[slot(key)]; }

std::vector<DictKey> ModelDictionary::keys() const {
  std::vector<DictKey> out;
  out.reserve(entries_.size());
  for (int j = 1; j <= config_.n_r; ++j) {
    for (int l = 1; l <= config_.q(); ++l) {
      for (int d = 0; d <= config_.d_max; ++d) out.push_back({j, l, d});
    }
  }
  return out;
}

int ModelDictionary::nearest_noise_index(double nu) const {
  int best = 1;
  double best_gap = std::abs(config_.noise_levels[0] - nu);
  for (int l = 2; l <= config_.q(); ++l) {
    const double gap = std::abs(config_.noise_levels[static_cast<std::size_t>(l - 1)] - nu);
    if (gap <= best_gap) {
      best = l;
      best_gap = gap;
    }
  }
  return best;
}

std::vector<RidgeFit> train_block(const DictionaryConfig& config, const SignalSpace& space, int j, int l,
                                  std::uint64_t seed) {
  const TrainingSet set = make_training_set(space, j, l, config.d_max, config.n_samples, seed);
  const RidgeCrossValidator validator(set.features, config.alphas, config.folds);
  std::vector<RidgeFit> fits;
  fits.reserve(set.labels.size());
  for (const Eigen::MatrixXd& labels : set.labels) fits.push_back(validator.fit(labels));
  return fits;
}

ModelDictionary train_dictionary(const DictionaryConfig& config, std::uint64_t seed, TrainingSummary* summary) {
  config.validate();
  const SignalSpace space = SignalSpace::from_config(config);
  const auto q = static_cast<std::size_t>(config.q());
  const auto orders = static_cast<std::size_t>(config.d_max + 1);
  const std::size_t blocks = static_cast<std::size_t>(config.n_r) * q;

  std::vector<CompressedMap> entries(blocks * orders);
  std::vector<double> alphas(blocks * orders, 0.0);
  parallel_for(blocks, [&](std::size_t b) {
    const int j = static_cast<int>(b / q) + 1;
    const int l = static_cast<int>(b % q) + 1;
    std::vector<RidgeFit> fits;
    try {
      fits = train_block(config, space, j, l, seed);
    } catch (const std::exception& e) {
      throw NumericalError("training failed for block (j=" + std::to_string(j) + ", l=" + std::to_string(l) +
                           "): " + e.what());
    }
    for (std::size_t d = 0; d < orders; ++d) {
      if (!fits[d].coef.allFinite()) {
        throw NumericalError("non-finite fit for " + describe({j, l, static_cast<int>(d)}));
      }
      entries[b * orders + d] = compress(fits[d].coef, config.tol);
      alphas[b * orders + d] = fits[d].alpha;
    }
  });

  ModelDictionary dict(config, seed, std::move(entries));
  if (summary) {
    summary->keys = dict.keys();
    summary->alphas = std::move(alphas);
    summary->rel_errs.clear();
    for (DictKey key : summary->keys) summary->rel_errs.push_back(dict.at(key).rel_err.value_or(0.0));
  }
  return dict;
}

}  // namespace derivkit
