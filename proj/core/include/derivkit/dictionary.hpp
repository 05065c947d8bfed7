#pragma once

#include <Eigen/Dense>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "derivkit/config.hpp"
#include "derivkit/ridge.hpp"
#include "derivkit/synth.hpp"

namespace derivkit {

// Dictionary index: bandwidth index j in 1..n_r, noise index l in 1..q,
// derivation order d in 0..d_max.
struct DictKey {
  int j = 1;
  int l = 1;
  int d = 0;
  friend auto operator<=>(const DictKey&, const DictKey&) = default;
};

// Truncated SVD A ~= U diag(S) V^T of a fitted n_w x n_w map. A window y is
// mapped to A^T y, so apply() evaluates V diag(S) U^T y and never forms A.
struct CompressedMap {
  Eigen::MatrixXd u;
  Eigen::VectorXd s;
  Eigen::MatrixXd v;
  // Relative Frobenius error measured at compression time; not persisted.
  std::optional<double> rel_err;

  Eigen::Index rank() const { return s.size(); }
  Eigen::Index window() const { return u.rows(); }

  Eigen::VectorXd apply(const Eigen::VectorXd& y) const;
  // Applies the map to every column of `windows` (n_w x count).
  Eigen::MatrixXd apply_columns(const Eigen::MatrixXd& windows) const;
  Eigen::MatrixXd dense() const;
};

// Smallest rank whose discarded singular values carry at most tol of the
// Frobenius norm. Values under 1e-12 * S_max are always discarded.
CompressedMap compress(const Eigen::MatrixXd& a, double tol);

class ModelDictionary {
 public:
  ModelDictionary(DictionaryConfig config, std::uint64_t seed, std::vector<CompressedMap> entries);

  const DictionaryConfig& config() const { return config_; }
  const SignalSpace& space() const { return space_; }
  std::uint64_t seed() const { return seed_; }
  int window() const { return config_.n_w; }

  std::size_t size() const { return entries_.size(); }
  bool contains(DictKey key) const;
  const CompressedMap& at(DictKey key) const;
  // All keys in (j, l, d) lexicographic order.
  std::vector<DictKey> keys() const;

  // Index of the table entry closest to nu; ties go to the larger level.
  int nearest_noise_index(double nu) const;

  std::vector<std::uint8_t> serialize() const;
  static ModelDictionary deserialize(std::span<const std::uint8_t> bytes);
  void save(const std::filesystem::path& path) const;
  static ModelDictionary load(const std::filesystem::path& path);

 private:
  std::size_t slot(DictKey key) const;

  DictionaryConfig config_;
  SignalSpace space_;
  std::uint64_t seed_ = 0;
  std::vector<CompressedMap> entries_;
};

// Ridge fits for every order of one (j, l) block, before compression.
// Order 0 maps noisy windows to their noise-free version; order d >= 1 maps
// them to exact d-th derivatives.
std::vector<RidgeFit> train_block(const DictionaryConfig& config, const SignalSpace& space, int j, int l,
                                  std::uint64_t seed);

struct TrainingSummary {
  std::vector<DictKey> keys;
  std::vector<double> alphas;    // selected regularization per key
  std::vector<double> rel_errs;  // compression error per key
};

ModelDictionary train_dictionary(const DictionaryConfig& config, std::uint64_t seed,
                                 TrainingSummary* summary = nullptr);

}  // namespace derivkit
