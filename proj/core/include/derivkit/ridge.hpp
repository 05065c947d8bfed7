#pragma once

#include <Eigen/Dense>
#include <vector>

namespace derivkit {

struct RidgeSolution {
  Eigen::MatrixXd coef;
  // Set when alpha = 0 and X is numerically rank deficient; coef is then the
  // minimum-norm least-squares solution.
  bool rank_deficient = false;
};

// Thin SVD of a feature matrix, reused for any number of (labels, alpha)
// solves of min ||X A - L||_F^2 + alpha ||A||_F^2.
class RidgeSolver {
 public:
  explicit RidgeSolver(const Eigen::MatrixXd& x);

  Eigen::Index rows() const { return rows_; }
  Eigen::Index cols() const { return v_.rows(); }

  RidgeSolution solve(const Eigen::MatrixXd& labels, double alpha) const;

  // Building blocks for scoring many alphas cheaply:
  // A(alpha) = V diag(filter(alpha)) (U^T L).
  const Eigen::MatrixXd& v() const { return v_; }
  Eigen::MatrixXd project_labels(const Eigen::MatrixXd& labels) const;
  Eigen::VectorXd filter(double alpha, bool* rank_deficient = nullptr) const;

 private:
  Eigen::Index rows_ = 0;
  Eigen::MatrixXd u_;
  Eigen::VectorXd singular_;
  Eigen::MatrixXd v_;
};

RidgeSolution ridge_fit(const Eigen::MatrixXd& x, const Eigen::MatrixXd& labels, double alpha);

struct RidgeFit {
  Eigen::MatrixXd coef;
  double alpha = 0.0;
  std::vector<double> alphas;
  std::vector<double> cv_scores;  // mean held-out MSE per candidate
  bool rank_deficient = false;
};

// k-fold cross-validation over contiguous row blocks. Fold factorizations
// depend only on X, so one validator serves every label matrix paired with
// the same features.
class RidgeCrossValidator {
 public:
  RidgeCrossValidator(const Eigen::MatrixXd& x, std::vector<double> alphas, int folds);

  RidgeFit fit(const Eigen::MatrixXd& labels) const;

 private:
  struct Fold {
    Eigen::Index begin = 0;  // held-out rows [begin, end)
    Eigen::Index end = 0;
    RidgeSolver solver;
    Eigen::MatrixXd held_out_v;  // X_held_out * V
  };

  Eigen::MatrixXd train_rows(const Eigen::MatrixXd& m, const Fold& fold) const;

  std::vector<double> alphas_;
  std::vector<Fold> folds_;
  RidgeSolver full_;
};

RidgeFit ridge_cv_fit(const Eigen::MatrixXd& x, const Eigen::MatrixXd& labels, const std::vector<double>& alphas,
                      int folds);

}  // namespace derivkit
