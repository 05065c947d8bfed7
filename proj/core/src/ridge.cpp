#include "derivkit/ridge.hpp"

#include <algorithm>
#include <limits>

#include "derivkit/errors.hpp"

namespace derivkit {

namespace {

Eigen::MatrixXd drop_rows(const Eigen::MatrixXd& m, Eigen::Index begin, Eigen::Index end) {
  Eigen::MatrixXd out(m.rows() - (end - begin), m.cols());
  out.topRows(begin) = m.topRows(begin);
  out.bottomRows(m.rows() - end) = m.bottomRows(m.rows() - end);
  return out;
}

}  // namespace

RidgeSolver::RidgeSolver(const Eigen::MatrixXd& x) : rows_(x.rows()) {
  if (x.rows() < 1 || x.cols() < 1) throw ArgumentError("ridge features must be non-empty");
  Eigen::BDCSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  u_ = svd.matrixU();
  singular_ = svd.singularValues();
  v_ = svd.matrixV();
}

Eigen::MatrixXd RidgeSolver::project_labels(const Eigen::MatrixXd& labels) const {
  if (labels.rows() != rows_) throw ArgumentError("labels and features have different row counts");
  return u_.transpose() * labels;
}

Eigen::VectorXd RidgeSolver::filter(double alpha, bool* rank_deficient) const {
  if (!(alpha >= 0.0)) throw ArgumentError("alpha must be >= 0");
  Eigen::VectorXd f(singular_.size());
  bool dropped = false;
  if (alpha > 0.0) {
    f = singular_.array() / (singular_.array().square() + alpha);
  } else {
    const double smax = singular_.size() > 0 ? singular_(0) : 0.0;
    const double cutoff = static_cast<double>(std::max(rows_, cols())) *
                          std::numeric_limits<double>::epsilon() * smax;
    for (Eigen::Index i = 0; i < singular_.size(); ++i) {
      if (singular_(i) > cutoff) {
        f(i) = 1.0 / singular_(i);
      } else {
        f(i) = 0.0;
        dropped = true;
      }
    }
    if (singular_.size() < cols()) dropped = true;
  }
  if (rank_deficient) *rank_deficient = dropped;
  return f;
}

RidgeSolution RidgeSolver::solve(const Eigen::MatrixXd& labels, double alpha) const {
  if (alpha == 0.0 && rows_ < cols()) throw ArgumentError("alpha = 0 requires at least as many rows as columns");
  RidgeSolution out;
  const Eigen::VectorXd f = filter(alpha, &out.rank_deficient);
  out.coef = v_ * (f.asDiagonal() * project_labels(labels));
  return out;
}

RidgeSolution ridge_fit(const Eigen::MatrixXd& x, const Eigen::MatrixXd& labels, double alpha) {
  if (labels.rows() != x.rows()) throw ArgumentError("labels and features have different row counts");
  return RidgeSolver(x).solve(labels, alpha);
}

RidgeCrossValidator::RidgeCrossValidator(const Eigen::MatrixXd& x, std::vector<double> alphas, int folds)
    : alphas_(std::move(alphas)), full_(x) {
  if (alphas_.empty()) throw ArgumentError("empty alpha candidate list");
  if (folds < 2) throw ArgumentError("cross-validation needs at least 2 folds");
  if (x.rows() < folds) throw ArgumentError("every fold needs at least one row");
  for (double a : alphas_) {
    if (!(a >= 0.0)) throw ArgumentError("alpha candidates must be >= 0");
  }

  const Eigen::Index m = x.rows();
  folds_.reserve(static_cast<std::size_t>(folds));
  for (int k = 0; k < folds; ++k) {
    const Eigen::Index begin = m * k / folds;
    const Eigen::Index end = m * (k + 1) / folds;
    RidgeSolver solver(drop_rows(x, begin, end));
    Eigen::MatrixXd held_out_v = x.middleRows(begin, end - begin) * solver.v();
    folds_.push_back(Fold{begin, end, std::move(solver), std::move(held_out_v)});
  }
}

Eigen::MatrixXd RidgeCrossValidator::train_rows(const Eigen::MatrixXd& m, const Fold& fold) const {
  return drop_rows(m, fold.begin, fold.end);
}

RidgeFit RidgeCrossValidator::fit(const Eigen::MatrixXd& labels) const {
  if (labels.rows() != full_.rows()) throw ArgumentError("labels and features have different row counts");

  RidgeFit out;
  out.alphas = alphas_;
  out.cv_scores.assign(alphas_.size(), 0.0);
  for (const Fold& fold : folds_) {
    const Eigen::MatrixXd projected = fold.solver.project_labels(train_rows(labels, fold));
    const auto held_out = labels.middleRows(fold.begin, fold.end - fold.begin);
    const double count = static_cast<double>(held_out.size());
    for (std::size_t a = 0; a < alphas_.size(); ++a) {
      if (alphas_[a] == 0.0 && fold.solver.rows() < fold.solver.cols()) {
        out.cv_scores[a] = std::numeric_limits<double>::infinity();
        continue;
      }
      const Eigen::VectorXd f = fold.solver.filter(alphas_[a]);
      const Eigen::MatrixXd predicted = fold.held_out_v * (f.asDiagonal() * projected);
      out.cv_scores[a] += (predicted - held_out).squaredNorm() / count;
    }
  }
  for (double& score : out.cv_scores) score /= static_cast<double>(folds_.size());

  // Ties resolve to the smaller alpha.
  std::size_t best = 0;
  for (std::size_t a = 1; a < alphas_.size(); ++a) {
    const bool better = out.cv_scores[a] < out.cv_scores[best];
    const bool tie_smaller = out.cv_scores[a] == out.cv_scores[best] && alphas_[a] < alphas_[best];
    if (better || tie_smaller) best = a;
  }
  out.alpha = alphas_[best];
  RidgeSolution solution = full_.solve(labels, out.alpha);
  out.coef = std::move(solution.coef);
  out.rank_deficient = solution.rank_deficient;
  return out;
}

RidgeFit ridge_cv_fit(const Eigen::MatrixXd& x, const Eigen::MatrixXd& labels, const std::vector<double>& alphas,
                      int folds) {
  return RidgeCrossValidator(x, alphas, folds).fit(labels);
}

}  // namespace derivkit
