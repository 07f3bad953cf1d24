#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wordle/errors.hpp"

namespace wordle::numerics {

/// Unrotated principal-axis factor model on a correlation matrix.
struct FactorModel {
  /// p x m; empty for coefficient-only models.
  Eigen::MatrixXd loadings;
  /// p x m regression-method score coefficients: scores = z^T * score_coef.
  Eigen::MatrixXd score_coef;
  int m = 0;
  /// All p eigenvalues of the correlation matrix, largest first (empty when unknown).
  std::vector<double> eigenvalues;

  Eigen::VectorXd scores(const Eigen::VectorXd& z) const { return score_coef.transpose() * z; }
  Eigen::MatrixXd scores(const Eigen::MatrixXd& z) const { return z * score_coef; }

  void validate(Eigen::Index p) const {
    if (m < 1 || m > p) {
      throw DataError("factor count m must be in [1, " + std::to_string(p) + "]");
    }
    if (score_coef.rows() != p || score_coef.cols() != m || !score_coef.allFinite()) {
      throw DataError("factor score coefficients must be a finite " + std::to_string(p) + " x " +
                      std::to_string(m) + " matrix");
    }
    if (loadings.size() != 0 && (loadings.rows() != p || loadings.cols() != m || !loadings.allFinite())) {
      throw DataError("factor loadings must match the score coefficient shape");
    }
    for (std::size_t i = 1; i < eigenvalues.size(); ++i) {
      if (eigenvalues[i] > eigenvalues[i - 1]) {
        throw DataError("factor eigenvalues must be non-increasing");
      }
    }
  }
};

struct FactorOptions {
  /// Largest accepted eigenvalue ratio of the correlation matrix.
  double max_condition = 1e12;
};

/// Sample correlation matrix of the columns of x.
inline Eigen::MatrixXd correlation_matrix(const Eigen::MatrixXd& x) {
  const auto n = x.rows();
  Eigen::MatrixXd c = x.rowwise() - x.colwise().mean();
  Eigen::VectorXd sd = (c.colwise().squaredNorm() / static_cast<double>(n - 1)).cwiseSqrt().transpose();
  for (Eigen::Index j = 0; j < sd.size(); ++j) {
    if (!(sd[j] > 0.0)) {
      throw NumericalError("column " + std::to_string(j) + " has zero variance; correlation undefined");
    }
  }
  c = c * sd.cwiseInverse().asDiagonal();
  return (c.transpose() * c) / static_cast<double>(n - 1);
}

/// Eigendecomposition of the sample correlation matrix R; loadings column j
/// is eigvec_j * sqrt(eigval_j) for the m largest eigenvalues and the score
/// coefficients are R^-1 * loadings. Each eigenvector is signed so that its
/// largest-magnitude entry is positive.
inline FactorModel factor_fit(const Eigen::MatrixXd& z, int m, const FactorOptions& opts = {}) {
  const auto p = z.cols();
  if (z.rows() <= p) {
    throw DataError("factor analysis needs more rows (" + std::to_string(z.rows()) + ") than columns (" +
                    std::to_string(p) + ")");
  }
  if (m < 1 || m > p) {
    throw DataError("factor count m must be in [1, " + std::to_string(p) + "]");
  }
  if (!z.allFinite()) {
    throw DataError("factor analysis input must be finite");
  }
  const Eigen::MatrixXd r = correlation_matrix(z);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(r);
  if (eig.info() != Eigen::Success) {
    throw NumericalError("eigendecomposition of the correlation matrix failed");
  }
  // Eigen returns ascending order.
  Eigen::VectorXd values = eig.eigenvalues().reverse();
  Eigen::MatrixXd vectors = eig.eigenvectors().rowwise().reverse();
  const double smallest = values[p - 1];
  const double cond = smallest > 0.0 ? values[0] / smallest : std::numeric_limits<double>::infinity();
  if (!(cond <= opts.max_condition)) {
    std::ostringstream msg;
    msg << "correlation matrix is singular or ill-conditioned (condition number " << cond
        << ", smallest eigenvalue " << smallest << ")";
    throw NumericalError(msg.str());
  }
  for (Eigen::Index j = 0; j < p; ++j) {
    Eigen::Index arg = 0;
    vectors.col(j).cwiseAbs().maxCoeff(&arg);
    if (vectors(arg, j) < 0.0) {
      vectors.col(j) = -vectors.col(j);
    }
  }
  FactorModel model;
  model.m = m;
  model.eigenvalues.assign(values.data(), values.data() + p);
  const Eigen::VectorXd root = values.head(m).cwiseSqrt();
  model.loadings = vectors.leftCols(m) * root.asDiagonal();
  // R^-1 V_m sqrt(L_m) = V_m / sqrt(L_m)
  model.score_coef = vectors.leftCols(m) * root.cwiseInverse().asDiagonal();
  return model;
}

} // namespace wordle::numerics
