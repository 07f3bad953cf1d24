#pragma once

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "wordle/errors.hpp"

namespace wordle::numerics {

struct LassoModel {
  double intercept = 0.0;
  Eigen::VectorXd coef;
  double alpha = 0.0;
  int sweeps = 0;
  bool converged = false;

  double predict(const Eigen::Ref<const Eigen::VectorXd>& x) const { return intercept + coef.dot(x); }
  Eigen::VectorXd predict(const Eigen::MatrixXd& x) const {
    return (x * coef).array() + intercept;
  }
};

struct LassoOptions {
  double tolerance = 1e-10;
  int max_sweeps = 10000;
};

inline double soft_threshold(double z, double gamma) {
  if (z > gamma) {
    return z - gamma;
  }
  if (z < -gamma) {
    return z + gamma;
  }
  return 0.0;
}

/// Minimises (1/2n)||y - b0 - X b||^2 + alpha ||b||_1 by cyclic coordinate
/// descent; the intercept is unpenalised and updated as its own coordinate.
inline LassoModel lasso_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double alpha,
                            const LassoOptions& opts = {}) {
  const auto n = x.rows();
  const auto p = x.cols();
  if (n < 2 || y.size() != n) {
    throw DataError("lasso needs at least 2 rows and a matching response");
  }
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw DataError("lasso penalty alpha must be a non-negative finite number");
  }
  if (!x.allFinite() || !y.allFinite()) {
    throw DataError("lasso inputs must be finite");
  }
  const double dn = static_cast<double>(n);
  Eigen::VectorXd col_sq = x.colwise().squaredNorm().transpose() / dn;

  LassoModel m;
  m.alpha = alpha;
  m.coef = Eigen::VectorXd::Zero(p);
  m.intercept = y.mean();
  Eigen::VectorXd resid = y.array() - m.intercept;

  for (m.sweeps = 1; m.sweeps <= opts.max_sweeps; ++m.sweeps) {
    double max_change = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      if (col_sq[j] == 0.0) {
        continue;
      }
      const double old = m.coef[j];
      const double rho = x.col(j).dot(resid) / dn + col_sq[j] * old;
      const double updated = soft_threshold(rho, alpha) / col_sq[j];
      if (updated != old) {
        resid -= (updated - old) * x.col(j);
        m.coef[j] = updated;
        max_change = std::max(max_change, std::abs(updated - old));
      }
    }
    const double shift = resid.mean();
    if (shift != 0.0) {
      m.intercept += shift;
      resid.array() -= shift;
      max_change = std::max(max_change, std::abs(shift));
    }
    if (max_change < opts.tolerance) {
      m.converged = true;
      break;
    }
  }
  m.sweeps = std::min(m.sweeps, opts.max_sweeps);
  return m;
}

} // namespace wordle::numerics
