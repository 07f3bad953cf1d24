#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wordle/errors.hpp"

namespace wordle::numerics {

inline double logistic(double z) {
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

/// Proportional-odds model: P(level <= j | x) = logistic(cutpoint_j - beta . x).
struct OrdLogitModel {
  Eigen::VectorXd beta;
  Eigen::VectorXd cutpoints;
  int k = 0;
  /// Fit diagnostics; NaN / 0 for models that were not fitted here.
  double log_likelihood = std::numeric_limits<double>::quiet_NaN();
  std::size_t n_obs = 0;
  int iterations = 0;

  Eigen::Index parameter_count() const { return beta.size() + cutpoints.size(); }
  double aic() const { return 2.0 * static_cast<double>(parameter_count()) - 2.0 * log_likelihood; }
  double bic() const {
    return static_cast<double>(parameter_count()) * std::log(static_cast<double>(n_obs)) - 2.0 * log_likelihood;
  }

  double linear_predictor(const Eigen::VectorXd& f) const { return beta.dot(f); }

  /// Level probabilities, index 0 = level 1.
  std::vector<double> probabilities(const Eigen::VectorXd& f) const {
    const double eta = linear_predictor(f);
    std::vector<double> p(static_cast<std::size_t>(k));
    double prev = 0.0;
    for (int j = 0; j < k - 1; ++j) {
      const double c = logistic(cutpoints[j] - eta);
      p[static_cast<std::size_t>(j)] = std::max(c - prev, 0.0);
      prev = c;
    }
    p[static_cast<std::size_t>(k - 1)] = std::max(1.0 - prev, 0.0);
    return p;
  }

  void validate() const {
    if (k < 2 || cutpoints.size() != k - 1) {
      throw DataError("ordered logit needs k >= 2 levels and k-1 cutpoints");
    }
    if (!beta.allFinite() || !cutpoints.allFinite()) {
      throw DataError("ordered logit parameters must be finite");
    }
    for (Eigen::Index j = 1; j < cutpoints.size(); ++j) {
      if (!(cutpoints[j] > cutpoints[j - 1])) {
        throw DataError("ordered logit cutpoints must be strictly increasing");
      }
    }
  }
};

struct LevelAssignment {
  int level = 0;
  double y = 0.0;
};

/// y = beta . f; level = 1 + number of cutpoints strictly below y, so a value
/// equal to a cutpoint stays in the lower level.
inline LevelAssignment ologit_classify(const OrdLogitModel& model, const Eigen::VectorXd& f) {
  LevelAssignment out;
  out.y = model.linear_predictor(f);
  out.level = 1;
  for (Eigen::Index j = 0; j < model.cutpoints.size(); ++j) {
    out.level += model.cutpoints[j] < out.y;
  }
  return out;
}

inline LevelAssignment classify_value(const OrdLogitModel& model, double y) {
  LevelAssignment out{1, y};
  for (Eigen::Index j = 0; j < model.cutpoints.size(); ++j) {
    out.level += model.cutpoints[j] < y;
  }
  return out;
}

struct OrdLogitOptions {
  double gradient_tolerance = 1e-8;
  int max_iterations = 100;
  /// Coefficient magnitude treated as divergence (separation).
  double divergence_bound = 1e3;
  /// A converged fit whose standard error exceeds this multiple of
  /// max(1, |parameter|) sits on a flat likelihood ridge: separation.
  double max_relative_standard_error = 50.0;
};

namespace detail {

struct OrdLogitEval {
  double ll = 0.0;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
};

/// Log-likelihood with gradient and Hessian in the parameter order
/// [cutpoints..., beta...]. Returns ll = -inf if a category probability vanishes.
inline OrdLogitEval ologit_evaluate(const Eigen::MatrixXd& x, std::span<const int> labels, int k,
                                    const Eigen::VectorXd& theta, const Eigen::VectorXd& beta, bool derivatives) {
  const auto m = x.cols();
  const auto nt = static_cast<Eigen::Index>(k - 1);
  const auto np = nt + m;
  OrdLogitEval ev;
  if (derivatives) {
    ev.grad = Eigen::VectorXd::Zero(np);
    ev.hess = Eigen::MatrixXd::Zero(np, np);
  }
  Eigen::VectorXd ja(np), jb(np);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const int y = labels[static_cast<std::size_t>(i)];
    const double eta = beta.dot(x.row(i).transpose());
    const bool has_a = y < k, has_b = y > 1;
    const double a = has_a ? theta[y - 1] - eta : 0.0;
    const double b = has_b ? theta[y - 2] - eta : 0.0;
    double p;
    if (!has_b) {
      p = logistic(a);
    } else if (!has_a) {
      p = logistic(-b);
    } else if (b > 0.0) {
      p = logistic(-b) - logistic(-a);
    } else {
      p = logistic(a) - logistic(b);
    }
    if (!(p > 0.0)) {
      ev.ll = -std::numeric_limits<double>::infinity();
      return ev;
    }
    ev.ll += std::log(p);
    if (!derivatives) {
      continue;
    }
    double fa = 0, fpa = 0, fb = 0, fpb = 0;
    if (has_a) {
      const double fa_cdf = logistic(a);
      fa = fa_cdf * logistic(-a);
      fpa = fa * (1.0 - 2.0 * fa_cdf);
    }
    if (has_b) {
      const double fb_cdf = logistic(b);
      fb = fb_cdf * logistic(-b);
      fpb = fb * (1.0 - 2.0 * fb_cdf);
    }
    const double ga = fa / p, gb = -fb / p;
    const double haa = fpa / p - ga * ga;
    const double hbb = -fpb / p - gb * gb;
    const double hab = -ga * gb;
    ja.setZero();
    jb.setZero();
    ja.tail(m) = -x.row(i).transpose();
    jb.tail(m) = -x.row(i).transpose();
    if (has_a) {
      ja[y - 1] = 1.0;
    }
    if (has_b) {
      jb[y - 2] = 1.0;
    }
    if (!has_a) {
      ja.setZero();
    }
    if (!has_b) {
      jb.setZero();
    }
    ev.grad += ga * ja + gb * jb;
    ev.hess += haa * ja * ja.transpose() + hbb * jb * jb.transpose() +
               hab * (ja * jb.transpose() + jb * ja.transpose());
  }
  return ev;
}

} // namespace detail

inline double ologit_log_likelihood(const OrdLogitModel& model, const Eigen::MatrixXd& x, std::span<const int> labels) {
  return detail::ologit_evaluate(x, labels, model.k, model.cutpoints, model.beta, false).ll;
}

/// Maximum-likelihood fit by damped Newton iterations. The number of levels k
/// is the largest label; every level 1..k must occur.
inline OrdLogitModel ologit_fit(const Eigen::MatrixXd& x, std::span<const int> labels,
                                const OrdLogitOptions& opts = {}) {
  const auto n = x.rows();
  const auto m = x.cols();
  if (static_cast<std::size_t>(n) != labels.size() || n == 0) {
    throw DataError("ordered logit: factor rows and labels differ in length");
  }
  if (!x.allFinite()) {
    throw DataError("ordered logit inputs must be finite");
  }
  const int k = *std::max_element(labels.begin(), labels.end());
  if (k < 2 || *std::min_element(labels.begin(), labels.end()) < 1) {
    throw DataError("ordered logit labels must lie in 1..k with k >= 2");
  }
  std::vector<std::size_t> count(static_cast<std::size_t>(k) + 1, 0);
  for (int y : labels) {
    ++count[static_cast<std::size_t>(y)];
  }
  for (int j = 1; j <= k; ++j) {
    if (count[static_cast<std::size_t>(j)] == 0) {
      throw DataError("ordered logit: level " + std::to_string(j) + " has no observations");
    }
  }

  Eigen::VectorXd theta(k - 1);
  double cum = 0.0;
  for (int j = 1; j < k; ++j) {
    cum += static_cast<double>(count[static_cast<std::size_t>(j)]) / static_cast<double>(n);
    theta[j - 1] = std::log(cum / (1.0 - cum));
  }
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(m);
  const auto nt = static_cast<Eigen::Index>(k - 1);

  std::ostringstream trace;
  auto ev = detail::ologit_evaluate(x, labels, k, theta, beta, true);
  for (int iter = 1; iter <= opts.max_iterations; ++iter) {
    const double gnorm = ev.grad.cwiseAbs().maxCoeff();
    trace << "  iter " << iter << ": loglik=" << ev.ll << " |grad|=" << gnorm
          << " |beta|=" << beta.cwiseAbs().maxCoeff() << "\n";
    if (gnorm < opts.gradient_tolerance) {
      Eigen::LDLT<Eigen::MatrixXd> info(-ev.hess);
      Eigen::VectorXd params(nt + m);
      params << theta, beta;
      bool flat = info.info() != Eigen::Success || !info.isPositive() || !(info.vectorD().array() > 0).all();
      if (!flat) {
        const Eigen::MatrixXd cov = info.solve(Eigen::MatrixXd::Identity(nt + m, nt + m));
        for (Eigen::Index j = 0; j < params.size(); ++j) {
          const double se = std::sqrt(std::max(cov(j, j), 0.0));
          flat = flat || !(se <= opts.max_relative_standard_error * std::max(1.0, std::abs(params[j])));
        }
      }
      if (flat) {
        throw NumericalError("ordered logit: likelihood is flat at the optimum (separation; standard errors "
                             "unbounded)\n" + trace.str());
      }
      OrdLogitModel model;
      model.beta = beta;
      model.cutpoints = theta;
      model.k = k;
      model.log_likelihood = ev.ll;
      model.n_obs = static_cast<std::size_t>(n);
      model.iterations = iter - 1;
      return model;
    }
    Eigen::MatrixXd neg_h = -ev.hess;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(neg_h);
    Eigen::VectorXd step;
    if (ldlt.info() == Eigen::Success && ldlt.isPositive() && (ldlt.vectorD().array() > 0).all()) {
      step = ldlt.solve(ev.grad);
    } else {
      step = ev.grad / std::max(1.0, neg_h.diagonal().cwiseAbs().maxCoeff());
    }
    double scale = 1.0;
    bool accepted = false;
    for (int half = 0; half < 40; ++half, scale *= 0.5) {
      Eigen::VectorXd t2 = theta + scale * step.head(nt);
      Eigen::VectorXd b2 = beta + scale * step.tail(m);
      bool ordered = true;
      for (Eigen::Index j = 1; j < t2.size(); ++j) {
        ordered = ordered && t2[j] > t2[j - 1];
      }
      if (!ordered) {
        continue;
      }
      auto trial = detail::ologit_evaluate(x, labels, k, t2, b2, false);
      if (trial.ll >= ev.ll - 1e-12 * std::abs(ev.ll)) {
        theta = t2;
        beta = b2;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      throw NumericalError("ordered logit: line search failed\n" + trace.str());
    }
    if (beta.cwiseAbs().maxCoeff() > opts.divergence_bound ||
        theta.cwiseAbs().maxCoeff() > opts.divergence_bound) {
      throw NumericalError("ordered logit: coefficients diverging (likely separation)\n" + trace.str());
    }
    ev = detail::ologit_evaluate(x, labels, k, theta, beta, true);
  }
  throw NumericalError("ordered logit did not converge in " + std::to_string(opts.max_iterations) +
                       " iterations\n" + trace.str());
}

} // namespace wordle::numerics
