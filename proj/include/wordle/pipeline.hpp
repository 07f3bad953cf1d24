#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "wordle/associativity.hpp"
#include "wordle/distribution.hpp"
#include "wordle/features.hpp"
#include "wordle/lexicon.hpp"
#include "wordle/numerics/cluster.hpp"
#include "wordle/numerics/factor.hpp"
#include "wordle/numerics/lasso.hpp"
#include "wordle/numerics/metrics.hpp"
#include "wordle/numerics/ologit.hpp"
#include "wordle/numerics/qp.hpp"
#include "wordle/simulator.hpp"

namespace wordle {

inline constexpr double kPaperAlpha = 0.01;
inline constexpr std::uint64_t kPaperReps = 10000;

// ---------------------------------------------------------------------------
// Distribution prediction
// ---------------------------------------------------------------------------

/// Observed minus simulated expected tries for one word. Positive means
/// players needed more guesses than the random consistent player.
struct DeviationObservation {
  Word word;
  double e_raw = 0.0;
  double e_actual = 0.0;
  double e_delta = 0.0;
};

/// Lasso regression of the expectation deviation on two standardized
/// features: log-associativity and log(1 + frequency), in that order.
struct DeviationModel {
  numerics::LassoModel lasso;
  std::array<double, 2> feature_mean{};
  std::array<double, 2> feature_sd{1.0, 1.0};
  double in_sample_mse = std::numeric_limits<double>::quiet_NaN();
  /// Pearson r between log-associativity and e_delta on the training set.
  double pearson_log_assoc = std::numeric_limits<double>::quiet_NaN();
  std::size_t n_train = 0;

  static std::array<double, 2> raw_features(const Word& w, const MarkovModel& markov, const FrequencyTable& freq) {
    return {associativity(markov, w).log_raw, std::log1p(freq(w))};
  }

  std::array<double, 2> features(const Word& w, const MarkovModel& markov, const FrequencyTable& freq) const {
    auto r = raw_features(w, markov, freq);
    return {(r[0] - feature_mean[0]) / feature_sd[0], (r[1] - feature_mean[1]) / feature_sd[1]};
  }

  double predict(const Word& w, const MarkovModel& markov, const FrequencyTable& freq) const {
    auto z = features(w, markov, freq);
    return lasso.intercept + lasso.coef[0] * z[0] + lasso.coef[1] * z[1];
  }

  void validate() const {
    if (lasso.coef.size() != 2 || !lasso.coef.allFinite() || !std::isfinite(lasso.intercept)) {
      throw DataError("deviation model needs exactly two finite coefficients and a finite intercept");
    }
    if (!(lasso.alpha >= 0.0)) {
      throw DataError("deviation model alpha must be non-negative");
    }
    for (int j = 0; j < 2; ++j) {
      if (!std::isfinite(feature_mean[j]) || !(feature_sd[j] > 0.0) || !std::isfinite(feature_sd[j])) {
        throw DataError("deviation model feature scaling must be finite with positive sd");
      }
    }
  }
};

/// Pairs simulation reports with observed records by word. Throws when the
/// two cover different word sets, listing the symmetric difference.
inline std::vector<DeviationObservation> deviation_observations(std::span<const SimulationReport> reports,
                                                                std::span<const ObservedRecord> observed) {
  std::unordered_map<Word, const SimulationReport*> by_word;
  for (const auto& r : reports) {
    by_word[r.word] = &r;
  }
  std::set<Word> observed_words, report_words;
  for (const auto& o : observed) {
    observed_words.insert(o.word);
  }
  for (const auto& r : reports) {
    report_words.insert(r.word);
  }
  if (observed_words != report_words) {
    std::string diff;
    for (const auto& w : observed_words) {
      if (!report_words.contains(w)) {
        diff += " " + w.str() + "(observed only)";
      }
    }
    for (const auto& w : report_words) {
      if (!observed_words.contains(w)) {
        diff += " " + w.str() + "(simulated only)";
      }
    }
    throw DataError("simulated and observed word sets differ:" + diff);
  }
  std::vector<DeviationObservation> out;
  out.reserve(observed.size());
  for (const auto& o : observed) {
    const auto* r = by_word.at(o.word);
    DeviationObservation d;
    d.word = o.word;
    d.e_raw = r->raw.expectation();
    d.e_actual = o.dist.expectation();
    d.e_delta = d.e_actual - d.e_raw;
    out.push_back(d);
  }
  return out;
}

inline DeviationModel fit_deviation_model(std::span<const SimulationReport> reports,
                                          std::span<const ObservedRecord> observed, const MarkovModel& markov,
                                          const FrequencyTable& freq, double alpha = kPaperAlpha) {
  const auto obs = deviation_observations(reports, observed);
  if (obs.size() < 2) {
    throw DataError("deviation regression needs at least 2 words");
  }
  const auto n = static_cast<Eigen::Index>(obs.size());
  Eigen::MatrixXd x(n, 2);
  Eigen::VectorXd y(n);
  std::vector<double> log_assoc(obs.size()), deltas(obs.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& o = obs[static_cast<std::size_t>(i)];
    auto f = DeviationModel::raw_features(o.word, markov, freq);
    x(i, 0) = f[0];
    x(i, 1) = f[1];
    y[i] = o.e_delta;
    log_assoc[static_cast<std::size_t>(i)] = f[0];
    deltas[static_cast<std::size_t>(i)] = o.e_delta;
  }
  DeviationModel model;
  for (int j = 0; j < 2; ++j) {
    const double mean = x.col(j).mean();
    const double sd = std::sqrt((x.col(j).array() - mean).square().sum() / static_cast<double>(n - 1));
    model.feature_mean[j] = mean;
    // A constant feature is centred to zero and gets no weight.
    model.feature_sd[j] = sd > 0.0 ? sd : 1.0;
    x.col(j) = (x.col(j).array() - mean) / model.feature_sd[j];
  }
  model.lasso = numerics::lasso_fit(x, y, alpha);
  model.n_train = obs.size();
  model.in_sample_mse = (y - model.lasso.predict(x)).squaredNorm() / static_cast<double>(n);
  model.pearson_log_assoc = numerics::pearson(log_assoc, deltas);
  return model;
}

struct CorrectionResult {
  GuessDistribution corrected;
  numerics::QpSolution qp;
};

/// Shifts `raw` so that its expectation moves by `e_delta` (clamped to what
/// a distribution can reach), via the weighted QP.
inline CorrectionResult correct_distribution(const GuessDistribution& raw, double e_delta,
                                             const numerics::QpOptions& opts = {}) {
  CorrectionResult out;
  out.qp = numerics::qp_correct(raw, 100.0 * e_delta, opts);
  if (std::all_of(out.qp.delta.begin(), out.qp.delta.end(), [](double d) { return d == 0.0; })) {
    out.corrected = raw;
    return out;
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < kBins; ++i) {
    out.corrected.bins[i] = std::max(raw.bins[i] + out.qp.delta[i], 0.0);
    sum += out.corrected.bins[i];
  }
  if (std::abs(sum - 100.0) > 1e-9) {
    throw NumericalError("corrected distribution drifted to sum " + std::to_string(sum));
  }
  for (auto& b : out.corrected.bins) {
    b *= 100.0 / sum;
  }
  return out;
}

struct DistributionPrediction {
  Word word;
  GuessDistribution raw;
  double e_delta_pred = 0.0;
  GuessDistribution corrected;
  numerics::QpSolution qp;
  std::vector<std::string> warnings;
};

struct PredictOptions {
  std::uint64_t reps = kPaperReps;
  std::uint64_t seed = 0;
  SimulationOptions simulation;
  numerics::QpOptions qp;
  /// Use this deviation instead of the model's prediction.
  std::optional<double> e_delta_override;
};

/// Raw simulated distribution, predicted deviation and QP-corrected distribution.
/// Without a deviation model (and no override) the correction is skipped with a warning.
inline DistributionPrediction predict_distribution(const Word& w, const Simulator& sim, const DeviationModel* dev,
                                                   const MarkovModel& markov, const FrequencyTable& freq,
                                                   const PredictOptions& opts = {}) {
  DistributionPrediction out;
  out.word = w;
  auto report = sim.simulate_word(w, opts.reps, opts.seed, opts.simulation);
  out.raw = report.raw;
  out.warnings = report.warnings;
  if (opts.e_delta_override) {
    out.e_delta_pred = *opts.e_delta_override;
  } else if (dev) {
    out.e_delta_pred = dev->predict(w, markov, freq);
  } else {
    out.e_delta_pred = 0.0;
    out.warnings.push_back("no deviation model available; corrected distribution equals raw");
  }
  auto corr = correct_distribution(out.raw, out.e_delta_pred, opts.qp);
  out.corrected = corr.corrected;
  out.qp = corr.qp;
  if (corr.qp.clamped) {
    out.warnings.push_back("qp_target_clamped: requested expectation shift " +
                           std::to_string(corr.qp.requested_target / 100.0) + " clamped to " +
                           std::to_string(corr.qp.target / 100.0));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Difficulty levels
// ---------------------------------------------------------------------------

enum class ClusterMethod { Ward, Average, KMeans };

inline const char* to_string(ClusterMethod m) {
  switch (m) {
  case ClusterMethod::Average: return "average";
  case ClusterMethod::KMeans: return "kmeans";
  case ClusterMethod::Ward:
  default: return "ward";
  }
}

inline ClusterMethod parse_cluster_method(std::string_view s) {
  if (s == "ward") return ClusterMethod::Ward;
  if (s == "average") return ClusterMethod::Average;
  if (s == "kmeans") return ClusterMethod::KMeans;
  throw DataError("unknown clustering method '" + std::string(s) + "' (ward, average, kmeans)");
}

struct ClusterConfig {
  int k = 4;
  ClusterMethod method = ClusterMethod::Ward;
};

/// Difficulty labels 1..k for expected-tries values; higher label = harder.
inline std::vector<int> cluster_levels(std::span<const double> expectations, const ClusterConfig& cfg) {
  switch (cfg.method) {
  case ClusterMethod::KMeans: return numerics::kmeans_1d(expectations, cfg.k);
  case ClusterMethod::Average: return numerics::hcluster(expectations, cfg.k, numerics::Linkage::Average);
  case ClusterMethod::Ward:
  default: return numerics::hcluster(expectations, cfg.k, numerics::Linkage::Ward);
  }
}

/// Silhouette score for each cluster count in [2, max_k] that the sample allows.
inline std::vector<std::pair<int, double>> silhouette_by_k(std::span<const double> values, ClusterMethod method,
                                                           int max_k = 8) {
  std::vector<std::pair<int, double>> out;
  const int limit = std::min<int>(max_k, static_cast<int>(values.size()));
  if (limit < 2) {
    return out;
  }
  if (method == ClusterMethod::KMeans) {
    for (int k = 2; k <= limit; ++k) {
      auto labels = numerics::kmeans_1d(values, k);
      out.emplace_back(k, numerics::silhouette(values, labels));
    }
    return out;
  }
  numerics::Dendrogram tree(values, method == ClusterMethod::Average ? numerics::Linkage::Average
                                                                      : numerics::Linkage::Ward);
  for (int k = 2; k <= limit; ++k) {
    auto ids = tree.cut_ids(static_cast<std::size_t>(k));
    out.emplace_back(k, numerics::silhouette(values, ids));
  }
  return out;
}

enum class Provenance { Fitted, PaperBundled };

struct LevelModel {
  Standardization standardization;
  numerics::FactorModel factors;
  numerics::OrdLogitModel ologit;
  ClusterConfig cluster;
  Provenance provenance = Provenance::Fitted;
  // Training diagnostics, present for fitted models.
  std::vector<std::pair<int, double>> silhouette;
  double training_accuracy = std::numeric_limits<double>::quiet_NaN();
  double training_auc = std::numeric_limits<double>::quiet_NaN();

  Eigen::VectorXd factor_scores(const FeatureVector& f) const {
    return factors.scores(standardization.apply(f));
  }

  void validate() const {
    standardization.validate();
    factors.validate(static_cast<Eigen::Index>(kFeatureCount));
    ologit.validate();
    if (ologit.beta.size() != factors.m) {
      throw DataError("ordered logit weights must match the factor count");
    }
    if (cluster.k != ologit.k) {
      throw DataError("cluster count must match the number of difficulty levels");
    }
    if (provenance == Provenance::PaperBundled && (factors.m != 4 || ologit.k != 4)) {
      throw DataError("paper-bundled level model must have 4 factors and 4 levels");
    }
  }
};

/// Factor score coefficients of the four published factors, rows in feature
/// column order (FREQ, Orth, N1_C, N2_C, N3_C, UN1_C, UN2_C, UN3_C, MARKOV, DISTANCE).
inline Eigen::MatrixXd paper_score_coefficients() {
  Eigen::MatrixXd c(10, 4);
  c << -0.003, -0.026, 0.035, 1.013,
        0.196,  0.135, 0.062, 0.024,
        0.078,  0.578, -0.062, -0.015,
        0.150,  0.299, 0.250, -0.038,
        0.215,  0.124, 0.145, -0.027,
       -0.070,  0.426, 0.460, 0.038,
        0.025,  0.144, 0.717, -0.018,
        0.094, -0.137, 0.585, 0.107,
        0.090,  0.357, 0.478, 0.019,
       -0.073, -0.560, -0.146, -0.062;
  return c;
}

inline numerics::OrdLogitModel paper_ordinal_model() {
  numerics::OrdLogitModel m;
  m.k = 4;
  m.beta = Eigen::Vector4d(1.343, 0.823, 0.732, 0.687);
  m.cutpoints = Eigen::Vector3d(-2.20, -0.32, 2.00);
  return m;
}

/// Published factor and ordinal coefficients combined with a feature
/// standardization supplied by the caller.
inline LevelModel paper_level_model(const Standardization& standardization) {
  LevelModel model;
  model.standardization = standardization;
  model.factors.m = 4;
  model.factors.score_coef = paper_score_coefficients();
  model.ologit = paper_ordinal_model();
  model.cluster = {4, ClusterMethod::Ward};
  model.provenance = Provenance::PaperBundled;
  model.validate();
  return model;
}

struct LevelFitOptions {
  ClusterConfig cluster;
  int factors = 4;
  int silhouette_max_k = 8;
  numerics::OrdLogitOptions ologit;
};

/// Clusters observed expectations into difficulty labels, reduces the
/// standardized features to factor scores and fits the ordinal model.
/// `features[i]` must describe `observed[i].word`.
inline LevelModel fit_level_model(std::span<const ObservedRecord> observed, std::span<const FeatureVector> features,
                                  const LevelFitOptions& opts = {}) {
  if (observed.size() != features.size()) {
    throw DataError("observed records and feature vectors are not aligned");
  }
  std::vector<double> expectations;
  expectations.reserve(observed.size());
  for (const auto& o : observed) {
    expectations.push_back(o.dist.expectation());
  }
  LevelModel model;
  model.cluster = opts.cluster;
  const auto labels = cluster_levels(expectations, opts.cluster);
  auto st = standardize(features);
  model.standardization = st.params;
  model.factors = numerics::factor_fit(st.z, opts.factors);
  const Eigen::MatrixXd scores = model.factors.scores(st.z);
  model.ologit = numerics::ologit_fit(scores, labels, opts.ologit);
  model.provenance = Provenance::Fitted;
  model.silhouette = silhouette_by_k(expectations, opts.cluster.method, opts.silhouette_max_k);

  std::vector<int> predicted(labels.size());
  std::vector<std::vector<double>> probs(labels.size());
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    const Eigen::VectorXd f = scores.row(i).transpose();
    predicted[static_cast<std::size_t>(i)] = numerics::ologit_classify(model.ologit, f).level;
    probs[static_cast<std::size_t>(i)] = model.ologit.probabilities(f);
  }
  model.training_accuracy = numerics::accuracy(predicted, labels);
  model.training_auc = numerics::macro_auc(labels, probs);
  return model;
}

struct WordClassification {
  Word word;
  int level = 0;
  double y = 0.0;
  Eigen::VectorXd scores;
};

inline WordClassification classify_features(const Word& w, const FeatureVector& f, const LevelModel& model) {
  WordClassification out;
  out.word = w;
  out.scores = model.factor_scores(f);
  const auto a = numerics::ologit_classify(model.ologit, out.scores);
  out.level = a.level;
  out.y = a.y;
  return out;
}

inline WordClassification classify_word(const Word& w, const LevelModel& model, const Lexicon& lex,
                                        const FrequencyTable& freq, const MarkovModel& markov,
                                        const FeatureOptions& fopts = {}) {
  return classify_features(w, feature_vector(w, lex, freq, markov, fopts), model);
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

struct WordEvaluation {
  Word word;
  GuessDistribution actual;
  GuessDistribution raw;
  GuessDistribution pred_corrected;
  GuessDistribution oracle_corrected;
  double log_associativity = 0.0;
  double e_delta = 0.0;      // actual - raw
  double e_delta_pred = 0.0;
  double expectation = 0.0;  // observed
  int cluster_level = 0;
  int predicted_level = 0;
  double y = 0.0;
};

struct EvaluationReport {
  std::size_t n_words = 0;
  double mse_raw = 0.0;
  std::optional<double> mse_pred_corrected;
  double mse_oracle_corrected = 0.0;
  std::optional<double> lasso_mse;
  /// r(log-associativity, actual - raw) and r(log-associativity, raw - actual).
  double pearson_actual_minus_raw = std::numeric_limits<double>::quiet_NaN();
  double pearson_raw_minus_actual = std::numeric_limits<double>::quiet_NaN();
  std::optional<double> accuracy;
  std::optional<double> macro_auc;
  std::optional<double> log_likelihood;
  std::optional<double> aic;
  std::optional<double> bic;
  std::vector<std::pair<int, double>> silhouette_by_k;
  std::size_t clamped_pred = 0;
  std::size_t clamped_oracle = 0;
  std::vector<std::string> notes;
  std::vector<std::string> errors;
  std::vector<WordEvaluation> words;
};

struct EvaluateOptions {
  std::uint64_t reps = kPaperReps;
  std::uint64_t seed = 0;
  SimulationOptions simulation;
  numerics::QpOptions qp;
  FeatureOptions features;
  ClusterConfig cluster;
  int silhouette_max_k = 8;
};

/// Simulates every observed word and scores raw, model-corrected and
/// oracle-corrected (true deviation) distributions against the observations,
/// plus the level model when one is given. The cluster configuration of the
/// level model, when present, overrides `opts.cluster`.
inline EvaluationReport evaluate(std::span<const ObservedRecord> observed, const Simulator& sim,
                                 const DeviationModel* dev, const MarkovModel& markov, const FrequencyTable& freq,
                                 const LevelModel* level, const EvaluateOptions& opts = {}) {
  EvaluationReport rep;
  rep.notes.push_back(
      "expectation deviation is observed minus simulated (E(D) - E(D')), the sign under which the "
      "correction constraint and the EERIE arithmetic hold; correlations are reported under both signs");

  std::vector<Word> words;
  for (const auto& o : observed) {
    words.push_back(o.word);
  }
  auto outcomes = sim.simulate_corpus(words, opts.reps, opts.seed, opts.simulation);

  std::vector<GuessDistribution> actual, raw, pred_corr, oracle_corr;
  std::vector<double> log_assoc, deltas, neg_deltas, expectations, pred_deltas;
  std::vector<const ObservedRecord*> kept;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (!outcomes[i].ok()) {
      rep.errors.push_back(observed[i].word.str() + ": " + outcomes[i].error);
      continue;
    }
    const auto& o = observed[i];
    WordEvaluation we;
    we.word = o.word;
    we.actual = o.dist;
    we.raw = outcomes[i].report->raw;
    we.expectation = o.dist.expectation();
    we.e_delta = we.expectation - we.raw.expectation();
    we.log_associativity = associativity(markov, o.word).log_raw;
    auto oracle = correct_distribution(we.raw, we.e_delta, opts.qp);
    we.oracle_corrected = oracle.corrected;
    rep.clamped_oracle += oracle.qp.clamped;
    if (dev) {
      we.e_delta_pred = dev->predict(o.word, markov, freq);
      auto pc = correct_distribution(we.raw, we.e_delta_pred, opts.qp);
      we.pred_corrected = pc.corrected;
      rep.clamped_pred += pc.qp.clamped;
      pred_corr.push_back(we.pred_corrected);
      pred_deltas.push_back(we.e_delta_pred);
    } else {
      we.pred_corrected = we.raw;
    }
    actual.push_back(we.actual);
    raw.push_back(we.raw);
    oracle_corr.push_back(we.oracle_corrected);
    log_assoc.push_back(we.log_associativity);
    deltas.push_back(we.e_delta);
    neg_deltas.push_back(-we.e_delta);
    expectations.push_back(we.expectation);
    kept.push_back(&o);
    rep.words.push_back(we);
  }
  rep.n_words = rep.words.size();
  rep.mse_raw = numerics::average_distribution_mse(raw, actual);
  rep.mse_oracle_corrected = numerics::average_distribution_mse(oracle_corr, actual);
  if (dev) {
    rep.mse_pred_corrected = numerics::average_distribution_mse(pred_corr, actual);
    double s = 0.0;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      s += (pred_deltas[i] - deltas[i]) * (pred_deltas[i] - deltas[i]);
    }
    rep.lasso_mse = deltas.empty() ? 0.0 : s / static_cast<double>(deltas.size());
  }
  if (log_assoc.size() >= 2) {
    rep.pearson_actual_minus_raw = numerics::pearson(log_assoc, deltas);
    rep.pearson_raw_minus_actual = numerics::pearson(log_assoc, neg_deltas);
  }

  const ClusterConfig cluster = level ? level->cluster : opts.cluster;
  if (expectations.size() >= 2) {
    rep.silhouette_by_k = silhouette_by_k(expectations, cluster.method, opts.silhouette_max_k);
  }
  if (level && expectations.size() >= static_cast<std::size_t>(cluster.k)) {
    const auto labels = cluster_levels(expectations, cluster);
    Eigen::MatrixXd scores(static_cast<Eigen::Index>(labels.size()), level->factors.m);
    std::vector<int> predicted(labels.size());
    std::vector<std::vector<double>> probs(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
      auto fv = feature_vector(kept[i]->word, sim.lexicon(), freq, markov, opts.features);
      auto c = classify_features(kept[i]->word, fv, *level);
      scores.row(static_cast<Eigen::Index>(i)) = c.scores.transpose();
      predicted[i] = c.level;
      probs[i] = level->ologit.probabilities(c.scores);
      rep.words[i].cluster_level = labels[i];
      rep.words[i].predicted_level = c.level;
      rep.words[i].y = c.y;
    }
    rep.accuracy = numerics::accuracy(predicted, labels);
    try {
      rep.macro_auc = numerics::macro_auc(labels, probs);
    } catch (const DataError& e) {
      rep.errors.push_back(std::string("macro AUC: ") + e.what());
    }
    numerics::OrdLogitModel scored = level->ologit;
    scored.n_obs = labels.size();
    scored.log_likelihood = numerics::ologit_log_likelihood(scored, scores, labels);
    rep.log_likelihood = scored.log_likelihood;
    rep.aic = scored.aic();
    rep.bic = scored.bic();
  } else if (!level && expectations.size() >= static_cast<std::size_t>(cluster.k)) {
    const auto labels = cluster_levels(expectations, cluster);
    for (std::size_t i = 0; i < labels.size(); ++i) {
      rep.words[i].cluster_level = labels[i];
    }
  }
  return rep;
}

} // namespace wordle
