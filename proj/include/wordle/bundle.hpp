#pragma once

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wordle/associativity.hpp"
#include "wordle/errors.hpp"
#include "wordle/lexicon.hpp"
#include "wordle/pipeline.hpp"

namespace wordle {

inline constexpr int kBundleSchemaVersion = 1;

struct BundleMetadata {
  std::string dictionary_digest;
  /// Paths as given when the bundle was made; relative paths resolve against the bundle's directory.
  std::string dictionary_path;
  std::string frequencies_path;
  std::uint64_t seed = 0;
  std::uint64_t reps = 0;
  std::string created;
  std::string note;

  bool operator==(const BundleMetadata&) const = default;
};

/// Everything needed to predict and classify without refitting.
struct ModelBundle {
  int schema_version = kBundleSchemaVersion;
  BundleMetadata metadata;
  MarkovModel markov;
  std::optional<DeviationModel> deviation;
  std::optional<LevelModel> level;

  void validate() const {
    if (schema_version != kBundleSchemaVersion) {
      throw DataError("unsupported bundle schema_version " + std::to_string(schema_version));
    }
    markov.validate(1e-9);
    if (deviation) {
      deviation->validate();
    }
    if (level) {
      level->validate();
    }
  }
};

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

namespace detail {

using nlohmann::json;

// NaN and infinities have no JSON spelling; they travel as null.
inline json real(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline double read_real(const json& j) {
  if (j.is_null()) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  if (!j.is_number()) {
    throw DataError("bundle: expected a number, got " + j.dump());
  }
  return j.get<double>();
}

inline json vec(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    a.push_back(real(v[i]));
  }
  return a;
}

inline Eigen::VectorXd read_vec(const json& j) {
  if (!j.is_array()) {
    throw DataError("bundle: expected an array, got " + j.dump());
  }
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = read_real(j[i]);
  }
  return v;
}

/// Row-major nested arrays.
inline json mat(const Eigen::MatrixXd& m) {
  json a = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    a.push_back(vec(m.row(r).transpose()));
  }
  return a;
}

inline Eigen::MatrixXd read_mat(const json& j) {
  if (!j.is_array()) {
    throw DataError("bundle: expected a matrix, got " + j.dump());
  }
  if (j.empty()) {
    return {};
  }
  const auto cols = j[0].size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols) {
      throw DataError("bundle: ragged matrix");
    }
    m.row(static_cast<Eigen::Index>(r)) = read_vec(j[r]).transpose();
  }
  return m;
}

template <std::size_t N>
std::array<double, N> read_array(const json& j, const char* what) {
  if (!j.is_array() || j.size() != N) {
    throw DataError(std::string("bundle: ") + what + " must have " + std::to_string(N) + " entries");
  }
  std::array<double, N> a{};
  for (std::size_t i = 0; i < N; ++i) {
    a[i] = read_real(j[i]);
  }
  return a;
}

template <std::size_t N>
json write_array(const std::array<double, N>& a) {
  json out = json::array();
  for (double v : a) {
    out.push_back(real(v));
  }
  return out;
}

inline json to_json(const MarkovModel& m) {
  json trans = json::array();
  for (const auto& row : m.trans) {
    trans.push_back(write_array(row));
  }
  return {{"smoothing", m.smoothing}, {"first", write_array(m.first)}, {"trans", trans}};
}

inline MarkovModel markov_from_json(const json& j) {
  MarkovModel m;
  m.smoothing = read_real(j.at("smoothing"));
  m.first = read_array<kAlphabetSize>(j.at("first"), "markov.first");
  const auto& t = j.at("trans");
  if (!t.is_array() || t.size() != kAlphabetSize) {
    throw DataError("bundle: markov.trans must have 26 rows");
  }
  for (std::size_t i = 0; i < kAlphabetSize; ++i) {
    m.trans[i] = read_array<kAlphabetSize>(t[i], "markov.trans row");
  }
  return m;
}

inline json to_json(const DeviationModel& d) {
  return {{"intercept", real(d.lasso.intercept)},
          {"coef", vec(d.lasso.coef)},
          {"alpha", d.lasso.alpha},
          {"sweeps", d.lasso.sweeps},
          {"converged", d.lasso.converged},
          {"features", {"log_associativity", "log1p_frequency"}},
          {"feature_mean", write_array(d.feature_mean)},
          {"feature_sd", write_array(d.feature_sd)},
          {"in_sample_mse", real(d.in_sample_mse)},
          {"pearson_log_assoc", real(d.pearson_log_assoc)},
          {"n_train", d.n_train}};
}

inline DeviationModel deviation_from_json(const json& j) {
  DeviationModel d;
  d.lasso.intercept = read_real(j.at("intercept"));
  d.lasso.coef = read_vec(j.at("coef"));
  d.lasso.alpha = read_real(j.at("alpha"));
  d.lasso.sweeps = j.value("sweeps", 0);
  d.lasso.converged = j.value("converged", true);
  d.feature_mean = read_array<2>(j.at("feature_mean"), "deviation.feature_mean");
  d.feature_sd = read_array<2>(j.at("feature_sd"), "deviation.feature_sd");
  d.in_sample_mse = read_real(j.value("in_sample_mse", json(nullptr)));
  d.pearson_log_assoc = read_real(j.value("pearson_log_assoc", json(nullptr)));
  d.n_train = j.value("n_train", std::size_t{0});
  return d;
}

inline json to_json(const LevelModel& l) {
  json feature_names = json::array();
  for (auto n : kFeatureNames) {
    feature_names.push_back(std::string(n));
  }
  json sil = json::array();
  for (const auto& [k, s] : l.silhouette) {
    sil.push_back({{"k", k}, {"silhouette", real(s)}});
  }
  json factors = {{"m", l.factors.m},
                  {"score_coef", mat(l.factors.score_coef)},
                  {"loadings", l.factors.loadings.size() ? mat(l.factors.loadings) : json(nullptr)},
                  {"eigenvalues", l.factors.eigenvalues}};
  json ologit = {{"k", l.ologit.k},
                 {"beta", vec(l.ologit.beta)},
                 {"cutpoints", vec(l.ologit.cutpoints)},
                 {"log_likelihood", real(l.ologit.log_likelihood)},
                 {"n_obs", l.ologit.n_obs},
                 {"iterations", l.ologit.iterations}};
  return {{"provenance", l.provenance == Provenance::PaperBundled ? "paper-bundled" : "fitted"},
          {"features", feature_names},
          {"standardization", {{"mean", write_array(l.standardization.mean)}, {"sd", write_array(l.standardization.sd)}}},
          {"factors", factors},
          {"ologit", ologit},
          {"cluster", {{"k", l.cluster.k}, {"method", to_string(l.cluster.method)}}},
          {"silhouette_by_k", sil},
          {"training_accuracy", real(l.training_accuracy)},
          {"training_auc", real(l.training_auc)}};
}

inline LevelModel level_from_json(const json& j) {
  LevelModel l;
  const auto prov = j.at("provenance").get<std::string>();
  if (prov == "paper-bundled") {
    l.provenance = Provenance::PaperBundled;
  } else if (prov == "fitted") {
    l.provenance = Provenance::Fitted;
  } else {
    throw DataError("bundle: unknown level provenance '" + prov + "'");
  }
  const auto& st = j.at("standardization");
  l.standardization.mean = read_array<kFeatureCount>(st.at("mean"), "standardization.mean");
  l.standardization.sd = read_array<kFeatureCount>(st.at("sd"), "standardization.sd");
  const auto& f = j.at("factors");
  l.factors.m = f.at("m").get<int>();
  l.factors.score_coef = read_mat(f.at("score_coef"));
  if (!f.value("loadings", json(nullptr)).is_null()) {
    l.factors.loadings = read_mat(f.at("loadings"));
  }
  if (f.contains("eigenvalues")) {
    for (const auto& v : f.at("eigenvalues")) {
      l.factors.eigenvalues.push_back(read_real(v));
    }
  }
  const auto& o = j.at("ologit");
  l.ologit.k = o.at("k").get<int>();
  l.ologit.beta = read_vec(o.at("beta"));
  l.ologit.cutpoints = read_vec(o.at("cutpoints"));
  l.ologit.log_likelihood = read_real(o.value("log_likelihood", json(nullptr)));
  l.ologit.n_obs = o.value("n_obs", std::size_t{0});
  l.ologit.iterations = o.value("iterations", 0);
  const auto& c = j.at("cluster");
  l.cluster.k = c.at("k").get<int>();
  l.cluster.method = parse_cluster_method(c.at("method").get<std::string>());
  if (j.contains("silhouette_by_k")) {
    for (const auto& e : j.at("silhouette_by_k")) {
      l.silhouette.emplace_back(e.at("k").get<int>(), read_real(e.at("silhouette")));
    }
  }
  l.training_accuracy = read_real(j.value("training_accuracy", json(nullptr)));
  l.training_auc = read_real(j.value("training_auc", json(nullptr)));
  return l;
}

} // namespace detail

inline nlohmann::json bundle_to_json(const ModelBundle& b) {
  using nlohmann::json;
  const auto& md = b.metadata;
  json meta = {{"dictionary_digest", md.dictionary_digest},
               {"dictionary", md.dictionary_path},
               {"frequencies", md.frequencies_path},
               {"seed", md.seed},
               {"reps", md.reps},
               {"created", md.created}};
  if (!md.note.empty()) {
    meta["note"] = md.note;
  }
  return {{"schema_version", b.schema_version},
          {"metadata", meta},
          {"markov", detail::to_json(b.markov)},
          {"deviation", b.deviation ? detail::to_json(*b.deviation) : json(nullptr)},
          {"level", b.level ? detail::to_json(*b.level) : json(nullptr)}};
}

/// Parses and validates a bundle. A schema version other than the supported one is rejected up front.
inline ModelBundle bundle_from_json(const nlohmann::json& j) {
  using nlohmann::json;
  if (!j.is_object() || !j.contains("schema_version") || !j["schema_version"].is_number_integer()) {
    throw DataError("bundle: missing integer schema_version");
  }
  ModelBundle b;
  b.schema_version = j["schema_version"].get<int>();
  if (b.schema_version > kBundleSchemaVersion) {
    throw DataError("bundle schema_version " + std::to_string(b.schema_version) +
                    " is newer than the supported version " + std::to_string(kBundleSchemaVersion) +
                    "; upgrade this tool");
  }
  if (b.schema_version != kBundleSchemaVersion) {
    throw DataError("bundle schema_version " + std::to_string(b.schema_version) + " is not supported");
  }
  try {
    const auto& md = j.at("metadata");
    b.metadata.dictionary_digest = md.value("dictionary_digest", "");
    b.metadata.dictionary_path = md.value("dictionary", "");
    b.metadata.frequencies_path = md.value("frequencies", "");
    b.metadata.seed = md.value("seed", std::uint64_t{0});
    b.metadata.reps = md.value("reps", std::uint64_t{0});
    b.metadata.created = md.value("created", "");
    b.metadata.note = md.value("note", "");
    b.markov = detail::markov_from_json(j.at("markov"));
    if (!j.value("deviation", json(nullptr)).is_null()) {
      b.deviation = detail::deviation_from_json(j.at("deviation"));
    }
    if (!j.value("level", json(nullptr)).is_null()) {
      b.level = detail::level_from_json(j.at("level"));
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("bundle: malformed field: ") + e.what());
  }
  b.validate();
  return b;
}

inline void save_bundle(const ModelBundle& b, const std::filesystem::path& path) {
  b.validate();
  std::ofstream out(path);
  if (!out) {
    throw DataError("cannot write bundle " + path.string());
  }
  out << bundle_to_json(b).dump(2) << '\n';
  if (!out) {
    throw DataError("failed writing bundle " + path.string());
  }
}

inline ModelBundle load_bundle(const std::filesystem::path& path) {
  auto in = detail::open_input(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(path.string() + ": invalid JSON: " + e.what());
  }
  try {
    return bundle_from_json(j);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

/// Warning text when a bundle was built against a different dictionary, else empty.
inline std::optional<std::string> digest_mismatch(const ModelBundle& b, const Lexicon& lex) {
  const auto d = lex.digest();
  if (b.metadata.dictionary_digest.empty() || b.metadata.dictionary_digest == d) {
    return std::nullopt;
  }
  return "bundle was built against dictionary digest " + b.metadata.dictionary_digest +
         " but the loaded dictionary has digest " + d;
}

} // namespace wordle
