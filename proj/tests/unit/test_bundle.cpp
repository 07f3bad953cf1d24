#include <gtest/gtest.h>

#include "wordle/bundle.hpp"
#include "support/generators.hpp"
#include "support/tempdir.hpp"

using namespace wordle;

namespace {

ModelBundle sample_bundle() {
  std::mt19937_64 rng(121);
  auto lex = gen::lexicon(rng, 80);
  ModelBundle b;
  b.markov = build_markov(lex, 0.37);
  b.metadata.dictionary_digest = lex.digest();
  b.metadata.dictionary_path = "dictionary.txt";
  b.metadata.frequencies_path = "/abs/frequencies.csv";
  b.metadata.seed = 0xdeadbeefcafef00dULL;
  b.metadata.reps = 12345;
  b.metadata.created = utc_timestamp();
  b.metadata.note = "unit";

  DeviationModel d;
  d.lasso.coef = Eigen::Vector2d(-0.1234567890123456, 1.0 / 3.0);
  d.lasso.intercept = 0.1 + 0.2;
  d.lasso.alpha = 0.01;
  d.lasso.sweeps = 17;
  d.lasso.converged = true;
  d.feature_mean = {-14.285714285714286, 2.718281828459045};
  d.feature_sd = {3.141592653589793, 1e-7};
  d.in_sample_mse = 0.069;
  d.pearson_log_assoc = std::nan("");
  d.n_train = 359;
  b.deviation = d;

  std::vector<FeatureVector> rows;
  std::normal_distribution<double> nd;
  for (int i = 0; i < 40; ++i) {
    std::array<double, kFeatureCount> a{};
    for (auto& v : a) {
      v = std::abs(nd(rng)) * 3.0;
    }
    rows.push_back(FeatureVector::from_array(a));
  }
  auto st = standardize(rows);
  LevelModel level;
  level.standardization = st.params;
  level.factors = numerics::factor_fit(st.z, 3);
  level.ologit.k = 3;
  level.ologit.beta = Eigen::Vector3d(0.7, -1.0 / 7.0, 2e-300);
  level.ologit.cutpoints = Eigen::Vector2d(-0.5, 1.25);
  level.ologit.log_likelihood = -123.456;
  level.ologit.n_obs = 40;
  level.ologit.iterations = 6;
  level.cluster = {3, ClusterMethod::Average};
  level.silhouette = {{2, 0.61}, {3, 0.58}, {4, 0.5}};
  level.training_accuracy = 0.725;
  level.training_auc = std::nan("");
  b.level = level;
  return b;
}

bool same(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

void expect_identical(const ModelBundle& a, const ModelBundle& b) {
  EXPECT_EQ(a.schema_version, b.schema_version);
  EXPECT_EQ(a.metadata, b.metadata);
  EXPECT_EQ(a.markov.first, b.markov.first);
  EXPECT_EQ(a.markov.trans, b.markov.trans);
  EXPECT_EQ(a.markov.smoothing, b.markov.smoothing);
  ASSERT_EQ(a.deviation.has_value(), b.deviation.has_value());
  if (a.deviation) {
    const auto &x = *a.deviation, &y = *b.deviation;
    EXPECT_EQ(x.lasso.coef, y.lasso.coef);
    EXPECT_EQ(x.lasso.intercept, y.lasso.intercept);
    EXPECT_EQ(x.lasso.alpha, y.lasso.alpha);
    EXPECT_EQ(x.feature_mean, y.feature_mean);
    EXPECT_EQ(x.feature_sd, y.feature_sd);
    EXPECT_TRUE(same(x.in_sample_mse, y.in_sample_mse));
    EXPECT_TRUE(same(x.pearson_log_assoc, y.pearson_log_assoc));
    EXPECT_EQ(x.n_train, y.n_train);
  }
  ASSERT_EQ(a.level.has_value(), b.level.has_value());
  if (a.level) {
    const auto &x = *a.level, &y = *b.level;
    EXPECT_EQ(x.standardization, y.standardization);
    EXPECT_EQ(x.factors.m, y.factors.m);
    EXPECT_EQ(x.factors.score_coef, y.factors.score_coef);
    EXPECT_EQ(x.factors.loadings, y.factors.loadings);
    EXPECT_EQ(x.factors.eigenvalues, y.factors.eigenvalues);
    EXPECT_EQ(x.ologit.k, y.ologit.k);
    EXPECT_EQ(x.ologit.beta, y.ologit.beta);
    EXPECT_EQ(x.ologit.cutpoints, y.ologit.cutpoints);
    EXPECT_TRUE(same(x.ologit.log_likelihood, y.ologit.log_likelihood));
    EXPECT_EQ(x.ologit.n_obs, y.ologit.n_obs);
    EXPECT_EQ(x.cluster.k, y.cluster.k);
    EXPECT_EQ(x.cluster.method, y.cluster.method);
    EXPECT_EQ(x.provenance, y.provenance);
    EXPECT_EQ(x.silhouette, y.silhouette);
    EXPECT_TRUE(same(x.training_accuracy, y.training_accuracy));
    EXPECT_TRUE(same(x.training_auc, y.training_auc));
  }
}

} // namespace

TEST(Bundle, RoundTripIsBitIdentical) {
  TempDir dir;
  const auto b = sample_bundle();
  save_bundle(b, dir / "b.json");
  const auto loaded = load_bundle(dir / "b.json");
  expect_identical(b, loaded);
  // A second pass writes the same bytes.
  save_bundle(loaded, dir / "c.json");
  EXPECT_EQ(slurp(dir / "b.json"), slurp(dir / "c.json"));
}

TEST(Bundle, OptionalPartsMayBeNull) {
  TempDir dir;
  auto b = sample_bundle();
  b.deviation.reset();
  b.level->provenance = Provenance::Fitted;
  save_bundle(b, dir / "b.json");
  auto j = nlohmann::json::parse(slurp(dir / "b.json"));
  EXPECT_TRUE(j["deviation"].is_null());
  expect_identical(b, load_bundle(dir / "b.json"));
}

TEST(Bundle, PaperModelRoundTrip) {
  TempDir dir;
  auto b = sample_bundle();
  b.level = paper_level_model(b.level->standardization);
  save_bundle(b, dir / "p.json");
  auto loaded = load_bundle(dir / "p.json");
  expect_identical(b, loaded);
  EXPECT_EQ(loaded.level->provenance, Provenance::PaperBundled);
  EXPECT_EQ(nlohmann::json::parse(slurp(dir / "p.json"))["level"]["provenance"], "paper-bundled");
}

TEST(Bundle, NonIncreasingCutpointsRejected) {
  auto j = bundle_to_json(sample_bundle());
  j["level"]["ologit"]["cutpoints"] = {1.0, 1.0};
  EXPECT_THROW(bundle_from_json(j), DataError);
  j["level"]["ologit"]["cutpoints"] = {1.0, -1.0};
  EXPECT_THROW(bundle_from_json(j), DataError);
}

TEST(Bundle, NewerSchemaRejectedWithExplicitMessage) {
  auto j = bundle_to_json(sample_bundle());
  j["schema_version"] = kBundleSchemaVersion + 1;
  try {
    bundle_from_json(j);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("newer"), std::string::npos);
  }
  j.erase("schema_version");
  EXPECT_THROW(bundle_from_json(j), DataError);
}

TEST(Bundle, InvariantViolationsRejected) {
  auto good = bundle_to_json(sample_bundle());
  {
    auto j = good;
    j["markov"]["first"][0] = 5.0;
    EXPECT_THROW(bundle_from_json(j), DataError);
  }
  {
    auto j = good;
    j["deviation"]["feature_sd"][0] = 0.0;
    EXPECT_THROW(bundle_from_json(j), DataError);
  }
  {
    auto j = good;
    j["level"]["standardization"]["sd"][3] = -1.0;
    EXPECT_THROW(bundle_from_json(j), DataError);
  }
  {
    auto j = good;
    j["level"]["cluster"]["k"] = 5;
    EXPECT_THROW(bundle_from_json(j), DataError);
  }
  {
    auto j = good;
    j["level"].erase("ologit");
    EXPECT_THROW(bundle_from_json(j), DataError);
  }
  TempDir dir;
  dir.write("bad.json", "{ not json");
  EXPECT_THROW(load_bundle(dir / "bad.json"), DataError);
  EXPECT_THROW(load_bundle(dir / "missing.json"), DataError);
}

TEST(Bundle, DigestMismatchIsAWarning) {
  auto b = sample_bundle();
  auto other = Lexicon::from_strings({"crane", "slate"});
  auto w = digest_mismatch(b, other);
  ASSERT_TRUE(w.has_value());
  EXPECT_NE(w->find(other.digest()), std::string::npos);
  b.metadata.dictionary_digest = other.digest();
  EXPECT_FALSE(digest_mismatch(b, other).has_value());
}
