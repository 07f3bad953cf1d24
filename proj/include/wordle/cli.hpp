#pragma once

#include <atomic>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wordle/bundle.hpp"
#include "wordle/features.hpp"
#include "wordle/lexicon.hpp"
#include "wordle/pipeline.hpp"
#include "wordle/simulator.hpp"

#ifndef WORDLE_DEFAULT_DATA_DIR
#define WORDLE_DEFAULT_DATA_DIR "data"
#endif

namespace wordle::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kNumerical = 3 };

using nlohmann::json;

/// Shortest round-trip decimal form, shared by CSV and JSON output.
inline std::string fmt_real(double v) {
  if (std::isnan(v)) {
    return "nan";
  }
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

inline std::filesystem::path data_dir() {
  if (const char* env = std::getenv("WORDLE_DATA_DIR"); env && *env) {
    return env;
  }
  return WORDLE_DEFAULT_DATA_DIR;
}

/// `paper` names the bundled published level model; anything else is a path.
inline std::filesystem::path resolve_bundle_path(const std::string& spec) {
  if (spec == "paper") {
    return data_dir() / "paper_bundle.json";
  }
  return spec;
}

namespace detail {

inline std::vector<Word> parse_words(const std::vector<std::string>& items) {
  std::vector<Word> out;
  for (const auto& s : items) {
    auto w = Word::parse(s);
    if (!w) {
      throw DataError("'" + s + "' is not a five-letter word");
    }
    out.push_back(*w);
  }
  return out;
}

/// Runs fn(i) for i in [0, n) on up to `threads` workers (0 = hardware concurrency).
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads == 0) {
    threads = std::max(1u, std::thread::hardware_concurrency());
  }
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      fn(i);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) {
              failure = std::current_exception();
            }
          }
        }
      });
    }
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
}

inline json dist_json(const GuessDistribution& d) {
  json a = json::array();
  for (double b : d.bins) {
    a.push_back(b);
  }
  return a;
}

inline json real_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json opt_json(const std::optional<double>& v) { return v ? real_or_null(*v) : json(nullptr); }

/// Output sink: a file when a path is given, the command's output stream otherwise.
class Sink {
public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) {
        throw DataError("cannot write " + path);
      }
    }
    out_ = path.empty() ? &fallback : &file_;
  }
  std::ostream& operator*() { return *out_; }

private:
  std::ofstream file_;
  std::ostream* out_;
};

struct Inputs {
  std::optional<Lexicon> lex;
  std::optional<FrequencyTable> freq;
  std::optional<ModelBundle> bundle;
  std::vector<std::string> warnings;
};

inline std::filesystem::path relative_to(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_relative() ? base.parent_path() / path : path;
}

inline void warn_all(std::ostream& err, const std::vector<std::string>& ws) {
  for (const auto& w : ws) {
    err << "warning: " << w << '\n';
  }
}

/// Loads the bundle (if named) and a dictionary and frequency table, falling
/// back to the paths recorded in the bundle when none are given.
inline Inputs load_inputs(const std::string& dict, const std::string& freq, const std::string& bundle,
                          bool need_freq) {
  Inputs in;
  std::filesystem::path bundle_path;
  if (!bundle.empty()) {
    bundle_path = resolve_bundle_path(bundle);
    in.bundle = load_bundle(bundle_path);
  }
  std::filesystem::path dict_path = dict;
  if (dict.empty() && in.bundle && !in.bundle->metadata.dictionary_path.empty()) {
    dict_path = relative_to(bundle_path, in.bundle->metadata.dictionary_path);
  }
  if (dict_path.empty()) {
    throw DataError("no dictionary: pass --dict or a bundle that records one");
  }
  in.lex = load_dictionary(dict_path);
  if (in.bundle) {
    if (auto w = digest_mismatch(*in.bundle, *in.lex)) {
      in.warnings.push_back(*w);
    }
  }
  std::filesystem::path freq_path = freq;
  if (freq.empty() && in.bundle && !in.bundle->metadata.frequencies_path.empty()) {
    freq_path = relative_to(bundle_path, in.bundle->metadata.frequencies_path);
  }
  if (!freq_path.empty()) {
    in.freq = load_frequencies(freq_path, *in.lex);
    if (!in.freq->missing.empty()) {
      in.warnings.push_back(std::to_string(in.freq->missing.size()) +
                            " dictionary words have no frequency entry and use 0");
    }
  } else if (need_freq) {
    throw DataError("no frequency table: pass --freq or a bundle that records one");
  }
  return in;
}

inline std::vector<ObservedRecord> load_results(const std::string& path, const Lexicon& lex, bool allow_oov,
                                                std::ostream& err) {
  ObservedLoadOptions o;
  o.allow_oov = allow_oov;
  auto r = load_observed_results(path, lex, o);
  warn_all(err, r.warnings);
  if (r.records.empty()) {
    throw DataError(path + ": no result rows");
  }
  return std::move(r.records);
}

inline std::vector<FeatureVector> compute_features(std::span<const Word> words, const Lexicon& lex,
                                                   const FrequencyTable& freq, const MarkovModel& markov,
                                                   const FeatureOptions& fopts, unsigned threads) {
  std::vector<FeatureVector> out(words.size());
  parallel_for(words.size(), threads, [&](std::size_t i) { out[i] = feature_vector(words[i], lex, freq, markov, fopts); });
  return out;
}

inline WindowAggregate parse_aggregate(const std::string& s) {
  if (s == "sum") return WindowAggregate::Sum;
  if (s == "mean") return WindowAggregate::Mean;
  if (s == "max") return WindowAggregate::Max;
  throw DataError("unknown window aggregate '" + s + "'");
}

inline numerics::WeightScale parse_weight_scale(const std::string& s) {
  if (s == "percent") return numerics::WeightScale::Percent;
  if (s == "fraction") return numerics::WeightScale::Fraction;
  throw DataError("unknown weight scale '" + s + "'");
}

} // namespace detail

/// Parses argv and runs one subcommand. Data goes to `out` (or --out files),
/// diagnostics to `err`. Returns 0 on success, 1 for usage errors, 2 for
/// data or validation errors and 3 for numerical failures.
inline int dispatch(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Wordle word difficulty: simulation, distribution correction and difficulty levels"};
  app.require_subcommand(1);

  // Shared option storage; each subcommand binds the subset it uses.
  std::string dict, freq, bundle, results, out_path, format, aggregate = "sum", weight_scale = "fraction";
  std::string out_dir = ".", cluster_method = "ward";
  std::vector<std::string> words;
  std::string word;
  bool all = false, allow_oov = false;
  std::uint64_t reps = kPaperReps, seed = 0;
  unsigned threads = 0;
  double smoothing = 0.0, alpha = kPaperAlpha;
  std::optional<double> e_delta;
  int k = 4, m = 4;

  auto add_format = [&](CLI::App* s, const std::string& def) {
    s->add_option("--format", format, "Output format (default: " + def + ")")->check(CLI::IsMember({"json", "csv"}));
  };
  auto add_sim = [&](CLI::App* s) {
    s->add_option("--reps", reps, "Simulated games per word")->check(CLI::PositiveNumber)->capture_default_str();
    s->add_option("--seed", seed, "Master random seed")->capture_default_str();
    s->add_option("--threads", threads, "Worker threads (0 = all cores)")->capture_default_str();
    s->add_flag("--allow-oov", allow_oov, "Admit words outside the dictionary");
  };
  auto add_feature_opts = [&](CLI::App* s) {
    s->add_option("--smoothing", smoothing, "Add-k smoothing of the letter chain")->check(CLI::NonNegativeNumber);
    s->add_option("--aggregate", aggregate, "String-count aggregation over windows")
        ->check(CLI::IsMember({"sum", "mean", "max"}))
        ->capture_default_str();
  };

  auto* simulate = app.add_subcommand("simulate", "Raw guess distributions of the random consistent player");
  simulate->add_option("--dict", dict, "Dictionary file")->required();
  auto* all_opt = simulate->add_flag("--all", all, "Simulate every dictionary word");
  simulate->add_option("--words", words, "Comma-separated words")->delimiter(',')->excludes(all_opt);
  simulate->add_option("--out", out_path, "Output file (default: stdout)");
  add_sim(simulate);
  add_format(simulate, "csv");

  auto* markov_cmd = app.add_subcommand("markov", "Letter-chain model or word associativity");
  markov_cmd->add_option("--dict", dict, "Dictionary file")->required();
  markov_cmd->add_option("--words", words, "Score these words instead of printing the model")->delimiter(',');
  markov_cmd->add_option("--smoothing", smoothing, "Add-k smoothing")->check(CLI::NonNegativeNumber);
  markov_cmd->add_option("--out", out_path, "Output file (default: stdout)");
  add_format(markov_cmd, "csv");

  auto* features = app.add_subcommand("features", "Lexical feature vectors");
  features->add_option("--dict", dict, "Dictionary file")->required();
  features->add_option("--freq", freq, "Word frequency CSV")->required();
  auto* fall = features->add_flag("--all", all, "Every dictionary word");
  features->add_option("--words", words, "Comma-separated words")->delimiter(',')->excludes(fall);
  features->add_option("--threads", threads, "Worker threads (0 = all cores)");
  features->add_option("--out", out_path, "Output file (default: stdout)");
  add_feature_opts(features);
  add_format(features, "csv");

  auto* fit_dev = app.add_subcommand("fit-deviation", "Fit the expectation-deviation regression");
  fit_dev->add_option("--dict", dict, "Dictionary file")->required();
  fit_dev->add_option("--freq", freq, "Word frequency CSV")->required();
  fit_dev->add_option("--results", results, "Observed results CSV")->required();
  fit_dev->add_option("--alpha", alpha, "Lasso penalty")->check(CLI::NonNegativeNumber)->capture_default_str();
  fit_dev->add_option("--smoothing", smoothing, "Add-k smoothing")->check(CLI::NonNegativeNumber);
  fit_dev->add_option("--bundle", bundle, "Existing bundle whose level model is kept");
  fit_dev->add_option("--out", out_path, "Bundle file to write")->required();
  add_sim(fit_dev);

  auto* predict = app.add_subcommand("predict", "Predicted guess distribution of a word");
  predict->add_option("--word", word, "Word")->required();
  predict->add_option("--bundle", bundle, "Model bundle (path or 'paper')")->required();
  predict->add_option("--dict", dict, "Dictionary file (default: from bundle)");
  predict->add_option("--freq", freq, "Word frequency CSV (default: from bundle)");
  predict->add_option("--e-delta", e_delta, "Use this expectation deviation instead of the model");
  predict->add_option("--weight-scale", weight_scale, "Scale of the correction weights")
      ->check(CLI::IsMember({"percent", "fraction"}))
      ->capture_default_str();
  add_sim(predict);
  add_format(predict, "json");

  auto* fit_levels = app.add_subcommand("fit-levels", "Fit the difficulty-level model");
  fit_levels->add_option("--dict", dict, "Dictionary file")->required();
  fit_levels->add_option("--freq", freq, "Word frequency CSV")->required();
  fit_levels->add_option("--results", results, "Observed results CSV")->required();
  fit_levels->add_option("--k", k, "Difficulty levels")->check(CLI::Range(2, 20))->capture_default_str();
  fit_levels->add_option("--m", m, "Factors")->check(CLI::Range(1, 10))->capture_default_str();
  fit_levels->add_option("--cluster", cluster_method, "Clustering of expectations")
      ->check(CLI::IsMember({"ward", "average", "kmeans"}))
      ->capture_default_str();
  fit_levels->add_option("--bundle", bundle, "Existing bundle whose deviation model is kept");
  fit_levels->add_option("--out", out_path, "Bundle file to write")->required();
  fit_levels->add_option("--threads", threads, "Worker threads (0 = all cores)");
  fit_levels->add_flag("--allow-oov", allow_oov, "Admit words outside the dictionary");
  add_feature_opts(fit_levels);

  auto* classify = app.add_subcommand("classify", "Difficulty level of a word");
  classify->add_option("--word", word, "Word")->required();
  classify->add_option("--bundle", bundle, "Model bundle (path or 'paper')")->required();
  classify->add_option("--dict", dict, "Dictionary file (default: from bundle)");
  classify->add_option("--freq", freq, "Word frequency CSV (default: from bundle)");
  classify->add_option("--aggregate", aggregate, "String-count aggregation over windows")
      ->check(CLI::IsMember({"sum", "mean", "max"}));
  add_format(classify, "json");

  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score a bundle against observed results");
  evaluate_cmd->add_option("--results", results, "Observed results CSV")->required();
  evaluate_cmd->add_option("--dict", dict, "Dictionary file")->required();
  evaluate_cmd->add_option("--bundle", bundle, "Model bundle (path or 'paper')")->required();
  evaluate_cmd->add_option("--freq", freq, "Word frequency CSV (default: from bundle)");
  evaluate_cmd->add_option("--weight-scale", weight_scale, "Scale of the correction weights")
      ->check(CLI::IsMember({"percent", "fraction"}));
  evaluate_cmd->add_option("--aggregate", aggregate, "String-count aggregation over windows")
      ->check(CLI::IsMember({"sum", "mean", "max"}));
  add_sim(evaluate_cmd);
  add_format(evaluate_cmd, "json");

  auto* plot = app.add_subcommand("emit-plot-data", "Long-format CSVs for the distribution, deviation and level figures");
  plot->add_option("--results", results, "Observed results CSV")->required();
  plot->add_option("--dict", dict, "Dictionary file")->required();
  plot->add_option("--bundle", bundle, "Model bundle (path or 'paper')")->required();
  plot->add_option("--freq", freq, "Word frequency CSV (default: from bundle)");
  plot->add_option("--out-dir", out_dir, "Directory for the CSV files")->capture_default_str();
  plot->add_option("--weight-scale", weight_scale, "Scale of the correction weights")
      ->check(CLI::IsMember({"percent", "fraction"}));
  add_sim(plot);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    const CLI::App* target = &app;
    for (const auto* s : app.get_subcommands()) {
      target = s;
    }
    out << target->help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    const CLI::App* target = &app;
    for (const auto* s : app.get_subcommands()) {
      target = s;
    }
    err << "error: " << e.what() << "\n\n" << target->help();
    return kUsage;
  }

  if (format.empty()) {
    format = simulate->parsed() || markov_cmd->parsed() || features->parsed() ? "csv" : "json";
  }

  SimulationOptions sim_opts;
  sim_opts.allow_oov = allow_oov;
  sim_opts.threads = threads;
  FeatureOptions fopts;
  numerics::QpOptions qp_opts;

  try {
    fopts.aggregate = detail::parse_aggregate(aggregate);
    qp_opts.weight_scale = detail::parse_weight_scale(weight_scale);

    if (simulate->parsed()) {
      const auto lex = load_dictionary(dict);
      std::vector<Word> targets = all ? lex.words() : detail::parse_words(words);
      if (targets.empty()) {
        throw DataError("nothing to simulate: pass --all or --words");
      }
      Simulator sim(lex);
      const auto outcomes = sim.simulate_corpus(targets, reps, seed, sim_opts);
      detail::Sink sink(out_path, out);
      int failures = 0;
      json arr = json::array();
      if (format == "csv") {
        *sink << "word,p1,p2,p3,p4,p5,p6,px,expectation,reps,seed\n";
      }
      for (const auto& o : outcomes) {
        if (!o.ok()) {
          err << "error: " << o.word.str() << ": " << o.error << '\n';
          ++failures;
          continue;
        }
        const auto& r = *o.report;
        detail::warn_all(err, r.warnings);
        if (format == "csv") {
          *sink << r.word.str();
          for (double b : r.raw.bins) {
            *sink << ',' << fmt_real(b);
          }
          *sink << ',' << fmt_real(r.expectation) << ',' << r.reps << ',' << r.seed << '\n';
        } else {
          arr.push_back({{"word", r.word.str()},
                         {"raw", detail::dist_json(r.raw)},
                         {"expectation", r.expectation},
                         {"reps", r.reps},
                         {"seed", r.seed},
                         {"warnings", r.warnings}});
        }
      }
      if (format == "json") {
        *sink << arr.dump(2) << '\n';
      }
      return failures ? kData : kOk;
    }

    if (markov_cmd->parsed()) {
      const auto lex = load_dictionary(dict);
      const auto model = build_markov(lex, smoothing);
      detail::Sink sink(out_path, out);
      if (!words.empty()) {
        const auto ws = detail::parse_words(words);
        json arr = json::array();
        if (format == "csv") {
          *sink << "word,associativity,log_associativity\n";
        }
        for (const auto& w : ws) {
          const auto a = associativity(model, w);
          if (format == "csv") {
            *sink << w.str() << ',' << fmt_real(a.raw) << ',' << fmt_real(a.log_raw) << '\n';
          } else {
            arr.push_back({{"word", w.str()}, {"associativity", a.raw}, {"log_associativity", a.log_raw}});
          }
        }
        if (format == "json") {
          *sink << arr.dump(2) << '\n';
        }
        return kOk;
      }
      if (format == "json") {
        *sink << wordle::detail::to_json(model).dump(2) << '\n';
      } else {
        // "^" marks the start of a word: its row holds the first-letter probabilities.
        *sink << "from,to,probability\n";
        for (int j = 0; j < kAlphabetSize; ++j) {
          *sink << "^," << static_cast<char>('a' + j) << ',' << fmt_real(model.first[j]) << '\n';
        }
        for (int i = 0; i < kAlphabetSize; ++i) {
          for (int j = 0; j < kAlphabetSize; ++j) {
            *sink << static_cast<char>('a' + i) << ',' << static_cast<char>('a' + j) << ','
                  << fmt_real(model.trans[i][j]) << '\n';
          }
        }
      }
      return kOk;
    }

    if (features->parsed()) {
      const auto lex = load_dictionary(dict);
      const auto ft = load_frequencies(freq, lex);
      const auto model = build_markov(lex, smoothing);
      std::vector<Word> targets = all ? lex.words() : detail::parse_words(words);
      if (targets.empty()) {
        throw DataError("nothing to compute: pass --all or --words");
      }
      const auto fv = detail::compute_features(targets, lex, ft, model, fopts, threads);
      detail::Sink sink(out_path, out);
      if (format == "csv") {
        *sink << "word";
        for (auto n : kFeatureNames) {
          *sink << ',' << n;
        }
        *sink << '\n';
        for (std::size_t i = 0; i < targets.size(); ++i) {
          *sink << targets[i].str();
          for (double v : fv[i].to_array()) {
            *sink << ',' << fmt_real(v);
          }
          *sink << '\n';
        }
      } else {
        json arr = json::array();
        for (std::size_t i = 0; i < targets.size(); ++i) {
          json row = {{"word", targets[i].str()}};
          const auto a = fv[i].to_array();
          for (std::size_t j = 0; j < kFeatureCount; ++j) {
            row[std::string(kFeatureNames[j])] = a[j];
          }
          arr.push_back(row);
        }
        *sink << arr.dump(2) << '\n';
      }
      return kOk;
    }

    if (fit_dev->parsed()) {
      auto in = detail::load_inputs(dict, freq, bundle, true);
      detail::warn_all(err, in.warnings);
      const auto observed = detail::load_results(results, *in.lex, allow_oov, err);
      Simulator sim(*in.lex);
      std::vector<Word> ws;
      for (const auto& o : observed) {
        ws.push_back(o.word);
      }
      const auto outcomes = sim.simulate_corpus(ws, reps, seed, sim_opts);
      std::vector<SimulationReport> reports;
      std::set<Word> seen;
      for (const auto& o : outcomes) {
        if (!o.ok()) {
          throw DataError(o.word.str() + ": " + o.error);
        }
        if (seen.insert(o.word).second) {
          reports.push_back(*o.report);
        }
      }
      ModelBundle b;
      if (in.bundle) {
        b.level = in.bundle->level;
      }
      b.markov = build_markov(*in.lex, smoothing);
      b.deviation = fit_deviation_model(reports, observed, b.markov, *in.freq, alpha);
      b.metadata = {in.lex->digest(),
                    std::filesystem::absolute(dict).string(),
                    std::filesystem::absolute(freq).string(),
                    seed,
                    reps,
                    utc_timestamp(),
                    ""};
      save_bundle(b, out_path);
      const auto& d = *b.deviation;
      json summary = {{"n_train", d.n_train},
                      {"intercept", d.lasso.intercept},
                      {"coef", {d.lasso.coef[0], d.lasso.coef[1]}},
                      {"alpha", d.lasso.alpha},
                      {"in_sample_mse", detail::real_or_null(d.in_sample_mse)},
                      {"pearson_log_assoc", detail::real_or_null(d.pearson_log_assoc)},
                      {"bundle", out_path}};
      out << summary.dump(2) << '\n';
      return kOk;
    }

    if (predict->parsed()) {
      auto in = detail::load_inputs(dict, freq, bundle, !e_delta.has_value());
      detail::warn_all(err, in.warnings);
      const Word w = detail::parse_words({word}).front();
      Simulator sim(*in.lex);
      PredictOptions po;
      po.reps = reps;
      po.seed = seed;
      po.simulation = sim_opts;
      po.qp = qp_opts;
      po.e_delta_override = e_delta;
      const FrequencyTable empty_freq;
      const auto p = predict_distribution(w, sim, in.bundle->deviation ? &*in.bundle->deviation : nullptr,
                                          in.bundle->markov, in.freq ? *in.freq : empty_freq, po);
      if (format == "json") {
        json j = {{"word", p.word.str()},
                  {"raw", detail::dist_json(p.raw)},
                  {"e_delta_pred", p.e_delta_pred},
                  {"corrected", detail::dist_json(p.corrected)},
                  {"warnings", p.warnings}};
        out << j.dump(2) << '\n';
      } else {
        out << "word,series,p1,p2,p3,p4,p5,p6,px,e_delta_pred\n";
        for (const auto& [name, d] : {std::pair{"raw", p.raw}, std::pair{"corrected", p.corrected}}) {
          out << p.word.str() << ',' << name;
          for (double b : d.bins) {
            out << ',' << fmt_real(b);
          }
          out << ',' << fmt_real(p.e_delta_pred) << '\n';
        }
        detail::warn_all(err, p.warnings);
      }
      return kOk;
    }

    if (fit_levels->parsed()) {
      auto in = detail::load_inputs(dict, freq, bundle, true);
      detail::warn_all(err, in.warnings);
      const auto observed = detail::load_results(results, *in.lex, allow_oov, err);
      const auto model = build_markov(*in.lex, smoothing);
      std::vector<Word> ws;
      for (const auto& o : observed) {
        ws.push_back(o.word);
      }
      const auto fv = detail::compute_features(ws, *in.lex, *in.freq, model, fopts, threads);
      LevelFitOptions lo;
      lo.cluster = {k, parse_cluster_method(cluster_method)};
      lo.factors = m;
      ModelBundle b;
      if (in.bundle) {
        b.deviation = in.bundle->deviation;
      }
      b.markov = model;
      b.level = fit_level_model(observed, fv, lo);
      b.metadata = {in.lex->digest(),
                    std::filesystem::absolute(dict).string(),
                    std::filesystem::absolute(freq).string(),
                    in.bundle ? in.bundle->metadata.seed : 0,
                    in.bundle ? in.bundle->metadata.reps : 0,
                    utc_timestamp(),
                    ""};
      save_bundle(b, out_path);
      const auto& l = *b.level;
      json sil = json::array();
      for (const auto& [kk, s] : l.silhouette) {
        sil.push_back({{"k", kk}, {"silhouette", detail::real_or_null(s)}});
      }
      json summary = {{"n_train", observed.size()},
                      {"beta", wordle::detail::vec(l.ologit.beta)},
                      {"cutpoints", wordle::detail::vec(l.ologit.cutpoints)},
                      {"training_accuracy", detail::real_or_null(l.training_accuracy)},
                      {"training_auc", detail::real_or_null(l.training_auc)},
                      {"aic", detail::real_or_null(l.ologit.aic())},
                      {"bic", detail::real_or_null(l.ologit.bic())},
                      {"silhouette_by_k", sil},
                      {"bundle", out_path}};
      out << summary.dump(2) << '\n';
      return kOk;
    }

    if (classify->parsed()) {
      auto in = detail::load_inputs(dict, freq, bundle, true);
      detail::warn_all(err, in.warnings);
      if (!in.bundle->level) {
        throw DataError("bundle has no level model");
      }
      const Word w = detail::parse_words({word}).front();
      const auto c = classify_word(w, *in.bundle->level, *in.lex, *in.freq, in.bundle->markov, fopts);
      if (format == "json") {
        json j = {{"word", c.word.str()}, {"scores", wordle::detail::vec(c.scores)}, {"y", c.y}, {"level", c.level}};
        out << j.dump(2) << '\n';
      } else {
        out << "word";
        for (Eigen::Index i = 0; i < c.scores.size(); ++i) {
          out << ",F" << (i + 1);
        }
        out << ",y,level\n" << c.word.str();
        for (Eigen::Index i = 0; i < c.scores.size(); ++i) {
          out << ',' << fmt_real(c.scores[i]);
        }
        out << ',' << fmt_real(c.y) << ',' << c.level << '\n';
      }
      return kOk;
    }

    if (evaluate_cmd->parsed() || plot->parsed()) {
      auto in = detail::load_inputs(dict, freq, bundle, false);
      detail::warn_all(err, in.warnings);
      const auto observed = detail::load_results(results, *in.lex, allow_oov, err);
      const bool have_freq = in.freq.has_value();
      const FrequencyTable empty_freq;
      const auto& b = *in.bundle;
      const DeviationModel* dev = b.deviation && have_freq ? &*b.deviation : nullptr;
      const LevelModel* level = b.level && have_freq ? &*b.level : nullptr;
      if ((b.deviation || b.level) && !have_freq) {
        err << "warning: no frequency table; model-based metrics are skipped\n";
      }
      Simulator sim(*in.lex);
      EvaluateOptions eo;
      eo.reps = reps;
      eo.seed = seed;
      eo.simulation = sim_opts;
      eo.qp = qp_opts;
      eo.features = fopts;
      const auto rep = evaluate(observed, sim, dev, b.markov, have_freq ? *in.freq : empty_freq, level, eo);
      for (const auto& e : rep.errors) {
        err << "error: " << e << '\n';
      }

      if (plot->parsed()) {
        std::filesystem::create_directories(out_dir);
        const std::filesystem::path dir(out_dir);
        std::ofstream f1(dir / "fig1_distributions.csv"), f2(dir / "fig2_associativity_deviation.csv"),
            f3(dir / "fig3_levels.csv");
        if (!f1 || !f2 || !f3) {
          throw DataError("cannot write plot data into " + out_dir);
        }
        f1 << "word,series,tries,percent\n";
        f2 << "word,log_associativity,e_delta,e_delta_pred\n";
        f3 << "word,expectation,cluster_level,predicted_level,y\n";
        static constexpr const char* kTries[kBins] = {"1", "2", "3", "4", "5", "6", "X"};
        for (const auto& we : rep.words) {
          const std::pair<const char*, const GuessDistribution*> series[] = {
              {"actual", &we.actual}, {"raw", &we.raw}, {"predicted", &we.pred_corrected},
              {"oracle", &we.oracle_corrected}};
          for (const auto& [name, d] : series) {
            for (std::size_t i = 0; i < kBins; ++i) {
              f1 << we.word.str() << ',' << name << ',' << kTries[i] << ',' << fmt_real(d->bins[i]) << '\n';
            }
          }
          f2 << we.word.str() << ',' << fmt_real(we.log_associativity) << ',' << fmt_real(we.e_delta) << ','
             << (dev ? fmt_real(we.e_delta_pred) : std::string()) << '\n';
          f3 << we.word.str() << ',' << fmt_real(we.expectation) << ',' << we.cluster_level << ','
             << (level ? std::to_string(we.predicted_level) : std::string()) << ','
             << (level ? fmt_real(we.y) : std::string()) << '\n';
        }
        out << (dir / "fig1_distributions.csv").string() << '\n'
            << (dir / "fig2_associativity_deviation.csv").string() << '\n'
            << (dir / "fig3_levels.csv").string() << '\n';
        return rep.errors.empty() ? kOk : kData;
      }

      json sil = json::array();
      for (const auto& [kk, s] : rep.silhouette_by_k) {
        sil.push_back({{"k", kk}, {"silhouette", detail::real_or_null(s)}});
      }
      json j = {{"n_words", rep.n_words},
                {"mse_raw", rep.mse_raw},
                {"mse_pred_corrected", detail::opt_json(rep.mse_pred_corrected)},
                {"mse_oracle_corrected", rep.mse_oracle_corrected},
                {"lasso_mse", detail::opt_json(rep.lasso_mse)},
                {"pearson_r_both_signs",
                 {{"actual_minus_raw", detail::real_or_null(rep.pearson_actual_minus_raw)},
                  {"raw_minus_actual", detail::real_or_null(rep.pearson_raw_minus_actual)}}},
                {"accuracy", detail::opt_json(rep.accuracy)},
                {"macro_auc", detail::opt_json(rep.macro_auc)},
                {"aic", detail::opt_json(rep.aic)},
                {"bic", detail::opt_json(rep.bic)},
                {"silhouette_by_k", sil},
                {"clamped_predicted", rep.clamped_pred},
                {"clamped_oracle", rep.clamped_oracle},
                {"notes", rep.notes}};
      if (format == "json") {
        out << j.dump(2) << '\n';
      } else {
        auto num = [](const json& v) { return v.is_null() ? std::string() : fmt_real(v.get<double>()); };
        out << "metric,value\n";
        out << "n_words," << rep.n_words << '\n';
        for (const char* key : {"mse_raw", "mse_pred_corrected", "mse_oracle_corrected", "lasso_mse", "accuracy",
                                "macro_auc", "aic", "bic"}) {
          out << key << ',' << num(j[key]) << '\n';
        }
        out << "pearson_r_actual_minus_raw," << num(j["pearson_r_both_signs"]["actual_minus_raw"]) << '\n';
        out << "pearson_r_raw_minus_actual," << num(j["pearson_r_both_signs"]["raw_minus_actual"]) << '\n';
        for (const auto& [kk, s] : rep.silhouette_by_k) {
          out << "silhouette_k" << kk << ',' << fmt_real(s) << '\n';
        }
        out << "clamped_predicted," << rep.clamped_pred << '\n' << "clamped_oracle," << rep.clamped_oracle << '\n';
        for (const auto& n : rep.notes) {
          err << "note: " << n << '\n';
        }
      }
      return rep.errors.empty() ? kOk : kData;
    }
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kNumerical;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kData;
  }
  return kUsage;
}

inline int dispatch(const std::vector<std::string>& args, std::ostream& out = std::cout,
                    std::ostream& err = std::cerr) {
  std::vector<const char*> argv{"wordle-difficulty"};
  for (const auto& a : args) {
    argv.push_back(a.c_str());
  }
  return dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
}

} // namespace wordle::cli
