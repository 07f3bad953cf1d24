#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdint>
#include <exception>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "wordle/distribution.hpp"
#include "wordle/feedback.hpp"
#include "wordle/lexicon.hpp"
#include "wordle/random.hpp"

namespace wordle {

struct SimulationOptions {
  /// Simulate solutions outside the lexicon by appending them to the candidate list.
  bool allow_oov = false;
  /// Worker threads for corpus runs; 0 means hardware concurrency.
  unsigned threads = 0;
};

struct SimulationReport {
  Word word;
  std::uint64_t reps = 0;
  std::uint64_t seed = 0;
  GuessDistribution raw;
  double expectation = 0.0;
  std::vector<std::string> warnings;
};

/// Per-word result of a corpus run: either a report or the error that stopped that word.
struct SimulationOutcome {
  Word word;
  std::optional<SimulationReport> report;
  std::string error;

  bool ok() const noexcept { return report.has_value(); }
};

namespace detail {

/// One game of the random consistent-guess player over candidate indices
/// 0..n_total-1. `row_of(g)` returns a callable mapping a candidate index to
/// the feedback code of guess g against it. `observe(round, candidates)` sees
/// the candidate list at the start of every round after the first.
template <class RowOf, class Observer>
int play_indices(std::uint32_t n_total, std::uint32_t solution, RowOf&& row_of, Rng& rng,
                 std::vector<std::uint32_t>& cand, Observer&& observe) {
  auto guess = static_cast<std::uint32_t>(uniform_below(rng, n_total));
  if (guess == solution) {
    return 1;
  }
  {
    auto row = row_of(guess);
    const auto target = row(solution);
    cand.resize(n_total);
    std::uint32_t kept = 0;
    for (std::uint32_t c = 0; c < n_total; ++c) {
      cand[kept] = c;
      kept += static_cast<std::uint32_t>(row(c) == target);
    }
    cand.resize(kept);
  }
  for (int round = 2; round <= kMaxGuesses; ++round) {
    observe(round, std::span<const std::uint32_t>(cand));
    guess = cand[uniform_below(rng, cand.size())];
    if (guess == solution) {
      return round;
    }
    auto row = row_of(guess);
    const auto target = row(solution);
    std::size_t kept = 0;
    for (auto c : cand) {
      cand[kept] = c;
      kept += static_cast<std::size_t>(row(c) == target);
    }
    cand.resize(kept);
  }
  return kFail;
}

struct NoObserver {
  void operator()(int, std::span<const std::uint32_t>) const noexcept {}
};

inline std::uint64_t oov_key(const Word& w) noexcept { return (std::uint64_t{1} << 63) | w.packed(); }

} // namespace detail

/// Plays one game directly on words (no precomputed table). Returns the
/// 1-based winning round or kFail. Throws DataError when the solution is not
/// in the lexicon unless `allow_oov`, in which case it is appended to the
/// candidate list and a warning is pushed.
template <class Observer = detail::NoObserver>
int play_random_game(const Word& solution, const Lexicon& lex, Rng& rng, bool allow_oov = false,
                     std::vector<std::string>* warnings = nullptr, Observer&& observe = {}) {
  std::vector<Word> words = lex.words();
  std::uint32_t sol = 0;
  if (auto idx = lex.find(solution)) {
    sol = static_cast<std::uint32_t>(*idx);
  } else if (allow_oov) {
    sol = static_cast<std::uint32_t>(words.size());
    words.push_back(solution);
    if (warnings) {
      warnings->push_back("solution '" + solution.str() + "' is not in the dictionary; appended");
    }
  } else {
    throw DataError("solution '" + solution.str() + "' is not in the dictionary");
  }
  auto row_of = [&words](std::uint32_t g) {
    return [&words, g](std::uint32_t c) { return compute_feedback(words[g], words[c]).code(); };
  };
  std::vector<std::uint32_t> cand;
  return detail::play_indices(static_cast<std::uint32_t>(words.size()), sol, row_of, rng, cand,
                              std::forward<Observer>(observe));
}

/// Monte Carlo engine over a fixed lexicon. Holds a reference to the lexicon,
/// which must outlive it. Thread-safe for concurrent const use.
class Simulator {
public:
  explicit Simulator(const Lexicon& lex) : lex_(&lex), table_(lex) {
    if (lex.empty()) {
      throw DataError("cannot simulate over an empty dictionary");
    }
  }

  const Lexicon& lexicon() const noexcept { return *lex_; }

  /// Seed of the random substream used for `w`.
  std::uint64_t word_seed(const Word& w, std::uint64_t master) const {
    auto idx = lex_->find(w);
    return substream_seed(master, idx ? *idx : detail::oov_key(w));
  }

  SimulationReport simulate_word(const Word& solution, std::uint64_t reps, std::uint64_t seed,
                                 const SimulationOptions& opts = {}) const {
    if (reps == 0) {
      throw DataError("reps must be positive");
    }
    SimulationReport report;
    report.word = solution;
    report.reps = reps;
    report.seed = seed;
    Rng rng(word_seed(solution, seed));
    std::array<std::size_t, kBins> counts{};
    std::vector<std::uint32_t> cand;
    cand.reserve(lex_->size() + 1);
    const auto n = static_cast<std::uint32_t>(lex_->size());
    if (auto idx = lex_->find(solution)) {
      auto row_of = [this](std::uint32_t g) {
        return [r = table_.row(g).data()](std::uint32_t c) { return r[c]; };
      };
      for (std::uint64_t i = 0; i < reps; ++i) {
        int tries = detail::play_indices(n, static_cast<std::uint32_t>(*idx), row_of, rng, cand,
                                         detail::NoObserver{});
        ++counts[tries - 1];
      }
    } else if (opts.allow_oov) {
      report.warnings.push_back("solution '" + solution.str() + "' is not in the dictionary; appended");
      const auto& words = lex_->words();
      auto row_of = [this, n, &words, &solution](std::uint32_t g) {
        return [this, n, g, &words, &solution](std::uint32_t c) -> std::uint8_t {
          if (g == n) {
            return compute_feedback(solution, c == n ? solution : words[c]).code();
          }
          return c == n ? compute_feedback(words[g], solution).code() : table_(g, c);
        };
      };
      for (std::uint64_t i = 0; i < reps; ++i) {
        int tries = detail::play_indices(n + 1, n, row_of, rng, cand, detail::NoObserver{});
        ++counts[tries - 1];
      }
    } else {
      throw DataError("solution '" + solution.str() + "' is not in the dictionary");
    }
    report.raw = GuessDistribution::from_counts(counts);
    report.expectation = report.raw.expectation();
    return report;
  }

  /// Simulates every word; per-word failures are captured, not thrown.
  /// Output order matches input order and is independent of thread count.
  std::vector<SimulationOutcome> simulate_corpus(std::span<const Word> words, std::uint64_t reps,
                                                 std::uint64_t seed,
                                                 const SimulationOptions& opts = {}) const {
    std::vector<SimulationOutcome> out(words.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < words.size(); i = next++) {
        out[i].word = words[i];
        try {
          out[i].report = simulate_word(words[i], reps, seed, opts);
        } catch (const std::exception& e) {
          out[i].error = e.what();
        }
      }
    };
    unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(words.size(), 1)));
    if (threads <= 1) {
      worker();
    } else {
      std::vector<std::jthread> pool;
      pool.reserve(threads);
      for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back(worker);
      }
    }
    return out;
  }

private:
  const Lexicon* lex_;
  FeedbackTable table_;
};

inline SimulationReport simulate_word(const Word& solution, const Lexicon& lex, std::uint64_t reps,
                                      std::uint64_t seed, const SimulationOptions& opts = {}) {
  return Simulator(lex).simulate_word(solution, reps, seed, opts);
}

inline std::vector<SimulationOutcome> simulate_corpus(std::span<const Word> words, const Lexicon& lex,
                                                      std::uint64_t reps, std::uint64_t seed,
                                                      const SimulationOptions& opts = {}) {
  if (words.empty()) {
    return {};
  }
  return Simulator(lex).simulate_corpus(words, reps, seed, opts);
}

} // namespace wordle
