#include <gtest/gtest.h>

#include <map>

#include "wordle/feedback.hpp"
#include "support/feedback_cases.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace wordle;

namespace {
Word W(const char* s) { return Word::from(s); }
} // namespace

TEST(Feedback, CuratedTable) {
  for (const auto& c : cases::kFeedback) {
    EXPECT_EQ(compute_feedback(W(c.guess), W(c.solution)).str(), c.expected) << c.guess << " vs " << c.solution;
  }
}

TEST(Feedback, SpecExamples) {
  EXPECT_EQ(compute_feedback(W("crane"), W("crane")), Feedback::all(Mark::Green));
  EXPECT_EQ(compute_feedback(W("babes"), W("abbey")).str(), "YYGGX");
  EXPECT_EQ(compute_feedback(W("eerie"), W("there")).str(), "YXYXG");
  static_assert(compute_feedback(Word::parse("crane").value(), Word::parse("crane").value()).code() == 242);
}

TEST(Feedback, MatchesCountingOracle) {
  gen::Engine rng(11);
  for (int i = 0; i < 20000; ++i) {
    const int alphabet = 2 + i % 6;
    auto g = gen::word(rng, alphabet), s = gen::word(rng, alphabet);
    ASSERT_EQ(compute_feedback(g, s).str(), oracle::feedback(g.str(), s.str())) << g.str() << ' ' << s.str();
  }
}

TEST(Feedback, TextAndCodeRoundTrip) {
  for (unsigned code = 0; code < 243; ++code) {
    auto f = Feedback::from_code(code);
    EXPECT_EQ(f.code(), code);
    auto back = Feedback::parse(f.str());
    ASSERT_TRUE(back);
    EXPECT_EQ(*back, f);
  }
  EXPECT_EQ(Feedback::parse("GGGGG")->code(), 242);
  EXPECT_EQ(Feedback::parse("XXXXX")->code(), 0);
  EXPECT_EQ(Feedback::parse("YXXXX")->code(), 81);
  EXPECT_FALSE(Feedback::parse("GGGG"));
  EXPECT_FALSE(Feedback::parse("GGGGQ"));
  EXPECT_EQ(Feedback::parse("ggyxx")->str(), "GGYXX");
}

TEST(Feedback, SelfIsAllGreenProperty) {
  gen::Engine rng(12);
  for (int i = 0; i < 2000; ++i) {
    auto w = gen::word(rng, 1 + i % 26);
    EXPECT_EQ(compute_feedback(w, w), Feedback::all(Mark::Green));
  }
}

TEST(Feedback, MarksNeverExceedMultiplicityProperty) {
  gen::Engine rng(13);
  for (int i = 0; i < 20000; ++i) {
    auto g = gen::word(rng, 3), s = gen::word(rng, 3);
    auto f = compute_feedback(g, s);
    std::map<int, int> marked, mult;
    for (std::size_t p = 0; p < 5; ++p) {
      ++mult[s[p]];
      marked[g[p]] += f[p] != Mark::Gray;
    }
    for (auto [letter, n] : marked) {
      EXPECT_LE(n, mult[letter]);
    }
  }
}

TEST(Consistency, SpecExamples) {
  auto obs = *Feedback::parse("XXYXY");
  EXPECT_TRUE(is_consistent(W("abbey"), W("crane"), obs));
  EXPECT_FALSE(is_consistent(W("crane"), W("crane"), obs));
  auto sol = W("eerie"), guess = W("there");
  EXPECT_TRUE(is_consistent(sol, guess, compute_feedback(guess, sol)));
}

TEST(Filter, SpecExamples) {
  std::vector<Word> one{W("crane")};
  EXPECT_TRUE(filter_candidates(one, W("crane"), Feedback::all(Mark::Gray)).empty());
  std::vector<Word> two{W("abbey"), W("crane")};
  auto kept = filter_candidates(two, W("crane"), *Feedback::parse("XXYXY"));
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_EQ(kept[0], W("abbey"));
}

TEST(Filter, SoundAndOrderPreservingProperty) {
  gen::Engine rng(14);
  for (int trial = 0; trial < 300; ++trial) {
    auto lex = gen::lexicon(rng, 40, 4);
    const auto& words = lex.words();
    std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
    auto sol = words[pick(rng)];
    auto guess = gen::word(rng, 4);
    auto kept = filter_candidates(words, guess, compute_feedback(guess, sol));
    EXPECT_NE(std::find(kept.begin(), kept.end(), sol), kept.end());
    // Subsequence of the input, and exactly the consistent words.
    std::size_t pos = 0;
    for (const auto& w : kept) {
      while (pos < words.size() && words[pos] != w) {
        ++pos;
      }
      ASSERT_LT(pos, words.size());
      ++pos;
    }
    const auto expected = std::count_if(words.begin(), words.end(), [&](const Word& w) {
      return compute_feedback(guess, w) == compute_feedback(guess, sol);
    });
    EXPECT_EQ(static_cast<long>(kept.size()), expected);
  }
}

TEST(FeedbackTable, MatchesDirectComputation) {
  gen::Engine rng(15);
  auto lex = gen::lexicon(rng, 60, 5);
  FeedbackTable t(lex);
  ASSERT_EQ(t.size(), lex.size());
  for (std::size_t g = 0; g < lex.size(); ++g) {
    auto row = t.row(g);
    for (std::size_t s = 0; s < lex.size(); ++s) {
      EXPECT_EQ(row[s], compute_feedback(lex.words()[g], lex.words()[s]).code());
      EXPECT_EQ(t(g, s), row[s]);
    }
  }
}
