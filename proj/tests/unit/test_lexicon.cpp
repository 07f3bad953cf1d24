#include <gtest/gtest.h>

#include <sstream>

#include "wordle/lexicon.hpp"
#include "support/generators.hpp"

using namespace wordle;

namespace {

Lexicon dict_from(const std::string& text) {
  std::istringstream in(text);
  return read_dictionary(in, "dict.txt");
}

} // namespace

TEST(Word, ParsesAndLowercases) {
  auto w = Word::parse("CrAnE");
  ASSERT_TRUE(w);
  EXPECT_EQ(w->str(), "crane");
  EXPECT_EQ((*w)[0], 2);
  EXPECT_FALSE(Word::parse("cranes"));
  EXPECT_FALSE(Word::parse("cr4ne"));
  EXPECT_FALSE(Word::parse(""));
  EXPECT_THROW(Word::from("abc"), DataError);
}

TEST(Word, PackedIsInjectiveOnSample) {
  gen::Engine rng(1);
  std::map<std::uint32_t, Word> seen;
  for (int i = 0; i < 5000; ++i) {
    auto w = gen::word(rng);
    auto [it, inserted] = seen.emplace(w.packed(), w);
    if (!inserted) {
      EXPECT_EQ(it->second, w);
    }
  }
}

TEST(Dictionary, LoadsInFileOrder) {
  auto lex = dict_from("crane\nabbey\n");
  ASSERT_EQ(lex.size(), 2u);
  EXPECT_EQ(lex.find(Word::from("crane")), 0u);
  EXPECT_EQ(lex.find(Word::from("abbey")), 1u);
  EXPECT_FALSE(lex.find(Word::from("zzzzz")));
}

TEST(Dictionary, AcceptsCrlfBlankLinesAndUppercase) {
  auto lex = dict_from("\xEF\xBB\xBF" "CRANE\r\n\r\nabbey\r\n");
  ASSERT_EQ(lex.size(), 2u);
  EXPECT_TRUE(lex.contains(Word::from("crane")));
}

TEST(Dictionary, RejectsWrongLengthWithLineNumber) {
  try {
    dict_from("cranes\n");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
    EXPECT_NE(std::string(e.what()).find("6"), std::string::npos);
  }
  try {
    dict_from("crane\nab1ey\n");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(Dictionary, DuplicateCitesBothLines) {
  try {
    dict_from("crane\ncrane\n");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find('1'), std::string::npos);
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(Dictionary, RoundTripProperty) {
  gen::Engine rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    auto lex = gen::lexicon(rng, 1 + trial * 3, 1 + trial % 26);
    std::ostringstream out;
    write_dictionary(out, lex);
    auto back = dict_from(out.str());
    EXPECT_EQ(back, lex);
    EXPECT_EQ(back.digest(), lex.digest());
  }
}

TEST(Dictionary, DigestDependsOnOrder) {
  auto a = Lexicon::from_strings({"crane", "abbey"});
  auto b = Lexicon::from_strings({"abbey", "crane"});
  EXPECT_NE(a.digest(), b.digest());
  EXPECT_EQ(a.digest().size(), 16u);
}

TEST(Frequencies, ReadsValuesAndDefaultsMissingToZero) {
  auto lex = Lexicon::from_strings({"crane", "abbey"});
  std::istringstream in("word,freq_per_million\ncrane,20.5\nzzzzz,3\n");
  auto ft = read_frequencies(in, lex);
  EXPECT_DOUBLE_EQ(ft(Word::from("crane")), 20.5);
  EXPECT_DOUBLE_EQ(ft(Word::from("abbey")), 0.0);
  ASSERT_EQ(ft.missing.size(), 1u);
  EXPECT_EQ(ft.missing[0], Word::from("abbey"));
  EXPECT_FALSE(ft.freq.contains(Word::from("zzzzz")));
}

TEST(Frequencies, RejectsNegativeAndMalformedRows) {
  auto lex = Lexicon::from_strings({"crane"});
  {
    std::istringstream in("word,freq_per_million\ncrane,-1\n");
    EXPECT_THROW(read_frequencies(in, lex), ParseError);
  }
  try {
    std::istringstream in("word,freq_per_million\ncrane,abc\n");
    read_frequencies(in, lex);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  {
    std::istringstream in("word,count\ncrane,1\n");
    EXPECT_THROW(read_frequencies(in, lex), ParseError);
  }
}

namespace {

const char* kHeader = "date,word,reported,p1,p2,p3,p4,p5,p6,px\n";

ObservedLoadResult results_from(const std::string& body, const Lexicon& lex, bool allow_oov = false) {
  std::istringstream in(kHeader + body);
  ObservedLoadOptions o;
  o.allow_oov = allow_oov;
  return read_observed_results(in, lex, o);
}

} // namespace

TEST(Observed, RenormalizesRoundedRows) {
  auto lex = Lexicon::from_strings({"eerie", "crane"});
  auto r = results_from("2022-03-01,eerie,1000,0,1,11,33,39,14,3\n", lex);
  ASSERT_EQ(r.records.size(), 1u);
  const auto& d = r.records[0].dist;
  EXPECT_NEAR(d.sum(), 100.0, 1e-12);
  EXPECT_DOUBLE_EQ(d.bins[4], 39.0 * 100.0 / 101.0);
  EXPECT_EQ(r.records[0].reported, 1000u);
}

TEST(Observed, RejectsSumsOutsideWindow) {
  auto lex = Lexicon::from_strings({"eerie"});
  EXPECT_THROW(results_from("2022-03-01,eerie,10,0,1,11,33,20,14,1\n", lex), ParseError);
  EXPECT_THROW(results_from("2022-03-01,eerie,10,0,1,11,33,39,14,9\n", lex), ParseError);
}

TEST(Observed, SortsByDateAndHandlesOov) {
  auto lex = Lexicon::from_strings({"eerie", "crane"});
  const std::string body =
      "2022-03-02,crane,5,0,5,20,40,25,9,1\n"
      "2022-03-01,eerie,5,0,1,11,33,39,14,2\n";
  auto r = results_from(body, lex);
  ASSERT_EQ(r.records.size(), 2u);
  EXPECT_EQ(r.records[0].word.str(), "eerie");
  EXPECT_EQ(format_iso_date(r.records[1].date), "2022-03-02");

  EXPECT_THROW(results_from("2022-03-01,zesty,5,0,1,11,33,39,14,2\n", lex), DataError);
  auto oov = results_from("2022-03-01,zesty,5,0,1,11,33,39,14,2\n", lex, true);
  EXPECT_EQ(oov.records.size(), 1u);
  EXPECT_FALSE(oov.warnings.empty());
}

TEST(Observed, RejectsBadDatesAndHeaders) {
  auto lex = Lexicon::from_strings({"eerie"});
  EXPECT_THROW(results_from("2022-02-30,eerie,5,0,1,11,33,39,14,2\n", lex), ParseError);
  std::istringstream in("date,word,p1\n");
  EXPECT_THROW(read_observed_results(in, lex), ParseError);
}

TEST(Observed, EverySumIsHundredProperty) {
  auto lex = Lexicon::from_strings({"eerie"});
  gen::Engine rng(3);
  std::uniform_real_distribution<double> scale(0.951, 1.049);
  std::ostringstream body;
  for (int i = 0; i < 200; ++i) {
    auto d = gen::distribution(rng);
    const double s = scale(rng);
    body << "2022-01-" << (i % 28 + 1 < 10 ? "0" : "") << (i % 28 + 1) << ",eerie,1";
    for (double b : d.bins) {
      body << ',' << b * s;
    }
    body << '\n';
  }
  auto r = results_from(body.str(), lex);
  ASSERT_EQ(r.records.size(), 200u);
  for (const auto& rec : r.records) {
    EXPECT_NEAR(rec.dist.sum(), 100.0, 1e-9);
  }
}

TEST(ShippedData, DictionaryAndFrequenciesLoad) {
  const std::filesystem::path dir = WORDLE_TEST_DATA_DIR;
  auto lex = load_dictionary(dir / "dictionary.txt");
  EXPECT_EQ(lex.size(), 4082u);
  for (const char* w : {"eerie", "there", "crane", "abbey"}) {
    EXPECT_TRUE(lex.contains(Word::from(w))) << w;
  }
  auto ft = load_frequencies(dir / "frequencies.csv", lex);
  EXPECT_TRUE(ft.missing.empty());
  EXPECT_GT(ft(Word::from("there")), ft(Word::from("eerie")));
}
