#pragma once

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "wordle/distribution.hpp"
#include "wordle/errors.hpp"
#include "wordle/word.hpp"

namespace wordle {

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) {
    s.remove_suffix(1);
  }
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  // UTF-8 byte order mark
  if (s.size() >= 3 && s.substr(0, 3) == "\xEF\xBB\xBF") {
    s.remove_prefix(3);
  }
  return s;
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? line.npos : pos - start)));
    if (pos == std::string_view::npos) {
      break;
    }
    start = pos + 1;
  }
  return out;
}

inline std::optional<double> parse_double(std::string_view s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    return std::nullopt;
  }
  return v;
}

inline std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open '" + path.string() + "'");
  }
  return in;
}

} // namespace detail

/// Ordered set of distinct words with a reverse index.
class Lexicon {
public:
  Lexicon() = default;

  /// Throws DataError on duplicates.
  explicit Lexicon(std::vector<Word> words) : words_(std::move(words)) {
    index_.reserve(words_.size());
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if (!index_.emplace(words_[i], i).second) {
        throw DataError("duplicate word '" + words_[i].str() + "'");
      }
    }
  }

  static Lexicon from_strings(const std::vector<std::string>& tokens) {
    std::vector<Word> words;
    words.reserve(tokens.size());
    for (const auto& t : tokens) {
      words.push_back(Word::from(t));
    }
    return Lexicon(std::move(words));
  }

  std::size_t size() const noexcept { return words_.size(); }
  bool empty() const noexcept { return words_.empty(); }
  const std::vector<Word>& words() const noexcept { return words_; }
  const Word& operator[](std::size_t i) const { return words_[i]; }

  std::optional<std::size_t> find(const Word& w) const {
    auto it = index_.find(w);
    if (it == index_.end()) {
      return std::nullopt;
    }
    return it->second;
  }
  bool contains(const Word& w) const { return index_.contains(w); }

  /// FNV-1a 64 over the newline-joined word list, as 16 hex digits.
  std::string digest() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](unsigned char c) {
      h ^= c;
      h *= 0x100000001b3ULL;
    };
    for (const auto& w : words_) {
      for (auto l : w.letters()) {
        mix(static_cast<unsigned char>('a' + l));
      }
      mix('\n');
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
  }

  bool operator==(const Lexicon& other) const { return words_ == other.words_; }

private:
  std::vector<Word> words_;
  std::unordered_map<Word, std::size_t> index_;
};

/// One word per nonempty line; rejects malformed and duplicate lines.
inline Lexicon read_dictionary(std::istream& in, const std::string& source = "<dictionary>") {
  std::vector<Word> words;
  std::unordered_map<Word, std::size_t> first_line;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto token = detail::trim(line);
    if (token.empty()) {
      continue;
    }
    auto w = Word::parse(token);
    if (!w) {
      throw ParseError(source, lineno,
                       token.size() != kWordLength
                           ? "expected 5 letters, got " + std::to_string(token.size()) + " in '" +
                                 std::string(token) + "'"
                           : "non-letter character in '" + std::string(token) + "'");
    }
    auto [it, inserted] = first_line.emplace(*w, lineno);
    if (!inserted) {
      throw ParseError(source, lineno,
                       "duplicate word '" + w->str() + "' (first seen on line " +
                           std::to_string(it->second) + ", repeated on line " +
                           std::to_string(lineno) + ")");
    }
    words.push_back(*w);
  }
  return Lexicon(std::move(words));
}

inline Lexicon load_dictionary(const std::filesystem::path& path) {
  auto in = detail::open_input(path);
  return read_dictionary(in, path.string());
}

inline void write_dictionary(std::ostream& out, const Lexicon& lex) {
  for (const auto& w : lex.words()) {
    out << w.str() << '\n';
  }
}

/// Occurrences per million, restricted to a lexicon.
struct FrequencyTable {
  std::unordered_map<Word, double> freq;
  /// Lexicon words absent from the source file; they read as 0.
  std::vector<Word> missing;

  double operator()(const Word& w) const {
    auto it = freq.find(w);
    return it == freq.end() ? 0.0 : it->second;
  }
};

inline FrequencyTable read_frequencies(std::istream& in, const Lexicon& lex,
                                       const std::string& source = "<frequencies>") {
  FrequencyTable table;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    auto text = detail::trim(line);
    if (text.empty()) {
      continue;
    }
    auto cells = detail::split_csv(text);
    if (!header_seen) {
      if (cells.size() != 2 || cells[0] != "word" || cells[1] != "freq_per_million") {
        throw ParseError(source, lineno, "expected header 'word,freq_per_million'");
      }
      header_seen = true;
      continue;
    }
    if (cells.size() != 2) {
      throw ParseError(source, lineno, "expected 2 columns, got " + std::to_string(cells.size()));
    }
    auto w = Word::parse(cells[0]);
    auto f = detail::parse_double(cells[1]);
    if (!w) {
      throw ParseError(source, lineno, "invalid word '" + std::string(cells[0]) + "'");
    }
    if (!f || !std::isfinite(*f)) {
      throw ParseError(source, lineno, "invalid frequency '" + std::string(cells[1]) + "'");
    }
    if (*f < 0.0) {
      throw ParseError(source, lineno, "negative frequency for '" + w->str() + "'");
    }
    if (lex.contains(*w)) {
      table.freq[*w] = *f;
    }
  }
  if (!header_seen) {
    throw ParseError(source, lineno, "missing header 'word,freq_per_million'");
  }
  for (const auto& w : lex.words()) {
    if (!table.freq.contains(w)) {
      table.missing.push_back(w);
      table.freq[w] = 0.0;
    }
  }
  return table;
}

inline FrequencyTable load_frequencies(const std::filesystem::path& path, const Lexicon& lex) {
  auto in = detail::open_input(path);
  return read_frequencies(in, lex, path.string());
}

/// One day of reported results.
struct ObservedRecord {
  std::chrono::year_month_day date;
  Word word;
  std::uint64_t reported = 0;
  GuessDistribution dist;
};

struct ObservedLoadOptions {
  /// Admit words outside the lexicon instead of rejecting the row.
  bool allow_oov = false;
};

struct ObservedLoadResult {
  std::vector<ObservedRecord> records;
  std::vector<std::string> warnings;
};

inline std::optional<std::chrono::year_month_day> parse_iso_date(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') {
    return std::nullopt;
  }
  auto num = [&](std::size_t pos, std::size_t len) -> std::optional<int> {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data() + pos, s.data() + pos + len, v);
    if (ec != std::errc{} || p != s.data() + pos + len) {
      return std::nullopt;
    }
    return v;
  };
  auto y = num(0, 4), m = num(5, 2), d = num(8, 2);
  if (!y || !m || !d) {
    return std::nullopt;
  }
  std::chrono::year_month_day ymd{std::chrono::year{*y}, std::chrono::month{static_cast<unsigned>(*m)},
                                  std::chrono::day{static_cast<unsigned>(*d)}};
  if (!ymd.ok()) {
    return std::nullopt;
  }
  return ymd;
}

inline std::string format_iso_date(const std::chrono::year_month_day& d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
  return buf;
}

/// Reads `date,word,reported,p1..p6,px`. Each row's percentages are rescaled
/// to sum to exactly 100; raw sums outside [95, 105] are rejected.
inline ObservedLoadResult read_observed_results(std::istream& in, const Lexicon& lex,
                                                const ObservedLoadOptions& opts = {},
                                                const std::string& source = "<results>") {
  static constexpr std::string_view kHeader[] = {"date", "word", "reported", "p1", "p2",
                                                 "p3",   "p4",   "p5",       "p6", "px"};
  ObservedLoadResult result;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    auto text = detail::trim(line);
    if (text.empty()) {
      continue;
    }
    auto cells = detail::split_csv(text);
    if (!header_seen) {
      if (!std::equal(cells.begin(), cells.end(), std::begin(kHeader), std::end(kHeader))) {
        throw ParseError(source, lineno, "expected header 'date,word,reported,p1,p2,p3,p4,p5,p6,px'");
      }
      header_seen = true;
      continue;
    }
    if (cells.size() != std::size(kHeader)) {
      throw ParseError(source, lineno, "expected 10 columns, got " + std::to_string(cells.size()));
    }
    ObservedRecord rec;
    auto date = parse_iso_date(cells[0]);
    if (!date) {
      throw ParseError(source, lineno, "invalid ISO date '" + std::string(cells[0]) + "'");
    }
    rec.date = *date;
    auto w = Word::parse(cells[1]);
    if (!w) {
      throw ParseError(source, lineno, "invalid word '" + std::string(cells[1]) + "'");
    }
    rec.word = *w;
    if (!lex.contains(rec.word)) {
      if (!opts.allow_oov) {
        throw ParseError(source, lineno, "word '" + rec.word.str() + "' is not in the dictionary");
      }
      result.warnings.push_back("line " + std::to_string(lineno) + ": out-of-vocabulary word '" +
                                rec.word.str() + "' admitted");
    }
    auto reported = detail::parse_double(cells[2]);
    if (!reported || *reported < 0.0 || *reported != std::floor(*reported)) {
      throw ParseError(source, lineno, "invalid reported count '" + std::string(cells[2]) + "'");
    }
    rec.reported = static_cast<std::uint64_t>(*reported);
    double raw_sum = 0.0;
    for (std::size_t i = 0; i < kBins; ++i) {
      auto p = detail::parse_double(cells[3 + i]);
      if (!p || !std::isfinite(*p) || *p < 0.0) {
        throw ParseError(source, lineno, "invalid percentage '" + std::string(cells[3 + i]) + "'");
      }
      rec.dist.bins[i] = *p;
      raw_sum += *p;
    }
    if (raw_sum < 95.0 || raw_sum > 105.0) {
      throw ParseError(source, lineno,
                       "percentages sum to " + std::to_string(raw_sum) + ", outside [95, 105]");
    }
    for (auto& b : rec.dist.bins) {
      b *= 100.0 / raw_sum;
    }
    result.records.push_back(rec);
  }
  if (!header_seen) {
    throw ParseError(source, lineno, "missing results header");
  }
  std::stable_sort(result.records.begin(), result.records.end(),
                   [](const ObservedRecord& a, const ObservedRecord& b) { return a.date < b.date; });
  return result;
}

inline ObservedLoadResult load_observed_results(const std::filesystem::path& path, const Lexicon& lex,
                                                const ObservedLoadOptions& opts = {}) {
  auto in = detail::open_input(path);
  return read_observed_results(in, lex, opts, path.string());
}

} // namespace wordle
