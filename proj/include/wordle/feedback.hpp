#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wordle/lexicon.hpp"
#include "wordle/word.hpp"

namespace wordle {

enum class Mark : std::uint8_t { Gray = 0, Yellow = 1, Green = 2 };

/// Tile colours for one guess. Encodes to 0..242 in base 3 with the first
/// cell as the most significant digit.
class Feedback {
public:
  static constexpr int kPatterns = 243;

  constexpr Feedback() = default;
  constexpr explicit Feedback(const std::array<Mark, kWordLength>& cells) : cells_(cells) {}

  static constexpr Feedback all(Mark m) {
    Feedback f;
    f.cells_.fill(m);
    return f;
  }

  constexpr const std::array<Mark, kWordLength>& cells() const noexcept { return cells_; }
  constexpr Mark operator[](std::size_t i) const noexcept { return cells_[i]; }

  constexpr std::uint8_t code() const noexcept {
    unsigned v = 0;
    for (auto m : cells_) {
      v = v * 3 + static_cast<unsigned>(m);
    }
    return static_cast<std::uint8_t>(v);
  }

  static constexpr Feedback from_code(unsigned code) {
    if (code >= kPatterns) {
      throw DataError("feedback code out of range: " + std::to_string(code));
    }
    Feedback f;
    for (std::size_t i = kWordLength; i-- > 0;) {
      f.cells_[i] = static_cast<Mark>(code % 3);
      code /= 3;
    }
    return f;
  }

  /// Text form over {G, Y, X}; X is gray.
  std::string str() const {
    std::string s(kWordLength, 'X');
    for (std::size_t i = 0; i < kWordLength; ++i) {
      s[i] = cells_[i] == Mark::Green ? 'G' : cells_[i] == Mark::Yellow ? 'Y' : 'X';
    }
    return s;
  }

  static std::optional<Feedback> parse(std::string_view s) {
    if (s.size() != kWordLength) {
      return std::nullopt;
    }
    Feedback f;
    for (std::size_t i = 0; i < kWordLength; ++i) {
      switch (s[i]) {
      case 'G': case 'g': f.cells_[i] = Mark::Green; break;
      case 'Y': case 'y': f.cells_[i] = Mark::Yellow; break;
      case 'X': case 'x': case '.': case '-': f.cells_[i] = Mark::Gray; break;
      default: return std::nullopt;
      }
    }
    return f;
  }

  constexpr bool operator==(const Feedback&) const = default;

private:
  std::array<Mark, kWordLength> cells_{};
};

/// Official two-pass scoring: greens consume solution letters first, then
/// yellows are awarded left to right while unconsumed copies remain.
constexpr Feedback compute_feedback(const Word& guess, const Word& solution) noexcept {
  std::array<std::uint8_t, kAlphabetSize> remaining{};
  std::array<Mark, kWordLength> cells{};
  for (std::size_t i = 0; i < kWordLength; ++i) {
    if (guess[i] == solution[i]) {
      cells[i] = Mark::Green;
    } else {
      ++remaining[solution[i]];
    }
  }
  for (std::size_t i = 0; i < kWordLength; ++i) {
    if (cells[i] == Mark::Green) {
      continue;
    }
    if (remaining[guess[i]] > 0) {
      --remaining[guess[i]];
      cells[i] = Mark::Yellow;
    } else {
      cells[i] = Mark::Gray;
    }
  }
  return Feedback(cells);
}

constexpr bool is_consistent(const Word& candidate, const Word& guess, const Feedback& observed) noexcept {
  return compute_feedback(guess, candidate) == observed;
}

inline std::vector<Word> filter_candidates(std::span<const Word> candidates, const Word& guess,
                                           const Feedback& observed) {
  std::vector<Word> out;
  for (const auto& c : candidates) {
    if (is_consistent(c, guess, observed)) {
      out.push_back(c);
    }
  }
  return out;
}

/// Dense N x N table of feedback codes, row = guess ordinal, column = solution ordinal.
class FeedbackTable {
public:
  explicit FeedbackTable(const Lexicon& lex) : n_(lex.size()), codes_(n_ * n_) {
    const auto& words = lex.words();
    for (std::size_t g = 0; g < n_; ++g) {
      auto* row = codes_.data() + g * n_;
      for (std::size_t s = 0; s < n_; ++s) {
        row[s] = compute_feedback(words[g], words[s]).code();
      }
    }
  }

  std::size_t size() const noexcept { return n_; }
  std::span<const std::uint8_t> row(std::size_t guess) const noexcept {
    return {codes_.data() + guess * n_, n_};
  }
  std::uint8_t operator()(std::size_t guess, std::size_t solution) const noexcept {
    return codes_[guess * n_ + solution];
  }

private:
  std::size_t n_;
  std::vector<std::uint8_t> codes_;
};

} // namespace wordle
