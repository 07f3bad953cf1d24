#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "wordle/errors.hpp"

namespace wordle {

inline constexpr std::size_t kWordLength = 5;
inline constexpr int kAlphabetSize = 26;

/// A five-letter word over a-z, stored as letter indices 0..25.
class Word {
public:
  using Letters = std::array<std::uint8_t, kWordLength>;

  constexpr Word() = default;
  constexpr explicit Word(const Letters& letters) : letters_(letters) {
    for (auto l : letters_) {
      if (l >= kAlphabetSize) {
        throw DataError("letter index out of range");
      }
    }
  }

  /// Lowercases and validates; nullopt when the token is not five ASCII letters.
  static constexpr std::optional<Word> parse(std::string_view token) noexcept {
    if (token.size() != kWordLength) {
      return std::nullopt;
    }
    Letters letters{};
    for (std::size_t i = 0; i < kWordLength; ++i) {
      char c = token[i];
      if (c >= 'A' && c <= 'Z') {
        c = static_cast<char>(c - 'A' + 'a');
      }
      if (c < 'a' || c > 'z') {
        return std::nullopt;
      }
      letters[i] = static_cast<std::uint8_t>(c - 'a');
    }
    Word w;
    w.letters_ = letters;
    return w;
  }

  /// Like parse() but throws DataError on invalid input.
  static Word from(std::string_view token) {
    if (auto w = parse(token)) {
      return *w;
    }
    throw DataError("not a five-letter word: '" + std::string(token) + "'");
  }

  constexpr const Letters& letters() const noexcept { return letters_; }
  constexpr std::uint8_t operator[](std::size_t i) const noexcept { return letters_[i]; }
  static constexpr std::size_t size() noexcept { return kWordLength; }

  std::string str() const {
    std::string s(kWordLength, 'a');
    for (std::size_t i = 0; i < kWordLength; ++i) {
      s[i] = static_cast<char>('a' + letters_[i]);
    }
    return s;
  }

  /// Order-preserving packing into 25 bits (5 bits per letter).
  constexpr std::uint32_t packed() const noexcept {
    std::uint32_t v = 0;
    for (auto l : letters_) {
      v = (v << 5) | l;
    }
    return v;
  }

  constexpr auto operator<=>(const Word&) const = default;

private:
  Letters letters_{};
};

} // namespace wordle

template <>
struct std::hash<wordle::Word> {
  std::size_t operator()(const wordle::Word& w) const noexcept {
    return std::hash<std::uint32_t>{}(w.packed());
  }
};
