#pragma once

// Hand-derived (guess, solution, feedback) triples; G = green, Y = yellow, X = gray.
// Rows were worked through the two-pass rule by hand and cross-checked against
// an independent counting implementation.

#include <array>

namespace cases {

struct FeedbackCase {
  const char* guess;
  const char* solution;
  const char* expected;
};

inline constexpr std::array<FeedbackCase, 37> kFeedback = {{
    {"crane", "crane", "GGGGG"},
    {"babes", "abbey", "YYGGX"},
    {"eerie", "there", "YXYXG"},
    {"crane", "abbey", "XXYXY"},
    {"abbey", "crane", "YXXYX"},
    {"speed", "abide", "XXYXY"},
    {"speed", "erase", "YXYYX"},
    {"eerie", "eerie", "GGGGG"},
    {"geese", "eerie", "XGYXG"},
    {"robot", "floor", "YYXGX"},
    {"llama", "hello", "YYXXX"},
    {"hello", "llama", "XXYYX"},
    {"mamma", "maxim", "GGYXX"},
    {"array", "radar", "YYYGX"},
    {"radar", "array", "YYXGY"},
    {"sassy", "essay", "YYGXG"},
    {"essay", "sassy", "XYGYG"},
    {"otter", "totem", "YYGGX"},
    {"level", "eleve", "YYYYX"},
    {"aaaaa", "abcde", "GXXXX"},
    {"abcde", "aaaaa", "GXXXX"},
    {"kayak", "yacht", "XGYXX"},
    {"allee", "eagle", "YYXYG"},
    {"sheep", "steep", "GXGGG"},
    {"tares", "eerie", "XXGYX"},
    {"puppy", "happy", "XXGGG"},
    {"happy", "puppy", "XXGGG"},
    {"error", "roger", "YYXYG"},
    {"fluff", "offal", "YYXYX"},
    {"banal", "annal", "XYGGG"},
    {"verve", "never", "YGYXY"},
    {"civic", "vivid", "XGGGX"},
    {"motto", "tooth", "XGYGY"},
    {"tooth", "motto", "YGYGX"},
    {"xylyl", "lysyl", "XGYGG"},
    {"abide", "speed", "XXXYY"},
    {"erase", "speed", "YXXYY"},
}};

} // namespace cases
