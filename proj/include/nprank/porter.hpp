#pragma once

// Porter suffix-stripping stemmer, the published 1980 algorithm without the
// later reference-implementation departures (no short-word guard, ABLI not
// BLI, no LOGI rule). Input is expected to be lowercase ASCII; anything
// containing a byte outside [a-z] is returned unchanged.

#include <algorithm>
#include <array>
#include <string>
#include <string_view>

namespace nprank::porter {

namespace detail {

inline bool is_vowel_letter(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

// 'y' is a consonant at position 0 or after a vowel, a vowel after a
// consonant. Runs of 'y' alternate.
inline bool is_consonant(std::string_view w, std::size_t i) {
  if (is_vowel_letter(w[i])) return false;
  if (w[i] != 'y') return true;
  bool negate = false;
  while (i > 0 && w[i] == 'y') {
    negate = !negate;
    --i;
  }
  return (!is_vowel_letter(w[i])) != negate;
}

// m in [C](VC){m}[V]
inline int measure(std::string_view w) {
  int m = 0;
  bool prev_vowel = false;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const bool cons = is_consonant(w, i);
    if (cons && prev_vowel) ++m;
    prev_vowel = !cons;
  }
  return m;
}

inline bool contains_vowel(std::string_view w) {
  for (std::size_t i = 0; i < w.size(); ++i)
    if (!is_consonant(w, i)) return true;
  return false;
}

inline bool ends_double_consonant(std::string_view w) {
  const auto n = w.size();
  return n >= 2 && w[n - 1] == w[n - 2] && is_consonant(w, n - 1);
}

// *o: ends consonant-vowel-consonant, last consonant not w, x or y.
inline bool ends_cvc(std::string_view w) {
  const auto n = w.size();
  if (n < 3) return false;
  const char last = w[n - 1];
  return is_consonant(w, n - 3) && !is_consonant(w, n - 2) && is_consonant(w, n - 1) &&
         last != 'w' && last != 'x' && last != 'y';
}

inline bool ends_with(std::string_view w, std::string_view suffix) {
  return w.size() >= suffix.size() && w.substr(w.size() - suffix.size()) == suffix;
}

enum class Cond { None, MeasureGt0, MeasureGt1, MeasureGt1AndST, ContainsVowel };

struct Rule {
  std::string_view suffix;
  std::string_view replacement;
  Cond cond;
};

inline bool holds(Cond c, std::string_view stem) {
  switch (c) {
    case Cond::None: return true;
    case Cond::MeasureGt0: return measure(stem) > 0;
    case Cond::MeasureGt1: return measure(stem) > 1;
    case Cond::MeasureGt1AndST:
      return measure(stem) > 1 && (stem.back() == 's' || stem.back() == 't');
    case Cond::ContainsVowel: return contains_vowel(stem);
  }
  return false;
}

// The first rule whose suffix matches decides: if its condition fails the
// word is left alone and no later rule in the list is tried.
template <std::size_t N>
std::string apply_rules(std::string word, const std::array<Rule, N>& rules) {
  for (const auto& r : rules) {
    if (!ends_with(word, r.suffix)) continue;
    const std::string_view stem(word.data(), word.size() - r.suffix.size());
    if (!holds(r.cond, stem)) return word;
    std::string out(stem);
    out += r.replacement;
    return out;
  }
  return word;
}

inline std::string step1a(std::string w) {
  static constexpr std::array<Rule, 4> rules{{
      {"sses", "ss", Cond::None},
      {"ies", "i", Cond::None},
      {"ss", "ss", Cond::None},
      {"s", "", Cond::None},
  }};
  return apply_rules(std::move(w), rules);
}

inline std::string step1b(std::string w) {
  if (ends_with(w, "eed")) {
    const std::string_view stem(w.data(), w.size() - 3);
    if (measure(stem) > 0) return std::string(stem) + "ee";
    return w;
  }
  std::string stem;
  bool stripped = false;
  for (std::string_view suffix : {std::string_view("ed"), std::string_view("ing")}) {
    if (ends_with(w, suffix)) {
      std::string_view candidate(w.data(), w.size() - suffix.size());
      if (contains_vowel(candidate)) {
        stem = std::string(candidate);
        stripped = true;
        break;
      }
    }
  }
  if (!stripped) return w;

  if (ends_with(stem, "at") || ends_with(stem, "bl") || ends_with(stem, "iz")) return stem + "e";
  if (ends_double_consonant(stem)) {
    const char last = stem.back();
    if (last != 'l' && last != 's' && last != 'z') stem.pop_back();
    return stem;
  }
  if (measure(stem) == 1 && ends_cvc(stem)) return stem + "e";
  return stem;
}

inline std::string step1c(std::string w) {
  static constexpr std::array<Rule, 1> rules{{{"y", "i", Cond::ContainsVowel}}};
  return apply_rules(std::move(w), rules);
}

inline std::string step2(std::string w) {
  static constexpr std::array<Rule, 20> rules{{
      {"ational", "ate", Cond::MeasureGt0}, {"tional", "tion", Cond::MeasureGt0},
      {"enci", "ence", Cond::MeasureGt0},   {"anci", "ance", Cond::MeasureGt0},
      {"izer", "ize", Cond::MeasureGt0},    {"abli", "able", Cond::MeasureGt0},
      {"alli", "al", Cond::MeasureGt0},     {"entli", "ent", Cond::MeasureGt0},
      {"eli", "e", Cond::MeasureGt0},       {"ousli", "ous", Cond::MeasureGt0},
      {"ization", "ize", Cond::MeasureGt0}, {"ation", "ate", Cond::MeasureGt0},
      {"ator", "ate", Cond::MeasureGt0},    {"alism", "al", Cond::MeasureGt0},
      {"iveness", "ive", Cond::MeasureGt0}, {"fulness", "ful", Cond::MeasureGt0},
      {"ousness", "ous", Cond::MeasureGt0}, {"aliti", "al", Cond::MeasureGt0},
      {"iviti", "ive", Cond::MeasureGt0},   {"biliti", "ble", Cond::MeasureGt0},
  }};
  return apply_rules(std::move(w), rules);
}

inline std::string step3(std::string w) {
  static constexpr std::array<Rule, 7> rules{{
      {"icate", "ic", Cond::MeasureGt0}, {"ative", "", Cond::MeasureGt0},
      {"alize", "al", Cond::MeasureGt0}, {"iciti", "ic", Cond::MeasureGt0},
      {"ical", "ic", Cond::MeasureGt0},  {"ful", "", Cond::MeasureGt0},
      {"ness", "", Cond::MeasureGt0},
  }};
  return apply_rules(std::move(w), rules);
}

inline std::string step4(std::string w) {
  static constexpr std::array<Rule, 19> rules{{
      {"al", "", Cond::MeasureGt1},   {"ance", "", Cond::MeasureGt1},
      {"ence", "", Cond::MeasureGt1}, {"er", "", Cond::MeasureGt1},
      {"ic", "", Cond::MeasureGt1},   {"able", "", Cond::MeasureGt1},
      {"ible", "", Cond::MeasureGt1}, {"ant", "", Cond::MeasureGt1},
      {"ement", "", Cond::MeasureGt1}, {"ment", "", Cond::MeasureGt1},
      {"ent", "", Cond::MeasureGt1},  {"ion", "", Cond::MeasureGt1AndST},
      {"ou", "", Cond::MeasureGt1},   {"ism", "", Cond::MeasureGt1},
      {"ate", "", Cond::MeasureGt1},  {"iti", "", Cond::MeasureGt1},
      {"ous", "", Cond::MeasureGt1},  {"ive", "", Cond::MeasureGt1},
      {"ize", "", Cond::MeasureGt1},
  }};
  return apply_rules(std::move(w), rules);
}

// Both E rules are tried; this is the one place the first-match rule does
// not apply.
inline std::string step5a(std::string w) {
  if (!ends_with(w, "e")) return w;
  const std::string_view stem(w.data(), w.size() - 1);
  const int m = measure(stem);
  if (m > 1 || (m == 1 && !ends_cvc(stem))) return std::string(stem);
  return w;
}

inline std::string step5b(std::string w) {
  if (ends_with(w, "ll") && measure(std::string_view(w.data(), w.size() - 1)) > 1) w.pop_back();
  return w;
}

}  // namespace detail

inline std::string stem(std::string_view word) {
  if (word.empty() ||
      !std::all_of(word.begin(), word.end(), [](char c) { return c >= 'a' && c <= 'z'; }))
    return std::string(word);
  using namespace detail;
  return step5b(step5a(step4(step3(step2(step1c(step1b(step1a(std::string(word)))))))));
}

}  // namespace nprank::porter
