// Copyright 2026 The evil-toolkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <span>
#include <vector>

#include "evil/metrics/porter.hpp"
#include "evil/text.hpp"

namespace evil::metrics {

namespace {

bool is_consonant(std::string_view w, std::size_t i) {
  switch (w[i]) {
    case 'a':
    case 'e':
    case 'i':
    case 'o':
    case 'u':
      return false;
    case 'y':
      return i == 0 ? true : !is_consonant(w, i - 1);
    default:
      return true;
  }
}

// m in [C](VC)^m[V].
int measure(std::string_view stem) {
  int m = 0;
  bool prev_vowel = false;
  for (std::size_t i = 0; i < stem.size(); ++i) {
    const bool cons = is_consonant(stem, i);
    if (cons && prev_vowel) ++m;
    prev_vowel = !cons;
  }
  return m;
}

bool contains_vowel(std::string_view stem) {
  for (std::size_t i = 0; i < stem.size(); ++i) {
    if (!is_consonant(stem, i)) return true;
  }
  return false;
}

bool ends_double_consonant(std::string_view w) {
  const auto n = w.size();
  return n >= 2 && w[n - 1] == w[n - 2] && is_consonant(w, n - 1);
}

bool ends_cvc(std::string_view w) {
  const auto n = w.size();
  if (n < 3) return false;
  const char last = w[n - 1];
  return is_consonant(w, n - 3) && !is_consonant(w, n - 2) && is_consonant(w, n - 1) &&
         last != 'w' && last != 'x' && last != 'y';
}

enum class Cond { kNone, kM0, kM1, kVowel, kIon, kM1Cvc, kNotLsz };

bool holds(Cond c, std::string_view stem) {
  switch (c) {
    case Cond::kNone:
      return true;
    case Cond::kM0:
      return measure(stem) > 0;
    case Cond::kM1:
      return measure(stem) > 1;
    case Cond::kVowel:
      return contains_vowel(stem);
    case Cond::kIon:
      return measure(stem) > 1 && !stem.empty() && (stem.back() == 's' || stem.back() == 't');
    case Cond::kM1Cvc:
      return measure(stem) == 1 && ends_cvc(stem);
    case Cond::kNotLsz:
      return !stem.empty() && stem.back() != 'l' && stem.back() != 's' && stem.back() != 'z';
  }
  return false;
}

struct Rule {
  std::string_view suffix;  // "*d" stands for any double consonant
  std::string_view replacement;
  Cond cond;
};

// The first rule whose suffix matches decides the outcome, whether or not its
// condition holds.
std::string apply(std::string word, std::span<const Rule> rules) {
  for (const auto& r : rules) {
    if (r.suffix == "*d") {
      if (!ends_double_consonant(word)) continue;
      // The condition looks at the doubled letter itself.
      if (!holds(r.cond, word)) return word;
      // Drops one of the two letters.
      word.pop_back();
      return word;
    }
    if (!word.ends_with(r.suffix)) continue;
    std::string stem = word.substr(0, word.size() - r.suffix.size());
    if (!holds(r.cond, stem)) return word;
    return stem + std::string(r.replacement);
  }
  return word;
}

constexpr Rule kStep1a[] = {
    {"sses", "ss", Cond::kNone},
    {"ies", "i", Cond::kNone},
    {"ss", "ss", Cond::kNone},
    {"s", "", Cond::kNone},
};

constexpr Rule kStep1bTail[] = {
    {"at", "ate", Cond::kNone}, {"bl", "ble", Cond::kNone}, {"iz", "ize", Cond::kNone},
    {"*d", "", Cond::kNotLsz},  {"", "e", Cond::kM1Cvc},
};

constexpr Rule kStep1c[] = {{"y", "i", Cond::kVowel}};

constexpr Rule kStep2[] = {
    {"ational", "ate", Cond::kM0}, {"tional", "tion", Cond::kM0}, {"enci", "ence", Cond::kM0},
    {"anci", "ance", Cond::kM0},   {"izer", "ize", Cond::kM0},    {"abli", "able", Cond::kM0},
    {"alli", "al", Cond::kM0},     {"entli", "ent", Cond::kM0},   {"eli", "e", Cond::kM0},
    {"ousli", "ous", Cond::kM0},   {"ization", "ize", Cond::kM0}, {"ation", "ate", Cond::kM0},
    {"ator", "ate", Cond::kM0},    {"alism", "al", Cond::kM0},    {"iveness", "ive", Cond::kM0},
    {"fulness", "ful", Cond::kM0}, {"ousness", "ous", Cond::kM0}, {"aliti", "al", Cond::kM0},
    {"iviti", "ive", Cond::kM0},   {"biliti", "ble", Cond::kM0},
};

constexpr Rule kStep3[] = {
    {"icate", "ic", Cond::kM0}, {"ative", "", Cond::kM0}, {"alize", "al", Cond::kM0},
    {"iciti", "ic", Cond::kM0}, {"ical", "ic", Cond::kM0}, {"ful", "", Cond::kM0},
    {"ness", "", Cond::kM0},
};

constexpr Rule kStep4[] = {
    {"al", "", Cond::kM1},   {"ance", "", Cond::kM1}, {"ence", "", Cond::kM1},
    {"er", "", Cond::kM1},   {"ic", "", Cond::kM1},   {"able", "", Cond::kM1},
    {"ible", "", Cond::kM1}, {"ant", "", Cond::kM1},  {"ement", "", Cond::kM1},
    {"ment", "", Cond::kM1}, {"ent", "", Cond::kM1},  {"ion", "", Cond::kIon},
    {"ou", "", Cond::kM1},   {"ism", "", Cond::kM1},  {"ate", "", Cond::kM1},
    {"iti", "", Cond::kM1},  {"ous", "", Cond::kM1},  {"ive", "", Cond::kM1},
    {"ize", "", Cond::kM1},
};

std::string step1b(std::string word) {
  if (word.ends_with("eed")) {
    const std::string_view stem(word.data(), word.size() - 3);
    if (measure(stem) > 0) return std::string(stem) + "ee";
    return word;
  }
  for (std::string_view suffix : {std::string_view("ed"), std::string_view("ing")}) {
    if (!word.ends_with(suffix)) continue;
    std::string stem = word.substr(0, word.size() - suffix.size());
    if (contains_vowel(stem)) return apply(std::move(stem), kStep1bTail);
    return word;
  }
  return word;
}

std::string step5a(std::string word) {
  if (!word.ends_with('e')) return word;
  const std::string_view stem(word.data(), word.size() - 1);
  const int m = measure(stem);
  if (m > 1 || (m == 1 && !ends_cvc(stem))) word.pop_back();
  return word;
}

std::string step5b(std::string word) {
  if (word.ends_with("ll") && measure(std::string_view(word.data(), word.size() - 1)) > 1) {
    word.pop_back();
  }
  return word;
}

}  // namespace

std::string porter_stem(std::string_view input) {
  std::string w = text::to_lower_ascii(input);
  w = apply(std::move(w), kStep1a);
  w = step1b(std::move(w));
  w = apply(std::move(w), kStep1c);
  w = apply(std::move(w), kStep2);
  w = apply(std::move(w), kStep3);
  w = apply(std::move(w), kStep4);
  w = step5a(std::move(w));
  w = step5b(std::move(w));
  return w;
}

}  // namespace evil::metrics
