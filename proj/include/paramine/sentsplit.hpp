#pragma once

// Rule-based sentence boundary detection: split after . ! ? when followed by
// whitespace and an uppercase letter or opening quote. A period does not end
// a sentence when the word carrying it is on the abbreviation stop-list.
// Joining the output with single spaces and collapsing whitespace
// reconstructs the input block.

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "paramine/core.hpp"
#include "paramine/error.hpp"
#include "paramine/text.hpp"

namespace paramine {

using AbbrevSet = std::unordered_set<std::string>;

inline AbbrevSet default_abbreviations() {
  return AbbrevSet{"mr.",  "mrs.", "ms.",   "dr.",  "prof.", "sr.",   "jr.",  "st.",
                   "no.",  "nr.",  "fig.",  "vs.",  "etc.",  "e.g.",  "i.e.", "cf.",
                   "inc.", "ltd.", "co.",   "dept.", "univ.", "approx.", "ca.", "al."};
}

// One abbreviation per line (lowercase, trailing period); # starts a comment.
// The result extends the built-in list.
inline AbbrevSet load_abbreviations(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open abbreviation list: " + path.string());
  AbbrevSet set = default_abbreviations();
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string trimmed = normalize_ws(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    set.insert(lower_copy(trimmed));
  }
  return set;
}

namespace detail {

inline bool is_terminator(char32_t c) { return c == '.' || c == '!' || c == '?'; }

inline bool is_opening_quote(char32_t c) {
  switch (c) {
    case '"': case '\'': case 0x2018: case 0x201C: case 0xAB: case 0xBF: case 0xA1:
      return true;
    default:
      return false;
  }
}

inline bool is_word_or_dot(char32_t c) { return c == '.' || is_letter(c) || is_digit(c); }

}  // namespace detail

inline std::vector<Sentence> split_sentences(std::string_view block, std::string_view lang,
                                             const AbbrevSet& abbreviations) {
  std::vector<Sentence> sentences;
  // decode with byte offsets so sentence texts slice the original block
  std::vector<char32_t> cps;
  std::vector<std::size_t> offs;
  std::size_t pos = 0;
  while (pos < block.size()) {
    offs.push_back(pos);
    cps.push_back(decode_utf8_at(block, pos));
  }
  offs.push_back(block.size());
  const std::size_t n = cps.size();

  auto emit = [&](std::size_t cp_begin, std::size_t cp_end) {
    while (cp_begin < cp_end && is_space(cps[cp_begin])) ++cp_begin;
    while (cp_end > cp_begin && is_space(cps[cp_end - 1])) --cp_end;
    if (cp_begin >= cp_end) return;
    sentences.push_back(
        make_sentence(block.substr(offs[cp_begin], offs[cp_end] - offs[cp_begin]), lang));
  };

  std::size_t start = 0;
  std::size_t i = 0;
  while (i < n) {
    if (!detail::is_terminator(cps[i])) {
      ++i;
      continue;
    }
    std::size_t term_begin = i;
    while (i + 1 < n && detail::is_terminator(cps[i + 1])) ++i;
    std::size_t after = i + 1;
    // boundary requires whitespace then uppercase or opening quote
    std::size_t m = after;
    while (m < n && is_space(cps[m])) ++m;
    bool boundary = m > after && m < n && (is_upper(cps[m]) || detail::is_opening_quote(cps[m]));
    if (boundary && term_begin == i && cps[i] == '.') {
      // single period: check the abbreviation stop-list
      std::size_t w = term_begin;
      while (w > start && detail::is_word_or_dot(cps[w - 1])) --w;
      std::string word;
      for (std::size_t k = w; k <= term_begin; ++k) append_utf8(word, to_lower(cps[k]));
      if (abbreviations.count(word)) boundary = false;
    }
    if (boundary) {
      emit(start, after);
      start = m;
      i = m;
    } else {
      i = after;
    }
  }
  emit(start, n);
  return sentences;
}

inline std::vector<Sentence> split_sentences(std::string_view block, std::string_view lang) {
  static const AbbrevSet kDefault = default_abbreviations();
  return split_sentences(block, lang, kDefault);
}

}  // namespace paramine
