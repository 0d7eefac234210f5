#pragma once

// The 12 classifier features per sentence pair. All values are finite;
// ratio-valued features live in [0,1].

#include <array>
#include <cmath>
#include <set>
#include <string>

#include "paramine/core.hpp"
#include "paramine/dictionary.hpp"
#include "paramine/error.hpp"
#include "paramine/langid.hpp"
#include "paramine/sentalign.hpp"

namespace paramine {

inline constexpr std::size_t kFeatureCount = 12;

enum FeatureId : std::size_t {
  kSrcLen = 0,
  kTgtLen,
  kLenRatio,
  kDictCovSt,
  kDictCovTs,
  kOverlapRatio,
  kDigitJaccard,
  kPunctRatioDiff,
  kUppercaseRatioDiff,
  kMeanTokenLenDiff,
  kLangIdConfSrc,
  kLangIdConfTgt,
};

inline constexpr std::array<const char*, kFeatureCount> kFeatureNames = {
    "src_len",       "tgt_len",        "len_ratio",           "dict_cov_st",
    "dict_cov_ts",   "overlap_ratio",  "digit_jaccard",       "punct_ratio_diff",
    "uppercase_ratio_diff", "mean_token_len_diff", "langid_conf_src", "langid_conf_tgt"};

struct FeatureVector {
  std::array<double, kFeatureCount> values{};

  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
};

// Shared unique-token overlap: |unique(src) ∩ unique(tgt)| over the smaller
// unique set. High overlap flags untranslated or boilerplate content.
inline double overlap_ratio(const Sentence& src, const Sentence& tgt) {
  if (src.tokens.empty() || tgt.tokens.empty())
    throw Error("overlap_ratio: both token lists must be non-empty");
  std::set<Token> a(src.tokens.begin(), src.tokens.end());
  std::set<Token> b(tgt.tokens.begin(), tgt.tokens.end());
  std::size_t inter = 0;
  for (const Token& t : a) inter += b.count(t);
  return static_cast<double>(inter) / static_cast<double>(std::min(a.size(), b.size()));
}

namespace detail {

inline bool is_numeral_token(const Token& t) {
  if (t.empty()) return false;
  std::size_t i = 0;
  while (i < t.size())
    if (!is_digit(decode_utf8_at(t, i))) return false;
  return true;
}

inline bool is_punct_token(const Token& t) {
  if (t.empty()) return false;
  std::size_t i = 0;
  while (i < t.size())
    if (!is_punct(decode_utf8_at(t, i))) return false;
  return true;
}

inline double punct_fraction(const Sentence& s) {
  if (s.tokens.empty()) return 0.0;
  std::size_t punct = 0;
  for (const Token& t : s.tokens) punct += is_punct_token(t) ? 1 : 0;
  return static_cast<double>(punct) / static_cast<double>(s.tokens.size());
}

// Fraction of letters that are uppercase in the original text (tokens are
// already lowercased, so this must look at the text).
inline double uppercase_fraction(const std::string& text) {
  std::size_t letters = 0, uppers = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    char32_t c = decode_utf8_at(text, i);
    if (!is_letter(c)) continue;
    ++letters;
    if (is_upper(c)) ++uppers;
  }
  return letters == 0 ? 0.0 : static_cast<double>(uppers) / static_cast<double>(letters);
}

inline double mean_token_len(const Sentence& s) {
  if (s.tokens.empty()) return 0.0;
  std::size_t total = 0;
  for (const Token& t : s.tokens) total += decode_utf8(t).size();
  return static_cast<double>(total) / static_cast<double>(s.tokens.size());
}

inline double digit_jaccard(const Sentence& src, const Sentence& tgt) {
  std::set<Token> a, b;
  for (const Token& t : src.tokens)
    if (is_numeral_token(t)) a.insert(t);
  for (const Token& t : tgt.tokens)
    if (is_numeral_token(t)) b.insert(t);
  if (a.empty() && b.empty()) return 1.0;
  std::size_t inter = 0;
  for (const Token& t : a) inter += b.count(t);
  std::size_t uni = a.size() + b.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

inline double langid_confidence(const Sentence& s, const std::vector<TrigramProfile>& profiles) {
  LangGuess guess = detect_language(s.text, profiles);
  return guess.lang == s.lang ? guess.confidence : 0.0;
}

}  // namespace detail

inline FeatureVector extract_features(const SentencePair& pair, const SeedDictionary& seed_st,
                                      const SeedDictionary& seed_ts,
                                      const std::vector<TrigramProfile>& profiles) {
  if (pair.src.tokens.empty() || pair.tgt.tokens.empty())
    throw Error("extract_features: both sentences must be non-empty");
  FeatureVector fv;
  double sl = static_cast<double>(pair.src.tokens.size());
  double tl = static_cast<double>(pair.tgt.tokens.size());
  fv[kSrcLen] = sl;
  fv[kTgtLen] = tl;
  fv[kLenRatio] = std::min(sl, tl) / std::max(sl, tl);
  fv[kDictCovSt] = dict_coverage(pair.src, pair.tgt, seed_st);
  fv[kDictCovTs] = dict_coverage(pair.tgt, pair.src, seed_ts);
  fv[kOverlapRatio] = overlap_ratio(pair.src, pair.tgt);
  fv[kDigitJaccard] = detail::digit_jaccard(pair.src, pair.tgt);
  fv[kPunctRatioDiff] = std::abs(detail::punct_fraction(pair.src) - detail::punct_fraction(pair.tgt));
  fv[kUppercaseRatioDiff] =
      std::abs(detail::uppercase_fraction(pair.src.text) - detail::uppercase_fraction(pair.tgt.text));
  fv[kMeanTokenLenDiff] = std::abs(detail::mean_token_len(pair.src) - detail::mean_token_len(pair.tgt));
  fv[kLangIdConfSrc] = detail::langid_confidence(pair.src, profiles);
  fv[kLangIdConfTgt] = detail::langid_confidence(pair.tgt, profiles);
  return fv;
}

}  // namespace paramine
