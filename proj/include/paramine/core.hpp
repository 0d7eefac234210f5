#pragma once

// Domain types shared by every pipeline stage, plus the tokenizer.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "paramine/error.hpp"
#include "paramine/text.hpp"

namespace paramine {

using Token = std::string;

struct LanguagePair {
  std::string src;
  std::string tgt;
};

inline bool valid_language_code(std::string_view code) {
  if (code.size() < 2 || code.size() > 3) return false;
  for (char c : code)
    if (c < 'a' || c > 'z') return false;
  return true;
}

inline LanguagePair make_language_pair(std::string src, std::string tgt) {
  if (!valid_language_code(src) || !valid_language_code(tgt))
    throw ValidationError("language codes must be lowercase, 2-3 letters: '" + src + "', '" + tgt + "'");
  if (src == tgt) throw ValidationError("source and target language must differ: '" + src + "'");
  return LanguagePair{std::move(src), std::move(tgt)};
}

// Lowercases, splits on Unicode whitespace, and isolates each punctuation
// mark as its own token. Maximal alphanumeric runs (letters, digits,
// combining marks) stay together, so numerals survive as single tokens.
// The language code is accepted for interface symmetry; the rules are
// language-agnostic.
inline std::vector<Token> tokenize(std::string_view text, std::string_view lang = {}) {
  (void)lang;
  std::vector<Token> out;
  std::string word;
  auto flush = [&] {
    if (!word.empty()) {
      out.push_back(word);
      word.clear();
    }
  };
  std::size_t i = 0;
  while (i < text.size()) {
    char32_t c = to_lower(decode_utf8_at(text, i));
    if (is_space(c)) {
      flush();
    } else if (is_punct(c)) {
      flush();
      out.push_back(encode_utf8(c));
    } else {
      append_utf8(word, c);
    }
  }
  flush();
  return out;
}

struct Sentence {
  std::string text;
  std::vector<Token> tokens;
  std::string lang;
};

// Newlines are not representable inside a sentence; they are replaced with
// spaces. Tokens are always recomputed from the stored text.
inline Sentence make_sentence(std::string_view text, std::string_view lang) {
  Sentence s;
  s.text.reserve(text.size());
  for (char c : text) s.text.push_back(c == '\n' || c == '\r' ? ' ' : c);
  s.lang = std::string(lang);
  s.tokens = tokenize(s.text, s.lang);
  return s;
}

enum class Provenance { pseudo, crawled, synthetic };

inline const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::pseudo: return "pseudo";
    case Provenance::crawled: return "crawled";
    case Provenance::synthetic: return "synthetic";
  }
  return "crawled";
}

inline Provenance provenance_from_string(std::string_view s) {
  if (s == "pseudo") return Provenance::pseudo;
  if (s == "crawled") return Provenance::crawled;
  if (s == "synthetic") return Provenance::synthetic;
  throw Error("unknown provenance: '" + std::string(s) + "'");
}

struct Origin {
  std::string domain;
  std::string src_url;
  std::string tgt_url;
  std::string reason;  // set on rejected pairs only

  bool empty() const { return domain.empty() && src_url.empty() && tgt_url.empty() && reason.empty(); }
};

struct SentencePair {
  Sentence src;
  Sentence tgt;
  std::optional<double> score;  // in [0,1] when set
  Provenance provenance = Provenance::crawled;
  Origin origin;
};

enum class CorpusKind { A_pseudo, B_raw, C_filtered, rejected };

inline const char* to_string(CorpusKind k) {
  switch (k) {
    case CorpusKind::A_pseudo: return "A_pseudo";
    case CorpusKind::B_raw: return "B_raw";
    case CorpusKind::C_filtered: return "C_filtered";
    case CorpusKind::rejected: return "rejected";
  }
  return "B_raw";
}

struct Corpus {
  std::vector<SentencePair> pairs;
  CorpusKind kind = CorpusKind::B_raw;
  LanguagePair pair_languages;

  std::size_t size() const { return pairs.size(); }
  bool empty() const { return pairs.empty(); }
};

// Seed positives for dictionary induction and classifier training.
struct PseudoParallelCorpus {
  Corpus inner;

  static PseudoParallelCorpus from(Corpus c) {
    if (c.kind != CorpusKind::A_pseudo) throw Error("pseudo-parallel corpus must have kind A_pseudo");
    return PseudoParallelCorpus{std::move(c)};
  }
  std::size_t size() const { return inner.size(); }
};

}  // namespace paramine
