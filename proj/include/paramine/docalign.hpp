#pragma once

// Document alignment across the two languages of a domain. Candidate pairs
// are scored by three components combined with configurable weights:
//
//   url_score       1 - normalized edit distance between the URLs'
//                   path+query strings after language-token segments are
//                   replaced by a placeholder; forced to 0 when neither URL
//                   carries a language token and the URLs differ
//   structure_score 1 - normalized edit distance between tag signatures
//   content_score   dictionary-translated token-bag overlap
//
// Matching is greedy one-to-one in descending total order, ties broken by
// (src URL, tgt URL); pairs below the threshold are dropped.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "paramine/core.hpp"
#include "paramine/dictionary.hpp"
#include "paramine/error.hpp"
#include "paramine/parallel.hpp"
#include "paramine/url.hpp"
#include "paramine/webdoc.hpp"

namespace paramine {

// Generic edit distance; used on codepoint sequences and tag signatures.
template <class T>
std::size_t levenshtein(std::span<const T> a, std::span<const T> b) {
  if (a.empty()) return b.size();
  if (b.empty()) return a.size();
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

// Known URL tokens per language: the language code itself, ISO-639-3 codes,
// English language names, plus anything loaded from an alias file. The
// code itself is always a token, so unlisted languages still normalize.
class LanguageAliases {
 public:
  static LanguageAliases builtin() {
    LanguageAliases a;
    auto add = [&](const char* code, std::initializer_list<const char*> names) {
      auto& v = a.aliases_[code];
      for (const char* n : names) v.push_back(n);
    };
    add("en", {"eng", "english"});
    add("fr", {"fra", "fre", "french"});
    add("de", {"deu", "ger", "german", "deutsch"});
    add("ro", {"ron", "rum", "romanian"});
    add("es", {"spa", "spanish", "espanol"});
    add("it", {"ita", "italian", "italiano"});
    add("pt", {"por", "portuguese"});
    add("nl", {"nld", "dut", "dutch"});
    add("pl", {"pol", "polish"});
    add("ru", {"rus", "russian"});
    add("cs", {"ces", "cze", "czech"});
    add("sv", {"swe", "swedish"});
    add("da", {"dan", "danish"});
    add("fi", {"fin", "finnish"});
    add("no", {"nor", "norwegian"});
    add("hu", {"hun", "hungarian"});
    add("tr", {"tur", "turkish"});
    add("el", {"ell", "gre", "greek"});
    add("bg", {"bul", "bulgarian"});
    add("uk", {"ukr", "ukrainian"});
    add("ja", {"jpn", "japanese"});
    add("zh", {"zho", "chi", "chinese"});
    add("ko", {"kor", "korean"});
    add("ar", {"ara", "arabic"});
    add("hi", {"hin", "hindi"});
    return a;
  }

  // Extends the table from a TSV file of `code <TAB> alias` lines.
  void load_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open language alias file: " + path.string());
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      std::string trimmed = normalize_ws(line);
      if (trimmed.empty() || trimmed[0] == '#') continue;
      std::size_t tab = line.find('\t');
      if (tab == std::string::npos)
        throw Error(path.string() + ":" + std::to_string(lineno) + ": expected `code<TAB>alias`");
      std::string code = lower_copy(normalize_ws(line.substr(0, tab)));
      std::string alias = lower_copy(normalize_ws(line.substr(tab + 1)));
      if (code.empty() || alias.empty())
        throw Error(path.string() + ":" + std::to_string(lineno) + ": empty code or alias");
      aliases_[code].push_back(alias);
    }
  }

  std::vector<std::string> tokens_for(const std::string& code) const {
    std::vector<std::string> tokens{code};
    auto it = aliases_.find(code);
    if (it != aliases_.end()) tokens.insert(tokens.end(), it->second.begin(), it->second.end());
    return tokens;
  }

 private:
  std::unordered_map<std::string, std::vector<std::string>> aliases_;
};

namespace detail {

inline constexpr const char* kLangPlaceholder = "{L}";

struct UrlNormalization {
  std::string normalized;  // path+query with language segments replaced
  bool had_language_token = false;
};

inline UrlNormalization normalize_url_for_match(const Url& url,
                                                const std::vector<std::string>& lang_tokens) {
  auto is_token = [&](std::string_view seg) {
    std::string low = lower_copy(seg);
    for (const std::string& t : lang_tokens)
      if (low == t) return true;
    return false;
  };
  UrlNormalization result;
  std::string pq = url.path_and_query();
  std::string path = pq;
  std::string query;
  std::size_t q = pq.find('?');
  if (q != std::string::npos) {
    path = pq.substr(0, q);
    query = pq.substr(q + 1);
  }
  std::string out;
  std::size_t i = 0;
  while (i <= path.size()) {
    std::size_t j = path.find('/', i);
    if (j == std::string::npos) j = path.size();
    std::string_view seg = std::string_view(path).substr(i, j - i);
    if (!out.empty() || i > 0) out += '/';
    if (is_token(seg)) {
      out += kLangPlaceholder;
      result.had_language_token = true;
    } else {
      out += seg;
    }
    if (j == path.size()) break;
    i = j + 1;
  }
  if (!query.empty()) {
    out += '?';
    std::size_t k = 0;
    bool first = true;
    while (k <= query.size()) {
      std::size_t j = query.find('&', k);
      if (j == std::string::npos) j = query.size();
      std::string_view piece = std::string_view(query).substr(k, j - k);
      if (!first) out += '&';
      first = false;
      std::size_t eq = piece.find('=');
      if (is_token(piece)) {
        out += kLangPlaceholder;
        result.had_language_token = true;
      } else if (eq != std::string_view::npos && is_token(piece.substr(eq + 1))) {
        out += piece.substr(0, eq + 1);
        out += kLangPlaceholder;
        result.had_language_token = true;
      } else {
        out += piece;
      }
      if (j == query.size()) break;
      k = j + 1;
    }
  }
  result.normalized = std::move(out);
  return result;
}

}  // namespace detail

// Symmetric in its URL arguments. Unparseable URLs score 0.
inline double url_match_score(const Url& a, const Url& b, const LanguagePair& pair,
                              const LanguageAliases& aliases) {
  if (!a.valid || !b.valid) return 0.0;
  std::vector<std::string> tokens = aliases.tokens_for(pair.src);
  for (std::string& t : aliases.tokens_for(pair.tgt)) tokens.push_back(std::move(t));
  detail::UrlNormalization na = detail::normalize_url_for_match(a, tokens);
  detail::UrlNormalization nb = detail::normalize_url_for_match(b, tokens);
  if (!na.had_language_token && !nb.had_language_token && a.str() != b.str()) return 0.0;
  std::vector<char32_t> ca = decode_utf8(na.normalized);
  std::vector<char32_t> cb = decode_utf8(nb.normalized);
  std::size_t longest = std::max(ca.size(), cb.size());
  if (longest == 0) return 1.0;
  std::size_t dist = levenshtein(std::span<const char32_t>(ca), std::span<const char32_t>(cb));
  return 1.0 - static_cast<double>(dist) / static_cast<double>(longest);
}

inline double url_match_score(std::string_view a, std::string_view b, const LanguagePair& pair,
                              const LanguageAliases& aliases) {
  return url_match_score(parse_url(a), parse_url(b), pair, aliases);
}

inline double structure_score(std::span<const std::string> sig_a, std::span<const std::string> sig_b) {
  std::size_t longest = std::max(sig_a.size(), sig_b.size());
  if (longest == 0) return 1.0;
  std::size_t dist = levenshtein(sig_a, sig_b);
  return 1.0 - static_cast<double>(dist) / static_cast<double>(longest);
}

namespace detail {

using TokenBag = std::unordered_map<std::string, std::size_t>;

inline TokenBag document_token_bag(const WebDocument& doc) {
  TokenBag bag;
  for (const Sentence& s : doc.sentences)
    for (const Token& t : s.tokens) ++bag[t];
  return bag;
}

inline double content_score_bags(const TokenBag& bag_a, std::size_t total_a, const TokenBag& bag_b,
                                 std::size_t total_b, const SeedDictionary& seed) {
  std::size_t longest = std::max(total_a, total_b);
  if (longest == 0) return 0.0;
  TokenBag translated;
  for (const auto& [tok, n] : bag_a) {
    const SeedEntry* top = seed.top1(tok);
    if (top != nullptr) translated[top->tgt] += n;
  }
  std::size_t inter = 0;
  for (const auto& [tok, n] : translated) {
    auto it = bag_b.find(tok);
    if (it != bag_b.end()) inter += std::min(n, it->second);
  }
  return static_cast<double>(inter) / static_cast<double>(longest);
}

}  // namespace detail

// Translates doc_a's token bag through the seed's top-1 entries and measures
// multiset overlap with doc_b's bag, normalized by the larger token count.
inline double content_score(const WebDocument& doc_a, const WebDocument& doc_b,
                            const SeedDictionary& seed) {
  if (seed.empty()) throw Error("content_score: seed dictionary is empty");
  return detail::content_score_bags(detail::document_token_bag(doc_a), doc_a.token_count(),
                                    detail::document_token_bag(doc_b), doc_b.token_count(), seed);
}

struct DocAlignWeights {
  double url = 0.5;
  double structure = 0.25;
  double content = 0.25;

  void validate() const {
    if (url < 0 || structure < 0 || content < 0)
      throw ValidationError("document alignment weights must be non-negative");
    double sum = url + structure + content;
    if (sum < 1.0 - 1e-9 || sum > 1.0 + 1e-9)
      throw ValidationError("document alignment weights must sum to 1");
  }
};

struct DocumentPair {
  WebDocument src_doc;
  WebDocument tgt_doc;
  double url_score = 0.0;
  double structure_score = 0.0;
  double content_score = 0.0;
  double total = 0.0;
};

struct ScoredCandidate {
  std::size_t src_index = 0;
  std::size_t tgt_index = 0;
  std::string src_url;
  std::string tgt_url;
  double url_score = 0.0;
  double structure_score = 0.0;
  double content_score = 0.0;
  double total = 0.0;
};

// The greedy rule, exposed separately so tests can drive it with raw scores:
// descending total, ties by (src URL, tgt URL), one-to-one, total >= threshold.
inline std::vector<ScoredCandidate> greedy_one_to_one(std::vector<ScoredCandidate> candidates,
                                                      double threshold) {
  std::sort(candidates.begin(), candidates.end(),
            [](const ScoredCandidate& a, const ScoredCandidate& b) {
              if (a.total != b.total) return a.total > b.total;
              if (a.src_url != b.src_url) return a.src_url < b.src_url;
              return a.tgt_url < b.tgt_url;
            });
  std::vector<ScoredCandidate> chosen;
  std::unordered_map<std::size_t, bool> src_used, tgt_used;
  for (const ScoredCandidate& c : candidates) {
    if (c.total < threshold) break;
    if (src_used[c.src_index] || tgt_used[c.tgt_index]) continue;
    src_used[c.src_index] = true;
    tgt_used[c.tgt_index] = true;
    chosen.push_back(c);
  }
  return chosen;
}

// Scores every cross pair and applies the greedy rule. Either side empty
// yields an empty result.
inline std::vector<DocumentPair> align_documents(std::span<const WebDocument> docs_p,
                                                 std::span<const WebDocument> docs_q,
                                                 const LanguagePair& pair,
                                                 const SeedDictionary& seed,
                                                 const LanguageAliases& aliases,
                                                 const DocAlignWeights& weights, double threshold,
                                                 int workers = 1) {
  weights.validate();
  if (threshold < 0.0 || threshold > 1.0)
    throw ValidationError("document alignment threshold must be in [0,1]");
  if (docs_p.empty() || docs_q.empty()) return {};

  std::vector<detail::TokenBag> bags_p(docs_p.size()), bags_q(docs_q.size());
  std::vector<std::size_t> totals_p(docs_p.size()), totals_q(docs_q.size());
  std::vector<Url> urls_p(docs_p.size()), urls_q(docs_q.size());
  for (std::size_t i = 0; i < docs_p.size(); ++i) {
    bags_p[i] = detail::document_token_bag(docs_p[i]);
    totals_p[i] = docs_p[i].token_count();
    urls_p[i] = parse_url(docs_p[i].url);
  }
  for (std::size_t j = 0; j < docs_q.size(); ++j) {
    bags_q[j] = detail::document_token_bag(docs_q[j]);
    totals_q[j] = docs_q[j].token_count();
    urls_q[j] = parse_url(docs_q[j].url);
  }

  std::vector<ScoredCandidate> candidates(docs_p.size() * docs_q.size());
  parallel_for(docs_p.size(), workers, [&](std::size_t i) {
    for (std::size_t j = 0; j < docs_q.size(); ++j) {
      ScoredCandidate& c = candidates[i * docs_q.size() + j];
      c.src_index = i;
      c.tgt_index = j;
      c.src_url = docs_p[i].url;
      c.tgt_url = docs_q[j].url;
      c.url_score = url_match_score(urls_p[i], urls_q[j], pair, aliases);
      c.structure_score = structure_score(docs_p[i].tag_signature, docs_q[j].tag_signature);
      c.content_score = seed.empty() ? 0.0
                                     : detail::content_score_bags(bags_p[i], totals_p[i], bags_q[j],
                                                                  totals_q[j], seed);
      c.total = weights.url * c.url_score + weights.structure * c.structure_score +
                weights.content * c.content_score;
    }
  });

  std::vector<DocumentPair> pairs;
  for (const ScoredCandidate& c : greedy_one_to_one(std::move(candidates), threshold)) {
    DocumentPair dp;
    dp.src_doc = docs_p[c.src_index];
    dp.tgt_doc = docs_q[c.tgt_index];
    dp.url_score = c.url_score;
    dp.structure_score = c.structure_score;
    dp.content_score = c.content_score;
    dp.total = c.total;
    pairs.push_back(std::move(dp));
  }
  return pairs;
}

// JSON Lines persistence: one object per pair with the URLs and four scores.
inline void write_document_pairs_jsonl(const std::vector<DocumentPair>& pairs,
                                       const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open for writing: " + path.string());
  for (const DocumentPair& p : pairs) {
    nlohmann::json j;
    j["src_url"] = p.src_doc.url;
    j["tgt_url"] = p.tgt_doc.url;
    j["url_score"] = p.url_score;
    j["structure_score"] = p.structure_score;
    j["content_score"] = p.content_score;
    j["total"] = p.total;
    out << j.dump() << '\n';
  }
  if (!out) throw Error("write failed: " + path.string());
}

struct DocumentPairRef {
  std::string src_url;
  std::string tgt_url;
  double url_score = 0.0;
  double structure_score = 0.0;
  double content_score = 0.0;
  double total = 0.0;
};

inline std::vector<DocumentPairRef> read_document_pairs_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open document pairs file: " + path.string());
  std::vector<DocumentPairRef> pairs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::string where = path.string() + ":" + std::to_string(lineno);
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw Error(where + ": malformed JSON");
    DocumentPairRef ref;
    ref.src_url = j.value("src_url", "");
    ref.tgt_url = j.value("tgt_url", "");
    ref.url_score = j.value("url_score", 0.0);
    ref.structure_score = j.value("structure_score", 0.0);
    ref.content_score = j.value("content_score", 0.0);
    ref.total = j.value("total", 0.0);
    pairs.push_back(std::move(ref));
  }
  return pairs;
}

}  // namespace paramine
