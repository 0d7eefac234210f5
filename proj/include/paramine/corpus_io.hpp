#pragma once

// TSV bitext file format:
//   src_text <TAB> tgt_text <TAB> score <TAB> provenance <TAB> origin_json
// UTF-8, one pair per line. Literal backslash/tab/newline/CR inside text are
// escaped as \\ \t \n \r. The score column is '-' when unset, otherwise a
// decimal with six fractional digits. origin_json is '-' or a JSON object
// with any of the keys domain, src_url, tgt_url, reason.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "paramine/core.hpp"
#include "paramine/error.hpp"

namespace paramine {

inline std::string escape_field(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

inline std::string unescape_field(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\' || i + 1 >= s.size()) {
      out.push_back(s[i]);
      continue;
    }
    switch (s[++i]) {
      case '\\': out.push_back('\\'); break;
      case 't': out.push_back('\t'); break;
      case 'n': out.push_back('\n'); break;
      case 'r': out.push_back('\r'); break;
      default:
        out.push_back('\\');
        out.push_back(s[i]);
    }
  }
  return out;
}

// Scores are stored as decimal text with six fractional digits for
// bit-stable round trips.
inline std::string format_score(const std::optional<double>& score) {
  if (!score) return "-";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", *score);
  return buf;
}

inline std::string origin_to_string(const Origin& o) {
  if (o.empty()) return "-";
  nlohmann::json j = nlohmann::json::object();
  if (!o.domain.empty()) j["domain"] = o.domain;
  if (!o.src_url.empty()) j["src_url"] = o.src_url;
  if (!o.tgt_url.empty()) j["tgt_url"] = o.tgt_url;
  if (!o.reason.empty()) j["reason"] = o.reason;
  return j.dump();
}

inline Origin origin_from_string(std::string_view s, const std::string& where) {
  Origin o;
  if (s == "-" || s.empty()) return o;
  nlohmann::json j = nlohmann::json::parse(s, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Error(where + ": malformed origin JSON");
  o.domain = j.value("domain", "");
  o.src_url = j.value("src_url", "");
  o.tgt_url = j.value("tgt_url", "");
  o.reason = j.value("reason", "");
  return o;
}

inline void write_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open for writing: " + path.string());
  for (const SentencePair& p : corpus.pairs) {
    out << escape_field(p.src.text) << '\t' << escape_field(p.tgt.text) << '\t'
        << format_score(p.score) << '\t' << to_string(p.provenance) << '\t'
        << origin_to_string(p.origin) << '\n';
  }
  if (!out) throw Error("write failed: " + path.string());
}

// Token fields are recomputed through tokenize; line order is preserved.
inline Corpus read_corpus(const std::filesystem::path& path, CorpusKind kind,
                          const LanguagePair& languages) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open corpus: " + path.string());
  Corpus corpus;
  corpus.kind = kind;
  corpus.pair_languages = languages;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string where = path.string() + ":" + std::to_string(lineno);
    std::vector<std::string_view> cols;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
      if (i == line.size() || line[i] == '\t') {
        cols.push_back(std::string_view(line).substr(start, i - start));
        start = i + 1;
      }
    }
    if (cols.size() != 5)
      throw Error(where + ": expected 5 tab-separated columns, got " + std::to_string(cols.size()));
    SentencePair pair;
    pair.src = make_sentence(unescape_field(cols[0]), languages.src);
    pair.tgt = make_sentence(unescape_field(cols[1]), languages.tgt);
    if (cols[2] != "-") {
      char* end = nullptr;
      std::string score_str(cols[2]);
      double v = std::strtod(score_str.c_str(), &end);
      if (end != score_str.c_str() + score_str.size() || v < 0.0 || v > 1.0)
        throw Error(where + ": score must be '-' or a number in [0,1], got '" + score_str + "'");
      pair.score = v;
    }
    try {
      pair.provenance = provenance_from_string(cols[3]);
    } catch (const Error& e) {
      throw Error(where + ": " + e.what());
    }
    pair.origin = origin_from_string(cols[4], where);
    corpus.pairs.push_back(std::move(pair));
  }
  return corpus;
}

}  // namespace paramine
