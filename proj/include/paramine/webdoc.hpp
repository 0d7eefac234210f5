#pragma once

// WebDocument: a fetched page with extracted text blocks, language guess,
// sentences and tag signature, plus the JSONL persistence the pipeline
// stages exchange documents through.

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "paramine/core.hpp"
#include "paramine/error.hpp"
#include "paramine/html.hpp"
#include "paramine/langid.hpp"
#include "paramine/parallel.hpp"
#include "paramine/sentsplit.hpp"

namespace paramine {

enum class FetchStatus { fetched, from_snapshot, failed };

inline const char* to_string(FetchStatus s) {
  switch (s) {
    case FetchStatus::fetched: return "fetched";
    case FetchStatus::from_snapshot: return "from_snapshot";
    case FetchStatus::failed: return "failed";
  }
  return "failed";
}

inline FetchStatus fetch_status_from_string(std::string_view s) {
  if (s == "fetched") return FetchStatus::fetched;
  if (s == "from_snapshot") return FetchStatus::from_snapshot;
  if (s == "failed") return FetchStatus::failed;
  throw Error("unknown fetch status: '" + std::string(s) + "'");
}

struct WebDocument {
  std::string url;  // normalized
  std::string raw_html;
  std::vector<std::string> text_blocks;
  std::vector<Sentence> sentences;
  std::string lang = kUnknownLang;
  double lang_confidence = 0.0;
  std::vector<std::string> tag_signature;
  FetchStatus fetch_status = FetchStatus::failed;

  std::size_t token_count() const {
    std::size_t n = 0;
    for (const Sentence& s : sentences) n += s.tokens.size();
    return n;
  }
};

// Fills text_blocks and tag_signature from raw_html.
inline void populate_content(WebDocument& doc) {
  ExtractedText extracted = extract_text(doc.raw_html);
  doc.text_blocks = std::move(extracted.blocks);
  doc.tag_signature = std::move(extracted.tag_signature);
}

// Assigns each document's language from its joined text blocks, then splits
// blocks into sentences tagged with that language. Pure per document.
inline void identify_and_split(std::vector<WebDocument>& docs,
                               const std::vector<TrigramProfile>& profiles,
                               const AbbrevSet& abbreviations, int workers = 1) {
  parallel_for(docs.size(), workers, [&](std::size_t i) {
    WebDocument& doc = docs[i];
    std::string joined;
    for (const std::string& block : doc.text_blocks) {
      if (!joined.empty()) joined += ' ';
      joined += block;
    }
    LangGuess guess = detect_language(joined, profiles);
    doc.lang = guess.lang;
    doc.lang_confidence = guess.confidence;
    doc.sentences.clear();
    for (const std::string& block : doc.text_blocks) {
      auto split = split_sentences(block, doc.lang, abbreviations);
      doc.sentences.insert(doc.sentences.end(), split.begin(), split.end());
    }
  });
}

inline nlohmann::json document_to_json(const WebDocument& doc) {
  nlohmann::json j;
  j["url"] = doc.url;
  j["lang"] = doc.lang;
  j["lang_confidence"] = doc.lang_confidence;
  j["fetch_status"] = to_string(doc.fetch_status);
  j["tag_signature"] = doc.tag_signature;
  nlohmann::json sentences = nlohmann::json::array();
  for (const Sentence& s : doc.sentences) sentences.push_back(s.text);
  j["sentences"] = std::move(sentences);
  return j;
}

// raw_html and text_blocks are not persisted; the alignment stages need only
// sentences, signature, language and URL.
inline WebDocument document_from_json(const nlohmann::json& j, const std::string& where) {
  if (!j.is_object()) throw Error(where + ": document record must be a JSON object");
  WebDocument doc;
  doc.url = j.value("url", "");
  doc.lang = j.value("lang", kUnknownLang);
  doc.lang_confidence = j.value("lang_confidence", 0.0);
  doc.fetch_status = fetch_status_from_string(j.value("fetch_status", "failed"));
  for (const auto& t : j.value("tag_signature", nlohmann::json::array()))
    doc.tag_signature.push_back(t.get<std::string>());
  for (const auto& s : j.value("sentences", nlohmann::json::array()))
    doc.sentences.push_back(make_sentence(s.get<std::string>(), doc.lang));
  return doc;
}

inline void write_documents_jsonl(const std::vector<WebDocument>& docs,
                                  const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open for writing: " + path.string());
  for (const WebDocument& doc : docs) out << document_to_json(doc).dump() << '\n';
  if (!out) throw Error("write failed: " + path.string());
}

inline std::vector<WebDocument> read_documents_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open documents file: " + path.string());
  std::vector<WebDocument> docs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::string where = path.string() + ":" + std::to_string(lineno);
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) throw Error(where + ": malformed JSON");
    docs.push_back(document_from_json(j, where));
  }
  return docs;
}

}  // namespace paramine
