#pragma once

// Synthetic bilingual-website fixture: a source "language" of random token
// sentences and a target language produced by a bijective token cipher.
// Pages are emitted as HTML under /xx/... and /yy/... URL twins with a
// snapshot manifest, the true sentence-pair list, the cipher as a dictionary
// file, and a pseudo-parallel corpus (a noisy copy of the true pairs with
// token-substitution noise standing in for translator imperfection).
//
// The two vocabularies draw from disjoint letter ranges (a-m vs n-z), so the
// languages are separable by character trigrams and share no tokens.
//
// Noise controls: a fraction of pages have no twin on the other side; a
// fraction of sentence slots get an extra untranslated sentence inserted on
// one side; a fraction of page pairs get a near-duplicate copy with one
// substituted token. Everything derives from the seed.

#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "paramine/core.hpp"
#include "paramine/corpus_io.hpp"
#include "paramine/dictionary.hpp"
#include "paramine/error.hpp"
#include "paramine/rng.hpp"

namespace paramine {

inline constexpr const char* kFixtureSrcLang = "xx";
inline constexpr const char* kFixtureTgtLang = "yy";

struct SyntheticFixtureSpec {
  int sites = 4;
  int pages_per_site = 6;      // page pairs per site before noise
  int sentences_per_page = 6;
  int vocab_size = 120;
  double unpaired_fraction = 0.0;
  double untranslated_fraction = 0.0;
  double near_duplicate_fraction = 0.0;
  double pseudo_noise = 0.0;  // per-token substitution rate on the target side of A
  std::uint64_t seed = 0;

  void validate() const {
    if (sites < 1 || pages_per_site < 1 || sentences_per_page < 1 || vocab_size < 8)
      throw ValidationError("fixture spec: counts must be positive (vocab >= 8)");
    for (double f : {unpaired_fraction, untranslated_fraction, near_duplicate_fraction, pseudo_noise})
      if (f < 0.0 || f > 1.0) throw ValidationError("fixture spec: fractions must be in [0,1]");
  }
};

struct FixtureOutput {
  std::filesystem::path manifest;       // snapshot manifest
  std::filesystem::path truth;          // ground-truth pair list (corpus TSV)
  std::filesystem::path cipher;         // true cipher as a seed dictionary file
  std::filesystem::path pseudo_corpus;  // corpus A
  std::filesystem::path config;         // ready-to-run pipeline config
  std::int64_t pages_written = 0;
  std::int64_t truth_pairs = 0;
};

namespace detail {

inline std::string random_word(Rng& rng, char first_letter, int letter_range) {
  std::size_t len = 3 + rng.below(5);  // 3..7
  std::string w;
  for (std::size_t i = 0; i < len; ++i)
    w.push_back(static_cast<char>(first_letter + rng.below(static_cast<std::uint64_t>(letter_range))));
  return w;
}

inline std::vector<std::string> random_vocab(Rng& rng, int size, char first_letter, int letter_range) {
  std::set<std::string> seen;
  std::vector<std::string> vocab;
  while (static_cast<int>(vocab.size()) < size) {
    std::string w = random_word(rng, first_letter, letter_range);
    if (seen.insert(w).second) vocab.push_back(std::move(w));
  }
  return vocab;
}

inline std::string sentence_from_tokens(const std::vector<std::string>& tokens) {
  std::string text;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) text += ' ';
    text += tokens[i];
  }
  if (!text.empty() && text[0] >= 'a' && text[0] <= 'z') text[0] -= 0x20;
  text += '.';
  return text;
}

inline std::string page_html(const std::string& title, const std::vector<std::string>& sentences,
                             Rng& rng) {
  std::string html = "<html><head><title>" + title + "</title></head>\n<body>\n";
  if (rng.chance(0.3)) html += "<script>var tracker = 1;</script>\n";
  std::size_t i = 0;
  while (i < sentences.size()) {
    std::size_t group = 1 + rng.below(3);  // 1..3 sentences per paragraph
    html += "<p>";
    for (std::size_t k = 0; k < group && i < sentences.size(); ++k, ++i) {
      if (k > 0) html += ' ';
      html += sentences[i];
    }
    html += "</p>\n";
  }
  html += "</body></html>\n";
  return html;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open for writing: " + path.string());
  out << content;
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace detail

inline FixtureOutput gen_fixture(const SyntheticFixtureSpec& spec,
                                 const std::filesystem::path& out_dir) {
  spec.validate();
  namespace fs = std::filesystem;
  fs::create_directories(out_dir / "pages");

  Rng rng(spec.seed);
  std::vector<std::string> src_vocab = detail::random_vocab(rng, spec.vocab_size, 'a', 13);
  std::vector<std::string> tgt_vocab = detail::random_vocab(rng, spec.vocab_size, 'n', 13);

  auto draw_sentence_tokens = [&](const std::vector<std::string>& vocab) {
    std::size_t len = 4 + rng.below(6);  // 4..9 words, so every side clears the length rule
    std::vector<std::string> tokens;
    tokens.reserve(len);
    for (std::size_t i = 0; i < len; ++i) tokens.push_back(vocab[rng.below(vocab.size())]);
    return tokens;
  };
  std::unordered_map<std::string, std::size_t> src_index;
  for (std::size_t v = 0; v < src_vocab.size(); ++v) src_index.emplace(src_vocab[v], v);
  auto cipher_tokens = [&](const std::vector<std::string>& src_tokens) {
    std::vector<std::string> out;
    out.reserve(src_tokens.size());
    for (const std::string& t : src_tokens) out.push_back(tgt_vocab[src_index.at(t)]);
    return out;
  };

  std::string manifest_text;
  Corpus truth;
  truth.kind = CorpusKind::C_filtered;
  truth.pair_languages = LanguagePair{kFixtureSrcLang, kFixtureTgtLang};
  std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> truth_token_lists;
  std::int64_t pages_written = 0;

  auto emit_page = [&](const std::string& host, std::string_view lang, const std::string& page_id,
                       const std::string& title, const std::vector<std::string>& sentences) {
    fs::path rel = fs::path("pages") / host / std::string(lang) / (page_id + ".html");
    fs::create_directories(out_dir / rel.parent_path());
    detail::write_text_file(out_dir / rel, detail::page_html(title, sentences, rng));
    manifest_text += "http://" + host + "/" + std::string(lang) + "/" + page_id + ".html\t" +
                     rel.generic_string() + "\ttext/html\n";
    ++pages_written;
  };

  for (int s = 0; s < spec.sites; ++s) {
    std::string host = "site" + std::to_string(s) + ".example";
    for (int k = 0; k < spec.pages_per_site; ++k) {
      std::string page_id = "p" + std::to_string(k);
      std::string title = host + " " + page_id;
      bool unpaired = rng.chance(spec.unpaired_fraction);
      bool unpaired_src_side = unpaired && rng.next() % 2 == 0;

      std::vector<std::string> src_sentences, tgt_sentences;
      for (int q = 0; q < spec.sentences_per_page; ++q) {
        std::vector<std::string> src_tokens = draw_sentence_tokens(src_vocab);
        std::vector<std::string> tgt_tokens = cipher_tokens(src_tokens);
        std::string src_text = detail::sentence_from_tokens(src_tokens);
        std::string tgt_text = detail::sentence_from_tokens(tgt_tokens);
        if (!unpaired) {
          SentencePair pair;
          pair.src = make_sentence(src_text, kFixtureSrcLang);
          pair.tgt = make_sentence(tgt_text, kFixtureTgtLang);
          pair.score = 1.0;
          pair.provenance = Provenance::synthetic;
          truth.pairs.push_back(std::move(pair));
          truth_token_lists.emplace_back(src_tokens, tgt_tokens);
        }
        src_sentences.push_back(std::move(src_text));
        tgt_sentences.push_back(std::move(tgt_text));
        // extra untranslated sentence on one side, excluded from the truth
        if (rng.chance(spec.untranslated_fraction)) {
          bool on_src = rng.next() % 2 == 0;
          if (on_src)
            src_sentences.push_back(detail::sentence_from_tokens(draw_sentence_tokens(src_vocab)));
          else
            tgt_sentences.push_back(detail::sentence_from_tokens(draw_sentence_tokens(tgt_vocab)));
        }
      }

      if (unpaired) {
        if (unpaired_src_side)
          emit_page(host, kFixtureSrcLang, page_id, title, src_sentences);
        else
          emit_page(host, kFixtureTgtLang, page_id, title, tgt_sentences);
        continue;
      }
      emit_page(host, kFixtureSrcLang, page_id, title, src_sentences);
      emit_page(host, kFixtureTgtLang, page_id, title, tgt_sentences);

      // near-duplicate twin pair under a fresh page id, one token perturbed
      if (rng.chance(spec.near_duplicate_fraction) && !src_sentences.empty()) {
        std::string dup_id = page_id + "d";
        std::vector<std::string> dup_src = src_sentences;
        std::size_t victim = rng.below(dup_src.size());
        std::vector<std::string> tokens = tokenize(dup_src[victim]);
        if (!tokens.empty() && tokens.back() == ".") tokens.pop_back();
        if (!tokens.empty()) {
          std::size_t pos = rng.below(tokens.size());
          tokens[pos] = src_vocab[rng.below(src_vocab.size())];
          dup_src[victim] = detail::sentence_from_tokens(tokens);
        }
        emit_page(host, kFixtureSrcLang, dup_id, title + " copy", dup_src);
        emit_page(host, kFixtureTgtLang, dup_id, title + " copy", tgt_sentences);
      }
    }
  }

  // pseudo-parallel corpus A: shuffled noisy copy of the true pairs
  Corpus pseudo;
  pseudo.kind = CorpusKind::A_pseudo;
  pseudo.pair_languages = truth.pair_languages;
  std::vector<std::size_t> order(truth_token_lists.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  for (std::size_t i : order) {
    const auto& [src_tokens, tgt_tokens] = truth_token_lists[i];
    std::vector<std::string> noisy = tgt_tokens;
    for (std::string& t : noisy)
      if (rng.chance(spec.pseudo_noise)) t = tgt_vocab[rng.below(tgt_vocab.size())];
    SentencePair pair;
    pair.src = make_sentence(detail::sentence_from_tokens(src_tokens), kFixtureSrcLang);
    pair.tgt = make_sentence(detail::sentence_from_tokens(noisy), kFixtureTgtLang);
    pair.provenance = Provenance::pseudo;
    pseudo.pairs.push_back(std::move(pair));
  }

  std::vector<SeedEntry> cipher_entries;
  for (std::size_t v = 0; v < src_vocab.size(); ++v)
    cipher_entries.push_back(SeedEntry{src_vocab[v], tgt_vocab[v], 1.0});

  FixtureOutput output;
  output.manifest = out_dir / "manifest.tsv";
  output.truth = out_dir / "truth.tsv";
  output.cipher = out_dir / "cipher.tsv";
  output.pseudo_corpus = out_dir / "corpus_A.tsv";
  output.config = out_dir / "config.ini";
  output.pages_written = pages_written;
  output.truth_pairs = static_cast<std::int64_t>(truth.pairs.size());

  detail::write_text_file(output.manifest, manifest_text);
  write_corpus(truth, output.truth);
  write_corpus(pseudo, output.pseudo_corpus);
  write_seed_dictionary(SeedDictionary::make(std::move(cipher_entries), 1), output.cipher);

  std::string config_text =
      "[languages]\n"
      "src = xx\n"
      "tgt = yy\n"
      "\n"
      "[inputs]\n"
      "pseudo_corpus = corpus_A.tsv\n"
      "snapshot = manifest.tsv\n"
      "\n"
      "[output]\n"
      "dir = run\n"
      "\n"
      "[run]\n"
      "seed = " + std::to_string(spec.seed) + "\n"
      "workers = 1\n";
  detail::write_text_file(output.config, config_text);
  return output;
}

}  // namespace paramine
