#pragma once

// Stage orchestration. Every stage reads its inputs from disk and persists
// its outputs under the configured output directory, so running stages as
// separate invocations gives the same bytes as a single-shot run. Outputs
// are written to `<name>.partial` and renamed on completion; a crash leaves
// the partial marker behind.

#include <chrono>
#include <filesystem>
#include <functional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "paramine/config.hpp"
#include "paramine/core.hpp"
#include "paramine/corpus_io.hpp"
#include "paramine/crawler.hpp"
#include "paramine/dictionary.hpp"
#include "paramine/docalign.hpp"
#include "paramine/error.hpp"
#include "paramine/filter.hpp"
#include "paramine/forest.hpp"
#include "paramine/ibm1.hpp"
#include "paramine/langid.hpp"
#include "paramine/report.hpp"
#include "paramine/rng.hpp"
#include "paramine/sentalign.hpp"
#include "paramine/sentsplit.hpp"
#include "paramine/webdoc.hpp"

namespace paramine {

struct ArtifactPaths {
  std::filesystem::path ptable_fwd, ptable_rev;  // full probabilistic tables
  std::filesystem::path dict_fwd, dict_rev;      // thresholded seed dictionaries
  std::filesystem::path profiles;
  std::filesystem::path docs;
  std::filesystem::path doc_pairs;
  std::filesystem::path corpus_b_raw;    // sentence-aligner output
  std::filesystem::path corpus_b;        // after heuristic rules
  std::filesystem::path rejected_rules;  // removed by the rules, with reasons
  std::filesystem::path model;
  std::filesystem::path corpus_c;         // kept by the classifier
  std::filesystem::path corpus_rejected;  // B - C
  std::filesystem::path report_json, report_txt;

  static ArtifactPaths in(const std::filesystem::path& dir) {
    ArtifactPaths p;
    p.ptable_fwd = dir / "ptable.fwd.tsv";
    p.ptable_rev = dir / "ptable.rev.tsv";
    p.dict_fwd = dir / "dict.fwd.tsv";
    p.dict_rev = dir / "dict.rev.tsv";
    p.profiles = dir / "profiles.tsv";
    p.docs = dir / "docs.jsonl";
    p.doc_pairs = dir / "doc_pairs.jsonl";
    p.corpus_b_raw = dir / "corpus_B_raw.tsv";
    p.corpus_b = dir / "corpus_B.tsv";
    p.rejected_rules = dir / "rejected_rules.tsv";
    p.model = dir / "filter.model";
    p.corpus_c = dir / "corpus_C.tsv";
    p.corpus_rejected = dir / "corpus_B_minus_C.tsv";
    p.report_json = dir / "report.json";
    p.report_txt = dir / "report.txt";
    return p;
  }
};

namespace detail {

// Writes through a .partial marker and renames into place on success.
inline void write_artifact(const std::filesystem::path& final_path,
                           const std::function<void(const std::filesystem::path&)>& writer) {
  std::filesystem::path partial = final_path;
  partial += ".partial";
  writer(partial);
  std::filesystem::rename(partial, final_path);
}

inline Corpus swapped(const Corpus& corpus) {
  Corpus out;
  out.kind = corpus.kind;
  out.pair_languages = LanguagePair{corpus.pair_languages.tgt, corpus.pair_languages.src};
  out.pairs.reserve(corpus.pairs.size());
  for (const SentencePair& pair : corpus.pairs) {
    SentencePair rev = pair;
    std::swap(rev.src, rev.tgt);
    out.pairs.push_back(std::move(rev));
  }
  return out;
}

inline PseudoParallelCorpus read_pseudo_corpus(const PipelineConfig& cfg) {
  Corpus a = read_corpus(cfg.pseudo_corpus, CorpusKind::A_pseudo, cfg.languages);
  if (a.empty()) throw Error("pseudo corpus is empty: " + cfg.pseudo_corpus);
  return PseudoParallelCorpus::from(std::move(a));
}

inline SeedDictionary load_forward_seed(const PipelineConfig& cfg, const ArtifactPaths& paths) {
  std::filesystem::path file =
      cfg.sentalign.dict_file.empty() ? paths.dict_fwd : std::filesystem::path(cfg.sentalign.dict_file);
  return read_seed_dictionary(file);
}

inline AbbrevSet load_abbrev_set(const PipelineConfig& cfg) {
  return cfg.sentalign.abbrev_file.empty() ? default_abbreviations()
                                           : load_abbreviations(cfg.sentalign.abbrev_file);
}

inline LanguageAliases load_aliases(const PipelineConfig& cfg) {
  LanguageAliases aliases = LanguageAliases::builtin();
  if (!cfg.docalign.alias_file.empty()) aliases.load_file(cfg.docalign.alias_file);
  return aliases;
}

}  // namespace detail

// dict -> both translation tables plus their seed cuts.
inline void stage_induce_dict(const PipelineConfig& cfg) {
  ArtifactPaths paths = ArtifactPaths::in(cfg.out_dir);
  PseudoParallelCorpus a = detail::read_pseudo_corpus(cfg);
  PseudoParallelCorpus a_rev = PseudoParallelCorpus::from(detail::swapped(a.inner));

  ProbabilisticDictionary fwd = train_ibm1(a, cfg.dict.iterations, cfg.dict.smoothing);
  ProbabilisticDictionary rev = train_ibm1(a_rev, cfg.dict.iterations, cfg.dict.smoothing);
  detail::write_artifact(paths.ptable_fwd, [&](const auto& p) { write_prob_table(fwd, p); });
  detail::write_artifact(paths.ptable_rev, [&](const auto& p) { write_prob_table(rev, p); });
  SeedDictionary seed_fwd = extract_seed(fwd, cfg.dict.min_prob, cfg.dict.cap);
  SeedDictionary seed_rev = extract_seed(rev, cfg.dict.min_prob, cfg.dict.cap);
  detail::write_artifact(paths.dict_fwd, [&](const auto& p) { write_seed_dictionary(seed_fwd, p); });
  detail::write_artifact(paths.dict_rev, [&](const auto& p) { write_seed_dictionary(seed_rev, p); });
}

// ingest -> language profiles (trained from the pseudo corpus) and the
// identified, sentence-split document set.
inline void stage_ingest(const PipelineConfig& cfg, HttpClient* client = nullptr,
                         Clock* clock = nullptr) {
  ArtifactPaths paths = ArtifactPaths::in(cfg.out_dir);
  PseudoParallelCorpus a = detail::read_pseudo_corpus(cfg);

  std::string src_text, tgt_text;
  for (const SentencePair& pair : a.inner.pairs) {
    src_text += pair.src.text;
    src_text += ' ';
    tgt_text += pair.tgt.text;
    tgt_text += ' ';
  }
  std::vector<TrigramProfile> profiles{train_profile(cfg.languages.src, src_text),
                                       train_profile(cfg.languages.tgt, tgt_text)};
  detail::write_artifact(paths.profiles, [&](const auto& p) { write_profiles(profiles, p); });

  std::vector<WebDocument> docs;
  if (!cfg.snapshot.empty()) {
    docs = load_snapshot(cfg.snapshot_manifest());
  } else {
    if (client == nullptr) throw Error("live crawling requires an HTTP client");
    RealClock real_clock;
    if (clock == nullptr) clock = &real_clock;
    std::ifstream in(cfg.domains, std::ios::binary);
    if (!in) throw Error("cannot open domain list: " + cfg.domains);
    std::string line;
    while (std::getline(in, line)) {
      std::string domain = normalize_ws(line);
      if (domain.empty() || domain[0] == '#') continue;
      std::vector<WebDocument> fetched = fetch_domain(*client, *clock, domain, cfg.crawl);
      docs.insert(docs.end(), std::make_move_iterator(fetched.begin()),
                  std::make_move_iterator(fetched.end()));
    }
    if (docs.empty()) throw Error("no documents fetched from domain list");
  }
  identify_and_split(docs, profiles, detail::load_abbrev_set(cfg), cfg.workers);
  detail::write_artifact(paths.docs, [&](const auto& p) { write_documents_jsonl(docs, p); });
}

// align-docs -> document pairs, aligned within each domain.
inline void stage_align_docs(const PipelineConfig& cfg) {
  ArtifactPaths paths = ArtifactPaths::in(cfg.out_dir);
  std::vector<WebDocument> docs = read_documents_jsonl(paths.docs);
  SeedDictionary seed = detail::load_forward_seed(cfg, paths);
  LanguageAliases aliases = detail::load_aliases(cfg);

  // group documents by host in first-appearance order
  std::vector<std::string> hosts;
  std::unordered_map<std::string, std::pair<std::vector<WebDocument>, std::vector<WebDocument>>> by_host;
  for (WebDocument& doc : docs) {
    Url url = parse_url(doc.url);
    std::string host = url.valid ? url.host : doc.url;
    if (!by_host.count(host)) hosts.push_back(host);
    auto& sides = by_host[host];
    if (doc.lang == cfg.languages.src)
      sides.first.push_back(std::move(doc));
    else if (doc.lang == cfg.languages.tgt)
      sides.second.push_back(std::move(doc));
  }

  std::vector<DocumentPair> pairs;
  for (const std::string& host : hosts) {
    auto& sides = by_host[host];
    std::vector<DocumentPair> host_pairs =
        align_documents(sides.first, sides.second, cfg.languages, seed, aliases,
                        cfg.docalign.weights, cfg.docalign.threshold, cfg.workers);
    pairs.insert(pairs.end(), std::make_move_iterator(host_pairs.begin()),
                 std::make_move_iterator(host_pairs.end()));
  }
  detail::write_artifact(paths.doc_pairs, [&](const auto& p) { write_document_pairs_jsonl(pairs, p); });
}

// align-sents -> the raw aligned corpus (B before filtering).
inline void stage_align_sents(const PipelineConfig& cfg) {
  ArtifactPaths paths = ArtifactPaths::in(cfg.out_dir);
  std::vector<WebDocument> docs = read_documents_jsonl(paths.docs);
  std::vector<DocumentPairRef> refs = read_document_pairs_jsonl(paths.doc_pairs);
  SeedDictionary seed = detail::load_forward_seed(cfg, paths);

  std::unordered_map<std::string, const WebDocument*> by_url;
  for (const WebDocument& doc : docs) by_url[doc.url] = &doc;

  std::vector<std::vector<SentencePair>> results(refs.size());
  parallel_for(refs.size(), cfg.workers, [&](std::size_t i) {
    const DocumentPairRef& ref = refs[i];
    auto src_it = by_url.find(ref.src_url);
    auto tgt_it = by_url.find(ref.tgt_url);
    if (src_it == by_url.end() || tgt_it == by_url.end())
      throw Error("document pair references unknown URL: " + ref.src_url + " / " + ref.tgt_url);
    DocumentPair pair;
    pair.src_doc = *src_it->second;
    pair.tgt_doc = *tgt_it->second;
    pair.url_score = ref.url_score;
    pair.structure_score = ref.structure_score;
    pair.content_score = ref.content_score;
    pair.total = ref.total;
    results[i] = align_sentences(pair, seed, cfg.sentalign.params).pairs;
  });

  Corpus raw;
  raw.kind = CorpusKind::B_raw;
  raw.pair_languages = cfg.languages;
  for (std::vector<SentencePair>& chunk : results)
    raw.pairs.insert(raw.pairs.end(), std::make_move_iterator(chunk.begin()),
                     std::make_move_iterator(chunk.end()));
  detail::write_artifact(paths.corpus_b_raw, [&](const auto& p) { write_corpus(raw, p); });
}

// filter-rules -> B (kept) and the rule-removed pairs with reasons.
inline void stage_filter_rules(const PipelineConfig& cfg) {
  ArtifactPaths paths = ArtifactPaths::in(cfg.out_dir);
  Corpus raw = read_corpus(paths.corpus_b_raw, CorpusKind::B_raw, cfg.languages);
  HeuristicResult result = heuristic_filter(raw);

  Corpus removed;
  removed.kind = CorpusKind::rejected;
  removed.pair_languages = cfg.languages;
  for (auto& [pair, reason] : result.removed) {
    SentencePair p = pair;
    p.origin.reason = to_string(reason);
    removed.pairs.push_back(std::move(p));
  }
  detail::write_artifact(paths.corpus_b, [&](const auto& p) { write_corpus(result.kept, p); });
  detail::write_artifact(paths.rejected_rules, [&](const auto& p) { write_corpus(removed, p); });
}

// train-filter -> the random-forest model file.
inline void stage_train_filter(const PipelineConfig& cfg) {
  ArtifactPaths paths = ArtifactPaths::in(cfg.out_dir);
  PseudoParallelCorpus a = detail::read_pseudo_corpus(cfg);
  SeedDictionary seed_st = read_seed_dictionary(paths.dict_fwd);
  SeedDictionary seed_ts = read_seed_dictionary(paths.dict_rev);
  std::vector<TrigramProfile> profiles = read_profiles(paths.profiles);

  std::vector<SentencePair> negatives =
      gen_negatives(a, cfg.filter.neg_ratio, stage_seed(cfg.seed, "negatives"));

  auto featurize = [&](const std::vector<SentencePair>& pairs) {
    std::vector<FeatureVector> out;
    out.reserve(pairs.size());
    for (const SentencePair& pair : pairs) {
      if (pair.src.tokens.empty() || pair.tgt.tokens.empty()) continue;  // unusable for features
      out.push_back(extract_features(pair, seed_st, seed_ts, profiles));
    }
    return out;
  };
  std::vector<FeatureVector> pos = featurize(a.inner.pairs);
  std::vector<FeatureVector> neg = featurize(negatives);
  if (pos.empty() || neg.empty()) throw Error("no usable training pairs for the classifier");

  ForestModel model =
      train_forest(pos, neg, cfg.filter.hp, stage_seed(cfg.seed, "forest"), cfg.workers);
  detail::write_artifact(paths.model, [&](const auto& p) { write_forest(model, p); });
}

// classify -> C and B-C, partitioning the post-rules corpus.
inline void stage_classify(const PipelineConfig& cfg) {
  ArtifactPaths paths = ArtifactPaths::in(cfg.out_dir);
  Corpus b = read_corpus(paths.corpus_b, CorpusKind::B_raw, cfg.languages);
  ForestModel model = read_forest(paths.model);
  SeedDictionary seed_st = read_seed_dictionary(paths.dict_fwd);
  SeedDictionary seed_ts = read_seed_dictionary(paths.dict_rev);
  std::vector<TrigramProfile> profiles = read_profiles(paths.profiles);

  ClassifyResult result =
      classify_corpus(b, model, cfg.filter.threshold, seed_st, seed_ts, profiles, cfg.workers);
  detail::write_artifact(paths.corpus_c, [&](const auto& p) { write_corpus(result.kept, p); });
  detail::write_artifact(paths.corpus_rejected,
                         [&](const auto& p) { write_corpus(result.rejected, p); });
}

// Recounts every figure from the persisted artifacts.
inline PipelineReport recount_report(const PipelineConfig& cfg) {
  ArtifactPaths paths = ArtifactPaths::in(cfg.out_dir);
  PipelineReport report;
  report.languages = cfg.languages;

  std::vector<WebDocument> docs = read_documents_jsonl(paths.docs);
  std::set<std::string> hosts;
  for (const WebDocument& doc : docs) {
    Url url = parse_url(doc.url);
    hosts.insert(url.valid ? url.host : doc.url);
    if (doc.lang == cfg.languages.src) ++report.documents_src;
    if (doc.lang == cfg.languages.tgt) ++report.documents_tgt;
  }
  report.domains_processed = static_cast<std::int64_t>(hosts.size());
  report.documents_loaded = static_cast<std::int64_t>(docs.size());
  report.document_pairs = static_cast<std::int64_t>(read_document_pairs_jsonl(paths.doc_pairs).size());
  report.raw_pairs =
      static_cast<std::int64_t>(read_corpus(paths.corpus_b_raw, CorpusKind::B_raw, cfg.languages).size());
  report.rules.kept =
      static_cast<std::int64_t>(read_corpus(paths.corpus_b, CorpusKind::B_raw, cfg.languages).size());
  for (const SentencePair& pair :
       read_corpus(paths.rejected_rules, CorpusKind::rejected, cfg.languages).pairs) {
    if (pair.origin.reason == "duplicate") ++report.rules.removed_duplicate;
    else if (pair.origin.reason == "short") ++report.rules.removed_short;
    else if (pair.origin.reason == "overlap") ++report.rules.removed_overlap;
    else throw Error("rejected pair with unknown rule reason: '" + pair.origin.reason + "'");
  }
  report.classified_kept =
      static_cast<std::int64_t>(read_corpus(paths.corpus_c, CorpusKind::C_filtered, cfg.languages).size());
  report.classified_rejected = static_cast<std::int64_t>(
      read_corpus(paths.corpus_rejected, CorpusKind::rejected, cfg.languages).size());
  return report;
}

inline PipelineReport stage_report(const PipelineConfig& cfg,
                                   const std::map<std::string, double>& timings = {}) {
  ArtifactPaths paths = ArtifactPaths::in(cfg.out_dir);
  PipelineReport report = recount_report(cfg);
  report.timings_ms = timings;
  detail::write_artifact(paths.report_json, [&](const std::filesystem::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error("cannot open for writing: " + p.string());
    out << report.to_json().dump(2) << '\n';
  });
  detail::write_artifact(paths.report_txt, [&](const std::filesystem::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error("cannot open for writing: " + p.string());
    out << report.to_text();
  });
  return report;
}

// Full run: validates the config up front, then executes the stages in
// order, timing each one. Any stage error aborts with the stage name.
inline PipelineReport run_pipeline(const PipelineConfig& cfg, HttpClient* client = nullptr,
                                   Clock* clock = nullptr) {
  cfg.validate_ranges();
  cfg.validate_inputs();
  std::filesystem::create_directories(cfg.out_dir);

  std::map<std::string, double> timings;
  auto timed = [&](const char* name, const std::function<void()>& stage) {
    auto start = std::chrono::steady_clock::now();
    try {
      stage();
    } catch (const Error& e) {
      throw StageError(name, e.what());
    }
    timings[name] =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  };
  timed("induce-dict", [&] { stage_induce_dict(cfg); });
  timed("ingest", [&] { stage_ingest(cfg, client, clock); });
  timed("align-docs", [&] { stage_align_docs(cfg); });
  timed("align-sents", [&] { stage_align_sents(cfg); });
  timed("filter-rules", [&] { stage_filter_rules(cfg); });
  timed("train-filter", [&] { stage_train_filter(cfg); });
  timed("classify", [&] { stage_classify(cfg); });
  PipelineReport report;
  timed("report", [&] { report = stage_report(cfg, timings); });
  return report;
}

struct EvalResult {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::int64_t correct_mined = 0;
  std::int64_t mined = 0;
  std::int64_t truth = 0;
};

// A mined pair is correct iff its whitespace-normalized (src, tgt) texts
// match a truth pair. Precision counts mined pairs (0 when none were mined);
// recall counts distinct truth pairs recovered.
inline EvalResult evaluate_against_truth(const Corpus& mined, const Corpus& truth) {
  if (truth.empty()) throw Error("evaluate_against_truth: truth is empty");
  auto key = [](const SentencePair& pair) {
    return normalize_ws(pair.src.text) + "\t" + normalize_ws(pair.tgt.text);
  };
  std::set<std::string> truth_keys;
  for (const SentencePair& pair : truth.pairs) truth_keys.insert(key(pair));

  EvalResult result;
  result.mined = static_cast<std::int64_t>(mined.size());
  result.truth = static_cast<std::int64_t>(truth_keys.size());
  std::set<std::string> matched;
  for (const SentencePair& pair : mined.pairs) {
    std::string k = key(pair);
    if (truth_keys.count(k)) {
      ++result.correct_mined;
      matched.insert(k);
    }
  }
  result.precision = result.mined == 0
                         ? 0.0
                         : static_cast<double>(result.correct_mined) / static_cast<double>(result.mined);
  result.recall = static_cast<double>(matched.size()) / static_cast<double>(truth_keys.size());
  result.f1 = (result.precision + result.recall) == 0.0
                  ? 0.0
                  : 2.0 * result.precision * result.recall / (result.precision + result.recall);
  return result;
}

}  // namespace paramine
