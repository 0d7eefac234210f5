#pragma once

// Two-stage filtration of the raw crawled corpus: first the three heuristic
// rules (duplicates, short sentences, token overlap), then the random-forest
// classifier trained on pseudo-parallel positives against crossed negatives.

#include <cmath>
#include <string>
#include <unordered_set>
#include <vector>

#include "paramine/core.hpp"
#include "paramine/error.hpp"
#include "paramine/features.hpp"
#include "paramine/forest.hpp"
#include "paramine/parallel.hpp"
#include "paramine/rng.hpp"

namespace paramine {

enum class FilterReason { duplicate, short_sentence, overlap };

inline const char* to_string(FilterReason r) {
  switch (r) {
    case FilterReason::duplicate: return "duplicate";
    case FilterReason::short_sentence: return "short";
    case FilterReason::overlap: return "overlap";
  }
  return "?";
}

struct RuleReport {
  std::int64_t kept = 0;
  std::int64_t removed_duplicate = 0;
  std::int64_t removed_short = 0;
  std::int64_t removed_overlap = 0;

  std::int64_t removed() const { return removed_duplicate + removed_short + removed_overlap; }
  std::int64_t input() const { return kept + removed(); }
};

struct HeuristicResult {
  Corpus kept;
  std::vector<std::pair<SentencePair, FilterReason>> removed;
  RuleReport report;
};

inline constexpr std::size_t kMinSentenceTokens = 4;
inline constexpr double kMaxOverlapRatio = 0.5;

// Rules in order: (1) drop exact duplicates (whitespace-normalized text
// equality, first occurrence kept), (2) drop pairs where either side has
// fewer than 4 tokens, (3) drop pairs with overlap ratio strictly above 0.5.
inline HeuristicResult heuristic_filter(const Corpus& corpus) {
  HeuristicResult result;
  result.kept.kind = corpus.kind;
  result.kept.pair_languages = corpus.pair_languages;
  std::unordered_set<std::string> seen;
  for (const SentencePair& pair : corpus.pairs) {
    std::string key = normalize_ws(pair.src.text) + "\t" + normalize_ws(pair.tgt.text);
    if (!seen.insert(key).second) {
      result.removed.emplace_back(pair, FilterReason::duplicate);
      ++result.report.removed_duplicate;
      continue;
    }
    if (pair.src.tokens.size() < kMinSentenceTokens || pair.tgt.tokens.size() < kMinSentenceTokens) {
      result.removed.emplace_back(pair, FilterReason::short_sentence);
      ++result.report.removed_short;
      continue;
    }
    if (overlap_ratio(pair.src, pair.tgt) > kMaxOverlapRatio) {
      result.removed.emplace_back(pair, FilterReason::overlap);
      ++result.report.removed_overlap;
      continue;
    }
    result.kept.pairs.push_back(pair);
    ++result.report.kept;
  }
  return result;
}

// Crossed negatives: source of pair i with target of pair j, i != j, drawn
// uniformly by a seeded generator. A draw colliding with a true pair of the
// corpus is redrawn, so negatives never duplicate positives.
inline std::vector<SentencePair> gen_negatives(const PseudoParallelCorpus& corpus, double ratio,
                                               std::uint64_t seed) {
  const std::size_t n = corpus.size();
  if (n < 2) throw Error("gen_negatives: need at least 2 pairs");
  if (ratio <= 0.0) throw Error("gen_negatives: ratio must be > 0");

  std::unordered_set<std::string> truth;
  truth.reserve(n);
  for (const SentencePair& pair : corpus.inner.pairs)
    truth.insert(normalize_ws(pair.src.text) + "\t" + normalize_ws(pair.tgt.text));

  std::size_t count = static_cast<std::size_t>(std::ceil(ratio * static_cast<double>(n)));
  std::vector<SentencePair> negatives;
  negatives.reserve(count);
  Rng rng(seed);
  std::size_t guard = 0;
  while (negatives.size() < count) {
    if (++guard > count * 1000) throw Error("gen_negatives: cannot find enough non-colliding pairs");
    std::size_t i = rng.below(n);
    std::size_t j = rng.below(n - 1);
    if (j >= i) ++j;
    const SentencePair& a = corpus.inner.pairs[i];
    const SentencePair& b = corpus.inner.pairs[j];
    if (truth.count(normalize_ws(a.src.text) + "\t" + normalize_ws(b.tgt.text))) continue;
    SentencePair neg;
    neg.src = a.src;
    neg.tgt = b.tgt;
    neg.provenance = Provenance::synthetic;
    negatives.push_back(std::move(neg));
  }
  return negatives;
}

struct ClassifyResult {
  Corpus kept;      // kind C_filtered, classifier score on every pair
  Corpus rejected;  // kind rejected, scores recorded as well
};

// Scores every pair and partitions the corpus at the threshold. The outputs
// partition the input exactly: same pairs, same order, disjoint.
inline ClassifyResult classify_corpus(const Corpus& corpus, const ForestModel& model,
                                      double threshold, const SeedDictionary& seed_st,
                                      const SeedDictionary& seed_ts,
                                      const std::vector<TrigramProfile>& profiles, int workers = 1) {
  if (threshold < 0.0 || threshold > 1.0)
    throw ValidationError("classifier threshold must be in [0,1]");
  ClassifyResult result;
  result.kept.kind = CorpusKind::C_filtered;
  result.kept.pair_languages = corpus.pair_languages;
  result.rejected.kind = CorpusKind::rejected;
  result.rejected.pair_languages = corpus.pair_languages;

  std::vector<double> scores(corpus.pairs.size());
  parallel_for(corpus.pairs.size(), workers, [&](std::size_t i) {
    FeatureVector fv = extract_features(corpus.pairs[i], seed_st, seed_ts, profiles);
    scores[i] = score_pair(model, fv);
  });
  for (std::size_t i = 0; i < corpus.pairs.size(); ++i) {
    SentencePair pair = corpus.pairs[i];
    pair.score = scores[i];
    if (scores[i] >= threshold)
      result.kept.pairs.push_back(std::move(pair));
    else
      result.rejected.pairs.push_back(std::move(pair));
  }
  return result;
}

}  // namespace paramine
