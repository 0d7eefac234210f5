#pragma once

// Sentence alignment as a dynamic program over bead patterns (1-1, 1-0, 0-1,
// 1-2, 2-1, 2-2). Non-gap beads score a weighted mix of dictionary coverage
// and length correspondence; gap beads cost a fixed penalty. The DP
// maximizes the path total; score ties prefer beads in the order
// 1-1 > 2-1 > 1-2 > 2-2 > 1-0 > 0-1.

#include <algorithm>
#include <array>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "paramine/core.hpp"
#include "paramine/dictionary.hpp"
#include "paramine/docalign.hpp"
#include "paramine/error.hpp"
#include "paramine/url.hpp"

namespace paramine {

enum class BeadKind { one_one, two_one, one_two, two_two, one_zero, zero_one };

// Tie-break preference order; lower rank wins on equal path scores.
inline constexpr std::array<BeadKind, 6> kBeadKinds = {
    BeadKind::one_one, BeadKind::two_one, BeadKind::one_two,
    BeadKind::two_two, BeadKind::one_zero, BeadKind::zero_one};

inline int bead_src_count(BeadKind k) {
  switch (k) {
    case BeadKind::one_one: case BeadKind::one_two: case BeadKind::one_zero: return 1;
    case BeadKind::two_one: case BeadKind::two_two: return 2;
    case BeadKind::zero_one: return 0;
  }
  return 0;
}

inline int bead_tgt_count(BeadKind k) {
  switch (k) {
    case BeadKind::one_one: case BeadKind::two_one: case BeadKind::zero_one: return 1;
    case BeadKind::one_two: case BeadKind::two_two: return 2;
    case BeadKind::one_zero: return 0;
  }
  return 0;
}

inline bool bead_is_gap(BeadKind k) { return k == BeadKind::one_zero || k == BeadKind::zero_one; }

inline const char* to_string(BeadKind k) {
  switch (k) {
    case BeadKind::one_one: return "1-1";
    case BeadKind::two_one: return "2-1";
    case BeadKind::one_two: return "1-2";
    case BeadKind::two_two: return "2-2";
    case BeadKind::one_zero: return "1-0";
    case BeadKind::zero_one: return "0-1";
  }
  return "?";
}

struct AlignParams {
  double gap_penalty = -0.15;
  double length_weight = 0.3;
  double dict_weight = 0.7;
  double accept_threshold = 0.3;

  void validate() const {
    if (gap_penalty > 0.0) throw ValidationError("gap_penalty must be <= 0");
    if (length_weight < 0.0 || dict_weight < 0.0)
      throw ValidationError("alignment weights must be >= 0");
    if (length_weight + dict_weight <= 0.0)
      throw ValidationError("dict_weight + length_weight must be > 0");
  }
};

// Greedy one-to-one token linking: each source token links to the first
// unlinked target token it has a seed entry for. Coverage is
// 2*links / (|src| + |tgt|); 0 when both sides are empty.
inline double dict_coverage_tokens(std::span<const Token> src, std::span<const Token> tgt,
                                   const SeedDictionary& seed) {
  if (src.empty() && tgt.empty()) return 0.0;
  std::vector<bool> linked(tgt.size(), false);
  std::size_t links = 0;
  for (const Token& s : src) {
    for (std::size_t j = 0; j < tgt.size(); ++j) {
      if (linked[j] || !seed.contains(s, tgt[j])) continue;
      linked[j] = true;
      ++links;
      break;
    }
  }
  return 2.0 * static_cast<double>(links) / static_cast<double>(src.size() + tgt.size());
}

inline double dict_coverage(const Sentence& src, const Sentence& tgt, const SeedDictionary& seed) {
  return dict_coverage_tokens(src.tokens, tgt.tokens, seed);
}

inline double length_score(std::size_t src_len, std::size_t tgt_len) {
  if (src_len + tgt_len == 0) throw Error("length_score: both lengths are zero");
  if (src_len == 0 || tgt_len == 0) return 0.0;
  return static_cast<double>(std::min(src_len, tgt_len)) /
         static_cast<double>(std::max(src_len, tgt_len));
}

// Score of one bead: gap beads cost the penalty; other beads score
// dict_weight * coverage of the concatenated groups plus
// length_weight * length ratio of the total group lengths.
inline double bead_score(std::span<const Sentence> src_group, std::span<const Sentence> tgt_group,
                         const SeedDictionary& seed, const AlignParams& params) {
  if (src_group.empty() || tgt_group.empty()) return params.gap_penalty;
  std::vector<Token> src_tokens, tgt_tokens;
  for (const Sentence& s : src_group)
    src_tokens.insert(src_tokens.end(), s.tokens.begin(), s.tokens.end());
  for (const Sentence& s : tgt_group)
    tgt_tokens.insert(tgt_tokens.end(), s.tokens.begin(), s.tokens.end());
  double coverage = dict_coverage_tokens(src_tokens, tgt_tokens, seed);
  double length = length_score(src_tokens.size(), tgt_tokens.size());
  return params.dict_weight * coverage + params.length_weight * length;
}

struct Bead {
  BeadKind kind = BeadKind::one_one;
  std::size_t src_begin = 0, src_end = 0;  // [begin, end)
  std::size_t tgt_begin = 0, tgt_end = 0;
  double score = 0.0;
};

struct AlignmentPath {
  std::vector<Bead> beads;
  double total_score = 0.0;
};

// DP over sentence prefixes. Exact maximization over the six bead patterns;
// deterministic through the total tie-break rule.
inline AlignmentPath align_paths(std::span<const Sentence> src, std::span<const Sentence> tgt,
                                 const SeedDictionary& seed, const AlignParams& params) {
  params.validate();
  if (src.empty() || tgt.empty()) throw Error("align_paths: both documents need at least one sentence");
  const std::size_t n = src.size(), m = tgt.size();
  const double neg_inf = -std::numeric_limits<double>::infinity();
  std::vector<double> best((n + 1) * (m + 1), neg_inf);
  std::vector<int> back((n + 1) * (m + 1), -1);
  auto at = [m](std::size_t i, std::size_t j) { return i * (m + 1) + j; };
  best[at(0, 0)] = 0.0;

  for (std::size_t i = 0; i <= n; ++i) {
    for (std::size_t j = 0; j <= m; ++j) {
      if (i == 0 && j == 0) continue;
      double cell_best = neg_inf;
      int cell_back = -1;
      for (std::size_t k = 0; k < kBeadKinds.size(); ++k) {
        BeadKind kind = kBeadKinds[k];
        std::size_t a = static_cast<std::size_t>(bead_src_count(kind));
        std::size_t b = static_cast<std::size_t>(bead_tgt_count(kind));
        if (i < a || j < b) continue;
        double prev = best[at(i - a, j - b)];
        if (prev == neg_inf) continue;
        double score = bead_is_gap(kind)
                           ? params.gap_penalty
                           : bead_score(src.subspan(i - a, a), tgt.subspan(j - b, b), seed, params);
        double cand = prev + score;
        if (cand > cell_best) {  // strict: earlier (lower-rank) kinds win ties
          cell_best = cand;
          cell_back = static_cast<int>(k);
        }
      }
      best[at(i, j)] = cell_best;
      back[at(i, j)] = cell_back;
    }
  }

  AlignmentPath path;
  path.total_score = best[at(n, m)];
  std::size_t i = n, j = m;
  while (i != 0 || j != 0) {
    int k = back[at(i, j)];
    if (k < 0) throw Error("align_paths: broken backtrace");
    BeadKind kind = kBeadKinds[static_cast<std::size_t>(k)];
    std::size_t a = static_cast<std::size_t>(bead_src_count(kind));
    std::size_t b = static_cast<std::size_t>(bead_tgt_count(kind));
    Bead bead;
    bead.kind = kind;
    bead.src_begin = i - a;
    bead.src_end = i;
    bead.tgt_begin = j - b;
    bead.tgt_end = j;
    bead.score = bead_is_gap(kind)
                     ? params.gap_penalty
                     : bead_score(src.subspan(i - a, a), tgt.subspan(j - b, b), seed, params);
    path.beads.push_back(bead);
    i -= a;
    j -= b;
  }
  std::reverse(path.beads.begin(), path.beads.end());
  return path;
}

struct SentAlignResult {
  AlignmentPath path;
  std::vector<SentencePair> pairs;
};

// Aligns the sentences of a document pair and emits the non-gap beads whose
// score clears the accept threshold. Multi-sentence groups are joined with a
// single space. Pair scores are the bead scores clamped to [0,1].
inline SentAlignResult align_sentences(const DocumentPair& doc_pair, const SeedDictionary& seed,
                                       const AlignParams& params) {
  if (doc_pair.src_doc.sentences.empty() || doc_pair.tgt_doc.sentences.empty())
    throw Error("align_sentences: both documents need at least one sentence");
  SentAlignResult result;
  result.path = align_paths(doc_pair.src_doc.sentences, doc_pair.tgt_doc.sentences, seed, params);

  Origin origin;
  Url src_url = parse_url(doc_pair.src_doc.url);
  origin.domain = src_url.valid ? src_url.host : "";
  origin.src_url = doc_pair.src_doc.url;
  origin.tgt_url = doc_pair.tgt_doc.url;

  auto join_text = [](std::span<const Sentence> group) {
    std::string text;
    for (const Sentence& s : group) {
      if (!text.empty()) text += ' ';
      text += s.text;
    }
    return text;
  };

  for (const Bead& bead : result.path.beads) {
    if (bead_is_gap(bead.kind) || bead.score < params.accept_threshold) continue;
    std::span<const Sentence> src_group(doc_pair.src_doc.sentences.data() + bead.src_begin,
                                        bead.src_end - bead.src_begin);
    std::span<const Sentence> tgt_group(doc_pair.tgt_doc.sentences.data() + bead.tgt_begin,
                                        bead.tgt_end - bead.tgt_begin);
    SentencePair pair;
    pair.src = make_sentence(join_text(src_group), doc_pair.src_doc.lang);
    pair.tgt = make_sentence(join_text(tgt_group), doc_pair.tgt_doc.lang);
    pair.score = std::clamp(bead.score, 0.0, 1.0);
    pair.provenance = Provenance::crawled;
    pair.origin = origin;
    result.pairs.push_back(std::move(pair));
  }
  return result;
}

}  // namespace paramine
