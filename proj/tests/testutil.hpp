#pragma once

// Shared test helpers and independent oracles. Everything here exists to
// check the library from the outside; none of it is used by the library.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "paramine/core.hpp"
#include "paramine/docalign.hpp"
#include "paramine/sentalign.hpp"
#include "paramine/webdoc.hpp"

namespace testutil {

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::size_t line_count(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) ++n;
  return n;
}

inline paramine::WebDocument make_doc(const std::string& url, const std::string& lang,
                                      const std::vector<std::string>& sentence_texts,
                                      const std::vector<std::string>& signature = {}) {
  paramine::WebDocument doc;
  doc.url = url;
  doc.lang = lang;
  doc.fetch_status = paramine::FetchStatus::from_snapshot;
  doc.tag_signature = signature;
  for (const std::string& text : sentence_texts)
    doc.sentences.push_back(paramine::make_sentence(text, lang));
  return doc;
}

// ---------------------------------------------------------------------------
// Brute-force oracle for sentence alignment: exhaustive enumeration of every
// bead tiling, scored with the library's own bead_score so float values are
// identical, with the declared tie-break (max total, then reversed bead-rank
// sequence lexicographically smallest).

struct BrutePath {
  std::vector<paramine::Bead> beads;
  double total = 0.0;
  bool valid = false;
};

inline std::vector<int> reversed_ranks(const std::vector<paramine::Bead>& beads) {
  std::vector<int> ranks;
  ranks.reserve(beads.size());
  for (auto it = beads.rbegin(); it != beads.rend(); ++it) {
    for (std::size_t k = 0; k < paramine::kBeadKinds.size(); ++k)
      if (paramine::kBeadKinds[k] == it->kind) {
        ranks.push_back(static_cast<int>(k));
        break;
      }
  }
  return ranks;
}

inline bool brute_better(const BrutePath& a, const BrutePath& b) {
  if (!b.valid) return true;
  if (a.total != b.total) return a.total > b.total;
  std::vector<int> ra = reversed_ranks(a.beads), rb = reversed_ranks(b.beads);
  return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
}

inline void brute_recurse(std::span<const paramine::Sentence> src,
                          std::span<const paramine::Sentence> tgt,
                          const paramine::SeedDictionary& seed, const paramine::AlignParams& params,
                          std::size_t i, std::size_t j, std::vector<paramine::Bead>& prefix,
                          double total, BrutePath& best) {
  using namespace paramine;
  if (i == src.size() && j == tgt.size()) {
    BrutePath candidate{prefix, total, true};
    if (brute_better(candidate, best)) best = std::move(candidate);
    return;
  }
  for (BeadKind kind : kBeadKinds) {
    std::size_t a = static_cast<std::size_t>(bead_src_count(kind));
    std::size_t b = static_cast<std::size_t>(bead_tgt_count(kind));
    if (i + a > src.size() || j + b > tgt.size()) continue;
    double score = bead_is_gap(kind)
                       ? params.gap_penalty
                       : bead_score(src.subspan(i, a), tgt.subspan(j, b), seed, params);
    Bead bead;
    bead.kind = kind;
    bead.src_begin = i;
    bead.src_end = i + a;
    bead.tgt_begin = j;
    bead.tgt_end = j + b;
    bead.score = score;
    prefix.push_back(bead);
    brute_recurse(src, tgt, seed, params, i + a, j + b, prefix, total + score, best);
    prefix.pop_back();
  }
}

inline BrutePath brute_force_align(std::span<const paramine::Sentence> src,
                                   std::span<const paramine::Sentence> tgt,
                                   const paramine::SeedDictionary& seed,
                                   const paramine::AlignParams& params) {
  BrutePath best;
  std::vector<paramine::Bead> prefix;
  brute_recurse(src, tgt, seed, params, 0, 0, prefix, 0.0, best);
  return best;
}

inline bool same_beads(const std::vector<paramine::Bead>& a, const std::vector<paramine::Bead>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].kind != b[i].kind || a[i].src_begin != b[i].src_begin || a[i].src_end != b[i].src_end ||
        a[i].tgt_begin != b[i].tgt_begin || a[i].tgt_end != b[i].tgt_end)
      return false;
  return true;
}

// ---------------------------------------------------------------------------
// Independent re-implementation of the greedy document-matching rule:
// repeatedly scan all remaining candidates for the best by (total desc,
// src URL asc, tgt URL asc).

inline std::vector<paramine::ScoredCandidate> greedy_reference(
    std::vector<paramine::ScoredCandidate> candidates, double threshold) {
  std::vector<paramine::ScoredCandidate> chosen;
  std::vector<bool> used(candidates.size(), false);
  auto src_used = [&](std::size_t idx) {
    for (const auto& c : chosen)
      if (c.src_index == idx) return true;
    return false;
  };
  auto tgt_used = [&](std::size_t idx) {
    for (const auto& c : chosen)
      if (c.tgt_index == idx) return true;
    return false;
  };
  for (;;) {
    int best = -1;
    for (std::size_t k = 0; k < candidates.size(); ++k) {
      if (used[k] || candidates[k].total < threshold) continue;
      if (src_used(candidates[k].src_index) || tgt_used(candidates[k].tgt_index)) continue;
      if (best < 0) {
        best = static_cast<int>(k);
        continue;
      }
      const auto& a = candidates[k];
      const auto& b = candidates[static_cast<std::size_t>(best)];
      if (a.total > b.total ||
          (a.total == b.total &&
           (a.src_url < b.src_url || (a.src_url == b.src_url && a.tgt_url < b.tgt_url))))
        best = static_cast<int>(k);
    }
    if (best < 0) break;
    used[static_cast<std::size_t>(best)] = true;
    chosen.push_back(candidates[static_cast<std::size_t>(best)]);
  }
  return chosen;
}

// ---------------------------------------------------------------------------
// Rank-based ROC-AUC with tie handling.

inline double roc_auc(const std::vector<double>& pos_scores, const std::vector<double>& neg_scores) {
  std::vector<std::pair<double, int>> all;
  for (double s : pos_scores) all.push_back({s, 1});
  for (double s : neg_scores) all.push_back({s, 0});
  std::sort(all.begin(), all.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  double rank_sum = 0.0;
  std::size_t i = 0;
  while (i < all.size()) {
    std::size_t j = i;
    while (j < all.size() && all[j].first == all[i].first) ++j;
    double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k)
      if (all[k].second == 1) rank_sum += avg_rank;
    i = j;
  }
  double n_pos = static_cast<double>(pos_scores.size());
  double n_neg = static_cast<double>(neg_scores.size());
  return (rank_sum - n_pos * (n_pos + 1.0) / 2.0) / (n_pos * n_neg);
}

}  // namespace testutil
