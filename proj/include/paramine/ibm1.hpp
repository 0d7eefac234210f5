#pragma once

// IBM Model 1 lexical translation training by expectation maximization.
//
// A NULL token is prepended to every source sentence. Translation
// probabilities start uniform at 1/|target vocabulary| and are re-estimated
// from expected co-occurrence counts; additive smoothing (if any) is applied
// over each source row's co-occurring target set, so rows always sum to 1.
//
// Sentence-pair likelihood uses a uniform length prior: with source length l
// (before NULL) and target tokens t_1..t_m,
//   log P(T|S) = -log(l+1) + sum_j log( sum_i t(t_j|s_i) / (l+1) )
// where i ranges over NULL plus all source positions.

#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "paramine/core.hpp"
#include "paramine/dictionary.hpp"
#include "paramine/error.hpp"

namespace paramine {

namespace detail {

struct Ibm1Instance {
  std::vector<std::string> src_tokens;  // index 0 = NULL, then first-occurrence order
  std::vector<std::string> tgt_tokens;
  std::vector<std::vector<std::uint32_t>> src_sents;  // ids include the NULL id 0
  std::vector<std::vector<std::uint32_t>> tgt_sents;
  std::vector<std::vector<std::uint32_t>> cooc;  // per src id, sorted unique tgt ids
  std::vector<std::vector<double>> t;            // parallel to cooc

  std::size_t row_index(std::uint32_t s, std::uint32_t tgt) const {
    const auto& row = cooc[s];
    auto it = std::lower_bound(row.begin(), row.end(), tgt);
    return static_cast<std::size_t>(it - row.begin());
  }

  double lookup(std::uint32_t s, std::uint32_t tgt) const {
    std::size_t k = row_index(s, tgt);
    return (k < cooc[s].size() && cooc[s][k] == tgt) ? t[s][k] : 0.0;
  }
};

inline Ibm1Instance build_ibm1_instance(const Corpus& corpus) {
  Ibm1Instance inst;
  inst.src_tokens.push_back(kNullToken);
  std::unordered_map<std::string, std::uint32_t> src_ids{{kNullToken, 0}};
  std::unordered_map<std::string, std::uint32_t> tgt_ids;
  for (const SentencePair& pair : corpus.pairs) {
    std::vector<std::uint32_t> s{0};  // NULL first
    for (const Token& tok : pair.src.tokens) {
      auto [it, inserted] = src_ids.emplace(tok, static_cast<std::uint32_t>(inst.src_tokens.size()));
      if (inserted) inst.src_tokens.push_back(tok);
      s.push_back(it->second);
    }
    std::vector<std::uint32_t> g;
    for (const Token& tok : pair.tgt.tokens) {
      auto [it, inserted] = tgt_ids.emplace(tok, static_cast<std::uint32_t>(inst.tgt_tokens.size()));
      if (inserted) inst.tgt_tokens.push_back(tok);
      g.push_back(it->second);
    }
    inst.src_sents.push_back(std::move(s));
    inst.tgt_sents.push_back(std::move(g));
  }
  inst.cooc.resize(inst.src_tokens.size());
  for (std::size_t k = 0; k < inst.src_sents.size(); ++k)
    for (std::uint32_t s : inst.src_sents[k])
      for (std::uint32_t g : inst.tgt_sents[k]) inst.cooc[s].push_back(g);
  for (auto& row : inst.cooc) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
  return inst;
}

// Corpus log-likelihood under the instance's current table.
inline double instance_log_likelihood(const Ibm1Instance& inst) {
  double ll = 0.0;
  for (std::size_t k = 0; k < inst.src_sents.size(); ++k) {
    const auto& src = inst.src_sents[k];
    const auto& tgt = inst.tgt_sents[k];
    double log_positions = std::log(static_cast<double>(src.size()));
    ll -= log_positions;  // uniform length prior
    for (std::uint32_t g : tgt) {
      double denom = 0.0;
      for (std::uint32_t s : src) denom += inst.lookup(s, g);
      ll += std::log(denom) - log_positions;
    }
  }
  return ll;
}

}  // namespace detail

// Runs `iterations` EM iterations. Deterministic: identical inputs and
// parameters produce bit-identical tables.
inline ProbabilisticDictionary train_ibm1(const PseudoParallelCorpus& corpus, int iterations,
                                          double smoothing) {
  if (corpus.inner.empty()) throw Error("train_ibm1: corpus is empty");
  if (iterations < 1) throw Error("train_ibm1: iterations must be >= 1");
  if (smoothing < 0.0) throw Error("train_ibm1: smoothing must be >= 0");

  detail::Ibm1Instance inst = detail::build_ibm1_instance(corpus.inner);
  if (inst.tgt_tokens.empty()) throw Error("train_ibm1: target vocabulary is empty");

  const double uniform = 1.0 / static_cast<double>(inst.tgt_tokens.size());
  inst.t.resize(inst.cooc.size());
  for (std::size_t s = 0; s < inst.cooc.size(); ++s)
    inst.t[s].assign(inst.cooc[s].size(), uniform);

  ProbabilisticDictionary dict;
  dict.smoothing = smoothing;
  dict.iterations_run = iterations;

  std::vector<std::vector<double>> counts(inst.cooc.size());
  for (int iter = 0; iter < iterations; ++iter) {
    for (std::size_t s = 0; s < inst.cooc.size(); ++s) counts[s].assign(inst.cooc[s].size(), 0.0);
    // E-step: expected alignment counts
    for (std::size_t k = 0; k < inst.src_sents.size(); ++k) {
      const auto& src = inst.src_sents[k];
      const auto& tgt = inst.tgt_sents[k];
      for (std::uint32_t g : tgt) {
        double denom = 0.0;
        for (std::uint32_t s : src) denom += inst.lookup(s, g);
        if (denom <= 0.0) continue;
        for (std::uint32_t s : src) {
          std::size_t idx = inst.row_index(s, g);
          counts[s][idx] += inst.t[s][idx] / denom;
        }
      }
    }
    // M-step: normalize per source row with additive smoothing
    for (std::size_t s = 0; s < inst.cooc.size(); ++s) {
      if (counts[s].empty()) continue;
      double total = 0.0;
      for (double c : counts[s]) total += c;
      double denom = total + smoothing * static_cast<double>(counts[s].size());
      if (denom <= 0.0) continue;
      for (std::size_t k = 0; k < counts[s].size(); ++k)
        inst.t[s][k] = (counts[s][k] + smoothing) / denom;
    }
    dict.iteration_log_likelihoods.push_back(detail::instance_log_likelihood(inst));
  }
  dict.final_log_likelihood = dict.iteration_log_likelihoods.back();

  for (std::size_t s = 0; s < inst.cooc.size(); ++s) {
    if (inst.cooc[s].empty()) continue;
    std::vector<DictEntry> row;
    row.reserve(inst.cooc[s].size());
    for (std::size_t k = 0; k < inst.cooc[s].size(); ++k)
      row.push_back(DictEntry{inst.tgt_tokens[inst.cooc[s][k]], inst.t[s][k]});
    std::sort(row.begin(), row.end(), [](const DictEntry& a, const DictEntry& b) {
      if (a.prob != b.prob) return a.prob > b.prob;
      return a.tgt < b.tgt;
    });
    dict.rows.emplace(inst.src_tokens[s], std::move(row));
  }
  return dict;
}

// Model 1 corpus log-likelihood of `corpus` under `dict`. Target tokens with
// no probability mass from any source position fall back to the dictionary's
// smoothing value as a floor; with smoothing 0 the result is -inf for such
// tokens.
inline double log_likelihood(const ProbabilisticDictionary& dict, const PseudoParallelCorpus& corpus) {
  std::unordered_map<std::string, std::unordered_map<std::string, double>> index;
  for (const auto& [src, row] : dict.rows) {
    auto& m = index[src];
    for (const DictEntry& e : row) m.emplace(e.tgt, e.prob);
  }
  auto prob = [&](const std::string& src, const std::string& tgt) -> double {
    auto it = index.find(src);
    if (it == index.end()) return 0.0;
    auto jt = it->second.find(tgt);
    return jt == it->second.end() ? 0.0 : jt->second;
  };

  double ll = 0.0;
  const std::string null_token = kNullToken;
  for (const SentencePair& pair : corpus.inner.pairs) {
    double positions = static_cast<double>(pair.src.tokens.size()) + 1.0;
    double log_positions = std::log(positions);
    ll -= log_positions;
    for (const Token& g : pair.tgt.tokens) {
      double denom = prob(null_token, g);
      for (const Token& s : pair.src.tokens) denom += prob(s, g);
      if (denom <= 0.0) denom = dict.smoothing;
      ll += std::log(denom) - log_positions;
    }
  }
  return ll;
}

// Thresholds the probabilistic table into the discrete seed dictionary:
// entries with prob >= min_prob, at most `cap` per source token, NULL rows
// dropped. Ties broken by lexicographic target token.
inline SeedDictionary extract_seed(const ProbabilisticDictionary& dict, double min_prob, int cap) {
  if (min_prob <= 0.0 || min_prob > 1.0) throw Error("extract_seed: min_prob must be in (0,1]");
  if (cap < 1) throw Error("extract_seed: cap must be >= 1");
  std::vector<SeedEntry> entries;
  for (const auto& [src, row] : dict.rows) {
    if (src == kNullToken) continue;
    int taken = 0;
    for (const DictEntry& e : row) {
      if (e.prob < min_prob || taken >= cap) break;
      entries.push_back(SeedEntry{src, e.tgt, e.prob});
      ++taken;
    }
  }
  return SeedDictionary::make(std::move(entries), cap);
}

}  // namespace paramine
