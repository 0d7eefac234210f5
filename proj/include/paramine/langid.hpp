#pragma once

// Character-trigram language identification. Profiles are trained from the
// pipeline's own monolingual seed text, so no external model is needed. A
// text is scored by cosine similarity of its trigram frequency vector against
// each profile; the guess is the argmax with the normalized margin
// (best - second) / (best + second) as confidence. Texts shorter than 20
// characters or with margin below 0.05 come back as "unknown".

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "paramine/corpus_io.hpp"
#include "paramine/error.hpp"
#include "paramine/text.hpp"

namespace paramine {

inline constexpr std::size_t kLangIdMinChars = 20;
inline constexpr double kLangIdMinMargin = 0.05;
inline constexpr const char* kUnknownLang = "unknown";

struct TrigramProfile {
  std::string lang;
  std::unordered_map<std::string, double> weights;  // relative frequencies
  double norm = 0.0;                                // L2 norm of the weights
};

namespace detail {

inline std::unordered_map<std::string, double> trigram_counts(std::string_view text) {
  std::vector<char32_t> cps = decode_utf8(lower_copy(normalize_ws(text)));
  std::unordered_map<std::string, double> counts;
  if (cps.size() < 3) return counts;
  for (std::size_t i = 0; i + 3 <= cps.size(); ++i) {
    std::string key;
    append_utf8(key, cps[i]);
    append_utf8(key, cps[i + 1]);
    append_utf8(key, cps[i + 2]);
    counts[key] += 1.0;
  }
  return counts;
}

inline double l2_norm(const std::unordered_map<std::string, double>& v) {
  double s = 0.0;
  for (const auto& [k, w] : v) {
    (void)k;
    s += w * w;
  }
  return std::sqrt(s);
}

}  // namespace detail

inline TrigramProfile train_profile(std::string_view lang, std::string_view text) {
  TrigramProfile p;
  p.lang = std::string(lang);
  p.weights = detail::trigram_counts(text);
  double total = 0.0;
  for (const auto& [k, c] : p.weights) {
    (void)k;
    total += c;
  }
  if (total > 0.0)
    for (auto& [k, c] : p.weights) {
      (void)k;
      c /= total;
    }
  p.norm = detail::l2_norm(p.weights);
  return p;
}

struct LangGuess {
  std::string lang = kUnknownLang;
  double confidence = 0.0;
};

inline LangGuess detect_language(std::string_view text, const std::vector<TrigramProfile>& profiles) {
  LangGuess guess;
  if (profiles.empty()) return guess;
  std::vector<char32_t> cps = decode_utf8(normalize_ws(text));
  if (cps.size() < kLangIdMinChars) return guess;

  auto counts = detail::trigram_counts(text);
  double text_norm = detail::l2_norm(counts);
  if (text_norm <= 0.0) return guess;

  double best = -1.0, second = -1.0;
  const TrigramProfile* best_profile = nullptr;
  for (const TrigramProfile& p : profiles) {
    double dot = 0.0;
    if (p.norm > 0.0) {
      for (const auto& [tri, c] : counts) {
        auto it = p.weights.find(tri);
        if (it != p.weights.end()) dot += c * it->second;
      }
      dot /= text_norm * p.norm;
    }
    if (dot > best) {
      second = best;
      best = dot;
      best_profile = &p;
    } else if (dot > second) {
      second = dot;
    }
  }
  if (profiles.size() == 1) second = 0.0;
  if (best_profile == nullptr || best <= 0.0) return guess;
  double denom = best + std::max(second, 0.0);
  double margin = denom > 0.0 ? (best - std::max(second, 0.0)) / denom : 0.0;
  if (margin < kLangIdMinMargin) return guess;
  guess.lang = best_profile->lang;
  guess.confidence = margin;
  return guess;
}

// Profiles persist as TSV `lang <TAB> trigram <TAB> weight`, trigrams sorted
// per language for stable bytes.
inline void write_profiles(const std::vector<TrigramProfile>& profiles,
                           const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open for writing: " + path.string());
  char buf[40];
  for (const TrigramProfile& p : profiles) {
    std::map<std::string, double> sorted(p.weights.begin(), p.weights.end());
    for (const auto& [tri, w] : sorted) {
      std::snprintf(buf, sizeof(buf), "%.17g", w);
      out << escape_field(p.lang) << '\t' << escape_field(tri) << '\t' << buf << '\n';
    }
  }
  if (!out) throw Error("write failed: " + path.string());
}

inline std::vector<TrigramProfile> read_profiles(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open profiles: " + path.string());
  std::vector<TrigramProfile> profiles;
  std::unordered_map<std::string, std::size_t> by_lang;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::string where = path.string() + ":" + std::to_string(lineno);
    std::vector<std::string> cols;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
      if (i == line.size() || line[i] == '\t') {
        cols.push_back(unescape_field(std::string_view(line).substr(start, i - start)));
        start = i + 1;
      }
    }
    if (cols.size() != 3) throw Error(where + ": expected 3 columns");
    char* end = nullptr;
    double w = std::strtod(cols[2].c_str(), &end);
    if (end != cols[2].c_str() + cols[2].size()) throw Error(where + ": bad weight");
    auto [it, inserted] = by_lang.emplace(cols[0], profiles.size());
    if (inserted) {
      profiles.push_back(TrigramProfile{});
      profiles.back().lang = cols[0];
    }
    profiles[it->second].weights[cols[1]] = w;
  }
  for (TrigramProfile& p : profiles) p.norm = detail::l2_norm(p.weights);
  return profiles;
}

}  // namespace paramine
