#pragma once

// Lexical translation tables. The probabilistic table is what EM training
// produces; the seed dictionary is its thresholded, per-source-capped cut
// that the crawler stages consume.
//
// Both persist as UTF-8 TSV `src_token <TAB> tgt_token <TAB> prob`, sorted by
// (src_token asc, prob desc, tgt_token asc). Probabilities are written with
// 17 significant digits so reloading reproduces the exact doubles. The
// probabilistic table includes rows for the special NULL source token.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "paramine/corpus_io.hpp"
#include "paramine/error.hpp"

namespace paramine {

inline constexpr const char* kNullToken = "NULL";

struct DictEntry {
  std::string tgt;
  double prob = 0.0;
};

struct ProbabilisticDictionary {
  // Row vectors are sorted by (prob desc, tgt asc).
  std::map<std::string, std::vector<DictEntry>> rows;
  int iterations_run = 0;
  double smoothing = 0.0;
  double final_log_likelihood = 0.0;
  std::vector<double> iteration_log_likelihoods;  // after each EM iteration

  double prob(const std::string& src, const std::string& tgt) const {
    auto it = rows.find(src);
    if (it == rows.end()) return 0.0;
    for (const DictEntry& e : it->second)
      if (e.tgt == tgt) return e.prob;
    return 0.0;
  }
};

struct SeedEntry {
  std::string src;
  std::string tgt;
  double prob = 0.0;
};

class SeedDictionary {
 public:
  SeedDictionary() = default;

  // Takes entries in any order; sorts them into the canonical file order and
  // builds the per-source index.
  static SeedDictionary make(std::vector<SeedEntry> entries, int cap) {
    SeedDictionary d;
    std::sort(entries.begin(), entries.end(), [](const SeedEntry& a, const SeedEntry& b) {
      if (a.src != b.src) return a.src < b.src;
      if (a.prob != b.prob) return a.prob > b.prob;
      return a.tgt < b.tgt;
    });
    d.entries_ = std::move(entries);
    d.cap_ = cap;
    std::size_t i = 0;
    while (i < d.entries_.size()) {
      std::size_t j = i;
      while (j < d.entries_.size() && d.entries_[j].src == d.entries_[i].src) ++j;
      d.index_.emplace(d.entries_[i].src, std::make_pair(i, j));
      i = j;
    }
    return d;
  }

  const std::vector<SeedEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  int cap() const { return cap_; }

  std::span<const SeedEntry> lookup(const std::string& src) const {
    auto it = index_.find(src);
    if (it == index_.end()) return {};
    return std::span<const SeedEntry>(entries_.data() + it->second.first,
                                      it->second.second - it->second.first);
  }

  bool contains(const std::string& src, const std::string& tgt) const {
    for (const SeedEntry& e : lookup(src))
      if (e.tgt == tgt) return true;
    return false;
  }

  // Highest-probability translation of src, or nullptr.
  const SeedEntry* top1(const std::string& src) const {
    auto span = lookup(src);
    return span.empty() ? nullptr : &span.front();
  }

 private:
  std::vector<SeedEntry> entries_;
  std::unordered_map<std::string, std::pair<std::size_t, std::size_t>> index_;
  int cap_ = 0;
};

namespace detail {

inline std::string format_prob(double p) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", p);
  return buf;
}

inline double parse_prob(std::string_view s, const std::string& where) {
  std::string str(s);
  char* end = nullptr;
  double v = std::strtod(str.c_str(), &end);
  if (end != str.c_str() + str.size()) throw Error(where + ": bad probability '" + str + "'");
  return v;
}

inline std::vector<std::array<std::string, 3>> read_dict_rows(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open dictionary: " + path.string());
  std::vector<std::array<std::string, 3>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::string where = path.string() + ":" + std::to_string(lineno);
    std::array<std::string, 3> cols;
    std::size_t start = 0, col = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
      if (i == line.size() || line[i] == '\t') {
        if (col >= 3) throw Error(where + ": expected 3 columns");
        cols[col++] = unescape_field(std::string_view(line).substr(start, i - start));
        start = i + 1;
      }
    }
    if (col != 3) throw Error(where + ": expected 3 columns, got " + std::to_string(col));
    rows.push_back(std::move(cols));
  }
  return rows;
}

}  // namespace detail

inline void write_seed_dictionary(const SeedDictionary& dict, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open for writing: " + path.string());
  for (const SeedEntry& e : dict.entries())
    out << escape_field(e.src) << '\t' << escape_field(e.tgt) << '\t'
        << detail::format_prob(e.prob) << '\n';
  if (!out) throw Error("write failed: " + path.string());
}

inline SeedDictionary read_seed_dictionary(const std::filesystem::path& path) {
  std::vector<SeedEntry> entries;
  std::size_t max_row = 0;
  std::string prev_src;
  std::size_t run = 0;
  for (auto& cols : detail::read_dict_rows(path)) {
    entries.push_back(SeedEntry{cols[0], cols[1], detail::parse_prob(cols[2], path.string())});
    run = (cols[0] == prev_src) ? run + 1 : 1;
    prev_src = cols[0];
    max_row = std::max(max_row, run);
  }
  return SeedDictionary::make(std::move(entries), static_cast<int>(std::max<std::size_t>(max_row, 1)));
}

inline void write_prob_table(const ProbabilisticDictionary& dict, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open for writing: " + path.string());
  for (const auto& [src, row] : dict.rows)
    for (const DictEntry& e : row)
      out << escape_field(src) << '\t' << escape_field(e.tgt) << '\t'
          << detail::format_prob(e.prob) << '\n';
  if (!out) throw Error("write failed: " + path.string());
}

// Reloads table rows only; training metadata is not part of the file format.
inline ProbabilisticDictionary read_prob_table(const std::filesystem::path& path) {
  ProbabilisticDictionary dict;
  for (auto& cols : detail::read_dict_rows(path))
    dict.rows[cols[0]].push_back(DictEntry{cols[1], detail::parse_prob(cols[2], path.string())});
  for (auto& [src, row] : dict.rows) {
    (void)src;
    std::sort(row.begin(), row.end(), [](const DictEntry& a, const DictEntry& b) {
      if (a.prob != b.prob) return a.prob > b.prob;
      return a.tgt < b.tgt;
    });
  }
  return dict;
}

}  // namespace paramine
