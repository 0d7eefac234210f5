#pragma once

// Pipeline configuration: an INI-style file (sections of key = value lines,
// # or ; comments) plus CLI overrides. Unknown sections or keys are errors.
// Relative paths resolve against the config file's directory.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>

#include "paramine/core.hpp"
#include "paramine/crawler.hpp"
#include "paramine/docalign.hpp"
#include "paramine/error.hpp"
#include "paramine/forest.hpp"
#include "paramine/sentalign.hpp"
#include "paramine/text.hpp"

namespace paramine {

struct DictConfig {
  int iterations = 10;
  double smoothing = 1e-6;
  double min_prob = 0.1;
  int cap = 4;
};

struct DocAlignConfig {
  DocAlignWeights weights;
  double threshold = 0.5;
  std::string alias_file;  // optional extension of the built-in table
};

struct SentAlignConfig {
  AlignParams params;
  std::string dict_file;    // override; default is the induced forward seed
  std::string abbrev_file;  // optional extension of the built-in stop-list
};

struct FilterConfig {
  double neg_ratio = 1.0;
  ForestHyperparams hp;
  double threshold = 0.5;
};

struct PipelineConfig {
  LanguagePair languages;
  std::string pseudo_corpus;  // corpus A path
  std::string snapshot;       // manifest path or directory containing manifest.tsv
  std::string domains;        // domain list file, one hostname per line
  DictConfig dict;
  FetchLimits crawl;
  DocAlignConfig docalign;
  SentAlignConfig sentalign;
  FilterConfig filter;
  std::string out_dir;
  std::uint64_t seed = 0;
  int workers = 1;

  // Numeric and structural invariants; throws ValidationError.
  void validate_ranges() const {
    make_language_pair(languages.src, languages.tgt);
    if (dict.iterations < 1) throw ValidationError("dictionary.iterations must be >= 1");
    if (dict.smoothing < 0) throw ValidationError("dictionary.smoothing must be >= 0");
    if (dict.min_prob <= 0 || dict.min_prob > 1)
      throw ValidationError("dictionary.min_prob must be in (0,1]");
    if (dict.cap < 1) throw ValidationError("dictionary.cap must be >= 1");
    if (crawl.max_pages < 1 || crawl.max_depth < 0 || crawl.delay_ms < 0)
      throw ValidationError("crawl limits must be positive");
    docalign.weights.validate();
    if (docalign.threshold < 0 || docalign.threshold > 1)
      throw ValidationError("doc_align.threshold must be in [0,1]");
    sentalign.params.validate();
    if (filter.neg_ratio <= 0) throw ValidationError("filter.neg_ratio must be > 0");
    filter.hp.validate();
    if (filter.threshold < 0 || filter.threshold > 1)
      throw ValidationError("filter.threshold must be in [0,1]");
    if (workers < 1) throw ValidationError("run.workers must be >= 1");
    if (out_dir.empty()) throw ValidationError("output.dir is required");
    if (pseudo_corpus.empty()) throw ValidationError("inputs.pseudo_corpus is required");
    if (snapshot.empty() == domains.empty())
      throw ValidationError("exactly one of inputs.snapshot and inputs.domains is required");
  }

  std::filesystem::path snapshot_manifest() const {
    std::filesystem::path p(snapshot);
    if (std::filesystem::is_directory(p)) return p / "manifest.tsv";
    return p;
  }

  // Every referenced input path must exist before any stage runs.
  void validate_inputs() const {
    namespace fs = std::filesystem;
    if (!fs::exists(pseudo_corpus))
      throw ValidationError("pseudo corpus not found: " + pseudo_corpus);
    if (!snapshot.empty() && !fs::exists(snapshot_manifest()))
      throw ValidationError("snapshot manifest not found: " + snapshot_manifest().string());
    if (!domains.empty() && !fs::exists(domains))
      throw ValidationError("domain list not found: " + domains);
    if (!docalign.alias_file.empty() && !fs::exists(docalign.alias_file))
      throw ValidationError("language alias file not found: " + docalign.alias_file);
    if (!sentalign.abbrev_file.empty() && !fs::exists(sentalign.abbrev_file))
      throw ValidationError("abbreviation file not found: " + sentalign.abbrev_file);
    if (!sentalign.dict_file.empty() && !fs::exists(sentalign.dict_file))
      throw ValidationError("dictionary file not found: " + sentalign.dict_file);
  }
};

namespace detail {

struct IniData {
  std::map<std::string, std::map<std::string, std::string>> sections;
};

inline IniData parse_ini(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open config: " + path.string());
  IniData data;
  std::string line, section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string trimmed = normalize_ws(line);
    if (trimmed.empty() || trimmed[0] == '#' || trimmed[0] == ';') continue;
    std::string where = path.string() + ":" + std::to_string(lineno);
    if (trimmed.front() == '[') {
      if (trimmed.back() != ']') throw ValidationError(where + ": malformed section header");
      section = normalize_ws(trimmed.substr(1, trimmed.size() - 2));
      if (section.empty()) throw ValidationError(where + ": empty section name");
      data.sections[section];
      continue;
    }
    std::size_t eq = trimmed.find('=');
    if (eq == std::string::npos) throw ValidationError(where + ": expected `key = value`");
    std::string key = normalize_ws(trimmed.substr(0, eq));
    std::string value = normalize_ws(trimmed.substr(eq + 1));
    if (key.empty()) throw ValidationError(where + ": empty key");
    if (section.empty()) throw ValidationError(where + ": key outside of a section");
    data.sections[section][key] = value;
  }
  return data;
}

inline double to_double(const std::string& value, const std::string& what) {
  char* end = nullptr;
  double v = std::strtod(value.c_str(), &end);
  if (value.empty() || end != value.c_str() + value.size())
    throw ValidationError(what + ": expected a number, got '" + value + "'");
  return v;
}

inline long long to_int(const std::string& value, const std::string& what) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(value, &pos);
  } catch (...) {
    pos = std::string::npos;
  }
  if (pos != value.size()) throw ValidationError(what + ": expected an integer, got '" + value + "'");
  return v;
}

}  // namespace detail

inline PipelineConfig load_config(const std::filesystem::path& path) {
  detail::IniData ini = detail::parse_ini(path);
  std::filesystem::path base = path.parent_path();
  PipelineConfig cfg;

  auto resolve = [&](const std::string& p) {
    if (p.empty()) return p;
    std::filesystem::path fp(p);
    return fp.is_absolute() ? p : (base / fp).lexically_normal().string();
  };

  for (const auto& [section, keys] : ini.sections) {
    for (const auto& [key, value] : keys) {
      std::string what = section + "." + key;
      if (section == "languages") {
        if (key == "src") cfg.languages.src = value;
        else if (key == "tgt") cfg.languages.tgt = value;
        else throw ValidationError("unknown config key: " + what);
      } else if (section == "inputs") {
        if (key == "pseudo_corpus") cfg.pseudo_corpus = resolve(value);
        else if (key == "snapshot") cfg.snapshot = resolve(value);
        else if (key == "domains") cfg.domains = resolve(value);
        else throw ValidationError("unknown config key: " + what);
      } else if (section == "dictionary") {
        if (key == "iterations") cfg.dict.iterations = static_cast<int>(detail::to_int(value, what));
        else if (key == "smoothing") cfg.dict.smoothing = detail::to_double(value, what);
        else if (key == "min_prob") cfg.dict.min_prob = detail::to_double(value, what);
        else if (key == "cap") cfg.dict.cap = static_cast<int>(detail::to_int(value, what));
        else throw ValidationError("unknown config key: " + what);
      } else if (section == "crawl") {
        if (key == "max_pages") cfg.crawl.max_pages = static_cast<int>(detail::to_int(value, what));
        else if (key == "max_depth") cfg.crawl.max_depth = static_cast<int>(detail::to_int(value, what));
        else if (key == "delay_ms") cfg.crawl.delay_ms = static_cast<int>(detail::to_int(value, what));
        else throw ValidationError("unknown config key: " + what);
      } else if (section == "doc_align") {
        if (key == "url_weight") cfg.docalign.weights.url = detail::to_double(value, what);
        else if (key == "structure_weight") cfg.docalign.weights.structure = detail::to_double(value, what);
        else if (key == "content_weight") cfg.docalign.weights.content = detail::to_double(value, what);
        else if (key == "threshold") cfg.docalign.threshold = detail::to_double(value, what);
        else if (key == "alias_file") cfg.docalign.alias_file = resolve(value);
        else throw ValidationError("unknown config key: " + what);
      } else if (section == "sent_align") {
        if (key == "dict_weight") cfg.sentalign.params.dict_weight = detail::to_double(value, what);
        else if (key == "length_weight") cfg.sentalign.params.length_weight = detail::to_double(value, what);
        else if (key == "gap_penalty") cfg.sentalign.params.gap_penalty = detail::to_double(value, what);
        else if (key == "accept_threshold")
          cfg.sentalign.params.accept_threshold = detail::to_double(value, what);
        else if (key == "dict_file") cfg.sentalign.dict_file = resolve(value);
        else if (key == "abbrev_file") cfg.sentalign.abbrev_file = resolve(value);
        else throw ValidationError("unknown config key: " + what);
      } else if (section == "filter") {
        if (key == "neg_ratio") cfg.filter.neg_ratio = detail::to_double(value, what);
        else if (key == "trees") cfg.filter.hp.n_trees = static_cast<int>(detail::to_int(value, what));
        else if (key == "max_depth") cfg.filter.hp.max_depth = static_cast<int>(detail::to_int(value, what));
        else if (key == "feature_subsample")
          cfg.filter.hp.feature_subsample = static_cast<int>(detail::to_int(value, what));
        else if (key == "threshold") cfg.filter.threshold = detail::to_double(value, what);
        else throw ValidationError("unknown config key: " + what);
      } else if (section == "output") {
        if (key == "dir") cfg.out_dir = resolve(value);
        else throw ValidationError("unknown config key: " + what);
      } else if (section == "run") {
        if (key == "seed") cfg.seed = static_cast<std::uint64_t>(detail::to_int(value, what));
        else if (key == "workers") cfg.workers = static_cast<int>(detail::to_int(value, what));
        else throw ValidationError("unknown config key: " + what);
      } else {
        throw ValidationError("unknown config section: [" + section + "]");
      }
    }
  }
  return cfg;
}

}  // namespace paramine
