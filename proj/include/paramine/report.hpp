#pragma once

// Pipeline run report: per-stage counts recounted from the persisted
// artifacts, removal percentages at two decimals, and wall-clock per stage.

#include <cmath>
#include <cstdio>
#include <map>
#include <string>

#include <json.hpp>

#include "paramine/core.hpp"
#include "paramine/filter.hpp"

namespace paramine {

inline double round2(double v) { return std::round(v * 100.0) / 100.0; }

// 100 * removed / input at two decimal places; 0 when the input is empty.
inline double removal_pct(std::int64_t removed, std::int64_t input) {
  if (input <= 0) return 0.0;
  return round2(100.0 * static_cast<double>(removed) / static_cast<double>(input));
}

struct PipelineReport {
  LanguagePair languages;
  std::int64_t domains_processed = 0;
  std::int64_t documents_loaded = 0;
  std::int64_t documents_src = 0;
  std::int64_t documents_tgt = 0;
  std::int64_t document_pairs = 0;
  std::int64_t raw_pairs = 0;  // |B| before the heuristic rules
  RuleReport rules;
  std::int64_t classified_kept = 0;      // |C|
  std::int64_t classified_rejected = 0;  // |B - C|
  std::map<std::string, double> timings_ms;

  double heuristic_removed_pct() const { return removal_pct(rules.removed(), raw_pairs); }
  double classifier_removed_pct() const { return removal_pct(classified_rejected, rules.kept); }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["languages"] = {{"src", languages.src}, {"tgt", languages.tgt}};
    nlohmann::json counts;
    counts["domains_processed"] = domains_processed;
    counts["documents_loaded"] = documents_loaded;
    counts["documents_src"] = documents_src;
    counts["documents_tgt"] = documents_tgt;
    counts["document_pairs"] = document_pairs;
    counts["raw_pairs"] = raw_pairs;
    counts["heuristic"] = {{"kept", rules.kept},
                           {"removed_duplicate", rules.removed_duplicate},
                           {"removed_short", rules.removed_short},
                           {"removed_overlap", rules.removed_overlap}};
    counts["classified_kept"] = classified_kept;
    counts["classified_rejected"] = classified_rejected;
    j["counts"] = std::move(counts);
    j["percentages"] = {{"heuristic_removed_pct", heuristic_removed_pct()},
                        {"classifier_removed_pct", classifier_removed_pct()}};
    nlohmann::json timings = nlohmann::json::object();
    for (const auto& [stage, ms] : timings_ms) timings[stage] = round2(ms);
    j["timings_ms"] = std::move(timings);
    return j;
  }

  std::string to_text() const {
    char pct1[16], pct2[16];
    std::snprintf(pct1, sizeof(pct1), "%.2f", heuristic_removed_pct());
    std::snprintf(pct2, sizeof(pct2), "%.2f", classifier_removed_pct());
    std::string out;
    auto line = [&out](const std::string& label, const std::string& value) {
      out += label;
      if (label.size() < 28) out += std::string(28 - label.size(), ' ');
      out += value;
      out += '\n';
    };
    line("language pair", languages.src + "-" + languages.tgt);
    line("domains processed", std::to_string(domains_processed));
    line("documents loaded", std::to_string(documents_loaded));
    line("documents " + languages.src, std::to_string(documents_src));
    line("documents " + languages.tgt, std::to_string(documents_tgt));
    line("document pairs", std::to_string(document_pairs));
    line("raw aligned pairs", std::to_string(raw_pairs));
    line("  removed duplicate", std::to_string(rules.removed_duplicate));
    line("  removed short", std::to_string(rules.removed_short));
    line("  removed overlap", std::to_string(rules.removed_overlap));
    line("after heuristic rules", std::to_string(rules.kept) + "  (removed " + pct1 + "%)");
    line("kept by classifier", std::to_string(classified_kept) + "  (removed " + pct2 + "%)");
    line("rejected by classifier", std::to_string(classified_rejected));
    if (!timings_ms.empty()) {
      out += "stage timings (ms)\n";
      for (const auto& [stage, ms] : timings_ms) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.0f", ms);
        line("  " + stage, buf);
      }
    }
    return out;
  }
};

}  // namespace paramine
