#pragma once

// Domain acquisition: a minimal deterministic breadth-first crawler plus a
// snapshot mode that replays a manifest of saved pages. The HTTP client and
// clock are injected so tests run against fake servers and fake time.
//
// Crawl behaviour:
//  - traversal is breadth-first, restricted to the start host; links found
//    on a page are enqueued in lexicographic order (discovery order between
//    pages, lexicographic within a page)
//  - robots.txt Disallow rules for User-agent * or "paramine" are honored
//  - requests to the host are spaced by at least delay_ms
//  - connection failures mark the page failed without aborting the crawl;
//    a crawl that fetches nothing at all is an error

#include <algorithm>
#include <chrono>
#include <deque>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "paramine/error.hpp"
#include "paramine/url.hpp"
#include "paramine/webdoc.hpp"

namespace paramine {

inline constexpr const char* kUserAgent = "paramine";

struct HttpResponse {
  bool ok = false;  // transport-level success
  int status = 0;
  std::string body;
  std::string content_type;
  std::string error;
};

class HttpClient {
 public:
  virtual ~HttpClient() = default;
  virtual HttpResponse get(const Url& url) = 0;
};

class Clock {
 public:
  virtual ~Clock() = default;
  virtual std::int64_t now_ms() = 0;
  virtual void sleep_ms(int ms) = 0;
};

class RealClock : public Clock {
 public:
  std::int64_t now_ms() override {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
  }
  void sleep_ms(int ms) override { std::this_thread::sleep_for(std::chrono::milliseconds(ms)); }
};

struct FetchLimits {
  int max_pages = 200;
  int max_depth = 5;
  int delay_ms = 100;
};

// Disallow-prefix rules from the groups that apply to our user agent.
struct RobotsRules {
  std::vector<std::string> disallow;

  bool allowed(std::string_view path) const {
    for (const std::string& prefix : disallow)
      if (!prefix.empty() && path.substr(0, prefix.size()) == prefix) return false;
    return true;
  }
};

inline RobotsRules parse_robots(std::string_view body) {
  RobotsRules rules;
  bool applies = false;
  bool in_group = false;
  std::size_t i = 0;
  while (i <= body.size()) {
    std::size_t j = body.find('\n', i);
    if (j == std::string_view::npos) j = body.size();
    std::string line(body.substr(i, j - i));
    i = j + 1;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::string trimmed = normalize_ws(line);
    if (trimmed.empty()) {
      in_group = false;
      continue;
    }
    std::size_t colon = trimmed.find(':');
    if (colon == std::string::npos) continue;
    std::string key = lower_copy(normalize_ws(trimmed.substr(0, colon)));
    std::string value = normalize_ws(trimmed.substr(colon + 1));
    if (key == "user-agent") {
      std::string agent = lower_copy(value);
      bool match = agent == "*" || agent == kUserAgent;
      applies = in_group ? (applies || match) : match;
      in_group = true;
    } else if (key == "disallow") {
      in_group = false;
      if (applies && !value.empty()) rules.disallow.push_back(value);
    } else {
      in_group = false;
    }
    if (j == body.size()) break;
  }
  return rules;
}

namespace detail {

inline bool looks_like_html(const std::string& content_type) {
  if (content_type.empty()) return true;  // assume html when the server is silent
  return content_type.find("html") != std::string::npos ||
         content_type.find("xml") != std::string::npos;
}

}  // namespace detail

// Breadth-first crawl of one domain. Documents come back with text blocks
// and tag signatures populated; language identification and sentence
// splitting happen later, once profiles are known.
inline std::vector<WebDocument> fetch_domain(HttpClient& client, Clock& clock,
                                             std::string_view domain, const FetchLimits& limits) {
  if (limits.max_pages < 1 || limits.max_depth < 0 || limits.delay_ms < 0)
    throw ValidationError("fetch_domain: limits must be positive");
  Url start = parse_url(domain);
  if (!start.valid) throw ValidationError("fetch_domain: cannot parse domain '" + std::string(domain) + "'");

  bool first_request = true;
  auto polite_get = [&](const Url& url) {
    if (!first_request && limits.delay_ms > 0) clock.sleep_ms(limits.delay_ms);
    first_request = false;
    return client.get(url);
  };

  RobotsRules robots;
  {
    Url robots_url = start;
    robots_url.path = "/robots.txt";
    robots_url.query.clear();
    HttpResponse resp = polite_get(robots_url);
    if (resp.ok && resp.status / 100 == 2) robots = parse_robots(resp.body);
  }

  std::vector<WebDocument> docs;
  std::deque<std::pair<Url, int>> queue;
  std::set<std::string> seen;
  queue.emplace_back(start, 0);
  seen.insert(start.str());
  int fetched_count = 0;

  while (!queue.empty() && static_cast<int>(docs.size()) < limits.max_pages) {
    auto [url, depth] = queue.front();
    queue.pop_front();
    if (!robots.allowed(url.path)) continue;

    HttpResponse resp = polite_get(url);
    WebDocument doc;
    doc.url = url.str();
    if (!resp.ok || resp.status / 100 != 2) {
      doc.fetch_status = FetchStatus::failed;
      docs.push_back(std::move(doc));
      continue;
    }
    if (!detail::looks_like_html(resp.content_type)) continue;
    doc.fetch_status = FetchStatus::fetched;
    doc.raw_html = std::move(resp.body);
    populate_content(doc);
    ++fetched_count;

    if (depth < limits.max_depth) {
      std::vector<std::string> hrefs = extract_links(doc.raw_html);
      std::vector<std::string> discovered;
      for (const std::string& href : hrefs) {
        Url child = resolve_url(url, href);
        if (!child.valid || child.host != start.host) continue;
        std::string key = child.str();
        if (seen.count(key)) continue;
        seen.insert(key);
        discovered.push_back(key);
      }
      std::sort(discovered.begin(), discovered.end());
      for (const std::string& key : discovered) queue.emplace_back(parse_url(key), depth + 1);
    }
    docs.push_back(std::move(doc));
  }

  if (fetched_count == 0)
    throw Error("fetch_domain: nothing fetched from '" + std::string(domain) + "'");
  return docs;
}

struct SnapshotEntry {
  std::string url;
  std::string relative_path;
  std::string content_type;  // optional
};

struct SnapshotManifest {
  std::filesystem::path base_dir;
  std::vector<SnapshotEntry> entries;
};

// Manifest format: UTF-8 TSV `url <TAB> relative_path [<TAB> content_type]`.
// URLs must be unique and every referenced file must exist at load time.
inline SnapshotManifest load_manifest(const std::filesystem::path& manifest_path) {
  std::ifstream in(manifest_path, std::ios::binary);
  if (!in) throw Error("cannot open snapshot manifest: " + manifest_path.string());
  SnapshotManifest manifest;
  manifest.base_dir = manifest_path.parent_path();
  std::set<std::string> urls;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::string where = manifest_path.string() + ":" + std::to_string(lineno);
    std::vector<std::string> cols;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
      if (i == line.size() || line[i] == '\t') {
        cols.push_back(line.substr(start, i - start));
        start = i + 1;
      }
    }
    if (cols.size() < 2 || cols.size() > 3)
      throw Error(where + ": expected 2 or 3 columns, got " + std::to_string(cols.size()));
    if (!urls.insert(cols[0]).second) throw Error(where + ": duplicate URL '" + cols[0] + "'");
    SnapshotEntry entry;
    entry.url = cols[0];
    entry.relative_path = cols[1];
    if (cols.size() == 3) entry.content_type = cols[2];
    if (!std::filesystem::exists(manifest.base_dir / entry.relative_path))
      throw Error(where + ": missing snapshot file for '" + entry.url + "': " + entry.relative_path);
    manifest.entries.push_back(std::move(entry));
  }
  return manifest;
}

// One document per manifest entry, in manifest order.
inline std::vector<WebDocument> load_snapshot(const SnapshotManifest& manifest) {
  std::vector<WebDocument> docs;
  docs.reserve(manifest.entries.size());
  for (const SnapshotEntry& entry : manifest.entries) {
    std::filesystem::path file = manifest.base_dir / entry.relative_path;
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error("cannot read snapshot file for '" + entry.url + "': " + file.string());
    std::ostringstream body;
    body << in.rdbuf();
    WebDocument doc;
    Url url = parse_url(entry.url);
    doc.url = url.valid ? url.str() : entry.url;
    doc.raw_html = body.str();
    doc.fetch_status = FetchStatus::from_snapshot;
    populate_content(doc);
    docs.push_back(std::move(doc));
  }
  return docs;
}

inline std::vector<WebDocument> load_snapshot(const std::filesystem::path& manifest_path) {
  return load_snapshot(load_manifest(manifest_path));
}

}  // namespace paramine
