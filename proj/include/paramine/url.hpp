#pragma once

// Minimal URL handling for the crawler and document aligner: parsing,
// normalization (lowercase scheme/host, default ports dropped, dot segments
// collapsed, fragments stripped) and relative reference resolution.

#include <string>
#include <string_view>
#include <vector>

namespace paramine {

struct Url {
  std::string scheme;  // "http" when the input had none
  std::string host;    // lowercase
  int port = -1;       // -1 = default
  std::string path;    // starts with '/', dot segments resolved
  std::string query;   // without '?'
  bool valid = false;

  std::string str() const {
    if (!valid) return {};
    std::string out = scheme + "://" + host;
    if (port >= 0) out += ":" + std::to_string(port);
    out += path;
    if (!query.empty()) out += "?" + query;
    return out;
  }

  // Path without the leading slash, plus '?query' if present; the string the
  // URL matcher runs edit distance over.
  std::string path_and_query() const {
    std::string out = path.size() > 1 ? path.substr(1) : std::string();
    if (path == "/") out.clear();
    if (!query.empty()) out += "?" + query;
    return out;
  }
};

namespace detail {

inline std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c += 0x20;
  return out;
}

inline std::string resolve_dot_segments(std::string_view path) {
  std::vector<std::string> stack;
  std::size_t i = 0;
  while (i <= path.size()) {
    std::size_t j = path.find('/', i);
    if (j == std::string_view::npos) j = path.size();
    std::string_view seg = path.substr(i, j - i);
    if (seg == "..") {
      if (!stack.empty()) stack.pop_back();
    } else if (seg != "." && !(seg.empty() && i != path.size())) {
      if (!seg.empty() || i == path.size()) stack.push_back(std::string(seg));
    }
    if (j == path.size()) break;
    i = j + 1;
  }
  std::string out;
  for (std::size_t k = 0; k < stack.size(); ++k) {
    out += "/";
    out += stack[k];
  }
  if (out.empty()) out = "/";
  if (!path.empty() && path.back() == '/' && out.back() != '/') out += "/";
  return out;
}

}  // namespace detail

// Parses an absolute URL. A scheme-less input such as "xx.com/abc/en" is
// treated as host + path with scheme http. Fragments are dropped.
inline Url parse_url(std::string_view raw) {
  Url url;
  std::string_view s = raw;
  std::size_t frag = s.find('#');
  if (frag != std::string_view::npos) s = s.substr(0, frag);
  if (s.empty()) return url;

  std::size_t scheme_end = s.find("://");
  if (scheme_end != std::string_view::npos) {
    url.scheme = detail::ascii_lower(s.substr(0, scheme_end));
    s = s.substr(scheme_end + 3);
  } else if (s.substr(0, 2) == "//") {
    url.scheme = "http";
    s = s.substr(2);
  } else {
    url.scheme = "http";
  }
  if (url.scheme.empty()) return url;

  std::size_t path_start = s.find('/');
  std::size_t query_start = s.find('?');
  std::size_t host_end = std::min(path_start == std::string_view::npos ? s.size() : path_start,
                                  query_start == std::string_view::npos ? s.size() : query_start);
  std::string_view authority = s.substr(0, host_end);
  std::size_t colon = authority.rfind(':');
  if (colon != std::string_view::npos) {
    std::string_view port_str = authority.substr(colon + 1);
    int port = 0;
    bool numeric = !port_str.empty();
    for (char c : port_str) {
      if (c < '0' || c > '9') {
        numeric = false;
        break;
      }
      port = port * 10 + (c - '0');
    }
    if (numeric) {
      url.host = detail::ascii_lower(authority.substr(0, colon));
      if (!((url.scheme == "http" && port == 80) || (url.scheme == "https" && port == 443)))
        url.port = port;
    } else {
      url.host = detail::ascii_lower(authority);
    }
  } else {
    url.host = detail::ascii_lower(authority);
  }
  if (url.host.empty()) return url;

  std::string_view rest = s.substr(host_end);
  std::size_t q = rest.find('?');
  std::string_view path = q == std::string_view::npos ? rest : rest.substr(0, q);
  if (q != std::string_view::npos) url.query = std::string(rest.substr(q + 1));
  url.path = detail::resolve_dot_segments(path.empty() ? "/" : std::string(path));
  url.valid = true;
  return url;
}

// Resolves href against base. Absolute hrefs (with scheme or protocol
// relative) parse on their own; everything else is relative to base.
inline Url resolve_url(const Url& base, std::string_view href) {
  std::string_view s = href;
  std::size_t frag = s.find('#');
  if (frag != std::string_view::npos) s = s.substr(0, frag);
  if (s.empty()) return base;
  if (s.find("://") != std::string_view::npos || s.substr(0, 2) == "//") return parse_url(href);
  // schemes we cannot fetch
  std::size_t colon = s.find(':');
  std::size_t slash = s.find('/');
  if (colon != std::string_view::npos && (slash == std::string_view::npos || colon < slash))
    return Url{};
  if (!base.valid) return Url{};

  Url url = base;
  url.query.clear();
  if (s[0] == '/') {
    std::size_t q = s.find('?');
    if (q != std::string_view::npos) {
      url.query = std::string(s.substr(q + 1));
      s = s.substr(0, q);
    }
    url.path = detail::resolve_dot_segments(s);
    return url;
  }
  if (s[0] == '?') {
    url.query = std::string(s.substr(1));
    return url;
  }
  std::string merged = base.path.substr(0, base.path.rfind('/') + 1);
  merged += std::string(s);
  std::size_t q = merged.find('?');
  if (q != std::string::npos) {
    url.query = merged.substr(q + 1);
    merged = merged.substr(0, q);
  }
  url.path = detail::resolve_dot_segments(merged);
  return url;
}

}  // namespace paramine
