#pragma once

// Tag-soup tolerant HTML text extraction. Not a validating parser: real web
// pages are malformed and we only need text blocks, a tag signature, and
// anchor hrefs.
//
//  - script/style subtrees are skipped entirely (their inner tags never
//    reach the signature); head contents contribute no text
//  - block-level tags (p, div, li, h1-h6, td, br) delimit text blocks
//  - entities are decoded, whitespace normalized per block
//  - the tag signature is the document-order list of opening tag names

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "paramine/text.hpp"

namespace paramine {

namespace detail {

inline bool ascii_ieq(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    char ca = a[i], cb = b[i];
    if (ca >= 'A' && ca <= 'Z') ca += 0x20;
    if (cb >= 'A' && cb <= 'Z') cb += 0x20;
    if (ca != cb) return false;
  }
  return true;
}

inline bool is_tag_name_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-';
}

inline bool is_block_tag(std::string_view name) {
  static constexpr std::array<std::string_view, 11> kBlock = {
      "p", "div", "li", "h1", "h2", "h3", "h4", "h5", "h6", "td", "br"};
  for (auto b : kBlock)
    if (name == b) return true;
  return false;
}

inline bool is_void_tag(std::string_view name) {
  static constexpr std::array<std::string_view, 14> kVoid = {
      "area", "base", "br", "col", "embed", "hr", "img", "input",
      "link", "meta", "param", "source", "track", "wbr"};
  for (auto v : kVoid)
    if (name == v) return true;
  return false;
}

// Finds the case-insensitive closing tag of a raw-text element (script or
// style) starting at `from`; returns the position just past its '>'.
inline std::size_t skip_raw_element(std::string_view html, std::size_t from, std::string_view name) {
  std::string needle = "</" + std::string(name);
  for (std::size_t i = from; i + needle.size() <= html.size(); ++i) {
    if (html[i] != '<' || html[i + 1] != '/') continue;
    if (!ascii_ieq(html.substr(i, needle.size()), needle)) continue;
    std::size_t j = i + needle.size();
    while (j < html.size() && html[j] != '>') ++j;
    return j < html.size() ? j + 1 : html.size();
  }
  return html.size();
}

}  // namespace detail

// Decodes the common named entities and numeric character references.
// Unknown entities are copied through literally.
inline std::string decode_entities(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '&') {
      out.push_back(text[i++]);
      continue;
    }
    std::size_t semi = text.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 32) {
      out.push_back(text[i++]);
      continue;
    }
    std::string_view name = text.substr(i + 1, semi - i - 1);
    if (name == "amp") out.push_back('&');
    else if (name == "lt") out.push_back('<');
    else if (name == "gt") out.push_back('>');
    else if (name == "quot") out.push_back('"');
    else if (name == "apos") out.push_back('\'');
    else if (name == "nbsp") append_utf8(out, 0xA0);
    else if (name.size() > 1 && name[0] == '#') {
      char32_t cp = 0;
      bool ok = true;
      if (name[1] == 'x' || name[1] == 'X') {
        for (std::size_t k = 2; k < name.size() && ok; ++k) {
          char c = name[k];
          int d = (c >= '0' && c <= '9')   ? c - '0'
                  : (c >= 'a' && c <= 'f') ? c - 'a' + 10
                  : (c >= 'A' && c <= 'F') ? c - 'A' + 10
                                           : -1;
          ok = d >= 0 && cp <= 0x10FFFF;
          if (ok) cp = cp * 16 + static_cast<char32_t>(d);
        }
        ok = ok && name.size() > 2;
      } else {
        for (std::size_t k = 1; k < name.size() && ok; ++k) {
          ok = name[k] >= '0' && name[k] <= '9' && cp <= 0x10FFFF;
          if (ok) cp = cp * 10 + static_cast<char32_t>(name[k] - '0');
        }
      }
      if (ok) append_utf8(out, cp);
      else out.append(text.substr(i, semi - i + 1));
    } else {
      out.append(text.substr(i, semi - i + 1));  // unknown entity, copy through
      i = semi + 1;
      continue;
    }
    i = semi + 1;
  }
  return out;
}

struct ExtractedText {
  std::vector<std::string> blocks;
  std::vector<std::string> tag_signature;
};

inline ExtractedText extract_text(std::string_view html) {
  ExtractedText result;
  std::string buf;
  bool in_head = false;
  auto flush = [&] {
    std::string block = normalize_ws(buf);
    buf.clear();
    if (!block.empty()) result.blocks.push_back(std::move(block));
  };

  std::size_t i = 0;
  while (i < html.size()) {
    if (html[i] != '<') {
      std::size_t lt = html.find('<', i);
      if (lt == std::string_view::npos) lt = html.size();
      if (!in_head) buf.append(decode_entities(html.substr(i, lt - i)));
      i = lt;
      continue;
    }
    if (html.substr(i, 4) == "<!--") {
      std::size_t end = html.find("-->", i + 4);
      i = end == std::string_view::npos ? html.size() : end + 3;
      continue;
    }
    if (i + 1 < html.size() && (html[i + 1] == '!' || html[i + 1] == '?')) {
      std::size_t end = html.find('>', i + 1);
      i = end == std::string_view::npos ? html.size() : end + 1;
      continue;
    }
    bool closing = i + 1 < html.size() && html[i + 1] == '/';
    std::size_t name_start = i + (closing ? 2 : 1);
    std::size_t p = name_start;
    while (p < html.size() && detail::is_tag_name_char(html[p])) ++p;
    if (p == name_start) {
      // stray '<' in text
      if (!in_head) buf.push_back('<');
      ++i;
      continue;
    }
    std::string name;
    for (std::size_t k = name_start; k < p; ++k) {
      char c = html[k];
      name.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c + 0x20) : c);
    }
    // scan to the end of the tag, honoring quoted attribute values
    bool self_closed = false;
    while (p < html.size() && html[p] != '>') {
      if (html[p] == '"' || html[p] == '\'') {
        char q = html[p++];
        while (p < html.size() && html[p] != q) ++p;
        if (p < html.size()) ++p;
        continue;
      }
      self_closed = html[p] == '/';
      ++p;
    }
    i = p < html.size() ? p + 1 : html.size();

    if (closing) {
      if (name == "head") in_head = false;
      if (detail::is_block_tag(name)) flush();
      continue;
    }
    result.tag_signature.push_back(name);
    if (detail::is_block_tag(name)) flush();
    if (name == "head") in_head = true;
    if ((name == "script" || name == "style") && !self_closed)
      i = detail::skip_raw_element(html, i, name);
  }
  flush();
  return result;
}

// Anchor hrefs in document order, entity-decoded; script/style/comment
// regions are skipped.
inline std::vector<std::string> extract_links(std::string_view html) {
  std::vector<std::string> links;
  std::size_t i = 0;
  while (i < html.size()) {
    std::size_t lt = html.find('<', i);
    if (lt == std::string_view::npos) break;
    i = lt;
    if (html.substr(i, 4) == "<!--") {
      std::size_t end = html.find("-->", i + 4);
      i = end == std::string_view::npos ? html.size() : end + 3;
      continue;
    }
    bool closing = i + 1 < html.size() && html[i + 1] == '/';
    std::size_t name_start = i + (closing ? 2 : 1);
    std::size_t p = name_start;
    while (p < html.size() && detail::is_tag_name_char(html[p])) ++p;
    if (p == name_start) {
      ++i;
      continue;
    }
    std::string name;
    for (std::size_t k = name_start; k < p; ++k) {
      char c = html[k];
      name.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c + 0x20) : c);
    }
    std::string href;
    bool have_href = false;
    while (p < html.size() && html[p] != '>') {
      if (html[p] == '"' || html[p] == '\'') {
        char q = html[p++];
        while (p < html.size() && html[p] != q) ++p;
        if (p < html.size()) ++p;
        continue;
      }
      if (!closing && !have_href && detail::ascii_ieq(html.substr(p, 4), "href")) {
        std::size_t a = p + 4;
        while (a < html.size() && (html[a] == ' ' || html[a] == '\t' || html[a] == '\n' || html[a] == '\r')) ++a;
        if (a < html.size() && html[a] == '=') {
          ++a;
          while (a < html.size() && (html[a] == ' ' || html[a] == '\t' || html[a] == '\n' || html[a] == '\r')) ++a;
          if (a < html.size() && (html[a] == '"' || html[a] == '\'')) {
            char q = html[a++];
            std::size_t end = html.find(q, a);
            if (end != std::string_view::npos) {
              href = std::string(html.substr(a, end - a));
              have_href = true;
              p = end + 1;
              continue;
            }
          } else {
            std::size_t end = a;
            while (end < html.size() && html[end] != '>' && html[end] != ' ' && html[end] != '\t') ++end;
            href = std::string(html.substr(a, end - a));
            have_href = true;
            p = end;
            continue;
          }
        }
      }
      ++p;
    }
    i = p < html.size() ? p + 1 : html.size();
    if (!closing && name == "a" && have_href && !href.empty()) links.push_back(decode_entities(href));
    if (!closing && (name == "script" || name == "style"))
      i = detail::skip_raw_element(html, i, name);
  }
  return links;
}

}  // namespace paramine
