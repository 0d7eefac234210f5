#pragma once

// HttpClient backed by cpp-httplib. Kept out of crawler.hpp so tests with
// fake clients never pay for the httplib include.

#include <memory>
#include <string>
#include <unordered_map>

#include <httplib.h>

#include "paramine/crawler.hpp"

namespace paramine {

class HttplibClient : public HttpClient {
 public:
  explicit HttplibClient(int timeout_seconds = 10) : timeout_seconds_(timeout_seconds) {}

  HttpResponse get(const Url& url) override {
    HttpResponse out;
    if (!url.valid) {
      out.error = "invalid URL";
      return out;
    }
    std::string origin = url.scheme + "://" + url.host;
    if (url.port >= 0) origin += ":" + std::to_string(url.port);
    auto it = clients_.find(origin);
    if (it == clients_.end()) {
      auto client = std::make_unique<httplib::Client>(origin);
      client->set_connection_timeout(timeout_seconds_);
      client->set_read_timeout(timeout_seconds_);
      client->set_follow_location(true);
      client->set_default_headers({{"User-Agent", kUserAgent}});
      it = clients_.emplace(origin, std::move(client)).first;
    }
    std::string target = url.path;
    if (!url.query.empty()) target += "?" + url.query;
    httplib::Result res = it->second->Get(target);
    if (!res) {
      out.error = httplib::to_string(res.error());
      return out;
    }
    out.ok = true;
    out.status = res->status;
    out.body = res->body;
    out.content_type = res->get_header_value("Content-Type");
    return out;
  }

 private:
  int timeout_seconds_;
  std::unordered_map<std::string, std::unique_ptr<httplib::Client>> clients_;
};

}  // namespace paramine
