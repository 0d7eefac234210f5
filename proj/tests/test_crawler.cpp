#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <map>

#include "paramine/crawler.hpp"

using namespace paramine;
namespace fs = std::filesystem;

namespace {

class FakeClock : public Clock {
 public:
  std::int64_t now_ms() override { return now_; }
  void sleep_ms(int ms) override { now_ += ms; }
  std::int64_t now_ = 0;
};

class FakeHttpClient : public HttpClient {
 public:
  std::map<std::string, std::string> pages;  // url -> body
  FakeClock* clock = nullptr;
  std::vector<std::pair<std::string, std::int64_t>> request_log;

  HttpResponse get(const Url& url) override {
    if (clock != nullptr) request_log.emplace_back(url.str(), clock->now_ms());
    HttpResponse resp;
    auto it = pages.find(url.str());
    if (it == pages.end()) {
      resp.ok = true;
      resp.status = 404;
      return resp;
    }
    resp.ok = true;
    resp.status = 200;
    resp.body = it->second;
    resp.content_type = "text/html";
    return resp;
  }
};

FakeHttpClient three_page_site() {
  FakeHttpClient client;
  client.pages["http://example.test/"] =
      "<html><body><p>Home page text.</p>"
      "<a href=\"/b.html\">b</a><a href=\"/a.html\">a</a></body></html>";
  client.pages["http://example.test/a.html"] =
      "<html><body><p>Page A.</p><a href=\"/\">home</a></body></html>";
  client.pages["http://example.test/b.html"] =
      "<html><body><p>Page B.</p><a href=\"a.html\">a</a>"
      "<a href=\"http://elsewhere.test/x\">offsite</a></body></html>";
  return client;
}

}  // namespace

TEST_CASE("interlinked site is crawled fully", "[crawler]") {
  FakeHttpClient client = three_page_site();
  FakeClock clock;
  std::vector<WebDocument> docs = fetch_domain(client, clock, "example.test", {10, 5, 10});
  REQUIRE(docs.size() == 3);
  for (const WebDocument& doc : docs) CHECK(doc.fetch_status == FetchStatus::fetched);
  // breadth-first, same-page links in lexicographic order
  CHECK(docs[0].url == "http://example.test/");
  CHECK(docs[1].url == "http://example.test/a.html");
  CHECK(docs[2].url == "http://example.test/b.html");
  CHECK(docs[0].text_blocks.front() == "Home page text.");
}

TEST_CASE("max_pages limits the crawl", "[crawler]") {
  FakeHttpClient client = three_page_site();
  FakeClock clock;
  std::vector<WebDocument> docs = fetch_domain(client, clock, "example.test", {1, 5, 10});
  CHECK(docs.size() == 1);
}

TEST_CASE("max_depth limits the crawl", "[crawler]") {
  FakeHttpClient client = three_page_site();
  FakeClock clock;
  std::vector<WebDocument> docs = fetch_domain(client, clock, "example.test", {10, 0, 10});
  CHECK(docs.size() == 1);  // only the start page, no link expansion
}

TEST_CASE("robots disallow-all means nothing fetched", "[crawler]") {
  FakeHttpClient client = three_page_site();
  client.pages["http://example.test/robots.txt"] = "User-agent: *\nDisallow: /\n";
  FakeClock clock;
  CHECK_THROWS_WITH(fetch_domain(client, clock, "example.test", {10, 5, 10}),
                    Catch::Matchers::ContainsSubstring("nothing fetched"));
}

TEST_CASE("robots prefix rules skip matching paths", "[crawler]") {
  FakeHttpClient client = three_page_site();
  client.pages["http://example.test/robots.txt"] = "User-agent: *\nDisallow: /b\n";
  FakeClock clock;
  std::vector<WebDocument> docs = fetch_domain(client, clock, "example.test", {10, 5, 10});
  REQUIRE(docs.size() == 2);
  CHECK(docs[1].url == "http://example.test/a.html");
}

TEST_CASE("robots groups for other agents are ignored", "[crawler]") {
  RobotsRules rules = parse_robots("User-agent: megabot\nDisallow: /\n\nUser-agent: *\nDisallow: /tmp\n");
  CHECK(rules.allowed("/anything"));
  CHECK(!rules.allowed("/tmp/file"));
  RobotsRules ours = parse_robots("User-agent: paramine\nDisallow: /secret\n");
  CHECK(!ours.allowed("/secret/x"));
  CHECK(ours.allowed("/public"));
}

TEST_CASE("same-host requests are spaced by the politeness delay", "[crawler]") {
  FakeHttpClient client = three_page_site();
  FakeClock clock;
  client.clock = &clock;
  fetch_domain(client, clock, "example.test", {10, 5, 250});
  REQUIRE(client.request_log.size() >= 3);
  for (std::size_t i = 1; i < client.request_log.size(); ++i)
    CHECK(client.request_log[i].second - client.request_log[i - 1].second >= 250);
}

TEST_CASE("failed pages do not abort the crawl", "[crawler]") {
  FakeHttpClient client = three_page_site();
  client.pages.erase("http://example.test/a.html");  // will 404
  FakeClock clock;
  std::vector<WebDocument> docs = fetch_domain(client, clock, "example.test", {10, 5, 10});
  REQUIRE(docs.size() == 3);
  CHECK(docs[1].fetch_status == FetchStatus::failed);
  CHECK(docs[2].fetch_status == FetchStatus::fetched);
}

TEST_CASE("snapshot loads in manifest order and deterministically", "[crawler]") {
  fs::path dir = fs::temp_directory_path() / "paramine-snapshot-test";
  fs::create_directories(dir / "pages");
  {
    std::ofstream p1(dir / "pages/one.html");
    p1 << "<p>First page.</p>";
    std::ofstream p2(dir / "pages/two.html");
    p2 << "<p>Second page.</p>";
    std::ofstream m(dir / "manifest.tsv");
    m << "http://snap.test/one\tpages/one.html\ttext/html\n";
    m << "http://snap.test/two\tpages/two.html\n";
  }
  std::vector<WebDocument> docs = load_snapshot(dir / "manifest.tsv");
  REQUIRE(docs.size() == 2);
  CHECK(docs[0].url == "http://snap.test/one");
  CHECK(docs[0].fetch_status == FetchStatus::from_snapshot);
  CHECK(docs[0].text_blocks == std::vector<std::string>{"First page."});
  CHECK(docs[1].url == "http://snap.test/two");

  std::vector<WebDocument> again = load_snapshot(dir / "manifest.tsv");
  REQUIRE(again.size() == docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    CHECK(again[i].url == docs[i].url);
    CHECK(again[i].raw_html == docs[i].raw_html);
    CHECK(again[i].tag_signature == docs[i].tag_signature);
  }
}

TEST_CASE("manifest referencing a missing file names the URL", "[crawler]") {
  fs::path dir = fs::temp_directory_path() / "paramine-snapshot-missing";
  fs::create_directories(dir);
  {
    std::ofstream m(dir / "manifest.tsv");
    m << "http://snap.test/absent\tpages/absent.html\n";
  }
  CHECK_THROWS_WITH(load_snapshot(dir / "manifest.tsv"),
                    Catch::Matchers::ContainsSubstring("http://snap.test/absent"));
}

TEST_CASE("duplicate manifest URLs are rejected at load", "[crawler]") {
  fs::path dir = fs::temp_directory_path() / "paramine-snapshot-dup";
  fs::create_directories(dir);
  {
    std::ofstream page(dir / "page.html");
    page << "<p>x</p>";
    std::ofstream m(dir / "manifest.tsv");
    m << "http://snap.test/p\tpage.html\n";
    m << "http://snap.test/p\tpage.html\n";
  }
  CHECK_THROWS_WITH(load_snapshot(dir / "manifest.tsv"),
                    Catch::Matchers::ContainsSubstring("duplicate"));
}

TEST_CASE("url parsing and resolution", "[crawler]") {
  Url u = parse_url("HTTP://Example.TEST:80/path/../other/page.html?x=1#frag");
  CHECK(u.valid);
  CHECK(u.scheme == "http");
  CHECK(u.host == "example.test");
  CHECK(u.port == -1);  // default port dropped
  CHECK(u.path == "/other/page.html");
  CHECK(u.query == "x=1");
  CHECK(u.str() == "http://example.test/other/page.html?x=1");

  Url schemeless = parse_url("xx.com/abc/en");
  CHECK(schemeless.valid);
  CHECK(schemeless.host == "xx.com");
  CHECK(schemeless.path == "/abc/en");

  Url base = parse_url("http://a.test/dir/page.html");
  CHECK(resolve_url(base, "other.html").str() == "http://a.test/dir/other.html");
  CHECK(resolve_url(base, "/root.html").str() == "http://a.test/root.html");
  CHECK(resolve_url(base, "../up.html").str() == "http://a.test/up.html");
  CHECK(resolve_url(base, "//b.test/x").host == "b.test");
  CHECK(!resolve_url(base, "mailto:someone@a.test").valid);
  CHECK(resolve_url(base, "?q=2").str() == "http://a.test/dir/page.html?q=2");
}
