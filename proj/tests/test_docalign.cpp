#include <catch2/catch_amalgamated.hpp>

#include "paramine/docalign.hpp"
#include "paramine/rng.hpp"
#include "testutil.hpp"

using namespace paramine;

namespace {

const LanguagePair kEnDe{"en", "de"};

SeedDictionary small_seed() {
  return SeedDictionary::make({{"la", "the", 0.9}, {"maison", "house", 0.9}}, 4);
}

}  // namespace

TEST_CASE("url match: the canonical language-twin pair scores 1", "[docalign]") {
  LanguageAliases aliases = LanguageAliases::builtin();
  CHECK(url_match_score("xx.com/abc/en", "xx.com/abc/de", kEnDe, aliases) == 1.0);
}

TEST_CASE("url match: token-free differing urls score 0", "[docalign]") {
  LanguageAliases aliases = LanguageAliases::builtin();
  CHECK(url_match_score("xx.com/a", "yy.com/totally/other", kEnDe, aliases) == 0.0);
  // identical URLs with no token are a perfect match
  CHECK(url_match_score("xx.com/a", "xx.com/a", kEnDe, aliases) == 1.0);
}

TEST_CASE("url match: edit distance after normalization", "[docalign]") {
  LanguageAliases aliases = LanguageAliases::builtin();
  // normalized paths {L}/news/5 vs {L}/news/6: one substitution over 10 chars
  double expected = 1.0 - 1.0 / 10.0;
  CHECK(url_match_score("xx.com/en/news/5", "xx.com/de/news/6", kEnDe, aliases) ==
        Catch::Approx(expected).margin(1e-12));
}

TEST_CASE("url match handles aliases, query values and case", "[docalign]") {
  LanguageAliases aliases = LanguageAliases::builtin();
  CHECK(url_match_score("xx.com/english/p", "xx.com/german/p", kEnDe, aliases) == 1.0);
  CHECK(url_match_score("xx.com/EN/p", "xx.com/de/p", kEnDe, aliases) == 1.0);
  CHECK(url_match_score("xx.com/p?lang=en", "xx.com/p?lang=de", kEnDe, aliases) == 1.0);
  CHECK(url_match_score("not a url \x01", "also bad \x01", kEnDe, aliases) >= 0.0);
}

TEST_CASE("url match is symmetric", "[docalign]") {
  LanguageAliases aliases = LanguageAliases::builtin();
  const char* urls[] = {"xx.com/en/a", "xx.com/de/a", "xx.com/en/news/5", "xx.com/other",
                        "yy.com/de/x"};
  for (const char* a : urls)
    for (const char* b : urls)
      CHECK(url_match_score(a, b, kEnDe, aliases) == url_match_score(b, a, kEnDe, aliases));
}

TEST_CASE("structure score", "[docalign]") {
  std::vector<std::string> same{"html", "body", "p"};
  CHECK(structure_score(same, same) == 1.0);
  std::vector<std::string> a{"p", "p", "p"}, b{"div", "div", "div"};
  CHECK(structure_score(a, b) == 0.0);
  std::vector<std::string> c{"body", "p", "p"}, d{"body", "p"};
  CHECK(structure_score(c, d) == Catch::Approx(1.0 - 1.0 / 3.0).margin(1e-12));
  CHECK(structure_score(std::vector<std::string>{}, std::vector<std::string>{}) == 1.0);
}

TEST_CASE("content score", "[docalign]") {
  SeedDictionary seed = small_seed();
  WebDocument fr = testutil::make_doc("http://x/fr", "fr", {"la maison"});
  WebDocument en = testutil::make_doc("http://x/en", "en", {"the house"});
  CHECK(content_score(fr, en, seed) == 1.0);

  WebDocument empty = testutil::make_doc("http://x/e", "fr", {});
  CHECK(content_score(empty, en, seed) == 0.0);

  WebDocument uncovered = testutil::make_doc("http://x/u", "fr", {"chien bleu"});
  CHECK(content_score(uncovered, en, seed) == 0.0);
  CHECK_THROWS_AS(content_score(fr, en, SeedDictionary{}), Error);
}

TEST_CASE("greedy matching traces the documented 2x2 example", "[docalign]") {
  std::vector<ScoredCandidate> candidates;
  auto add = [&](std::size_t i, std::size_t j, double total) {
    ScoredCandidate c;
    c.src_index = i;
    c.tgt_index = j;
    c.src_url = "a" + std::to_string(i + 1);
    c.tgt_url = "b" + std::to_string(j + 1);
    c.total = total;
    candidates.push_back(c);
  };
  add(0, 0, 0.9);
  add(0, 1, 0.8);
  add(1, 1, 0.7);
  add(1, 0, 0.2);
  std::vector<ScoredCandidate> chosen = greedy_one_to_one(candidates, 0.5);
  REQUIRE(chosen.size() == 2);
  CHECK(chosen[0].src_url == "a1");
  CHECK(chosen[0].tgt_url == "b1");
  CHECK(chosen[1].src_url == "a2");
  CHECK(chosen[1].tgt_url == "b2");

  CHECK(greedy_one_to_one(candidates, 0.95).empty());
}

TEST_CASE("greedy matcher equals the reference re-implementation", "[docalign]") {
  Rng rng(17);
  for (int round = 0; round < 300; ++round) {
    std::size_t n = 1 + rng.below(6), m = 1 + rng.below(6);
    std::vector<ScoredCandidate> candidates;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        ScoredCandidate c;
        c.src_index = i;
        c.tgt_index = j;
        c.src_url = "src" + std::to_string(i);
        c.tgt_url = "tgt" + std::to_string(j);
        // coarse grid of scores so ties actually happen
        c.total = static_cast<double>(rng.below(5)) / 4.0;
        candidates.push_back(c);
      }
    double threshold = static_cast<double>(rng.below(4)) / 4.0;
    auto lib = greedy_one_to_one(candidates, threshold);
    auto ref = testutil::greedy_reference(candidates, threshold);
    REQUIRE(lib.size() == ref.size());
    for (std::size_t k = 0; k < lib.size(); ++k) {
      CHECK(lib[k].src_index == ref[k].src_index);
      CHECK(lib[k].tgt_index == ref[k].tgt_index);
    }
  }
}

TEST_CASE("raising the threshold never adds pairs", "[docalign]") {
  Rng rng(23);
  std::vector<ScoredCandidate> candidates;
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) {
      ScoredCandidate c;
      c.src_index = i;
      c.tgt_index = j;
      c.src_url = "s" + std::to_string(i);
      c.tgt_url = "t" + std::to_string(j);
      c.total = rng.unit();
      candidates.push_back(c);
    }
  std::size_t previous = greedy_one_to_one(candidates, 0.0).size();
  for (double threshold : {0.2, 0.4, 0.6, 0.8, 1.0}) {
    std::size_t now = greedy_one_to_one(candidates, threshold).size();
    CHECK(now <= previous);
    previous = now;
  }
}

TEST_CASE("align_documents end to end", "[docalign]") {
  SeedDictionary seed = small_seed();
  LanguageAliases aliases = LanguageAliases::builtin();
  LanguagePair pair{"fr", "en"};
  std::vector<std::string> sig{"html", "body", "p"};

  std::vector<WebDocument> fr_docs{
      testutil::make_doc("http://site.test/fr/p1", "fr", {"la maison"}, sig),
      testutil::make_doc("http://site.test/fr/p2", "fr", {"chien bleu"}, sig)};
  std::vector<WebDocument> en_docs{
      testutil::make_doc("http://site.test/en/p1", "en", {"the house"}, sig),
      testutil::make_doc("http://site.test/en/p2", "en", {"green tree"}, sig)};

  std::vector<DocumentPair> pairs =
      align_documents(fr_docs, en_docs, pair, seed, aliases, DocAlignWeights{}, 0.5);
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0].src_doc.url == "http://site.test/fr/p1");
  CHECK(pairs[0].tgt_doc.url == "http://site.test/en/p1");
  CHECK(pairs[0].url_score == 1.0);
  CHECK(pairs[0].content_score == 1.0);
  CHECK(pairs[1].src_doc.url == "http://site.test/fr/p2");
  CHECK(pairs[1].tgt_doc.url == "http://site.test/en/p2");

  // one-to-one: no document appears twice
  CHECK(pairs[0].tgt_doc.url != pairs[1].tgt_doc.url);

  CHECK(align_documents({}, en_docs, pair, seed, aliases, DocAlignWeights{}, 0.5).empty());
  CHECK_THROWS_AS(
      align_documents(fr_docs, en_docs, pair, seed, aliases, DocAlignWeights{0.9, 0.3, 0.3}, 0.5),
      ValidationError);
}

TEST_CASE("alias file extends the builtin table", "[docalign]") {
  auto file = std::filesystem::temp_directory_path() / "paramine-alias-test.tsv";
  {
    std::ofstream out(file);
    out << "en\tanglais\n";
  }
  LanguageAliases aliases = LanguageAliases::builtin();
  aliases.load_file(file);
  CHECK(url_match_score("xx.com/anglais/p", "xx.com/de/p", kEnDe, aliases) == 1.0);
}

TEST_CASE("document pairs round-trip through JSONL", "[docalign]") {
  std::vector<DocumentPair> pairs(1);
  pairs[0].src_doc.url = "http://a/1";
  pairs[0].tgt_doc.url = "http://b/1";
  pairs[0].url_score = 0.5;
  pairs[0].structure_score = 0.25;
  pairs[0].content_score = 0.125;
  pairs[0].total = 0.375;
  auto file = std::filesystem::temp_directory_path() / "paramine-docpairs-test.jsonl";
  write_document_pairs_jsonl(pairs, file);
  auto back = read_document_pairs_jsonl(file);
  REQUIRE(back.size() == 1);
  CHECK(back[0].src_url == "http://a/1");
  CHECK(back[0].total == 0.375);
}
