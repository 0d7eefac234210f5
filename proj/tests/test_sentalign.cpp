#include <catch2/catch_amalgamated.hpp>

#include "paramine/rng.hpp"
#include "paramine/sentalign.hpp"
#include "testutil.hpp"

using namespace paramine;

namespace {

SeedDictionary la_the_seed() {
  return SeedDictionary::make({{"la", "the", 0.9}, {"maison", "house", 0.9}}, 4);
}

std::vector<Sentence> sentences(const std::vector<std::string>& texts, const std::string& lang) {
  std::vector<Sentence> out;
  for (const std::string& t : texts) out.push_back(make_sentence(t, lang));
  return out;
}

// A small cipher world for alignment tests: s<i> maps to t<i>.
SeedDictionary cipher_seed(int vocab) {
  std::vector<SeedEntry> entries;
  for (int v = 0; v < vocab; ++v)
    entries.push_back({"s" + std::to_string(v), "t" + std::to_string(v), 1.0});
  return SeedDictionary::make(std::move(entries), 1);
}

std::string random_cipher_sentence(Rng& rng, int vocab, char side, std::size_t len) {
  std::string text;
  for (std::size_t i = 0; i < len; ++i) {
    if (i > 0) text += ' ';
    text += side;
    text += std::to_string(rng.below(static_cast<std::uint64_t>(vocab)));
  }
  return text;
}

}  // namespace

TEST_CASE("dict_coverage examples", "[sentalign]") {
  SeedDictionary seed = la_the_seed();
  CHECK(dict_coverage(make_sentence("la maison", "fr"), make_sentence("the house", "en"), seed) ==
        1.0);
  CHECK(dict_coverage(make_sentence("chien bleu", "fr"), make_sentence("green tree", "en"), seed) ==
        0.0);
  // one-to-one linking caps repeated sources at the available targets
  CHECK(dict_coverage(make_sentence("la la", "fr"), make_sentence("the", "en"), seed) ==
        Catch::Approx(2.0 / 3.0).margin(1e-12));
  CHECK(dict_coverage(make_sentence("", "fr"), make_sentence("", "en"), seed) == 0.0);
}

TEST_CASE("length_score examples", "[sentalign]") {
  CHECK(length_score(5, 5) == 1.0);
  CHECK(length_score(2, 4) == 0.5);
  CHECK(length_score(0, 3) == 0.0);
  CHECK_THROWS_AS(length_score(0, 0), Error);
}

TEST_CASE("bead_score examples", "[sentalign]") {
  SeedDictionary seed = la_the_seed();
  AlignParams params;
  params.dict_weight = 0.7;
  params.length_weight = 0.3;
  params.gap_penalty = -0.15;

  std::vector<Sentence> src = sentences({"la maison"}, "fr");
  std::vector<Sentence> none;
  CHECK(bead_score(src, none, seed, params) == -0.15);

  std::vector<Sentence> tgt = sentences({"the house"}, "en");
  CHECK(bead_score(src, tgt, seed, params) == Catch::Approx(1.0).margin(1e-12));

  std::vector<Sentence> two = sentences({"aa bb"}, "xx");
  std::vector<Sentence> four = sentences({"cc dd ee ff"}, "yy");
  CHECK(bead_score(two, four, seed, params) == Catch::Approx(0.15).margin(1e-12));
}

TEST_CASE("single sentences give a single 1-1 pair", "[sentalign]") {
  DocumentPair pair;
  pair.src_doc = testutil::make_doc("http://x/fr/p", "fr", {"la maison"});
  pair.tgt_doc = testutil::make_doc("http://x/en/p", "en", {"the house"});
  SentAlignResult result = align_sentences(pair, la_the_seed(), AlignParams{});
  REQUIRE(result.path.beads.size() == 1);
  CHECK(result.path.beads[0].kind == BeadKind::one_one);
  REQUIRE(result.pairs.size() == 1);
  CHECK(result.pairs[0].src.text == "la maison");
  CHECK(result.pairs[0].score.value() == Catch::Approx(1.0).margin(1e-12));
  CHECK(result.pairs[0].origin.domain == "x");
  CHECK(result.pairs[0].provenance == Provenance::crawled);
}

TEST_CASE("parallel documents align on the diagonal", "[sentalign]") {
  SeedDictionary seed = cipher_seed(20);
  DocumentPair pair;
  pair.src_doc = testutil::make_doc("http://x/fr/p", "xx", {"s1 s2 s3", "s4 s5 s6", "s7 s8 s9"});
  pair.tgt_doc = testutil::make_doc("http://x/en/p", "yy", {"t1 t2 t3", "t4 t5 t6", "t7 t8 t9"});
  SentAlignResult result = align_sentences(pair, seed, AlignParams{});
  REQUIRE(result.path.beads.size() == 3);
  for (const Bead& bead : result.path.beads) CHECK(bead.kind == BeadKind::one_one);
  CHECK(result.pairs.size() == 3);
}

TEST_CASE("an untranslatable insertion becomes a 1-0 gap", "[sentalign]") {
  SeedDictionary seed = cipher_seed(20);
  DocumentPair pair;
  pair.src_doc = testutil::make_doc("http://x/fr/p", "xx",
                                    {"s1 s2 s3 s4", "s5 s6 s7 s8", "noise alien words here",
                                     "s9 s10 s11 s12"});
  pair.tgt_doc = testutil::make_doc("http://x/en/p", "yy",
                                    {"t1 t2 t3 t4", "t5 t6 t7 t8", "t9 t10 t11 t12"});
  SentAlignResult result = align_sentences(pair, seed, AlignParams{});
  REQUIRE(result.path.beads.size() == 4);
  CHECK(result.path.beads[0].kind == BeadKind::one_one);
  CHECK(result.path.beads[1].kind == BeadKind::one_one);
  CHECK(result.path.beads[2].kind == BeadKind::one_zero);
  CHECK(result.path.beads[2].src_begin == 2);
  CHECK(result.path.beads[3].kind == BeadKind::one_one);
}

TEST_CASE("identity alignment with an identity dictionary", "[sentalign]") {
  std::vector<std::string> texts{"alpha beta gamma", "delta epsilon zeta", "eta theta iota",
                                 "kappa lambda mu"};
  std::vector<SeedEntry> identity;
  for (const std::string& text : texts)
    for (const Token& tok : tokenize(text)) identity.push_back({tok, tok, 1.0});
  SeedDictionary seed = SeedDictionary::make(std::move(identity), 4);

  DocumentPair pair;
  pair.src_doc = testutil::make_doc("http://x/a", "xx", texts);
  pair.tgt_doc = testutil::make_doc("http://x/b", "yy", texts);
  SentAlignResult result = align_sentences(pair, seed, AlignParams{});
  REQUIRE(result.path.beads.size() == texts.size());
  for (std::size_t i = 0; i < result.path.beads.size(); ++i) {
    CHECK(result.path.beads[i].kind == BeadKind::one_one);
    CHECK(result.path.beads[i].src_begin == i);
    CHECK(result.path.beads[i].score == Catch::Approx(1.0).margin(1e-12));
  }
}

TEST_CASE("empty side is an error", "[sentalign]") {
  DocumentPair pair;
  pair.src_doc = testutil::make_doc("http://x/a", "xx", {});
  pair.tgt_doc = testutil::make_doc("http://x/b", "yy", {"t1 t2"});
  CHECK_THROWS_AS(align_sentences(pair, cipher_seed(4), AlignParams{}), Error);
}

TEST_CASE("alignment params are validated", "[sentalign]") {
  AlignParams bad;
  bad.gap_penalty = 0.2;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  AlignParams zero;
  zero.dict_weight = 0.0;
  zero.length_weight = 0.0;
  CHECK_THROWS_AS(zero.validate(), ValidationError);
}

TEST_CASE("DP equals exhaustive enumeration with the declared tie-break", "[sentalign]") {
  Rng rng(31);
  const int vocab = 12;
  SeedDictionary seed = cipher_seed(vocab);
  for (int round = 0; round < 60; ++round) {
    std::size_t n = 1 + rng.below(6), m = 1 + rng.below(6);
    std::vector<std::string> src_texts, tgt_texts;
    for (std::size_t i = 0; i < n; ++i)
      src_texts.push_back(random_cipher_sentence(rng, vocab, 's', 1 + rng.below(5)));
    for (std::size_t j = 0; j < m; ++j) {
      // half the target sentences echo a source sentence through the cipher
      if (j < n && rng.chance(0.5)) {
        std::string echo = src_texts[j];
        for (char& c : echo)
          if (c == 's') c = 't';
        tgt_texts.push_back(echo);
      } else {
        tgt_texts.push_back(random_cipher_sentence(rng, vocab, 't', 1 + rng.below(5)));
      }
    }
    AlignParams params;
    params.dict_weight = rng.chance(0.5) ? 0.7 : 0.5;
    params.length_weight = 1.0 - params.dict_weight;
    params.gap_penalty = rng.chance(0.5) ? -0.15 : 0.0;

    std::vector<Sentence> src = sentences(src_texts, "xx");
    std::vector<Sentence> tgt = sentences(tgt_texts, "yy");
    AlignmentPath dp = align_paths(src, tgt, seed, params);
    testutil::BrutePath brute = testutil::brute_force_align(src, tgt, seed, params);
    REQUIRE(brute.valid);
    CHECK(dp.total_score == brute.total);  // exact float equality
    CHECK(testutil::same_beads(dp.beads, brute.beads));
  }
}

TEST_CASE("paths tile both index ranges exactly", "[sentalign]") {
  Rng rng(37);
  SeedDictionary seed = cipher_seed(10);
  for (int round = 0; round < 40; ++round) {
    std::size_t n = 1 + rng.below(8), m = 1 + rng.below(8);
    std::vector<std::string> src_texts, tgt_texts;
    for (std::size_t i = 0; i < n; ++i)
      src_texts.push_back(random_cipher_sentence(rng, 10, 's', 1 + rng.below(4)));
    for (std::size_t j = 0; j < m; ++j)
      tgt_texts.push_back(random_cipher_sentence(rng, 10, 't', 1 + rng.below(4)));
    AlignmentPath path =
        align_paths(sentences(src_texts, "xx"), sentences(tgt_texts, "yy"), seed, AlignParams{});
    std::size_t src_at = 0, tgt_at = 0;
    double total = 0.0;
    for (const Bead& bead : path.beads) {
      CHECK(bead.src_begin == src_at);
      CHECK(bead.tgt_begin == tgt_at);
      src_at = bead.src_end;
      tgt_at = bead.tgt_end;
      total += bead.score;
    }
    CHECK(src_at == n);
    CHECK(tgt_at == m);
    CHECK(total == Catch::Approx(path.total_score).margin(1e-12));
  }
}

TEST_CASE("raising the accept threshold never emits more pairs", "[sentalign]") {
  Rng rng(41);
  SeedDictionary seed = cipher_seed(10);
  DocumentPair pair;
  std::vector<std::string> src_texts, tgt_texts;
  for (int i = 0; i < 6; ++i) {
    src_texts.push_back(random_cipher_sentence(rng, 10, 's', 3 + rng.below(3)));
    tgt_texts.push_back(random_cipher_sentence(rng, 10, 't', 3 + rng.below(3)));
  }
  pair.src_doc = testutil::make_doc("http://x/a", "xx", src_texts);
  pair.tgt_doc = testutil::make_doc("http://x/b", "yy", tgt_texts);
  std::size_t previous = SIZE_MAX;
  for (double threshold : {0.0, 0.2, 0.4, 0.6, 0.8, 1.0}) {
    AlignParams params;
    params.accept_threshold = threshold;
    std::size_t now = align_sentences(pair, seed, params).pairs.size();
    CHECK(now <= previous);
    previous = now;
  }
}

TEST_CASE("alignment is deterministic", "[sentalign]") {
  Rng rng(43);
  SeedDictionary seed = cipher_seed(10);
  std::vector<std::string> src_texts, tgt_texts;
  for (int i = 0; i < 5; ++i) {
    src_texts.push_back(random_cipher_sentence(rng, 10, 's', 2 + rng.below(4)));
    tgt_texts.push_back(random_cipher_sentence(rng, 10, 't', 2 + rng.below(4)));
  }
  std::vector<Sentence> src = sentences(src_texts, "xx"), tgt = sentences(tgt_texts, "yy");
  AlignmentPath a = align_paths(src, tgt, seed, AlignParams{});
  AlignmentPath b = align_paths(src, tgt, seed, AlignParams{});
  CHECK(a.total_score == b.total_score);
  CHECK(testutil::same_beads(a.beads, b.beads));
}

TEST_CASE("multi-sentence beads join with a single space", "[sentalign]") {
  // force a 2-1 bead: two short source sentences translating one target
  SeedDictionary seed = cipher_seed(20);
  DocumentPair pair;
  pair.src_doc = testutil::make_doc("http://x/a", "xx", {"s1 s2", "s3 s4"});
  pair.tgt_doc = testutil::make_doc("http://x/b", "yy", {"t1 t2 t3 t4"});
  AlignParams params;
  params.gap_penalty = -0.5;
  params.accept_threshold = 0.0;
  SentAlignResult result = align_sentences(pair, seed, params);
  REQUIRE(result.path.beads.size() == 1);
  CHECK(result.path.beads[0].kind == BeadKind::two_one);
  REQUIRE(result.pairs.size() == 1);
  CHECK(result.pairs[0].src.text == "s1 s2 s3 s4");
}
