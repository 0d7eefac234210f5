#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "paramine/langid.hpp"
#include "paramine/rng.hpp"
#include "paramine/sentsplit.hpp"

using namespace paramine;

namespace {

// Two synthetic languages over disjoint letter ranges, like the fixture uses.
std::string synthetic_text(Rng& rng, char first_letter) {
  std::string text;
  for (int w = 0; w < 300; ++w) {
    std::size_t len = 3 + rng.below(5);
    for (std::size_t i = 0; i < len; ++i)
      text.push_back(static_cast<char>(first_letter + rng.below(13)));
    text.push_back(' ');
  }
  return text;
}

}  // namespace

TEST_CASE("short input is unknown", "[langid]") {
  Rng rng(3);
  std::vector<TrigramProfile> profiles{train_profile("xx", synthetic_text(rng, 'a')),
                                       train_profile("yy", synthetic_text(rng, 'n'))};
  LangGuess guess = detect_language("only nineteen chars", profiles);  // 19 characters
  CHECK(guess.lang == kUnknownLang);
}

TEST_CASE("text from the profile source classifies as that language", "[langid]") {
  Rng rng(4);
  std::string xx_text = synthetic_text(rng, 'a');
  std::string yy_text = synthetic_text(rng, 'n');
  std::vector<TrigramProfile> profiles{train_profile("xx", xx_text), train_profile("yy", yy_text)};

  LangGuess guess = detect_language(xx_text.substr(0, 500), profiles);
  CHECK(guess.lang == "xx");
  CHECK(guess.confidence > 0.5);
  LangGuess other = detect_language(yy_text.substr(100, 500), profiles);
  CHECK(other.lang == "yy");
  CHECK(other.confidence > 0.5);
}

TEST_CASE("equal similarity to both profiles is unknown", "[langid]") {
  std::vector<TrigramProfile> profiles{train_profile("aa", "abcabcabcabc"),
                                       train_profile("bb", "abcabcabcabc")};
  LangGuess guess = detect_language("abcabcabcabcabcabcabc", profiles);
  CHECK(guess.lang == kUnknownLang);
  CHECK(guess.confidence == 0.0);
}

TEST_CASE("text sharing no trigrams with any profile is unknown", "[langid]") {
  Rng rng(5);
  std::vector<TrigramProfile> profiles{train_profile("xx", synthetic_text(rng, 'a'))};
  CHECK(detect_language("0123456789 0123456789 0123456789", profiles).lang == kUnknownLang);
}

TEST_CASE("profiles round-trip through their file format", "[langid]") {
  Rng rng(6);
  std::vector<TrigramProfile> profiles{train_profile("xx", synthetic_text(rng, 'a')),
                                       train_profile("yy", synthetic_text(rng, 'n'))};
  auto file = std::filesystem::temp_directory_path() / "paramine-profiles-test.tsv";
  write_profiles(profiles, file);
  std::vector<TrigramProfile> back = read_profiles(file);
  REQUIRE(back.size() == 2);
  CHECK(back[0].lang == profiles[0].lang);
  CHECK(back[0].weights.size() == profiles[0].weights.size());
  for (const auto& [tri, w] : profiles[0].weights) CHECK(back[0].weights.at(tri) == w);
  CHECK(back[0].norm == Catch::Approx(profiles[0].norm).margin(1e-15));
}

TEST_CASE("plain sentence splitting", "[sentsplit]") {
  auto sents = split_sentences("Hello. World.", "en");
  REQUIRE(sents.size() == 2);
  CHECK(sents[0].text == "Hello.");
  CHECK(sents[1].text == "World.");
}

TEST_CASE("abbreviations do not split", "[sentsplit]") {
  auto sents = split_sentences("Mr. Smith left.", "en");
  REQUIRE(sents.size() == 1);
  CHECK(sents[0].text == "Mr. Smith left.");
}

TEST_CASE("three terminators three sentences", "[sentsplit]") {
  auto sents = split_sentences("One! Two? Three.", "en");
  REQUIRE(sents.size() == 3);
  CHECK(sents[0].text == "One!");
  CHECK(sents[1].text == "Two?");
  CHECK(sents[2].text == "Three.");
}

TEST_CASE("lowercase continuation does not split", "[sentsplit]") {
  auto sents = split_sentences("He bought 3. apples today. Then he left.", "en");
  REQUIRE(sents.size() == 2);
  CHECK(sents[0].text == "He bought 3. apples today.");
}

TEST_CASE("opening quotes count as sentence starts", "[sentsplit]") {
  auto sents = split_sentences("He spoke. \"Quoted start\" followed.", "en");
  REQUIRE(sents.size() == 2);
  CHECK(sents[1].text == "\"Quoted start\" followed.");
}

TEST_CASE("terminator runs stay attached", "[sentsplit]") {
  auto sents = split_sentences("Really?! Yes.", "en");
  REQUIRE(sents.size() == 2);
  CHECK(sents[0].text == "Really?!");
}

TEST_CASE("no empty sentences and whitespace-only input is empty", "[sentsplit]") {
  CHECK(split_sentences("", "en").empty());
  CHECK(split_sentences("   \t  ", "en").empty());
  for (const Sentence& s : split_sentences("  Padded. Block here.  ", "en"))
    CHECK(!s.text.empty());
}

TEST_CASE("custom abbreviation file extends the stop-list", "[sentsplit]") {
  auto file = std::filesystem::temp_directory_path() / "paramine-abbrev-test.txt";
  {
    std::ofstream out(file);
    out << "# custom\nxyz.\n";
  }
  AbbrevSet set = load_abbreviations(file);
  auto sents = split_sentences("See xyz. Reference here.", "en", set);
  REQUIRE(sents.size() == 1);
  // built-ins still apply
  CHECK(split_sentences("Dr. Who arrived.", "en", set).size() == 1);
}

TEST_CASE("reconstruction: joined sentences equal the collapsed block", "[sentsplit]") {
  Rng rng(12);
  const std::string words[] = {"alpha", "beta", "Gamma", "delta", "Mr.", "fig.", "N42"};
  const std::string terms[] = {". ", "! ", "? ", ".  ", "?! "};
  for (int round = 0; round < 200; ++round) {
    std::string block;
    std::size_t sentences = 1 + rng.below(5);
    for (std::size_t s = 0; s < sentences; ++s) {
      std::size_t len = 1 + rng.below(6);
      std::string sent;
      for (std::size_t w = 0; w < len; ++w) {
        if (w > 0) sent += ' ';
        sent += words[rng.below(std::size(words))];
      }
      if (!sent.empty() && sent[0] >= 'a' && sent[0] <= 'z') sent[0] -= 0x20;
      block += sent;
      block += terms[rng.below(std::size(terms))];
    }
    std::string joined;
    for (const Sentence& s : split_sentences(block, "en")) {
      if (!joined.empty()) joined += ' ';
      joined += s.text;
    }
    CHECK(normalize_ws(joined) == normalize_ws(block));
  }
}
