#include <gtest/gtest.h>

#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "semsearch/textprep/textprep.h"

using namespace semsearch::textprep;
using Strings = std::vector<std::string>;

namespace {

const std::string kFixtures = std::string(SEMSEARCH_SOURCE_DIR) + "/fixtures/textprep/";

std::vector<std::pair<std::string, std::string>> load_pairs(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string word, stemmed;
    fields >> word >> stemmed;
    out.emplace_back(word, stemmed);
  }
  return out;
}

std::string without_space(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  }
  return out;
}

}  // namespace

TEST(SegmentSentences, SplitsOnTerminatorFollowedBySpace) {
  EXPECT_EQ(segment_sentences("Take aspirin. Rest well."),
            (Strings{"Take aspirin.", "Rest well."}));
  EXPECT_EQ(segment_sentences(""), Strings{});
  EXPECT_EQ(segment_sentences("Rest well"), Strings{"Rest well"});
  EXPECT_EQ(segment_sentences("Really?! Yes."), (Strings{"Really?!", "Yes."}));
}

TEST(SegmentSentences, AbbreviationsDoNotSplit) {
  EXPECT_EQ(segment_sentences("Ask Dr. Rao today. Then rest."),
            (Strings{"Ask Dr. Rao today.", "Then rest."}));
  EXPECT_EQ(segment_sentences("Use herbs, e.g. ginger. Or tea."),
            (Strings{"Use herbs, e.g. ginger.", "Or tea."}));
  // A dot inside a token is not a boundary.
  EXPECT_EQ(segment_sentences("Version 2.5 works."), Strings{"Version 2.5 works."});
}

TEST(SegmentSentences, PreservesNonWhitespaceCharacters) {
  std::mt19937 rng(11);
  const std::string alphabet = "ab Dr.!? \n\teg.i";
  for (int trial = 0; trial < 500; ++trial) {
    std::string raw;
    const int n = static_cast<int>(rng() % 40);
    for (int i = 0; i < n; ++i) raw.push_back(alphabet[rng() % alphabet.size()]);
    std::string joined;
    for (const auto& s : segment_sentences(raw)) joined += s;
    EXPECT_EQ(without_space(joined), without_space(raw)) << raw;
  }
}

TEST(Tokenize, Examples) {
  EXPECT_EQ(tokenize("Migraines, headaches!"), (Strings{"migraines", "headaches"}));
  EXPECT_EQ(tokenize(""), Strings{});
  EXPECT_EQ(tokenize("aspirin"), Strings{"aspirin"});
  EXPECT_EQ(tokenize("Vitamin B12 (500mg)"), (Strings{"vitamin", "b12", "500mg"}));
}

TEST(Tokenize, AsciiOutputIsLowercaseAlphanumeric) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    std::string raw;
    for (int i = 0; i < 60; ++i) raw.push_back(static_cast<char>(32 + rng() % 95));
    for (const auto& token : tokenize(raw)) {
      ASSERT_FALSE(token.empty());
      for (char c : token) {
        EXPECT_TRUE((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) << raw;
      }
    }
  }
}

TEST(Tokenize, KeepsNonAsciiLetters) {
  EXPECT_EQ(tokenize("Café — naïve"), (Strings{"café", "naïve"}));
  EXPECT_EQ(stem("café"), "café");
}

TEST(RemoveStopwords, Examples) {
  const auto& english = StopWordList::english();
  EXPECT_EQ(remove_stopwords({"a", "the", "headache"}, english), Strings{"headache"});
  EXPECT_EQ(remove_stopwords({}, english), Strings{});
  EXPECT_EQ(remove_stopwords({"dengue", "fever"}, english), (Strings{"dengue", "fever"}));
  EXPECT_TRUE(english.contains("an"));
}

TEST(StopWordList, ParsesFileFormat) {
  const auto list = StopWordList::parse("# comment\nThe\n\n  an \n#x\nof\n");
  EXPECT_EQ(list.size(), 3u);
  EXPECT_TRUE(list.contains("the"));
  EXPECT_TRUE(list.contains("an"));
  EXPECT_FALSE(list.contains("x"));
  EXPECT_FALSE(list.contains(""));
}

TEST(StopWordList, BundledFileMatchesBuiltIn) {
  const auto from_file =
      StopWordList::load(std::string(SEMSEARCH_SOURCE_DIR) + "/data/stopwords_en.txt");
  EXPECT_EQ(from_file, StopWordList::english());
  EXPECT_GE(from_file.size(), 100u);
}

TEST(Stem, Examples) {
  EXPECT_EQ(stem("headaches"), "headach");
  EXPECT_EQ(stem("caresses"), "caress");
  EXPECT_EQ(stem("sky"), "sky");
}

TEST(Stem, MatchesReferenceOnExtendedVocabulary) {
  const auto pairs = load_pairs(kFixtures + "porter_extended.tsv");
  ASSERT_EQ(pairs.size(), 5000u);
  int mismatches = 0;
  for (const auto& [word, expected] : pairs) {
    if (stem(word) != expected) {
      ADD_FAILURE() << word << ": got " << stem(word) << ", want " << expected;
      if (++mismatches > 20) break;
    }
  }
}

TEST(Stem, IdempotentOnVocabularyExceptReferenceExceptions) {
  // The reference algorithm itself re-strips these stems; values frozen from it.
  const std::map<std::string, std::string> second_pass = {
      {"agre", "agr"},       {"decis", "deci"},     {"callous", "callou"},
      {"defens", "defen"},   {"ceas", "cea"},       {"profession", "profess"},
      {"ayurved", "ayurv"}};
  const auto pairs = load_pairs(kFixtures + "porter_vocabulary.tsv");
  ASSERT_EQ(pairs.size(), 100u);
  for (const auto& [word, expected] : pairs) {
    const auto once = stem(word);
    const auto it = second_pass.find(once);
    EXPECT_EQ(stem(once), it == second_pass.end() ? once : it->second) << word;
  }
}

TEST(Preprocess, Examples) {
  const StopWordList stop{"what", "is", "the", "for"};
  const auto out = preprocess("What is the medicine for headaches?", stop);
  EXPECT_EQ(out.stems, (Strings{"medicin", "headach"}));
  EXPECT_EQ(out.sentences, Strings{"What is the medicine for headaches?"});

  const auto empty = preprocess("", stop);
  EXPECT_TRUE(empty.sentences.empty());
  EXPECT_TRUE(empty.tokens.empty());
  EXPECT_TRUE(empty.stems.empty());

  EXPECT_TRUE(preprocess("a an the", StopWordList::english()).stems.empty());
}

TEST(Preprocess, NeverYieldsStopWordsAndIsDeterministic) {
  // "hers" is not itself a stop word in this list, but stems to "her".
  const StopWordList stop{"her", "the"};
  const auto out = preprocess("The book is hers. Hers and theirs.", stop);
  for (const auto& s : out.stems) EXPECT_FALSE(stop.contains(s)) << s;

  std::mt19937 rng(3);
  const Strings vocab = {"the", "headaches", "Fever", "is", "a", "remedies", "hers", ".", "!"};
  for (int trial = 0; trial < 200; ++trial) {
    std::string raw;
    for (int i = 0; i < 12; ++i) raw += vocab[rng() % vocab.size()] + " ";
    const auto a = preprocess(raw, StopWordList::english());
    const auto b = preprocess(raw, StopWordList::english());
    EXPECT_EQ(a.stems, b.stems);
    std::size_t tokens = 0;
    for (const auto& s : a.tokens) tokens += s.size();
    EXPECT_LE(a.stems.size(), tokens);
    for (const auto& s : a.stems) {
      EXPECT_FALSE(StopWordList::english().contains(s));
      EXPECT_FALSE(s.empty());
    }
  }
}
