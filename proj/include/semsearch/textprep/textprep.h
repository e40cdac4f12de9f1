#pragma once

#include <filesystem>
#include <initializer_list>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace semsearch::textprep {

// Set of lowercase stop words. Entries are lowercased on insertion and empty
// strings are dropped, so the set never holds either.
class StopWordList {
 public:
  StopWordList() = default;
  StopWordList(std::initializer_list<std::string_view> words);
  explicit StopWordList(const std::vector<std::string>& words);

  // The bundled English list (the same words as data/stopwords_en.txt).
  static const StopWordList& english();

  // One word per line; '#' comment lines and blank lines are skipped.
  static StopWordList load(const std::filesystem::path& path);
  static StopWordList parse(std::string_view text);

  void insert(std::string_view word);
  bool contains(std::string_view word) const;
  std::size_t size() const { return words_.size(); }
  const std::set<std::string, std::less<>>& words() const { return words_; }

  bool operator==(const StopWordList&) const = default;

 private:
  std::set<std::string, std::less<>> words_;
};

struct PreprocessedText {
  std::vector<std::string> sentences;
  // Lowercased tokens of each sentence, before stop-word removal.
  std::vector<std::vector<std::string>> tokens;
  // Stems of the surviving tokens, flattened in original order.
  std::vector<std::string> stems;
};

std::vector<std::string> segment_sentences(std::string_view raw);

std::vector<std::string> tokenize(std::string_view sentence);

std::vector<std::string> remove_stopwords(const std::vector<std::string>& tokens,
                                          const StopWordList& stoplist);

// Porter suffix stripping. Tokens containing non-ASCII bytes come back
// unchanged.
std::string stem(std::string_view token);

PreprocessedText preprocess(std::string_view raw, const StopWordList& stoplist);

// Shorthand for preprocess(raw, stoplist).stems.
std::vector<std::string> stems_of(std::string_view raw, const StopWordList& stoplist);

}  // namespace semsearch::textprep
