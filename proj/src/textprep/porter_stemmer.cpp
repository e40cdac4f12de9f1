// Porter's suffix-stripping algorithm, original published rule set.
//
// Within each step the first rule whose suffix matches decides the outcome:
// if its condition fails, no later rule of that step is tried.

#include <algorithm>
#include <string>
#include <string_view>

#include "semsearch/textprep/textprep.h"

namespace semsearch::textprep {

namespace {

class PorterStemmer {
 public:
  explicit PorterStemmer(std::string word) : w_(std::move(word)) {}

  std::string run() && {
    step1a();
    step1b();
    step1c();
    step2();
    step3();
    step4();
    step5a();
    step5b();
    return std::move(w_);
  }

 private:
  struct Rule {
    std::string_view suffix;
    std::string_view replacement;
  };

  static bool is_vowel_letter(char c) {
    return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
  }

  // Consonant test on s[i]; 'y' is a consonant at the start or after a vowel.
  static bool consonant(std::string_view s, std::size_t i) {
    if (is_vowel_letter(s[i])) return false;
    if (s[i] == 'y') return i == 0 || !consonant(s, i - 1);
    return true;
  }

  // m in [C](VC){m}[V].
  static int measure(std::string_view s) {
    int m = 0;
    bool prev_vowel = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const bool c = consonant(s, i);
      if (c && prev_vowel) ++m;
      prev_vowel = !c;
    }
    return m;
  }

  static bool has_vowel(std::string_view s) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!consonant(s, i)) return true;
    }
    return false;
  }

  static bool double_consonant(std::string_view s) {
    const auto n = s.size();
    return n >= 2 && s[n - 1] == s[n - 2] && consonant(s, n - 1);
  }

  // *o: ends consonant-vowel-consonant, last consonant not w, x or y.
  static bool cvc(std::string_view s) {
    const auto n = s.size();
    if (n < 3) return false;
    if (!consonant(s, n - 3) || consonant(s, n - 2) || !consonant(s, n - 1)) return false;
    const char last = s[n - 1];
    return last != 'w' && last != 'x' && last != 'y';
  }

  bool ends(std::string_view suffix) const { return w_.ends_with(suffix); }

  std::string_view stem_without(std::string_view suffix) const {
    return std::string_view(w_).substr(0, w_.size() - suffix.size());
  }

  void replace(std::string_view suffix, std::string_view replacement) {
    w_.resize(w_.size() - suffix.size());
    w_.append(replacement);
  }

  template <typename Condition>
  void apply_first(std::initializer_list<Rule> rules, Condition condition) {
    for (const auto& rule : rules) {
      if (!ends(rule.suffix)) continue;
      if (condition(stem_without(rule.suffix))) replace(rule.suffix, rule.replacement);
      return;
    }
  }

  void step1a() {
    if (ends("sses")) {
      replace("sses", "ss");
    } else if (ends("ies")) {
      replace("ies", "i");
    } else if (ends("ss")) {
      // unchanged
    } else if (ends("s")) {
      replace("s", "");
    }
  }

  void step1b() {
    if (ends("eed")) {
      if (measure(stem_without("eed")) > 0) replace("eed", "ee");
      return;
    }
    bool stripped = false;
    for (std::string_view suffix : {std::string_view("ed"), std::string_view("ing")}) {
      if (ends(suffix) && has_vowel(stem_without(suffix))) {
        replace(suffix, "");
        stripped = true;
        break;
      }
    }
    if (!stripped) return;
    if (ends("at")) {
      replace("at", "ate");
    } else if (ends("bl")) {
      replace("bl", "ble");
    } else if (ends("iz")) {
      replace("iz", "ize");
    } else if (double_consonant(w_)) {
      const char last = w_.back();
      if (last != 'l' && last != 's' && last != 'z') w_.pop_back();
    } else if (measure(w_) == 1 && cvc(w_)) {
      w_.push_back('e');
    }
  }

  void step1c() {
    if (ends("y") && has_vowel(stem_without("y"))) replace("y", "i");
  }

  void step2() {
    apply_first({{"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},
                 {"anci", "ance"},   {"izer", "ize"},    {"abli", "able"},
                 {"alli", "al"},     {"entli", "ent"},   {"eli", "e"},
                 {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
                 {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"},
                 {"fulness", "ful"}, {"ousness", "ous"}, {"aliti", "al"},
                 {"iviti", "ive"},   {"biliti", "ble"}},
                [](std::string_view stem) { return measure(stem) > 0; });
  }

  void step3() {
    apply_first({{"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
                 {"ical", "ic"},  {"ful", ""},    {"ness", ""}},
                [](std::string_view stem) { return measure(stem) > 0; });
  }

  void step4() {
    for (std::string_view suffix :
         {"al", "ance", "ence", "er", "ic", "able", "ible", "ant", "ement", "ment", "ent",
          "ion", "ou", "ism", "ate", "iti", "ous", "ive", "ize"}) {
      if (!ends(suffix)) continue;
      const auto stem = stem_without(suffix);
      bool ok = measure(stem) > 1;
      if (suffix == "ion") ok = ok && !stem.empty() && (stem.back() == 's' || stem.back() == 't');
      if (ok) replace(suffix, "");
      return;
    }
  }

  void step5a() {
    if (!ends("e")) return;
    const auto stem = stem_without("e");
    const int m = measure(stem);
    if (m > 1 || (m == 1 && !cvc(stem))) replace("e", "");
  }

  void step5b() {
    if (measure(w_) > 1 && double_consonant(w_) && w_.back() == 'l') w_.pop_back();
  }

  std::string w_;
};

}  // namespace

std::string stem(std::string_view token) {
  if (token.empty()) return {};
  if (std::any_of(token.begin(), token.end(),
                  [](char c) { return static_cast<unsigned char>(c) >= 0x80; })) {
    return std::string(token);
  }
  std::string word(token);
  std::transform(word.begin(), word.end(), word.begin(), [](char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
  });
  return PorterStemmer(std::move(word)).run();
}

}  // namespace semsearch::textprep
