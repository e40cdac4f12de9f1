#include "semsearch/textprep/textprep.h"

#include <algorithm>
#include <array>
#include <cstdint>

#include "semsearch/common/files.h"

namespace semsearch::textprep {

namespace {

bool is_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }

char ascii_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), ascii_lower);
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && is_space(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

constexpr std::array<std::string_view, 4> kAbbreviations = {"dr", "mr", "e.g", "i.e"};

bool ends_with_abbreviation(std::string_view text, std::size_t dot) {
  std::size_t begin = dot;
  while (begin > 0 && !is_space(static_cast<unsigned char>(text[begin - 1]))) --begin;
  const std::string word = lowercase(text.substr(begin, dot - begin));
  return std::find(kAbbreviations.begin(), kAbbreviations.end(), word) != kAbbreviations.end();
}

// Decodes one UTF-8 sequence at `pos`. Returns the code point and its byte
// length; malformed input yields U+FFFD with length 1.
std::pair<char32_t, std::size_t> decode_utf8(std::string_view s, std::size_t pos) {
  const auto lead = static_cast<unsigned char>(s[pos]);
  std::size_t len = 0;
  char32_t cp = 0;
  if (lead < 0x80) return {lead, 1};
  if ((lead & 0xE0) == 0xC0) {
    len = 2;
    cp = lead & 0x1F;
  } else if ((lead & 0xF0) == 0xE0) {
    len = 3;
    cp = lead & 0x0F;
  } else if ((lead & 0xF8) == 0xF0) {
    len = 4;
    cp = lead & 0x07;
  } else {
    return {0xFFFD, 1};
  }
  if (pos + len > s.size()) return {0xFFFD, 1};
  for (std::size_t i = 1; i < len; ++i) {
    const auto c = static_cast<unsigned char>(s[pos + i]);
    if ((c & 0xC0) != 0x80) return {0xFFFD, 1};
    cp = (cp << 6) | (c & 0x3F);
  }
  return {cp, len};
}

bool is_word_codepoint(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') || (cp >= '0' && cp <= '9');
  }
  // Latin-1 punctuation and symbols, except the three letters in that block.
  if (cp <= 0xBF) return cp == 0xAA || cp == 0xB5 || cp == 0xBA;
  if (cp == 0xD7 || cp == 0xF7) return false;
  // General punctuation, CJK punctuation, specials.
  if (cp >= 0x2000 && cp <= 0x206F) return false;
  if (cp >= 0x3000 && cp <= 0x303F) return false;
  if (cp == 0xFEFF || cp == 0xFFFD) return false;
  return true;
}

}  // namespace

StopWordList::StopWordList(std::initializer_list<std::string_view> words) {
  for (auto w : words) insert(w);
}

StopWordList::StopWordList(const std::vector<std::string>& words) {
  for (const auto& w : words) insert(w);
}

void StopWordList::insert(std::string_view word) {
  auto w = lowercase(trim(word));
  if (!w.empty()) words_.insert(std::move(w));
}

bool StopWordList::contains(std::string_view word) const {
  return words_.find(word) != words_.end();
}

StopWordList StopWordList::parse(std::string_view text) {
  StopWordList list;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    const auto line = trim(text.substr(0, eol));
    if (!line.empty() && line.front() != '#') list.insert(line);
    if (eol == std::string_view::npos) break;
    text.remove_prefix(eol + 1);
  }
  return list;
}

StopWordList StopWordList::load(const std::filesystem::path& path) {
  return parse(read_file(path));
}

const StopWordList& StopWordList::english() {
  static const StopWordList list{
      "a", "about", "above", "after", "again", "against", "all", "also", "am",
      "an", "and", "any", "are", "as", "at", "be", "because", "been", "before",
      "being", "below", "between", "both", "but", "by", "can", "could", "did",
      "do", "does", "doing", "don", "down", "during", "each", "either", "few",
      "for", "from", "further", "had", "has", "have", "having", "he", "her",
      "here", "hers", "herself", "him", "himself", "his", "how", "i", "if", "in",
      "into", "is", "it", "its", "itself", "just", "may", "me", "might", "more",
      "most", "must", "my", "myself", "neither", "no", "nor", "not", "now", "of",
      "off", "on", "once", "only", "or", "other", "our", "ours", "ourselves",
      "out", "over", "own", "s", "same", "shall", "she", "should", "so", "some",
      "such", "t", "than", "that", "the", "their", "theirs", "them", "themselves",
      "then", "there", "these", "they", "this", "those", "through", "to", "too",
      "under", "until", "up", "upon", "us", "very", "was", "we", "were", "what",
      "when", "where", "which", "while", "who", "whom", "whose", "why", "will",
      "with", "within", "without", "would", "yet", "you", "your", "yours",
      "yourself", "yourselves"};
  return list;
}

std::vector<std::string> segment_sentences(std::string_view raw) {
  std::vector<std::string> sentences;
  std::size_t start = 0;
  std::size_t i = 0;
  while (i < raw.size()) {
    if (!is_terminator(raw[i])) {
      ++i;
      continue;
    }
    std::size_t end = i;
    while (end < raw.size() && is_terminator(raw[end])) ++end;
    const bool at_boundary =
        end == raw.size() || is_space(static_cast<unsigned char>(raw[end]));
    const bool single_dot = end - i == 1 && raw[i] == '.';
    if (at_boundary && !(single_dot && ends_with_abbreviation(raw, i))) {
      const auto sentence = trim(raw.substr(start, end - start));
      if (!sentence.empty()) sentences.emplace_back(sentence);
      start = end;
    }
    i = end;
  }
  const auto rest = trim(raw.substr(std::min(start, raw.size())));
  if (!rest.empty()) sentences.emplace_back(rest);
  return sentences;
}

std::vector<std::string> tokenize(std::string_view sentence) {
  std::vector<std::string> tokens;
  std::string current;
  std::size_t pos = 0;
  while (pos < sentence.size()) {
    const auto [cp, len] = decode_utf8(sentence, pos);
    if (is_word_codepoint(cp)) {
      if (cp < 0x80) {
        current.push_back(ascii_lower(static_cast<char>(cp)));
      } else {
        current.append(sentence.substr(pos, len));
      }
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
    pos += len;
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::vector<std::string> remove_stopwords(const std::vector<std::string>& tokens,
                                          const StopWordList& stoplist) {
  std::vector<std::string> kept;
  kept.reserve(tokens.size());
  std::copy_if(tokens.begin(), tokens.end(), std::back_inserter(kept),
               [&](const std::string& t) { return !stoplist.contains(t); });
  return kept;
}

PreprocessedText preprocess(std::string_view raw, const StopWordList& stoplist) {
  PreprocessedText out;
  out.sentences = segment_sentences(raw);
  out.tokens.reserve(out.sentences.size());
  for (const auto& sentence : out.sentences) {
    auto tokens = tokenize(sentence);
    for (const auto& token : remove_stopwords(tokens, stoplist)) {
      auto s = stem(token);
      // A stem can collide with a stop word ("hers" -> "her").
      if (!s.empty() && !stoplist.contains(s)) out.stems.push_back(std::move(s));
    }
    out.tokens.push_back(std::move(tokens));
  }
  return out;
}

std::vector<std::string> stems_of(std::string_view raw, const StopWordList& stoplist) {
  return preprocess(raw, stoplist).stems;
}

}  // namespace semsearch::textprep
