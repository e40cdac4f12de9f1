#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace semsearch::webcorpus {

// One lexical unit of a forgiving HTML scan. Tag and attribute names are
// lowercased; attribute values and text are entity-decoded, except the raw
// contents of script and style elements.
struct HtmlToken {
  enum class Kind { Text, StartTag, EndTag, Comment };
  Kind kind = Kind::Text;
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::string text;

  const std::string* attribute(std::string_view key) const;
};

std::vector<HtmlToken> lex_html(std::string_view html);

// Decodes named and numeric character references; unknown ones stay literal.
std::string decode_entities(std::string_view text);

// Anchor hrefs resolved against `base`, http(s) only, first occurrence order.
std::vector<std::string> extract_links(std::string_view html, std::string_view base);

struct ExtractedText {
  std::string title;
  std::string body;
};

ExtractedText extract_text(std::string_view html);

}  // namespace semsearch::webcorpus
