#include "semsearch/webcorpus/html.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <set>
#include <unordered_set>

#include "semsearch/webcorpus/url.h"

namespace semsearch::webcorpus {

namespace {

bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
char lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), lower);
  return out;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

struct NamedEntity {
  std::string_view name;
  char32_t cp;
};

// nbsp maps to a plain space so whitespace collapsing treats it as one.
constexpr std::array<NamedEntity, 40> kEntities = {{
    {"amp", '&'},       {"lt", '<'},        {"gt", '>'},        {"quot", '"'},
    {"apos", '\''},     {"nbsp", ' '},      {"copy", 0xA9},     {"reg", 0xAE},
    {"trade", 0x2122},  {"deg", 0xB0},      {"plusmn", 0xB1},   {"micro", 0xB5},
    {"middot", 0xB7},   {"frac12", 0xBD},   {"frac14", 0xBC},   {"times", 0xD7},
    {"divide", 0xF7},   {"ndash", 0x2013},  {"mdash", 0x2014},  {"lsquo", 0x2018},
    {"rsquo", 0x2019},  {"ldquo", 0x201C},  {"rdquo", 0x201D},  {"bull", 0x2022},
    {"hellip", 0x2026}, {"euro", 0x20AC},   {"pound", 0xA3},    {"cent", 0xA2},
    {"sect", 0xA7},     {"para", 0xB6},     {"laquo", 0xAB},    {"raquo", 0xBB},
    {"eacute", 0xE9},   {"egrave", 0xE8},   {"aacute", 0xE1},   {"agrave", 0xE0},
    {"ouml", 0xF6},     {"uuml", 0xFC},     {"auml", 0xE4},     {"ccedil", 0xE7},
}};

const std::unordered_set<std::string_view>& block_elements() {
  static const std::unordered_set<std::string_view> names = {
      "address", "article", "aside", "blockquote", "br", "dd", "div", "dl", "dt",
      "fieldset", "figcaption", "figure", "footer", "form", "h1", "h2", "h3", "h4",
      "h5", "h6", "header", "hr", "li", "main", "nav", "ol", "p", "pre", "section",
      "table", "tbody", "td", "tfoot", "th", "thead", "tr", "ul", "body", "html",
      "head", "title", "option", "caption"};
  return names;
}

bool is_raw_text(std::string_view name) { return name == "script" || name == "style"; }

class Lexer {
 public:
  explicit Lexer(std::string_view html) : s_(html) {}

  std::vector<HtmlToken> run() {
    while (pos_ < s_.size()) {
      if (s_[pos_] == '<' && try_markup()) continue;
      text_.push_back(s_[pos_++]);
    }
    flush_text();
    return std::move(out_);
  }

 private:
  void flush_text() {
    if (text_.empty()) return;
    HtmlToken t;
    t.text = decode_entities(text_);
    out_.push_back(std::move(t));
    text_.clear();
  }

  // Returns false when '<' does not open markup and must be read as text.
  bool try_markup() {
    const auto rest = s_.substr(pos_);
    if (rest.starts_with("<!--")) {
      flush_text();
      const auto end = s_.find("-->", pos_ + 4);
      HtmlToken t;
      t.kind = HtmlToken::Kind::Comment;
      t.text.assign(s_.substr(pos_ + 4, end == std::string_view::npos ? std::string_view::npos
                                                                      : end - pos_ - 4));
      out_.push_back(std::move(t));
      pos_ = end == std::string_view::npos ? s_.size() : end + 3;
      return true;
    }
    if (rest.size() >= 2 && (rest[1] == '!' || rest[1] == '?')) {
      flush_text();
      const auto end = s_.find('>', pos_);
      pos_ = end == std::string_view::npos ? s_.size() : end + 1;
      return true;
    }
    if (rest.size() >= 3 && rest[1] == '/' && is_alpha(rest[2])) {
      const auto end = s_.find('>', pos_);
      if (end == std::string_view::npos) return false;
      flush_text();
      HtmlToken t;
      t.kind = HtmlToken::Kind::EndTag;
      std::size_t i = pos_ + 2;
      while (i < end && !is_space(s_[i]) && s_[i] != '/') t.name.push_back(lower(s_[i++]));
      out_.push_back(std::move(t));
      pos_ = end + 1;
      return true;
    }
    if (rest.size() >= 2 && is_alpha(rest[1])) return start_tag();
    return false;
  }

  bool start_tag() {
    std::size_t i = pos_ + 1;
    HtmlToken t;
    t.kind = HtmlToken::Kind::StartTag;
    while (i < s_.size() && !is_space(s_[i]) && s_[i] != '>' && s_[i] != '/') {
      t.name.push_back(lower(s_[i++]));
    }
    while (true) {
      while (i < s_.size() && (is_space(s_[i]) || s_[i] == '/')) ++i;
      if (i >= s_.size()) return false;
      if (s_[i] == '>') break;
      std::string name;
      while (i < s_.size() && !is_space(s_[i]) && s_[i] != '>' && s_[i] != '=' &&
             !(s_[i] == '/' && i + 1 < s_.size() && s_[i + 1] == '>')) {
        name.push_back(lower(s_[i++]));
      }
      while (i < s_.size() && is_space(s_[i])) ++i;
      std::string value;
      if (i < s_.size() && s_[i] == '=') {
        ++i;
        while (i < s_.size() && is_space(s_[i])) ++i;
        if (i < s_.size() && (s_[i] == '"' || s_[i] == '\'')) {
          const char quote = s_[i++];
          const auto close = s_.find(quote, i);
          if (close == std::string_view::npos) return false;
          value.assign(s_.substr(i, close - i));
          i = close + 1;
        } else {
          while (i < s_.size() && !is_space(s_[i]) && s_[i] != '>') value.push_back(s_[i++]);
        }
      }
      if (!name.empty()) t.attributes.emplace_back(std::move(name), decode_entities(value));
    }
    flush_text();
    pos_ = i + 1;
    const std::string name = t.name;
    out_.push_back(std::move(t));
    if (is_raw_text(name) || name == "title") raw_content(name);
    return true;
  }

  // Consumes up to the matching close tag. Title content is entity-decoded,
  // script/style content is kept verbatim.
  void raw_content(const std::string& name) {
    std::size_t i = pos_;
    std::size_t close = std::string_view::npos;
    while (i < s_.size()) {
      const auto lt = s_.find("</", i);
      if (lt == std::string_view::npos) break;
      if (to_lower(s_.substr(lt + 2, name.size())) == name) {
        close = lt;
        break;
      }
      i = lt + 2;
    }
    const auto body = s_.substr(pos_, close == std::string_view::npos ? std::string_view::npos
                                                                      : close - pos_);
    if (!body.empty()) {
      HtmlToken t;
      t.text = is_raw_text(name) ? std::string(body) : decode_entities(body);
      out_.push_back(std::move(t));
    }
    if (close == std::string_view::npos) {
      pos_ = s_.size();
      return;
    }
    const auto end = s_.find('>', close);
    HtmlToken t;
    t.kind = HtmlToken::Kind::EndTag;
    t.name = name;
    out_.push_back(std::move(t));
    pos_ = end == std::string_view::npos ? s_.size() : end + 1;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::string text_;
  std::vector<HtmlToken> out_;
};

// Collapses runs of whitespace into single spaces within each line, trims
// lines and drops empty ones.
std::string normalize_lines(std::string_view raw) {
  std::string out;
  std::string line;
  auto flush = [&] {
    while (!line.empty() && line.back() == ' ') line.pop_back();
    if (!line.empty()) {
      if (!out.empty()) out.push_back('\n');
      out += line;
    }
    line.clear();
  };
  for (char c : raw) {
    if (c == '\n') {
      flush();
    } else if (is_space(c)) {
      if (!line.empty() && line.back() != ' ') line.push_back(' ');
    } else {
      line.push_back(c);
    }
  }
  flush();
  return out;
}

// Extracted text must not look like markup: a '<' directly followed by a
// letter gets a separating space.
std::string defuse_markup(std::string text) {
  for (std::size_t i = 0; i + 1 < text.size(); ++i) {
    if (text[i] == '<' && std::isalpha(static_cast<unsigned char>(text[i + 1])) != 0) {
      text.insert(i + 1, 1, ' ');
    }
  }
  return text;
}

}  // namespace

const std::string* HtmlToken::attribute(std::string_view key) const {
  for (const auto& [name, value] : attributes) {
    if (name == key) return &value;
  }
  return nullptr;
}

std::vector<HtmlToken> lex_html(std::string_view html) { return Lexer(html).run(); }

std::string decode_entities(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '&') {
      out.push_back(text[i++]);
      continue;
    }
    const auto semi = text.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 12) {
      out.push_back(text[i++]);
      continue;
    }
    const auto ref = text.substr(i + 1, semi - i - 1);
    bool decoded = false;
    if (ref.size() >= 2 && ref[0] == '#') {
      const bool hex = ref[1] == 'x' || ref[1] == 'X';
      const auto digits = ref.substr(hex ? 2 : 1);
      std::uint32_t cp = 0;
      bool ok = !digits.empty();
      for (char c : digits) {
        const int v = std::isdigit(static_cast<unsigned char>(c)) ? c - '0'
                      : (hex && std::isxdigit(static_cast<unsigned char>(c)))
                          ? lower(c) - 'a' + 10
                          : -1;
        if (v < 0 || cp > 0x10FFFF) {
          ok = false;
          break;
        }
        cp = cp * (hex ? 16 : 10) + static_cast<std::uint32_t>(v);
      }
      if (ok) {
        append_utf8(out, cp);
        decoded = true;
      }
    } else {
      for (const auto& e : kEntities) {
        if (e.name == ref) {
          append_utf8(out, e.cp);
          decoded = true;
          break;
        }
      }
    }
    if (decoded) {
      i = semi + 1;
    } else {
      out.push_back(text[i++]);
    }
  }
  return out;
}

std::vector<std::string> extract_links(std::string_view html, std::string_view base) {
  std::vector<std::string> links;
  std::set<std::string> seen;
  for (const auto& token : lex_html(html)) {
    if (token.kind != HtmlToken::Kind::StartTag || token.name != "a") continue;
    const auto* href = token.attribute("href");
    if (href == nullptr) continue;
    std::string url;
    try {
      url = normalize_url(*href, base);
    } catch (const MalformedUrl&) {
      continue;
    }
    if (!is_http_scheme(url)) continue;
    if (seen.insert(url).second) links.push_back(std::move(url));
  }
  return links;
}

ExtractedText extract_text(std::string_view html) {
  ExtractedText result;
  std::string body;
  std::string title;
  std::string open_raw;  // innermost element whose text is not body text
  bool title_seen = false;
  for (const auto& token : lex_html(html)) {
    switch (token.kind) {
      case HtmlToken::Kind::Comment:
        break;
      case HtmlToken::Kind::StartTag:
        if (is_raw_text(token.name) || token.name == "title" || token.name == "template") {
          open_raw = token.name;
        }
        if (block_elements().contains(token.name)) body.push_back('\n');
        break;
      case HtmlToken::Kind::EndTag:
        if (token.name == open_raw) {
          if (open_raw == "title") title_seen = true;
          open_raw.clear();
        }
        if (block_elements().contains(token.name)) body.push_back('\n');
        break;
      case HtmlToken::Kind::Text:
        if (open_raw == "title") {
          if (!title_seen) title += token.text;
        } else if (open_raw.empty()) {
          body += token.text;
        }
        break;
    }
  }
  std::replace(title.begin(), title.end(), '\n', ' ');
  result.title = defuse_markup(normalize_lines(title));
  result.body = defuse_markup(normalize_lines(body));
  return result;
}

}  // namespace semsearch::webcorpus
