#include <algorithm>
#include <cstdio>
#include <vector>

#include "semsearch/ontology/ontology.h"
#include "syntax.h"

namespace semsearch::rdfio {

namespace detail {

namespace {

std::string hex_escape(unsigned char c) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "\\u%04X", c);
  return buf;
}

void append_utf8(std::string& out, unsigned long cp) {
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

}  // namespace

std::string escape_literal(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '\\':
        out += "\\\\";
        break;
      case '"':
        out += "\\\"";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\r':
        out += "\\r";
        break;
      case '\t':
        out += "\\t";
        break;
      default:
        if (static_cast<unsigned char>(c) < 0x20 || c == 0x7F) {
          out += hex_escape(static_cast<unsigned char>(c));
        } else {
          out.push_back(c);
        }
    }
  }
  return out;
}

std::string escape_iri(std::string_view s) {
  static constexpr std::string_view kForbidden = "<>\"{}|^`\\";
  std::string out;
  for (char c : s) {
    const auto u = static_cast<unsigned char>(c);
    if (u <= 0x20 || kForbidden.find(c) != std::string_view::npos) {
      out += hex_escape(u);
    } else {
      out.push_back(c);
    }
  }
  return out;
}

Unescaped read_escape(std::string_view s, bool iri) {
  if (s.size() < 2) return {{}, 0, "dangling backslash"};
  const char c = s[1];
  if (c == 'u' || c == 'U') {
    const std::size_t digits = c == 'u' ? 4 : 8;
    if (s.size() < 2 + digits) return {{}, 0, "truncated \\u escape"};
    unsigned long cp = 0;
    for (std::size_t i = 0; i < digits; ++i) {
      const char h = s[2 + i];
      int v;
      if (h >= '0' && h <= '9') {
        v = h - '0';
      } else if (h >= 'a' && h <= 'f') {
        v = h - 'a' + 10;
      } else if (h >= 'A' && h <= 'F') {
        v = h - 'A' + 10;
      } else {
        return {{}, 0, "bad hex digit in escape"};
      }
      cp = cp * 16 + static_cast<unsigned long>(v);
    }
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return {{}, 0, "escape is not a code point"};
    Unescaped out{{}, 2 + digits, nullptr};
    append_utf8(out.text, cp);
    return out;
  }
  if (iri) return {{}, 0, "only \\u escapes are allowed in IRIs"};
  switch (c) {
    case 't':
      return {"\t", 2, nullptr};
    case 'b':
      return {"\b", 2, nullptr};
    case 'n':
      return {"\n", 2, nullptr};
    case 'r':
      return {"\r", 2, nullptr};
    case 'f':
      return {"\f", 2, nullptr};
    case '"':
      return {"\"", 2, nullptr};
    case '\'':
      return {"'", 2, nullptr};
    case '\\':
      return {"\\", 2, nullptr};
    default:
      return {{}, 0, "unknown escape sequence"};
  }
}

std::string term(const Node& node) {
  return node.is_iri() ? "<" + escape_iri(node.value) + ">" : "\"" + escape_literal(node.value) + "\"";
}

}  // namespace detail

namespace {

class LineReader {
 public:
  LineReader(std::string_view line, std::size_t number) : s_(line), line_(number) {}

  [[noreturn]] void fail(const std::string& reason) const { throw ParseError(line_, reason); }

  void skip_space() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\r')) ++pos_;
  }
  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return at_end() ? '\0' : s_[pos_]; }

  std::string iri() {
    if (peek() != '<') fail(peek() == '_' ? "blank nodes are not supported" : "expected '<'");
    ++pos_;
    std::string out;
    for (;;) {
      if (at_end()) fail("unterminated IRI");
      const char c = s_[pos_];
      if (c == '>') {
        ++pos_;
        break;
      }
      if (c == '\\') {
        const auto e = detail::read_escape(s_.substr(pos_), true);
        if (e.error) fail(e.error);
        out += e.text;
        pos_ += e.consumed;
      } else if (static_cast<unsigned char>(c) <= 0x20 || c == '<' || c == '"') {
        fail("illegal character in IRI");
      } else {
        out.push_back(c);
        ++pos_;
      }
    }
    if (!ontology::is_absolute_iri(out)) fail("IRI is not absolute: " + out);
    return out;
  }

  std::string literal() {
    ++pos_;  // opening quote
    std::string out;
    for (;;) {
      if (at_end()) fail("unterminated literal");
      const char c = s_[pos_];
      if (c == '"') {
        ++pos_;
        break;
      }
      if (c == '\\') {
        const auto e = detail::read_escape(s_.substr(pos_), false);
        if (e.error) fail(e.error);
        out += e.text;
        pos_ += e.consumed;
      } else {
        out.push_back(c);
        ++pos_;
      }
    }
    if (peek() == '@') fail("language tags are not supported");
    if (s_.substr(pos_).starts_with("^^")) fail("typed literals are not supported");
    return out;
  }

  Node object() {
    if (peek() == '"') return Node::literal(literal());
    return Node::iri(iri());
  }

  void expect_end_of_statement() {
    skip_space();
    if (peek() != '.') fail("missing terminating '.'");
    ++pos_;
    skip_space();
    if (!at_end() && peek() != '#') fail("unexpected text after '.'");
  }

 private:
  std::string_view s_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string write_ntriples(const TripleGraph& g) {
  std::vector<std::string> lines;
  lines.reserve(g.size());
  for (const auto& t : g) {
    lines.push_back(detail::term(Node::iri(t.subject)) + " " + detail::term(Node::iri(t.predicate)) +
                    " " + detail::term(t.object) + " .\n");
  }
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& l : lines) out += l;
  return out;
}

TripleGraph parse_ntriples(std::string_view text) {
  TripleGraph g;
  std::size_t number = 0, start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    LineReader r(text.substr(start, end - start), number);
    start = end + 1;
    r.skip_space();
    if (r.at_end() || r.peek() == '#') continue;
    Triple t;
    t.subject = r.iri();
    r.skip_space();
    t.predicate = r.iri();
    r.skip_space();
    t.object = r.object();
    r.expect_end_of_statement();
    g.insert(std::move(t));
  }
  return g;
}

}  // namespace semsearch::rdfio
