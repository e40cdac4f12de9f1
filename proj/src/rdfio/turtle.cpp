#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <vector>

#include "semsearch/ontology/ontology.h"
#include "syntax.h"

namespace semsearch::rdfio {

namespace {

struct Prefix {
  std::string name;
  std::string iri;
};

const std::string kRdfType = std::string(ns::kRdf) + "type";

std::optional<std::string> base_namespace(const TripleGraph& g) {
  for (const auto& t : g) {
    if (t.predicate == kRdfType && t.object.is_iri() &&
        t.object.value == std::string(ns::kOwl) + "Ontology") {
      return t.subject + "#";
    }
  }
  return std::nullopt;
}

bool plain_local_name(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') return false;
  }
  return true;
}

}  // namespace

std::string write_turtle(const TripleGraph& g) {
  std::vector<Prefix> prefixes = {{"rdf", std::string(ns::kRdf)},
                                  {"rdfs", std::string(ns::kRdfs)},
                                  {"owl", std::string(ns::kOwl)},
                                  {"vocab", std::string(ns::kVocab)}};
  if (const auto base = base_namespace(g)) prefixes.push_back({"", *base});

  std::string out;
  for (const auto& p : prefixes) out += "@prefix " + p.name + ": <" + detail::escape_iri(p.iri) + "> .\n";

  auto name = [&](const std::string& iri) {
    // Longest matching namespace wins.
    const Prefix* best = nullptr;
    for (const auto& p : prefixes) {
      if (iri.starts_with(p.iri) && plain_local_name(std::string_view(iri).substr(p.iri.size())) &&
          (!best || p.iri.size() > best->iri.size())) {
        best = &p;
      }
    }
    return best ? best->name + ":" + iri.substr(best->iri.size()) : detail::term(Node::iri(iri));
  };
  auto object = [&](const Node& n) { return n.is_iri() ? name(n.value) : detail::term(n); };

  // Statements grouped by subject, rdf:type first within each group.
  std::vector<const Triple*> ordered;
  for (const auto& t : g) ordered.push_back(&t);
  std::stable_sort(ordered.begin(), ordered.end(), [](const Triple* a, const Triple* b) {
    if (a->subject != b->subject) return a->subject < b->subject;
    return (a->predicate == kRdfType) > (b->predicate == kRdfType);
  });
  const std::string* subject = nullptr;
  for (const Triple* t : ordered) {
    if (!subject || *subject != t->subject) {
      if (subject) out += " .\n";
      out += "\n" + name(t->subject) + "\n";
      subject = &t->subject;
    } else {
      out += " ;\n";
    }
    out += "    " + (t->predicate == kRdfType ? std::string("a") : name(t->predicate)) + " " +
           object(t->object);
  }
  if (subject) out += " .\n";
  return out;
}

namespace {

struct Token {
  enum Kind { Iri, Name, Literal, Punct, Directive, End } kind;
  std::string text;
  std::size_t line;
};

class TurtleLexer {
 public:
  explicit TurtleLexer(std::string_view s) : s_(s) {}

  Token next() {
    skip();
    if (pos_ >= s_.size()) return {Token::End, "", line_};
    const char c = s_[pos_];
    if (c == '<') return iri();
    if (c == '"') return literal();
    if (c == '.' || c == ';' || c == ',') {
      ++pos_;
      return {Token::Punct, std::string(1, c), line_};
    }
    if (c == '@') {
      const auto start = ++pos_;
      while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return {Token::Directive, std::string(s_.substr(start, pos_ - start)), line_};
    }
    if (c == '_' && pos_ + 1 < s_.size() && s_[pos_ + 1] == ':') {
      throw ParseError(line_, "blank nodes are not supported");
    }
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == ':') {
      const auto start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' ||
                                  s_[pos_] == '-' || s_[pos_] == ':')) {
        ++pos_;
      }
      return {Token::Name, std::string(s_.substr(start, pos_ - start)), line_};
    }
    throw ParseError(line_, std::string("unexpected character '") + c + "'");
  }

 private:
  void skip() {
    while (pos_ < s_.size()) {
      const char c = s_[pos_];
      if (c == '\n') {
        ++line_;
        ++pos_;
      } else if (c == ' ' || c == '\t' || c == '\r') {
        ++pos_;
      } else if (c == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  Token iri() {
    ++pos_;
    std::string out;
    while (pos_ < s_.size() && s_[pos_] != '>') {
      if (s_[pos_] == '\\') {
        const auto e = detail::read_escape(s_.substr(pos_), true);
        if (e.error) throw ParseError(line_, e.error);
        out += e.text;
        pos_ += e.consumed;
      } else if (static_cast<unsigned char>(s_[pos_]) <= 0x20) {
        throw ParseError(line_, "illegal character in IRI");
      } else {
        out.push_back(s_[pos_++]);
      }
    }
    if (pos_ >= s_.size()) throw ParseError(line_, "unterminated IRI");
    ++pos_;
    return {Token::Iri, out, line_};
  }

  Token literal() {
    ++pos_;
    std::string out;
    while (pos_ < s_.size() && s_[pos_] != '"') {
      if (s_[pos_] == '\n') throw ParseError(line_, "newline in literal");
      if (s_[pos_] == '\\') {
        const auto e = detail::read_escape(s_.substr(pos_), false);
        if (e.error) throw ParseError(line_, e.error);
        out += e.text;
        pos_ += e.consumed;
      } else {
        out.push_back(s_[pos_++]);
      }
    }
    if (pos_ >= s_.size()) throw ParseError(line_, "unterminated literal");
    ++pos_;
    if (pos_ < s_.size() && (s_[pos_] == '@' || s_[pos_] == '^')) {
      throw ParseError(line_, "language tags and datatypes are not supported");
    }
    return {Token::Literal, out, line_};
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

class TurtleParser {
 public:
  explicit TurtleParser(std::string_view text) : lex_(text) { advance(); }

  TripleGraph run() {
    while (tok_.kind != Token::End) {
      if (tok_.kind == Token::Directive) {
        directive();
      } else {
        statement();
      }
    }
    return std::move(g_);
  }

 private:
  void advance() { tok_ = lex_.next(); }
  [[noreturn]] void fail(const std::string& reason) const { throw ParseError(tok_.line, reason); }
  void expect_punct(char c) {
    if (tok_.kind != Token::Punct || tok_.text[0] != c) fail(std::string("expected '") + c + "'");
    advance();
  }

  void directive() {
    if (tok_.text != "prefix") fail("unsupported directive @" + tok_.text);
    advance();
    if (tok_.kind != Token::Name || tok_.text.back() != ':' ||
        tok_.text.find(':') != tok_.text.size() - 1) {
      fail("expected a prefix name ending in ':'");
    }
    const auto name = tok_.text.substr(0, tok_.text.size() - 1);
    advance();
    if (tok_.kind != Token::Iri) fail("expected a namespace IRI");
    prefixes_[name] = tok_.text;
    advance();
    expect_punct('.');
  }

  std::string resolve(const Token& t) const {
    if (t.kind == Token::Iri) {
      if (!ontology::is_absolute_iri(t.text)) throw ParseError(t.line, "IRI is not absolute: " + t.text);
      return t.text;
    }
    if (t.kind != Token::Name) throw ParseError(t.line, "expected an IRI or prefixed name");
    const auto colon = t.text.find(':');
    if (colon == std::string::npos) throw ParseError(t.line, "unknown keyword '" + t.text + "'");
    const auto it = prefixes_.find(t.text.substr(0, colon));
    if (it == prefixes_.end()) throw ParseError(t.line, "undeclared prefix in '" + t.text + "'");
    return it->second + t.text.substr(colon + 1);
  }

  void statement() {
    const auto subject = resolve(tok_);
    advance();
    for (;;) {
      std::string predicate;
      if (tok_.kind == Token::Name && tok_.text == "a") {
        predicate = kRdfType;
      } else {
        predicate = resolve(tok_);
      }
      advance();
      for (;;) {
        Node object = tok_.kind == Token::Literal ? Node::literal(tok_.text) : Node::iri(resolve(tok_));
        advance();
        g_.insert({subject, predicate, std::move(object)});
        if (tok_.kind == Token::Punct && tok_.text == ",") {
          advance();
          continue;
        }
        break;
      }
      if (tok_.kind == Token::Punct && tok_.text == ";") {
        advance();
        if (tok_.kind == Token::Punct && tok_.text == ".") break;
        continue;
      }
      break;
    }
    expect_punct('.');
  }

  TurtleLexer lex_;
  Token tok_{Token::End, "", 1};
  std::map<std::string, std::string> prefixes_;
  TripleGraph g_;
};

}  // namespace

TripleGraph parse_turtle(std::string_view text) { return TurtleParser(text).run(); }

}  // namespace semsearch::rdfio
