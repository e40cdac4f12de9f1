#include "semsearch/ontology/authoring.h"

#include <cctype>
#include <optional>
#include <vector>

#include "semsearch/common/files.h"

namespace semsearch::ontology {

namespace {

constexpr std::string_view kSubsetSymbol = "\xE2\x8A\x82";  // ⊂

struct Token {
  enum Kind { Word, Quoted, Iri, Symbol } kind;
  std::string text;
};

struct Statement {
  std::size_t line;
  std::vector<Token> tokens;
};

std::vector<Token> lex_line(std::string_view s, std::size_t line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '#') {
      break;
    } else if (c == '"') {
      std::string text;
      ++i;
      bool closed = false;
      while (i < s.size()) {
        if (s[i] == '\\' && i + 1 < s.size()) {
          text.push_back(s[i + 1]);
          i += 2;
        } else if (s[i] == '"') {
          closed = true;
          ++i;
          break;
        } else {
          text.push_back(s[i++]);
        }
      }
      if (!closed) throw OntologySyntaxError(line, "unterminated string");
      out.push_back({Token::Quoted, std::move(text)});
    } else if (c == '<' && (i + 1 == s.size() || std::isspace(static_cast<unsigned char>(s[i + 1])))) {
      out.push_back({Token::Symbol, "<"});
      ++i;
    } else if (c == '<') {
      const auto close = s.find('>', i);
      if (close == std::string_view::npos) throw OntologySyntaxError(line, "unterminated IRI");
      out.push_back({Token::Iri, std::string(s.substr(i + 1, close - i - 1))});
      i = close + 1;
    } else if (c == ',' || c == ':') {
      out.push_back({Token::Symbol, std::string(1, c)});
      ++i;
    } else if (s.substr(i).starts_with(kSubsetSymbol)) {
      out.push_back({Token::Symbol, "<"});
      i += kSubsetSymbol.size();
    } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' ||
                              s[j] == '-' || s[j] == '.')) {
        ++j;
      }
      out.push_back({Token::Word, std::string(s.substr(i, j - i))});
      i = j;
    } else {
      throw OntologySyntaxError(line, std::string("unexpected character '") + c + "'");
    }
  }
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Statement> statements) : statements_(std::move(statements)) {}

  Ontology run() {
    std::optional<Ontology> ont;
    std::optional<std::string> domain, depth;
    for (const auto& st : statements_) {
      const auto& kw = st.tokens[0].text;
      if (kw == "ontology") {
        if (ont) throw OntologySyntaxError(st.line, "duplicate ontology statement");
        if (st.tokens.size() != 2) throw OntologySyntaxError(st.line, "expected: ontology <IRI>");
        ont.emplace(st.tokens[1].text);
      } else if (kw == "domain" || kw == "depth") {
        if (st.tokens.size() != 2 || st.tokens[1].kind != Token::Quoted) {
          throw OntologySyntaxError(st.line, "expected: " + kw + " \"text\"");
        }
        (kw == "domain" ? domain : depth) = st.tokens[1].text;
      } else if (kw != "class" && kw != "property" && kw != "individual" && kw != "fact" &&
                 kw != "maxcard") {
        throw OntologySyntaxError(st.line, "unknown statement '" + kw + "'");
      }
    }
    ont_ = ont ? std::move(*ont) : Ontology();
    ont_.set_application_domain(domain);
    ont_.set_semantic_depth(depth);

    for (const auto& st : statements_) declare(st);
    for (const auto& st : statements_) assert_axioms(st);
    return std::move(ont_);
  }

 private:
  // Cursor over one statement's tokens.
  struct Cursor {
    const Statement& st;
    std::size_t pos = 1;

    bool done() const { return pos >= st.tokens.size(); }
    const Token& peek() const { return st.tokens[pos]; }
    bool at_symbol(std::string_view s) const {
      return !done() && peek().kind == Token::Symbol && peek().text == s;
    }
    bool at_word(std::string_view s) const {
      return !done() && peek().kind == Token::Word && peek().text == s;
    }
    [[noreturn]] void fail(const std::string& what) const {
      throw OntologySyntaxError(st.line, what);
    }
    const Token& name() {
      if (done() || (peek().kind != Token::Word && peek().kind != Token::Iri)) fail("expected a name");
      return st.tokens[pos++];
    }
    std::string quoted() {
      if (done() || peek().kind != Token::Quoted) fail("expected a quoted string");
      return st.tokens[pos++].text;
    }
    std::vector<Token> name_list() {
      std::vector<Token> out{name()};
      while (at_symbol(",")) {
        ++pos;
        out.push_back(name());
      }
      return out;
    }
  };

  std::string iri_of(const Token& t) const {
    if (t.kind == Token::Iri) return t.text;
    if (t.text == "Thing") return std::string(kThingIri);
    return ont_.base_iri() + "#" + t.text;
  }

  static std::string default_label(const Token& t) {
    if (t.kind == Token::Word) return label_from_name(t.text);
    const auto cut = t.text.find_last_of("#/");
    return label_from_name(cut == std::string::npos ? t.text : t.text.substr(cut + 1));
  }

  void declare(const Statement& st) {
    const auto& kw = st.tokens[0].text;
    if (kw != "class" && kw != "property" && kw != "individual") return;
    Cursor cur{st};
    const Token entity = cur.name();
    std::optional<std::string> label;
    std::set<std::string> synonyms;
    while (!cur.done()) {
      if (cur.at_word("label")) {
        ++cur.pos;
        if (label) cur.fail("duplicate label");
        label = cur.quoted();
      } else if (cur.peek().kind == Token::Quoted) {
        synonyms.insert(cur.quoted());
      } else if ((kw != "individual" && cur.at_symbol("<")) || (kw == "individual" && cur.at_symbol(":"))) {
        ++cur.pos;
        cur.name_list();
      } else if (kw == "property" && (cur.at_word("domain") || cur.at_word("range"))) {
        ++cur.pos;
        cur.name();
      } else {
        cur.fail("unexpected '" + cur.peek().text + "' in " + kw + " statement");
      }
    }
    const auto iri = iri_of(entity);
    const auto text = label.value_or(default_label(entity));
    if (kw == "class") {
      ont_.declare_class(iri, text, std::move(synonyms));
    } else if (kw == "property") {
      ont_.declare_property(iri, text, std::move(synonyms));
    } else {
      ont_.declare_individual(iri, text, std::move(synonyms));
    }
  }

  void assert_at(const Statement& st, const Axiom& axiom) {
    try {
      ont_.assert_axiom(axiom);
    } catch (const UnknownEntity& e) {
      throw OntologySyntaxError(st.line, e.what());
    }
  }

  void assert_axioms(const Statement& st) {
    const auto& kw = st.tokens[0].text;
    Cursor cur{st};
    if (kw == "class" || kw == "property" || kw == "individual") {
      const auto subject = iri_of(cur.name());
      while (!cur.done()) {
        if (cur.at_word("label")) {
          cur.pos += 2;
        } else if (cur.peek().kind == Token::Quoted) {
          ++cur.pos;
        } else if (cur.at_symbol("<") || cur.at_symbol(":")) {
          ++cur.pos;
          for (const auto& t : cur.name_list()) {
            if (kw == "class") {
              assert_at(st, SubClassOf{{subject}, {iri_of(t)}});
            } else if (kw == "property") {
              assert_at(st, SubPropertyOf{{subject}, {iri_of(t)}});
            } else {
              assert_at(st, ClassAssertion{{subject}, {iri_of(t)}});
            }
          }
        } else {
          const bool is_domain = cur.at_word("domain");
          ++cur.pos;
          const auto cls = iri_of(cur.name());
          if (is_domain) {
            assert_at(st, Domain{{subject}, {cls}});
          } else {
            assert_at(st, Range{{subject}, {cls}});
          }
        }
      }
    } else if (kw == "fact") {
      const auto s = iri_of(cur.name());
      const auto p = iri_of(cur.name());
      if (cur.done()) cur.fail("expected an object");
      PropertyValue object = cur.peek().kind == Token::Quoted ? PropertyValue(Literal{cur.quoted()})
                                                              : PropertyValue(IndividualId{iri_of(cur.name())});
      if (!cur.done()) cur.fail("trailing tokens after fact");
      assert_at(st, PropertyAssertion{{s}, {p}, std::move(object)});
    } else if (kw == "maxcard") {
      const auto p = iri_of(cur.name());
      const auto c = iri_of(cur.name());
      const auto& n = cur.name().text;
      if (n.empty() || n.size() > 9 ||
          n.find_first_not_of("0123456789") != std::string::npos) {
        cur.fail("cardinality must be a non-negative integer");
      }
      if (!cur.done()) cur.fail("trailing tokens after maxcard");
      assert_at(st, MaxCardinality{{p}, {c}, static_cast<unsigned>(std::stoul(n))});
    }
  }

  std::vector<Statement> statements_;
  Ontology ont_;
};

}  // namespace

Ontology parse_authoring(std::string_view text) {
  std::vector<Statement> statements;
  std::size_t line = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line;
    auto tokens = lex_line(text.substr(start, end - start), line);
    if (!tokens.empty()) {
      if (tokens[0].kind != Token::Word) throw OntologySyntaxError(line, "expected a keyword");
      statements.push_back({line, std::move(tokens)});
    }
    start = end + 1;
  }
  return Parser(std::move(statements)).run();
}

Ontology load_authoring(const std::filesystem::path& path) {
  return parse_authoring(read_file(path));
}

}  // namespace semsearch::ontology
