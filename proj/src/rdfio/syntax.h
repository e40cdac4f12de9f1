#pragma once

// Term escaping shared by the N-Triples and Turtle readers and writers.

#include <cstddef>
#include <string>
#include <string_view>

#include "semsearch/rdfio/rdfio.h"

namespace semsearch::rdfio::detail {

std::string escape_literal(std::string_view s);
std::string escape_iri(std::string_view s);

// Result of reading an escape sequence starting at s[0] == '\\'.
struct Unescaped {
  std::string text;  // UTF-8 for \u and \U forms
  std::size_t consumed = 0;
  const char* error = nullptr;
};
Unescaped read_escape(std::string_view s, bool iri);

// Serialized term: <iri> or "literal".
std::string term(const Node& node);

}  // namespace semsearch::rdfio::detail
