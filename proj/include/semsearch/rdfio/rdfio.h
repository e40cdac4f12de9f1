#pragma once

#include <compare>
#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "semsearch/ontology/ontology.h"

namespace semsearch::rdfio {

namespace ns {
inline constexpr std::string_view kRdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view kRdfs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view kOwl = "http://www.w3.org/2002/07/owl#";
// Project vocabulary for synonyms and header metadata.
inline constexpr std::string_view kVocab = "http://semsearch.example.org/vocab#";
}  // namespace ns

struct Node {
  enum class Kind { Iri, Literal };
  Kind kind = Kind::Iri;
  std::string value;

  static Node iri(std::string v) { return {Kind::Iri, std::move(v)}; }
  static Node literal(std::string v) { return {Kind::Literal, std::move(v)}; }
  bool is_iri() const { return kind == Kind::Iri; }
  auto operator<=>(const Node&) const = default;
};

// Subject and predicate are absolute IRIs; literals are plain (no language
// tag, no datatype).
struct Triple {
  std::string subject;
  std::string predicate;
  Node object;
  auto operator<=>(const Triple&) const = default;
};

using TripleGraph = std::set<Triple>;

class MalformedGraph : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& reason)
      : Error("line " + std::to_string(line) + ": " + reason), line_(line), reason_(reason) {}
  std::size_t line() const { return line_; }
  const std::string& reason() const { return reason_; }

 private:
  std::size_t line_;
  std::string reason_;
};

// Mapping table (one row per model element):
//   header            <base> rdf:type owl:Ontology
//                     <base> vocab:applicationDomain "…"   (when set)
//                     <base> vocab:semanticDepth "…"       (when set)
//   class C           C rdf:type owl:Class ; C rdfs:label "…" ; C vocab:synonym "…"*
//   property p        p rdf:type rdf:Property ; label ; synonyms
//   individual i      i rdf:type owl:NamedIndividual ; label ; synonyms
//   SubClassOf        A rdfs:subClassOf B
//   SubPropertyOf     p rdfs:subPropertyOf q
//   Domain / Range    p rdfs:domain C / p rdfs:range C
//   ClassAssertion    i rdf:type C
//   PropertyAssertion s p o   (o an individual IRI or a literal)
//   MaxCardinality    R owl:onProperty p ; R owl:maxCardinality "n" ; C rdfs:subClassOf R
//                     where R = <base>#restriction-<first 16 hex of sha256("p|C|n")>
TripleGraph to_triples(const ontology::Ontology& ont);

std::string restriction_iri(const ontology::Ontology& ont, const ontology::MaxCardinality& m);

enum class Strictness {
  Strict,   // any conformance violation throws
  Lenient,  // the result may be invalid; check it with ontology::validate
};

struct LoadedOntology {
  ontology::Ontology ontology;
  std::vector<Triple> ignored;  // triples outside the mapping table
};

// Throws MalformedGraph for a missing header or broken restriction
// structure. In strict mode a cardinality outside {0, 1} throws
// OwlLiteViolation and any other violation throws MalformedGraph.
LoadedOntology from_triples(const TripleGraph& g, Strictness strictness = Strictness::Strict);

// One triple per line, " .\n" terminated, lines in byte order.
std::string write_ntriples(const TripleGraph& g);
TripleGraph parse_ntriples(std::string_view text);

std::string write_turtle(const TripleGraph& g);
// Reads the subset of Turtle that write_turtle emits: @prefix, prefixed
// names, 'a', ';' predicate lists and ',' object lists.
TripleGraph parse_turtle(std::string_view text);

}  // namespace semsearch::rdfio
