#include <map>
#include <variant>

#include "semsearch/common/hash.h"
#include "semsearch/rdfio/rdfio.h"

namespace semsearch::rdfio {

namespace {

using namespace ontology;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string rdf(std::string_view local) { return std::string(ns::kRdf) + std::string(local); }
std::string rdfs(std::string_view local) { return std::string(ns::kRdfs) + std::string(local); }
std::string owl(std::string_view local) { return std::string(ns::kOwl) + std::string(local); }
std::string vocab(std::string_view local) { return std::string(ns::kVocab) + std::string(local); }

const std::string kType = rdf("type");
const std::string kLabel = rdfs("label");
const std::string kSynonym = vocab("synonym");
const std::string kSubClassOf = rdfs("subClassOf");
const std::string kSubPropertyOf = rdfs("subPropertyOf");
const std::string kDomain = rdfs("domain");
const std::string kRange = rdfs("range");
const std::string kOnProperty = owl("onProperty");
const std::string kMaxCardinality = owl("maxCardinality");
const std::string kApplicationDomain = vocab("applicationDomain");
const std::string kSemanticDepth = vocab("semanticDepth");

const std::map<std::string, EntityKind>& kind_types() {
  static const std::map<std::string, EntityKind> m = {{owl("Class"), EntityKind::Class},
                                                      {rdf("Property"), EntityKind::Property},
                                                      {owl("NamedIndividual"), EntityKind::Individual}};
  return m;
}

std::string type_of(EntityKind kind) {
  for (const auto& [iri, k] : kind_types()) {
    if (k == kind) return iri;
  }
  return owl("Class");
}

void add_entity(TripleGraph& g, EntityKind kind, const std::string& iri, const EntityInfo& info) {
  g.insert({iri, kType, Node::iri(type_of(kind))});
  g.insert({iri, kLabel, Node::literal(info.label)});
  for (const auto& s : info.synonyms) g.insert({iri, kSynonym, Node::literal(s)});
}

std::string local_label(const std::string& iri) {
  const auto cut = iri.find_last_of("#/");
  const auto name = cut == std::string::npos ? iri : iri.substr(cut + 1);
  return name.empty() ? iri : label_from_name(name);
}

struct RestrictionParts {
  std::vector<std::string> properties;
  std::vector<std::string> cardinalities;
  bool referenced = false;
};

}  // namespace

std::string restriction_iri(const Ontology& ont, const MaxCardinality& m) {
  const auto key = m.property.iri + "|" + m.cls.iri + "|" + std::to_string(m.n);
  return ont.base_iri() + "#restriction-" + sha256_hex(key).substr(0, 16);
}

TripleGraph to_triples(const Ontology& ont) {
  TripleGraph g;
  const auto& base = ont.base_iri();
  g.insert({base, kType, Node::iri(owl("Ontology"))});
  if (ont.application_domain()) g.insert({base, kApplicationDomain, Node::literal(*ont.application_domain())});
  if (ont.semantic_depth()) g.insert({base, kSemanticDepth, Node::literal(*ont.semantic_depth())});

  for (const auto& [id, info] : ont.classes()) add_entity(g, EntityKind::Class, id.iri, info);
  for (const auto& [id, info] : ont.properties()) add_entity(g, EntityKind::Property, id.iri, info);
  for (const auto& [id, info] : ont.individuals()) add_entity(g, EntityKind::Individual, id.iri, info);

  for (const auto& axiom : ont.axioms()) {
    std::visit(Overloaded{
                   [&](const SubClassOf& a) { g.insert({a.sub.iri, kSubClassOf, Node::iri(a.sup.iri)}); },
                   [&](const SubPropertyOf& a) {
                     g.insert({a.sub.iri, kSubPropertyOf, Node::iri(a.sup.iri)});
                   },
                   [&](const Domain& a) { g.insert({a.property.iri, kDomain, Node::iri(a.cls.iri)}); },
                   [&](const Range& a) { g.insert({a.property.iri, kRange, Node::iri(a.cls.iri)}); },
                   [&](const ClassAssertion& a) { g.insert({a.individual.iri, kType, Node::iri(a.cls.iri)}); },
                   [&](const PropertyAssertion& a) {
                     const Node object = std::visit(
                         Overloaded{[](const IndividualId& i) { return Node::iri(i.iri); },
                                    [](const Literal& l) { return Node::literal(l.value); }},
                         a.object);
                     g.insert({a.subject.iri, a.property.iri, object});
                   },
                   [&](const MaxCardinality& a) {
                     const auto r = restriction_iri(ont, a);
                     g.insert({r, kOnProperty, Node::iri(a.property.iri)});
                     g.insert({r, kMaxCardinality, Node::literal(std::to_string(a.n))});
                     g.insert({a.cls.iri, kSubClassOf, Node::iri(r)});
                   },
               },
               axiom);
  }
  return g;
}

LoadedOntology from_triples(const TripleGraph& g, Strictness strictness) {
  std::vector<std::string> headers;
  for (const auto& t : g) {
    if (t.predicate == kType && t.object == Node::iri(owl("Ontology"))) headers.push_back(t.subject);
  }
  if (headers.size() != 1) {
    throw MalformedGraph("expected exactly one owl:Ontology header, found " + std::to_string(headers.size()));
  }
  const auto& base = headers[0];
  if (!is_absolute_iri(base)) throw MalformedGraph("ontology IRI is not absolute: " + base);

  LoadedOntology out{Ontology(base), {}};
  auto& ont = out.ontology;

  std::set<const Triple*> consumed;
  std::map<std::string, std::set<EntityKind>> kinds;
  std::map<std::string, RestrictionParts> restrictions;
  std::map<std::string, std::vector<std::string>> labels;
  std::map<std::string, std::set<std::string>> synonyms;

  for (const auto& t : g) {
    if (t.subject == base && t.predicate == kType && t.object == Node::iri(owl("Ontology"))) {
      consumed.insert(&t);
    } else if (t.subject == base && !t.object.is_iri() &&
               (t.predicate == kApplicationDomain || t.predicate == kSemanticDepth)) {
      (t.predicate == kApplicationDomain ? ont.set_application_domain(t.object.value)
                                         : ont.set_semantic_depth(t.object.value));
      consumed.insert(&t);
    } else if (t.predicate == kType && t.object.is_iri() && kind_types().contains(t.object.value)) {
      kinds[t.subject].insert(kind_types().at(t.object.value));
      consumed.insert(&t);
    } else if (t.predicate == kOnProperty && t.object.is_iri()) {
      restrictions[t.subject].properties.push_back(t.object.value);
      consumed.insert(&t);
    } else if (t.predicate == kMaxCardinality && !t.object.is_iri()) {
      restrictions[t.subject].cardinalities.push_back(t.object.value);
      consumed.insert(&t);
    }
  }
  for (const auto& t : g) {
    if (!kinds.contains(t.subject) || t.object.is_iri()) continue;
    if (t.predicate == kLabel) {
      labels[t.subject].push_back(t.object.value);
      consumed.insert(&t);
    } else if (t.predicate == kSynonym) {
      synonyms[t.subject].insert(t.object.value);
      consumed.insert(&t);
    }
  }

  for (const auto& [iri, ks] : kinds) {
    auto& l = labels[iri];
    if (l.size() > 1) throw MalformedGraph("entity " + iri + " has " + std::to_string(l.size()) + " labels");
    const auto label = l.empty() ? local_label(iri) : l.front();
    for (auto k : ks) ont.insert_entity_unchecked(k, iri, {label, synonyms[iri]});
  }

  for (const auto& t : g) {
    if (t.predicate == kSubClassOf && t.object.is_iri() && restrictions.contains(t.object.value)) {
      auto& r = restrictions[t.object.value];
      if (r.properties.size() != 1 || r.cardinalities.size() != 1) {
        throw MalformedGraph("restriction " + t.object.value +
                             " needs exactly one owl:onProperty and one owl:maxCardinality");
      }
      const auto& n = r.cardinalities.front();
      if (n.empty() || n.size() > 9 || n.find_first_not_of("0123456789") != std::string::npos) {
        throw MalformedGraph("restriction " + t.object.value + " has non-integer cardinality '" + n + "'");
      }
      r.referenced = true;
      ont.insert_axiom_unchecked(
          MaxCardinality{{r.properties.front()}, {t.subject}, static_cast<unsigned>(std::stoul(n))});
      consumed.insert(&t);
    }
  }
  for (const auto& [iri, r] : restrictions) {
    if (!r.referenced) throw MalformedGraph("restriction " + iri + " is not attached to any class");
  }

  for (const auto& t : g) {
    if (consumed.contains(&t)) continue;
    const bool iri_object = t.object.is_iri();
    const auto& o = t.object.value;
    if (t.predicate == kSubClassOf && iri_object) {
      ont.insert_axiom_unchecked(SubClassOf{{t.subject}, {o}});
    } else if (t.predicate == kSubPropertyOf && iri_object) {
      ont.insert_axiom_unchecked(SubPropertyOf{{t.subject}, {o}});
    } else if (t.predicate == kDomain && iri_object) {
      ont.insert_axiom_unchecked(Domain{{t.subject}, {o}});
    } else if (t.predicate == kRange && iri_object) {
      ont.insert_axiom_unchecked(Range{{t.subject}, {o}});
    } else if (t.predicate == kType && iri_object && ont.has_class(ClassId{o})) {
      ont.insert_axiom_unchecked(ClassAssertion{{t.subject}, {o}});
    } else if (ont.has_property(PropertyId{t.predicate})) {
      PropertyValue object = iri_object ? PropertyValue(IndividualId{o}) : PropertyValue(Literal{o});
      ont.insert_axiom_unchecked(PropertyAssertion{{t.subject}, {t.predicate}, std::move(object)});
    } else {
      out.ignored.push_back(t);
    }
  }

  if (strictness == Strictness::Strict) {
    const auto report = validate(ont);
    for (const auto& v : report.violations) {
      if (v.kind == Violation::Kind::OwlLiteViolation) throw OwlLiteViolation(v.subject + ": " + v.message);
    }
    if (!report.ok()) {
      const auto& v = report.violations.front();
      throw MalformedGraph(std::string(to_string(v.kind)) + " " + v.subject + ": " + v.message);
    }
  }
  return out;
}

}  // namespace semsearch::rdfio
