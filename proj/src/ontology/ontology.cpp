#include "semsearch/ontology/ontology.h"

#include <algorithm>
#include <cctype>

namespace semsearch::ontology {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string trimmed(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

std::set<std::string> clean_synonyms(std::set<std::string> synonyms) {
  std::set<std::string> out;
  for (const auto& s : synonyms) {
    auto t = trimmed(s);
    if (!t.empty()) out.insert(std::move(t));
  }
  return out;
}

std::string object_text(const PropertyValue& v) {
  return std::visit(Overloaded{[](const IndividualId& i) { return i.iri; },
                               [](const Literal& l) { return "\"" + l.value + "\""; }},
                    v);
}

}  // namespace

std::string_view to_string(EntityKind kind) {
  switch (kind) {
    case EntityKind::Class:
      return "class";
    case EntityKind::Property:
      return "property";
    case EntityKind::Individual:
      return "individual";
  }
  return "class";
}

std::string_view to_string(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::DanglingReference:
      return "dangling-reference";
    case Violation::Kind::DuplicateIri:
      return "duplicate-iri";
    case Violation::Kind::ThingAsSubclass:
      return "thing-as-subclass";
    case Violation::Kind::SelfSubclass:
      return "self-subclass";
    case Violation::Kind::OwlLiteViolation:
      return "owl-lite-violation";
  }
  return "dangling-reference";
}

std::string describe(const Axiom& axiom) {
  return std::visit(
      Overloaded{
          [](const SubClassOf& a) { return "SubClassOf(" + a.sub.iri + ", " + a.sup.iri + ")"; },
          [](const SubPropertyOf& a) {
            return "SubPropertyOf(" + a.sub.iri + ", " + a.sup.iri + ")";
          },
          [](const Domain& a) { return "Domain(" + a.property.iri + ", " + a.cls.iri + ")"; },
          [](const Range& a) { return "Range(" + a.property.iri + ", " + a.cls.iri + ")"; },
          [](const ClassAssertion& a) {
            return "ClassAssertion(" + a.individual.iri + ", " + a.cls.iri + ")";
          },
          [](const PropertyAssertion& a) {
            return "PropertyAssertion(" + a.subject.iri + ", " + a.property.iri + ", " +
                   object_text(a.object) + ")";
          },
          [](const MaxCardinality& a) {
            return "MaxCardinality(" + a.property.iri + ", " + a.cls.iri + ", " +
                   std::to_string(a.n) + ")";
          }},
      axiom);
}

bool is_absolute_iri(std::string_view iri) {
  const auto colon = iri.find(':');
  if (colon == std::string_view::npos || colon == 0 || colon + 1 == iri.size()) return false;
  if (!std::isalpha(static_cast<unsigned char>(iri[0]))) return false;
  for (std::size_t i = 0; i < colon; ++i) {
    const char c = iri[i];
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' && c != '.') return false;
  }
  return std::none_of(iri.begin(), iri.end(), [](char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == '<' || c == '>' || c == '"';
  });
}

std::string camel_case(std::string_view label) {
  std::string out;
  bool boundary = true;
  for (char c : label) {
    if (std::isalnum(static_cast<unsigned char>(c)) || static_cast<unsigned char>(c) >= 0x80) {
      out.push_back(boundary ? static_cast<char>(std::toupper(static_cast<unsigned char>(c))) : c);
      boundary = false;
    } else {
      boundary = true;
    }
  }
  return out;
}

std::string label_from_name(std::string_view name) {
  std::string out;
  for (std::size_t i = 0; i < name.size(); ++i) {
    const auto c = static_cast<unsigned char>(name[i]);
    if (name[i] == '_') {
      out.push_back(' ');
    } else if (i > 0 && std::isupper(c) && !std::isupper(static_cast<unsigned char>(name[i - 1]))) {
      out.push_back(' ');
      out.push_back(static_cast<char>(std::tolower(c)));
    } else {
      out.push_back(name[i]);
    }
  }
  return out;
}

Ontology::Ontology(std::string base_iri) : base_iri_(std::move(base_iri)) {
  if (!is_absolute_iri(base_iri_)) throw InvalidIri(base_iri_);
}

std::string Ontology::mint_iri(std::string_view label) const {
  return base_iri_ + "#" + camel_case(label);
}

std::optional<EntityKind> Ontology::kind_of(std::string_view iri) const {
  if (iri == kThingIri || classes_.contains(ClassId{std::string(iri)})) return EntityKind::Class;
  if (properties_.contains(PropertyId{std::string(iri)})) return EntityKind::Property;
  if (individuals_.contains(IndividualId{std::string(iri)})) return EntityKind::Individual;
  return std::nullopt;
}

std::string Ontology::class_label(const ClassId& c) const {
  if (is_thing(c)) return "Thing";
  const auto it = classes_.find(c);
  return it == classes_.end() ? c.iri : it->second.label;
}

void Ontology::check_new_entity(EntityKind kind, const std::string& iri,
                                const EntityInfo& info) const {
  if (!is_absolute_iri(iri)) throw InvalidIri(iri);
  if (info.label.empty()) throw OntologyError("empty label for " + iri);
  if (iri == kThingIri) throw DuplicateIri(iri);
  const auto existing = kind_of(iri);
  if (existing && *existing != kind) throw DuplicateIri(iri);
}

template <typename Id>
Id Ontology::declare(std::map<Id, EntityInfo>& table, EntityKind kind, const std::string& iri,
                     const std::string& label, std::set<std::string> synonyms) {
  EntityInfo info{trimmed(label), clean_synonyms(std::move(synonyms))};
  check_new_entity(kind, iri, info);
  Id id{iri};
  const auto [it, inserted] = table.emplace(id, info);
  if (!inserted && it->second != info) throw DuplicateIri(iri);
  return id;
}

ClassId Ontology::declare_class(const std::string& iri, const std::string& label,
                                std::set<std::string> synonyms) {
  return declare(classes_, EntityKind::Class, iri, label, std::move(synonyms));
}

PropertyId Ontology::declare_property(const std::string& iri, const std::string& label,
                                      std::set<std::string> synonyms) {
  return declare(properties_, EntityKind::Property, iri, label, std::move(synonyms));
}

IndividualId Ontology::declare_individual(const std::string& iri, const std::string& label,
                                          std::set<std::string> synonyms) {
  return declare(individuals_, EntityKind::Individual, iri, label, std::move(synonyms));
}

void Ontology::insert_entity_unchecked(EntityKind kind, const std::string& iri, EntityInfo info) {
  switch (kind) {
    case EntityKind::Class:
      classes_[ClassId{iri}] = std::move(info);
      break;
    case EntityKind::Property:
      properties_[PropertyId{iri}] = std::move(info);
      break;
    case EntityKind::Individual:
      individuals_[IndividualId{iri}] = std::move(info);
      break;
  }
}

void Ontology::assert_axiom(const Axiom& axiom) {
  auto need_class = [&](const ClassId& c) {
    if (!has_class(c)) throw UnknownEntity("class " + c.iri);
  };
  auto need_property = [&](const PropertyId& p) {
    if (!has_property(p)) throw UnknownEntity("property " + p.iri);
  };
  auto need_individual = [&](const IndividualId& i) {
    if (!has_individual(i)) throw UnknownEntity("individual " + i.iri);
  };
  std::visit(Overloaded{
                 [&](const SubClassOf& a) {
                   need_class(a.sub);
                   need_class(a.sup);
                   if (is_thing(a.sub)) throw OwlLiteViolation("owl:Thing cannot be a subclass");
                   if (a.sub == a.sup) throw SelfSubclass(a.sub.iri);
                 },
                 [&](const SubPropertyOf& a) {
                   need_property(a.sub);
                   need_property(a.sup);
                   if (a.sub == a.sup) throw SelfSubclass(a.sub.iri);
                 },
                 [&](const Domain& a) {
                   need_property(a.property);
                   need_class(a.cls);
                 },
                 [&](const Range& a) {
                   need_property(a.property);
                   need_class(a.cls);
                 },
                 [&](const ClassAssertion& a) {
                   need_individual(a.individual);
                   need_class(a.cls);
                 },
                 [&](const PropertyAssertion& a) {
                   need_individual(a.subject);
                   need_property(a.property);
                   if (const auto* o = std::get_if<IndividualId>(&a.object)) need_individual(*o);
                 },
                 [&](const MaxCardinality& a) {
                   need_property(a.property);
                   need_class(a.cls);
                   if (a.n > 1) {
                     throw OwlLiteViolation("max cardinality " + std::to_string(a.n) +
                                            " (only 0 or 1 allowed)");
                   }
                 },
             },
             axiom);
  axioms_.insert(axiom);
}

ConformanceReport validate(const Ontology& ont) {
  ConformanceReport report;
  auto add = [&](Violation::Kind kind, std::string subject, std::string message) {
    report.violations.push_back({kind, std::move(subject), std::move(message)});
  };

  std::map<std::string, int> kinds_per_iri;
  for (const auto& [id, info] : ont.classes()) ++kinds_per_iri[id.iri];
  for (const auto& [id, info] : ont.properties()) ++kinds_per_iri[id.iri];
  for (const auto& [id, info] : ont.individuals()) ++kinds_per_iri[id.iri];
  for (const auto& [iri, count] : kinds_per_iri) {
    if (count > 1 || iri == kThingIri) {
      add(Violation::Kind::DuplicateIri, iri, "IRI declared as more than one entity");
    }
  }

  for (const auto& axiom : ont.axioms()) {
    std::vector<std::string> missing;
    auto cls = [&](const ClassId& c) {
      if (!ont.has_class(c)) missing.push_back(c.iri);
    };
    auto prop = [&](const PropertyId& p) {
      if (!ont.has_property(p)) missing.push_back(p.iri);
    };
    auto ind = [&](const IndividualId& i) {
      if (!ont.has_individual(i)) missing.push_back(i.iri);
    };
    std::visit(Overloaded{
                   [&](const SubClassOf& a) {
                     cls(a.sub);
                     cls(a.sup);
                     if (is_thing(a.sub)) {
                       add(Violation::Kind::ThingAsSubclass, describe(a),
                           "owl:Thing on the subclass side");
                     }
                     if (a.sub == a.sup) add(Violation::Kind::SelfSubclass, describe(a), "X subClassOf X");
                   },
                   [&](const SubPropertyOf& a) {
                     prop(a.sub);
                     prop(a.sup);
                     if (a.sub == a.sup) {
                       add(Violation::Kind::SelfSubclass, describe(a), "p subPropertyOf p");
                     }
                   },
                   [&](const Domain& a) {
                     prop(a.property);
                     cls(a.cls);
                   },
                   [&](const Range& a) {
                     prop(a.property);
                     cls(a.cls);
                   },
                   [&](const ClassAssertion& a) {
                     ind(a.individual);
                     cls(a.cls);
                   },
                   [&](const PropertyAssertion& a) {
                     ind(a.subject);
                     prop(a.property);
                     if (const auto* o = std::get_if<IndividualId>(&a.object)) ind(*o);
                   },
                   [&](const MaxCardinality& a) {
                     prop(a.property);
                     cls(a.cls);
                     if (a.n > 1) {
                       add(Violation::Kind::OwlLiteViolation, describe(a),
                           "cardinality must be 0 or 1");
                     }
                   },
               },
               axiom);
    if (!missing.empty()) {
      std::string message = "references undeclared";
      for (const auto& m : missing) message += " " + m;
      add(Violation::Kind::DanglingReference, describe(axiom), message);
    }
  }
  return report;
}

}  // namespace semsearch::ontology
