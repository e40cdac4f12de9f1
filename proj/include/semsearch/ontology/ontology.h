#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "semsearch/common/error.h"

namespace semsearch::ontology {

inline constexpr std::string_view kThingIri = "http://www.w3.org/2002/07/owl#Thing";

// IRI handle tagged by entity kind, so a property can never be passed where
// a class is expected.
template <typename Tag>
struct EntityId {
  std::string iri;

  auto operator<=>(const EntityId&) const = default;
};

using ClassId = EntityId<struct ClassTag>;
using PropertyId = EntityId<struct PropertyTag>;
using IndividualId = EntityId<struct IndividualTag>;

inline ClassId thing() { return ClassId{std::string(kThingIri)}; }
inline bool is_thing(const ClassId& c) { return c.iri == kThingIri; }

enum class EntityKind { Class, Property, Individual };
std::string_view to_string(EntityKind kind);

struct EntityInfo {
  std::string label;
  std::set<std::string> synonyms;  // lexical terms used for annotation

  bool operator==(const EntityInfo&) const = default;
};

struct Literal {
  std::string value;
  auto operator<=>(const Literal&) const = default;
};

struct SubClassOf {
  ClassId sub;
  ClassId sup;
  auto operator<=>(const SubClassOf&) const = default;
};

struct SubPropertyOf {
  PropertyId sub;
  PropertyId sup;
  auto operator<=>(const SubPropertyOf&) const = default;
};

struct Domain {
  PropertyId property;
  ClassId cls;
  auto operator<=>(const Domain&) const = default;
};

struct Range {
  PropertyId property;
  ClassId cls;
  auto operator<=>(const Range&) const = default;
};

struct ClassAssertion {
  IndividualId individual;
  ClassId cls;
  auto operator<=>(const ClassAssertion&) const = default;
};

using PropertyValue = std::variant<IndividualId, Literal>;

struct PropertyAssertion {
  IndividualId subject;
  PropertyId property;
  PropertyValue object;
  auto operator<=>(const PropertyAssertion&) const = default;
};

// Only 0 and 1 are legal; the field is wider so that deserialized input can
// carry an illegal value as far as validation.
struct MaxCardinality {
  PropertyId property;
  ClassId cls;
  unsigned n = 0;
  auto operator<=>(const MaxCardinality&) const = default;
};

using Axiom = std::variant<SubClassOf, SubPropertyOf, Domain, Range, ClassAssertion,
                           PropertyAssertion, MaxCardinality>;

std::string describe(const Axiom& axiom);

class OntologyError : public Error {
 public:
  using Error::Error;
};

class DuplicateIri : public OntologyError {
 public:
  explicit DuplicateIri(const std::string& iri) : OntologyError("duplicate IRI " + iri) {}
};

class UnknownEntity : public OntologyError {
 public:
  explicit UnknownEntity(const std::string& what) : OntologyError("unknown entity " + what) {}
};

class OwlLiteViolation : public OntologyError {
 public:
  explicit OwlLiteViolation(const std::string& what) : OntologyError("OWL Lite violation: " + what) {}
};

class SelfSubclass : public OntologyError {
 public:
  explicit SelfSubclass(const std::string& iri)
      : OntologyError("redundant self-subsumption on " + iri) {}
};

class InvalidIri : public OntologyError {
 public:
  explicit InvalidIri(const std::string& iri) : OntologyError("not an absolute IRI: '" + iri + "'") {}
};

bool is_absolute_iri(std::string_view iri);

// "Tennis player" -> "TennisPlayer".
std::string camel_case(std::string_view label);
// "ProfessionalAthlete" -> "Professional athlete".
std::string label_from_name(std::string_view name);

// An OWL Lite ontology held as a value. The declare/assert API enforces the
// language restrictions; the *_unchecked calls exist for deserialization
// boundaries and leave enforcement to validate().
class Ontology {
 public:
  explicit Ontology(std::string base_iri = "http://example.org/ontology");

  const std::string& base_iri() const { return base_iri_; }
  std::string mint_iri(std::string_view label) const;

  ClassId declare_class(const std::string& iri, const std::string& label,
                        std::set<std::string> synonyms = {});
  PropertyId declare_property(const std::string& iri, const std::string& label,
                              std::set<std::string> synonyms = {});
  IndividualId declare_individual(const std::string& iri, const std::string& label,
                                  std::set<std::string> synonyms = {});

  // Throws UnknownEntity, OwlLiteViolation or SelfSubclass.
  void assert_axiom(const Axiom& axiom);

  const std::map<ClassId, EntityInfo>& classes() const { return classes_; }
  const std::map<PropertyId, EntityInfo>& properties() const { return properties_; }
  const std::map<IndividualId, EntityInfo>& individuals() const { return individuals_; }
  const std::set<Axiom>& axioms() const { return axioms_; }

  // owl:Thing is implicit and always known.
  bool has_class(const ClassId& c) const { return is_thing(c) || classes_.contains(c); }
  bool has_property(const PropertyId& p) const { return properties_.contains(p); }
  bool has_individual(const IndividualId& i) const { return individuals_.contains(i); }
  std::optional<EntityKind> kind_of(std::string_view iri) const;
  // Label of a class, "Thing" for owl:Thing, the IRI when unknown.
  std::string class_label(const ClassId& c) const;

  const std::optional<std::string>& application_domain() const { return application_domain_; }
  const std::optional<std::string>& semantic_depth() const { return semantic_depth_; }
  void set_application_domain(std::optional<std::string> v) { application_domain_ = std::move(v); }
  void set_semantic_depth(std::optional<std::string> v) { semantic_depth_ = std::move(v); }

  void insert_entity_unchecked(EntityKind kind, const std::string& iri, EntityInfo info);
  void insert_axiom_unchecked(const Axiom& axiom) { axioms_.insert(axiom); }

  bool operator==(const Ontology&) const = default;

 private:
  void check_new_entity(EntityKind kind, const std::string& iri, const EntityInfo& info) const;
  template <typename Id>
  Id declare(std::map<Id, EntityInfo>& table, EntityKind kind, const std::string& iri,
             const std::string& label, std::set<std::string> synonyms);

  std::string base_iri_;
  std::optional<std::string> application_domain_;
  std::optional<std::string> semantic_depth_;
  std::map<ClassId, EntityInfo> classes_;
  std::map<PropertyId, EntityInfo> properties_;
  std::map<IndividualId, EntityInfo> individuals_;
  std::set<Axiom> axioms_;
};

struct Violation {
  enum class Kind { DanglingReference, DuplicateIri, ThingAsSubclass, SelfSubclass, OwlLiteViolation };
  Kind kind;
  std::string subject;  // IRI or axiom description
  std::string message;
};

std::string_view to_string(Violation::Kind kind);

struct ConformanceReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

ConformanceReport validate(const Ontology& ont);

}  // namespace semsearch::ontology
