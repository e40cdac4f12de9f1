#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "semsearch/ontology/ontology.h"

namespace semsearch::reasoner {

using ontology::ClassAssertion;
using ontology::ClassId;
using ontology::IndividualId;
using ontology::Ontology;
using ontology::PropertyId;

class InvalidOntology : public Error {
 public:
  explicit InvalidOntology(ontology::ConformanceReport report);
  const ontology::ConformanceReport& report() const { return report_; }

 private:
  ontology::ConformanceReport report_;
};

class UnknownClass : public Error {
 public:
  explicit UnknownClass(const std::string& iri) : Error("class not in hierarchy: " + iri) {}
};

using GroupIndex = std::size_t;

// The inferred hierarchy. Classes in a subsumption cycle are equivalent and
// share one group; groups are numbered in order of their smallest member.
struct InferredHierarchy {
  std::vector<ClassId> classes;  // sorted, owl:Thing included
  std::set<std::pair<ClassId, ClassId>> closure;  // (sub, sup), reflexive and transitive
  std::vector<std::vector<ClassId>> equiv_groups;
  std::map<ClassId, GroupIndex> group_of;
  // Transitive reduction over groups; empty only for the group of owl:Thing.
  std::map<GroupIndex, std::set<GroupIndex>> direct_parents;
  // Asserted edges between distinct groups, with parentless groups hung
  // under owl:Thing. Subsumption distances are measured on this graph.
  std::map<GroupIndex, std::set<GroupIndex>> asserted_parents;
  std::set<std::pair<PropertyId, PropertyId>> property_closure;

  bool knows(const ClassId& c) const { return group_of.contains(c); }
  GroupIndex group(const ClassId& c) const;
  GroupIndex thing_group() const { return group(ontology::thing()); }
  // Members of the direct parent groups of c.
  std::set<ClassId> direct_parent_classes(const ClassId& c) const;
  std::vector<GroupIndex> child_groups(GroupIndex g) const;
};

// Throws InvalidOntology unless validate(ont) is empty.
InferredHierarchy classify(const Ontology& ont);

// Throws UnknownClass.
bool is_subsumed(const InferredHierarchy& h, const ClassId& sub, const ClassId& sup);

// Every x with x ⊑ c, mapped to the shortest asserted-edge distance from x up
// to c (0 for c and its equivalents).
std::map<ClassId, unsigned> subsumees_with_distance(const InferredHierarchy& h, const ClassId& c);
// Every y with c ⊑ y, owl:Thing excluded, with the distance from c up to y.
std::map<ClassId, unsigned> subsumers_with_distance(const InferredHierarchy& h, const ClassId& c);

std::vector<ClassAssertion> infer_types(const Ontology& ont, const InferredHierarchy& h);

struct ConsistencyViolation {
  enum class Kind { Cardinality, Redundancy };
  Kind kind;
  std::vector<std::string> subjects;  // IRIs involved
  std::string explanation;
};

std::string_view to_string(ConsistencyViolation::Kind kind);

struct ConsistencyReport {
  std::vector<ConsistencyViolation> violations;
  std::vector<ClassAssertion> inferred_assertions;

  // Redundancy entries are notes; only cardinality breaks consistency.
  bool consistent() const;
};

ConsistencyReport check_consistency(const Ontology& ont, const InferredHierarchy& h);

// Indented tree rooted at Thing; equivalent classes print as "[A = B]".
std::string render_tree(const Ontology& ont, const InferredHierarchy& h);

// Nested group tree: {"iris", "labels", "children": [...]} rooted at Thing.
nlohmann::json hierarchy_tree_json(const Ontology& ont, const InferredHierarchy& h);
// Full dump: closure pairs, groups, direct parents and the tree.
nlohmann::json hierarchy_json(const Ontology& ont, const InferredHierarchy& h);
nlohmann::json report_json(const ConsistencyReport& report);

}  // namespace semsearch::reasoner
