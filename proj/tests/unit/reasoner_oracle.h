#pragma once

// Naive fixpoint reference implementations, deliberately unlike the
// production graph algorithms.

#include <set>
#include <utility>
#include <variant>

#include "semsearch/ontology/ontology.h"

namespace semsearch::testing {

using ClassPair = std::pair<ontology::ClassId, ontology::ClassId>;

inline std::set<ClassPair> oracle_closure(const ontology::Ontology& ont) {
  std::set<ontology::ClassId> classes{ontology::thing()};
  for (const auto& [c, info] : ont.classes()) classes.insert(c);
  std::set<ClassPair> pairs;
  for (const auto& c : classes) {
    pairs.emplace(c, c);
    pairs.emplace(c, ontology::thing());
  }
  for (const auto& axiom : ont.axioms()) {
    if (const auto* s = std::get_if<ontology::SubClassOf>(&axiom)) pairs.emplace(s->sub, s->sup);
  }
  bool changed = true;
  while (changed) {
    changed = false;
    const auto snapshot = pairs;
    for (const auto& [a, b] : snapshot) {
      for (const auto& [b2, c] : snapshot) {
        if (b == b2 && pairs.emplace(a, c).second) changed = true;
      }
    }
  }
  return pairs;
}

inline std::set<std::set<ontology::ClassId>> oracle_groups(const ontology::Ontology& ont,
                                                           const std::set<ClassPair>& closure) {
  std::set<ontology::ClassId> classes{ontology::thing()};
  for (const auto& [c, info] : ont.classes()) classes.insert(c);
  std::set<std::set<ontology::ClassId>> groups;
  for (const auto& a : classes) {
    std::set<ontology::ClassId> g;
    for (const auto& b : classes) {
      if (closure.contains({a, b}) && closure.contains({b, a})) g.insert(b);
    }
    groups.insert(g);
  }
  return groups;
}

// Memberships derivable by the domain/range rules, as (individual, class).
inline std::set<std::pair<ontology::IndividualId, ontology::ClassId>> oracle_inferred_types(
    const ontology::Ontology& ont) {
  using namespace ontology;
  std::set<std::pair<PropertyId, PropertyId>> sub_props;
  for (const auto& [p, info] : ont.properties()) sub_props.emplace(p, p);
  for (const auto& axiom : ont.axioms()) {
    if (const auto* s = std::get_if<SubPropertyOf>(&axiom)) sub_props.emplace(s->sub, s->sup);
  }
  for (bool changed = true; changed;) {
    changed = false;
    const auto snapshot = sub_props;
    for (const auto& [a, b] : snapshot) {
      for (const auto& [b2, c] : snapshot) {
        if (b == b2 && sub_props.emplace(a, c).second) changed = true;
      }
    }
  }
  const auto closure = oracle_closure(ont);
  std::set<std::pair<IndividualId, ClassId>> facts;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& axiom : ont.axioms()) {
      const auto* pa = std::get_if<PropertyAssertion>(&axiom);
      if (!pa) continue;
      for (const auto& other : ont.axioms()) {
        const auto* d = std::get_if<Domain>(&other);
        const auto* r = std::get_if<Range>(&other);
        if (d && sub_props.contains({pa->property, d->property})) {
          changed |= facts.emplace(pa->subject, d->cls).second;
        }
        const auto* object = std::get_if<IndividualId>(&pa->object);
        if (r && object && sub_props.contains({pa->property, r->property})) {
          changed |= facts.emplace(*object, r->cls).second;
        }
      }
    }
    for (const auto& [i, c] : std::set(facts)) {
      for (const auto& [sub, sup] : closure) {
        if (sub == c && !is_thing(sup)) changed |= facts.emplace(i, sup).second;
      }
    }
  }
  for (const auto& axiom : ont.axioms()) {
    if (const auto* a = std::get_if<ClassAssertion>(&axiom)) facts.erase({a->individual, a->cls});
  }
  return facts;
}

}  // namespace semsearch::testing
