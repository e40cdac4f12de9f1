#pragma once

#include <algorithm>
#include <random>
#include <string>

#include "semsearch/ontology/ontology.h"

namespace semsearch::testing {

struct OntologyShape {
  int max_classes = 30;
  int max_properties = 10;
  int max_individuals = 20;
  bool allow_cycles = true;
};

inline std::string random_word(std::mt19937& rng) {
  static const char* syllables[] = {"ra", "ko", "mi", "ta", "fe", "ver", "lu", "den", "gue", "sa", "pin", "o"};
  std::string w;
  const int n = 1 + static_cast<int>(rng() % 3);
  for (int i = 0; i < n; ++i) w += syllables[rng() % 12];
  return w;
}

// Random ontology built only through the checked API, so it is always valid.
inline ontology::Ontology random_ontology(std::mt19937& rng, const OntologyShape& shape = {}) {
  using namespace ontology;
  Ontology ont("http://gen.test/o" + std::to_string(rng() % 1000));
  if (rng() % 2) ont.set_application_domain("domain " + random_word(rng));
  if (rng() % 3 == 0) ont.set_semantic_depth(random_word(rng));

  auto synonyms = [&] {
    std::set<std::string> s;
    const int n = static_cast<int>(rng() % 3);
    for (int i = 0; i < n; ++i) s.insert(random_word(rng) + (rng() % 2 ? " " + random_word(rng) : ""));
    return s;
  };

  std::vector<ClassId> classes;
  const int n_classes = static_cast<int>(rng() % (shape.max_classes + 1));
  for (int i = 0; i < n_classes; ++i) {
    classes.push_back(ont.declare_class(ont.base_iri() + "#C" + std::to_string(i),
                                        "class " + random_word(rng), synonyms()));
  }
  std::vector<PropertyId> props;
  const int n_props = static_cast<int>(rng() % (shape.max_properties + 1));
  for (int i = 0; i < n_props; ++i) {
    props.push_back(ont.declare_property(ont.base_iri() + "#p" + std::to_string(i),
                                         "prop " + random_word(rng), synonyms()));
  }
  std::vector<IndividualId> inds;
  const int n_inds = static_cast<int>(rng() % (shape.max_individuals + 1));
  for (int i = 0; i < n_inds; ++i) {
    inds.push_back(ont.declare_individual(ont.base_iri() + "#i" + std::to_string(i),
                                          "ind " + random_word(rng)));
  }

  auto any_class = [&] { return classes[rng() % classes.size()]; };
  if (!classes.empty()) {
    const int n_edges = static_cast<int>(rng() % (2 * classes.size() + 1));
    for (int e = 0; e < n_edges; ++e) {
      auto a = rng() % classes.size(), b = rng() % classes.size();
      if (a == b) continue;
      if (!shape.allow_cycles && a < b) std::swap(a, b);  // edges only point to lower indices
      ont.assert_axiom(SubClassOf{classes[a], classes[b]});
    }
    if (rng() % 4 == 0) ont.assert_axiom(SubClassOf{any_class(), thing()});
  }
  if (!props.empty()) {
    for (int e = 0; e < n_props; ++e) {
      const auto a = rng() % props.size(), b = rng() % props.size();
      if (a != b && rng() % 2) ont.assert_axiom(SubPropertyOf{props[a], props[b]});
      if (!classes.empty() && rng() % 2) ont.assert_axiom(Domain{props[a], any_class()});
      if (!classes.empty() && rng() % 2) ont.assert_axiom(Range{props[b], any_class()});
      if (!classes.empty() && rng() % 3 == 0) {
        ont.assert_axiom(MaxCardinality{props[a], any_class(), static_cast<unsigned>(rng() % 2)});
      }
    }
  }
  for (const auto& i : inds) {
    if (!classes.empty() && rng() % 2) ont.assert_axiom(ClassAssertion{i, any_class()});
    if (!props.empty() && rng() % 2) {
      PropertyValue object = rng() % 3 == 0 ? PropertyValue(Literal{random_word(rng) + " \"q\"\n"})
                                            : PropertyValue(inds[rng() % inds.size()]);
      ont.assert_axiom(PropertyAssertion{i, props[rng() % props.size()], object});
    }
  }
  return ont;
}

// Random ontology whose SubClassOf graph certainly contains a cycle.
inline ontology::Ontology cyclic_ontology(std::mt19937& rng) {
  using namespace ontology;
  for (;;) {
    auto ont = random_ontology(rng);
    std::vector<ClassId> classes;
    for (const auto& [c, info] : ont.classes()) classes.push_back(c);
    if (classes.size() < 2) continue;
    const auto n = 2 + rng() % std::min<std::size_t>(4, classes.size() - 1);
    std::shuffle(classes.begin(), classes.end(), rng);
    for (std::size_t i = 0; i < n; ++i) ont.assert_axiom(SubClassOf{classes[i], classes[(i + 1) % n]});
    return ont;
  }
}

}  // namespace semsearch::testing
