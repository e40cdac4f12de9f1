#include "semsearch/reasoner/reasoner.h"

#include <algorithm>
#include <deque>
#include <functional>
#include <variant>

namespace semsearch::reasoner {

namespace {

std::string summarize(const ontology::ConformanceReport& report) {
  std::string out = "ontology failed validation:";
  for (const auto& v : report.violations) {
    out += " [" + std::string(ontology::to_string(v.kind)) + "] " + v.subject + ";";
  }
  return out;
}

// Tarjan's strongly connected components on nodes 0..n-1.
std::vector<int> scc_ids(const std::vector<std::vector<int>>& adj) {
  const int n = static_cast<int>(adj.size());
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1), stack;
  std::vector<bool> on_stack(n, false);
  int next_index = 0, next_comp = 0;
  std::function<void(int)> visit = [&](int v) {
    index[v] = low[v] = next_index++;
    stack.push_back(v);
    on_stack[v] = true;
    for (int w : adj[v]) {
      if (index[w] < 0) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      int w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp[w] = next_comp;
      } while (w != v);
      ++next_comp;
    }
  };
  for (int v = 0; v < n; ++v) {
    if (index[v] < 0) visit(v);
  }
  return comp;
}

std::vector<bool> reachable_from(const std::vector<std::vector<int>>& adj, int start) {
  std::vector<bool> seen(adj.size(), false);
  std::deque<int> queue{start};
  seen[start] = true;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int w : adj[v]) {
      if (!seen[w]) {
        seen[w] = true;
        queue.push_back(w);
      }
    }
  }
  return seen;
}

template <typename Id>
std::set<std::pair<Id, Id>> reflexive_transitive(const std::vector<Id>& nodes,
                                                 const std::vector<std::pair<Id, Id>>& edges) {
  std::map<Id, int> at;
  for (std::size_t i = 0; i < nodes.size(); ++i) at[nodes[i]] = static_cast<int>(i);
  std::vector<std::vector<int>> adj(nodes.size());
  for (const auto& [a, b] : edges) adj[at.at(a)].push_back(at.at(b));
  std::set<std::pair<Id, Id>> out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto seen = reachable_from(adj, static_cast<int>(i));
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      if (seen[j]) out.emplace(nodes[i], nodes[j]);
    }
  }
  return out;
}

std::map<GroupIndex, unsigned> bfs_groups(GroupIndex start,
                                          const std::map<GroupIndex, std::set<GroupIndex>>& next) {
  std::map<GroupIndex, unsigned> dist{{start, 0}};
  std::deque<GroupIndex> queue{start};
  while (!queue.empty()) {
    const auto g = queue.front();
    queue.pop_front();
    const auto it = next.find(g);
    if (it == next.end()) continue;
    for (auto n : it->second) {
      if (!dist.contains(n)) {
        dist[n] = dist[g] + 1;
        queue.push_back(n);
      }
    }
  }
  return dist;
}

std::string group_text(const Ontology& ont, const std::vector<ClassId>& members) {
  if (members.size() == 1) return ont.class_label(members[0]);
  std::string out = "[";
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (i) out += " = ";
    out += ont.class_label(members[i]);
  }
  return out + "]";
}

nlohmann::json assertion_json(const ClassAssertion& a) {
  return {{"individual", a.individual.iri}, {"class", a.cls.iri}};
}

}  // namespace

InvalidOntology::InvalidOntology(ontology::ConformanceReport report)
    : Error(summarize(report)), report_(std::move(report)) {}

GroupIndex InferredHierarchy::group(const ClassId& c) const {
  const auto it = group_of.find(c);
  if (it == group_of.end()) throw UnknownClass(c.iri);
  return it->second;
}

std::set<ClassId> InferredHierarchy::direct_parent_classes(const ClassId& c) const {
  std::set<ClassId> out;
  for (auto g : direct_parents.at(group(c))) {
    out.insert(equiv_groups[g].begin(), equiv_groups[g].end());
  }
  return out;
}

std::vector<GroupIndex> InferredHierarchy::child_groups(GroupIndex g) const {
  std::vector<GroupIndex> out;
  for (const auto& [child, parents] : direct_parents) {
    if (parents.contains(g)) out.push_back(child);
  }
  return out;
}

InferredHierarchy classify(const Ontology& ont) {
  auto report = ontology::validate(ont);
  if (!report.ok()) throw InvalidOntology(std::move(report));

  InferredHierarchy h;
  for (const auto& [c, info] : ont.classes()) h.classes.push_back(c);
  h.classes.push_back(ontology::thing());
  std::sort(h.classes.begin(), h.classes.end());

  std::map<ClassId, int> at;
  for (std::size_t i = 0; i < h.classes.size(); ++i) at[h.classes[i]] = static_cast<int>(i);
  std::vector<std::vector<int>> adj(h.classes.size());
  std::vector<std::pair<ClassId, ClassId>> class_edges;
  std::vector<std::pair<PropertyId, PropertyId>> property_edges;
  for (const auto& axiom : ont.axioms()) {
    if (const auto* s = std::get_if<ontology::SubClassOf>(&axiom)) {
      adj[at.at(s->sub)].push_back(at.at(s->sup));
      class_edges.emplace_back(s->sub, s->sup);
    } else if (const auto* p = std::get_if<ontology::SubPropertyOf>(&axiom)) {
      property_edges.emplace_back(p->sub, p->sup);
    }
  }

  h.closure = reflexive_transitive(h.classes, class_edges);
  for (const auto& c : h.classes) h.closure.emplace(c, ontology::thing());

  // Components come out of Tarjan in arbitrary order; renumber by smallest
  // member so group indices are deterministic.
  const auto comp = scc_ids(adj);
  std::map<int, std::vector<ClassId>> members;
  for (std::size_t i = 0; i < h.classes.size(); ++i) members[comp[i]].push_back(h.classes[i]);
  for (auto& [id, list] : members) h.equiv_groups.push_back(std::move(list));
  std::sort(h.equiv_groups.begin(), h.equiv_groups.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  for (GroupIndex g = 0; g < h.equiv_groups.size(); ++g) {
    for (const auto& c : h.equiv_groups[g]) h.group_of[c] = g;
  }

  const auto n_groups = h.equiv_groups.size();
  const GroupIndex thing_g = h.group_of.at(ontology::thing());
  std::vector<std::set<GroupIndex>> strict_up(n_groups);
  for (const auto& [a, b] : h.closure) {
    const auto ga = h.group_of.at(a), gb = h.group_of.at(b);
    if (ga != gb) strict_up[ga].insert(gb);
  }
  for (GroupIndex g = 0; g < n_groups; ++g) {
    auto& parents = h.direct_parents[g];
    for (auto p : strict_up[g]) {
      const bool shadowed = std::any_of(strict_up[g].begin(), strict_up[g].end(), [&](GroupIndex q) {
        return q != p && strict_up[q].contains(p);
      });
      if (!shadowed) parents.insert(p);
    }
  }

  for (const auto& [a, b] : class_edges) {
    const auto ga = h.group_of.at(a), gb = h.group_of.at(b);
    if (ga != gb) h.asserted_parents[ga].insert(gb);
  }
  for (GroupIndex g = 0; g < n_groups; ++g) {
    if (g != thing_g && h.asserted_parents[g].empty()) h.asserted_parents[g].insert(thing_g);
  }

  std::vector<PropertyId> props;
  for (const auto& [p, info] : ont.properties()) props.push_back(p);
  h.property_closure = reflexive_transitive(props, property_edges);
  return h;
}

bool is_subsumed(const InferredHierarchy& h, const ClassId& sub, const ClassId& sup) {
  if (!h.knows(sub)) throw UnknownClass(sub.iri);
  if (!h.knows(sup)) throw UnknownClass(sup.iri);
  return h.closure.contains({sub, sup});
}

std::map<ClassId, unsigned> subsumees_with_distance(const InferredHierarchy& h, const ClassId& c) {
  std::map<GroupIndex, std::set<GroupIndex>> down;
  for (const auto& [g, parents] : h.asserted_parents) {
    for (auto p : parents) down[p].insert(g);
  }
  std::map<ClassId, unsigned> out;
  for (const auto& [g, d] : bfs_groups(h.group(c), down)) {
    for (const auto& x : h.equiv_groups[g]) out[x] = d;
  }
  return out;
}

std::map<ClassId, unsigned> subsumers_with_distance(const InferredHierarchy& h, const ClassId& c) {
  std::map<ClassId, unsigned> out;
  for (const auto& [g, d] : bfs_groups(h.group(c), h.asserted_parents)) {
    for (const auto& y : h.equiv_groups[g]) {
      if (!ontology::is_thing(y)) out[y] = d;
    }
  }
  return out;
}

std::vector<ClassAssertion> infer_types(const Ontology& ont, const InferredHierarchy& h) {
  std::map<PropertyId, std::set<ClassId>> domains, ranges;
  std::set<ClassAssertion> asserted;
  for (const auto& axiom : ont.axioms()) {
    if (const auto* d = std::get_if<ontology::Domain>(&axiom)) domains[d->property].insert(d->cls);
    if (const auto* r = std::get_if<ontology::Range>(&axiom)) ranges[r->property].insert(r->cls);
    if (const auto* a = std::get_if<ClassAssertion>(&axiom)) asserted.insert(*a);
  }

  std::set<ClassAssertion> inferred;
  auto add_upward = [&](const IndividualId& i, const ClassId& c) {
    for (const auto& [sub, sup] : h.closure) {
      if (sub == c && !ontology::is_thing(sup)) inferred.insert({i, sup});
    }
  };
  for (const auto& axiom : ont.axioms()) {
    const auto* pa = std::get_if<ontology::PropertyAssertion>(&axiom);
    if (!pa) continue;
    for (const auto& [sub, sup] : h.property_closure) {
      if (sub != pa->property) continue;
      if (const auto it = domains.find(sup); it != domains.end()) {
        for (const auto& c : it->second) add_upward(pa->subject, c);
      }
      const auto* object = std::get_if<IndividualId>(&pa->object);
      if (!object) continue;
      if (const auto it = ranges.find(sup); it != ranges.end()) {
        for (const auto& c : it->second) add_upward(*object, c);
      }
    }
  }
  std::vector<ClassAssertion> out;
  for (const auto& a : inferred) {
    if (!asserted.contains(a)) out.push_back(a);
  }
  return out;
}

std::string_view to_string(ConsistencyViolation::Kind kind) {
  return kind == ConsistencyViolation::Kind::Cardinality ? "cardinality" : "redundancy";
}

bool ConsistencyReport::consistent() const {
  return std::none_of(violations.begin(), violations.end(), [](const ConsistencyViolation& v) {
    return v.kind == ConsistencyViolation::Kind::Cardinality;
  });
}

ConsistencyReport check_consistency(const Ontology& ont, const InferredHierarchy& h) {
  ConsistencyReport report;
  report.inferred_assertions = infer_types(ont, h);

  std::map<IndividualId, std::set<ClassId>> members;
  auto add_member = [&](const IndividualId& i, const ClassId& c) {
    for (const auto& [sub, sup] : h.closure) {
      if (sub == c) members[i].insert(sup);
    }
  };
  for (const auto& [i, info] : ont.individuals()) members[i].insert(ontology::thing());
  for (const auto& axiom : ont.axioms()) {
    if (const auto* a = std::get_if<ClassAssertion>(&axiom)) add_member(a->individual, a->cls);
  }
  for (const auto& a : report.inferred_assertions) add_member(a.individual, a.cls);

  for (const auto& axiom : ont.axioms()) {
    const auto* mc = std::get_if<ontology::MaxCardinality>(&axiom);
    if (!mc) continue;
    for (const auto& [individual, classes] : members) {
      if (!classes.contains(mc->cls)) continue;
      std::set<ontology::PropertyValue> objects;
      for (const auto& other : ont.axioms()) {
        const auto* pa = std::get_if<ontology::PropertyAssertion>(&other);
        if (pa && pa->subject == individual && h.property_closure.contains({pa->property, mc->property})) {
          objects.insert(pa->object);
        }
      }
      if (objects.size() > mc->n) {
        report.violations.push_back(
            {ConsistencyViolation::Kind::Cardinality,
             {individual.iri, mc->property.iri, mc->cls.iri},
             individual.iri + " has " + std::to_string(objects.size()) + " distinct values for " +
                 mc->property.iri + " but " + mc->cls.iri + " allows at most " +
                 std::to_string(mc->n)});
      }
    }
  }

  std::vector<ontology::SubClassOf> edges;
  for (const auto& axiom : ont.axioms()) {
    if (const auto* s = std::get_if<ontology::SubClassOf>(&axiom)) edges.push_back(*s);
  }
  for (std::size_t skip = 0; skip < edges.size(); ++skip) {
    std::set<ClassId> seen{edges[skip].sub};
    std::deque<ClassId> queue{edges[skip].sub};
    while (!queue.empty()) {
      const auto c = queue.front();
      queue.pop_front();
      for (std::size_t e = 0; e < edges.size(); ++e) {
        if (e != skip && edges[e].sub == c && seen.insert(edges[e].sup).second) {
          queue.push_back(edges[e].sup);
        }
      }
    }
    if (seen.contains(edges[skip].sup)) {
      report.violations.push_back({ConsistencyViolation::Kind::Redundancy,
                                   {edges[skip].sub.iri, edges[skip].sup.iri},
                                   "asserted " + ontology::describe(edges[skip]) +
                                       " is already implied by other axioms"});
    }
  }
  return report;
}

std::string render_tree(const Ontology& ont, const InferredHierarchy& h) {
  std::string out;
  std::function<void(GroupIndex, int)> walk = [&](GroupIndex g, int depth) {
    out += std::string(2 * depth, ' ') + group_text(ont, h.equiv_groups[g]) + "\n";
    for (auto child : h.child_groups(g)) walk(child, depth + 1);
  };
  walk(h.thing_group(), 0);
  return out;
}

nlohmann::json hierarchy_tree_json(const Ontology& ont, const InferredHierarchy& h) {
  std::function<nlohmann::json(GroupIndex)> node = [&](GroupIndex g) {
    nlohmann::json iris = nlohmann::json::array(), labels = nlohmann::json::array();
    for (const auto& c : h.equiv_groups[g]) {
      iris.push_back(c.iri);
      labels.push_back(ont.class_label(c));
    }
    nlohmann::json children = nlohmann::json::array();
    for (auto child : h.child_groups(g)) children.push_back(node(child));
    return nlohmann::json{{"iris", iris}, {"labels", labels}, {"children", children}};
  };
  return node(h.thing_group());
}

nlohmann::json hierarchy_json(const Ontology& ont, const InferredHierarchy& h) {
  nlohmann::json closure = nlohmann::json::array();
  for (const auto& [sub, sup] : h.closure) closure.push_back({sub.iri, sup.iri});
  nlohmann::json groups = nlohmann::json::array();
  for (const auto& g : h.equiv_groups) {
    nlohmann::json members = nlohmann::json::array();
    for (const auto& c : g) members.push_back(c.iri);
    groups.push_back(members);
  }
  nlohmann::json parents = nlohmann::json::object();
  for (const auto& c : h.classes) {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& p : h.direct_parent_classes(c)) list.push_back(p.iri);
    parents[c.iri] = list;
  }
  nlohmann::json props = nlohmann::json::array();
  for (const auto& [sub, sup] : h.property_closure) props.push_back({sub.iri, sup.iri});
  return {{"format", 1},
          {"closure", closure},
          {"equiv_groups", groups},
          {"direct_parents", parents},
          {"property_closure", props},
          {"tree", hierarchy_tree_json(ont, h)}};
}

nlohmann::json report_json(const ConsistencyReport& report) {
  nlohmann::json violations = nlohmann::json::array();
  for (const auto& v : report.violations) {
    violations.push_back(
        {{"kind", to_string(v.kind)}, {"subjects", v.subjects}, {"explanation", v.explanation}});
  }
  nlohmann::json inferred = nlohmann::json::array();
  for (const auto& a : report.inferred_assertions) inferred.push_back(assertion_json(a));
  return {{"consistent", report.consistent()},
          {"violations", violations},
          {"inferred_assertions", inferred}};
}

}  // namespace semsearch::reasoner
