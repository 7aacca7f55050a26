#include "cegmine/cpt.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>

#include "cegmine/errors.hpp"

namespace cegmine {

namespace {

using Edge = std::pair<std::string, std::string>;

std::map<std::string, std::vector<std::string>> successors(
    const std::vector<Edge>& edges) {
  std::map<std::string, std::vector<std::string>> succ;
  for (const auto& [a, b] : edges) succ[a].push_back(b);
  return succ;
}

// Depth-first search for any directed cycle; returns it as a node path
// with the entry node repeated at the end.
std::optional<std::vector<std::string>> find_cycle(
    const std::vector<std::string>& relations, const std::vector<Edge>& edges) {
  auto succ = successors(edges);
  std::map<std::string, int> color;  // 0 new, 1 on stack, 2 done
  std::vector<std::string> stack;
  std::optional<std::vector<std::string>> cycle;

  auto dfs = [&](auto&& self, const std::string& node) -> bool {
    color[node] = 1;
    stack.push_back(node);
    for (const auto& next : succ[node]) {
      if (cycle) return true;
      if (color[next] == 1) {
        auto it = std::find(stack.begin(), stack.end(), next);
        cycle = std::vector<std::string>(it, stack.end());
        cycle->push_back(next);
        return true;
      }
      if (color[next] == 0 && self(self, next)) return true;
    }
    stack.pop_back();
    color[node] = 2;
    return false;
  };
  for (const auto& r : relations)
    if (color[r] == 0 && dfs(dfs, r)) break;
  return cycle;
}

std::string join_path(const std::vector<std::string>& path) {
  std::string out;
  for (const auto& n : path) {
    if (!out.empty()) out += " -> ";
    out += n;
  }
  return out;
}

// Nodes reachable from `from` via edges, excluding `from` itself.
std::set<std::string> reachable(
    const std::string& from,
    const std::map<std::string, std::vector<std::string>>& succ) {
  std::set<std::string> seen;
  std::vector<std::string> frontier{from};
  while (!frontier.empty()) {
    std::string node = std::move(frontier.back());
    frontier.pop_back();
    auto it = succ.find(node);
    if (it == succ.end()) continue;
    for (const auto& next : it->second)
      if (seen.insert(next).second) frontier.push_back(next);
  }
  return seen;
}

// Drops edges implied by longer paths, assuming the input is acyclic.
std::vector<Edge> covering_pairs(const std::vector<Edge>& edges,
                                 std::vector<Edge>* removed) {
  std::vector<Edge> kept;
  for (const auto& e : edges) {
    std::vector<Edge> others;
    for (const auto& o : edges)
      if (o != e) others.push_back(o);
    auto succ = successors(others);
    if (reachable(e.first, succ).count(e.second)) {
      if (removed) removed->push_back(e);
    } else {
      kept.push_back(e);
    }
  }
  return kept;
}

void sort_unique(std::vector<std::string>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

void sort_unique(std::vector<Edge>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

bool CausalProcessTemplate::has_relation(const std::string& name) const {
  return std::binary_search(relations.begin(), relations.end(), name);
}

bool CausalProcessTemplate::has_edge(const std::string& from,
                                     const std::string& to) const {
  return std::binary_search(precedes.begin(), precedes.end(),
                            Edge{from, to});
}

CausalProcessTemplate parse_cpt(const CptSpec& spec, const Catalog& catalog,
                                ValidationReport* warnings) {
  CausalProcessTemplate cpt;
  cpt.relations = spec.relations;
  cpt.use_transitive_closure = spec.use_transitive_closure;
  sort_unique(cpt.relations);
  if (cpt.relations.empty())
    throw ConfigError("template names no relations");
  for (const auto& r : cpt.relations)
    if (!catalog.find_schema(r))
      throw ConfigError("template names unknown relation " + r);

  std::vector<Edge> edges = spec.edges;
  sort_unique(edges);
  for (const auto& [a, b] : edges) {
    if (a == b)
      throw ConfigError("template edge " + a + " -> " + b +
                        " violates strict ordering");
    if (!cpt.has_relation(a) || !cpt.has_relation(b))
      throw ConfigError("template edge " + a + " -> " + b +
                        " uses a relation outside the template");
  }

  if (!find_cycle(cpt.relations, edges)) {
    std::vector<Edge> removed;
    cpt.precedes = covering_pairs(edges, &removed);
    sort_unique(cpt.precedes);
    if (warnings)
      for (const auto& [a, b] : removed)
        warnings->add_warning("cpt.transitive-edge",
                              "template edge " + a + " -> " + b +
                                  " is implied by other edges and was dropped");
  } else {
    // Keep the raw edges; validate_cpt reports the cycle.
    cpt.precedes = std::move(edges);
  }
  return cpt;
}

CausalProcessTemplate default_cpt(const Catalog& catalog,
                                  const std::vector<std::string>& relations) {
  CausalProcessTemplate cpt;
  cpt.relations = relations;
  sort_unique(cpt.relations);
  std::vector<Edge> edges;
  for (const auto& fk : catalog.foreign_keys) {
    if (!cpt.has_relation(fk.from_relation) ||
        !cpt.has_relation(fk.to_relation))
      continue;
    if (fk.from_relation == fk.to_relation) continue;
    // Referenced rows must exist first, so they precede referencing rows.
    edges.emplace_back(fk.to_relation, fk.from_relation);
  }
  sort_unique(edges);
  if (!find_cycle(cpt.relations, edges))
    edges = covering_pairs(edges, nullptr);
  sort_unique(edges);
  cpt.precedes = std::move(edges);
  return cpt;
}

ValidationReport validate_cpt(const CausalProcessTemplate& cpt,
                              const Catalog& catalog) {
  ValidationReport report;
  for (const auto& r : cpt.relations) {
    const RelationSchema* s = catalog.find_schema(r);
    if (!s) {
      report.add_error("cpt.unknown-relation",
                       "template names unknown relation " + r);
      continue;
    }
    if (s->timestamp_attr.empty() || !s->find_attr(s->timestamp_attr))
      report.add_error("cpt.no-timestamp",
                       "relation " + r + " has no timestamp attribute");
  }
  for (const auto& [a, b] : cpt.precedes) {
    if (a == b)
      report.add_error("cpt.self-edge",
                       "edge " + a + " -> " + b + " violates strict ordering");
    if (!cpt.has_relation(a) || !cpt.has_relation(b))
      report.add_error("cpt.edge-outside-template",
                       "edge " + a + " -> " + b +
                           " uses a relation outside the template");
  }

  if (auto cycle = find_cycle(cpt.relations, cpt.precedes))
    report.add_error("cpt.cycle", "template is cyclic: " + join_path(*cycle));

  // Edges may rewire causality away from the key structure, but flag the
  // ones with no direct foreign key behind them.
  for (const auto& [a, b] : cpt.precedes) {
    bool backed = false;
    for (const auto& fk : catalog.foreign_keys) {
      if ((fk.from_relation == a && fk.to_relation == b) ||
          (fk.from_relation == b && fk.to_relation == a)) {
        backed = true;
        break;
      }
    }
    if (!backed)
      report.add_warning("cpt.edge-without-fk",
                         "edge " + a + " -> " + b +
                             " has no direct foreign key behind it");
  }

  // Undirected connectivity: events of relations outside the component of
  // the first relation can never join the same graph fragment.
  if (cpt.relations.size() > 1) {
    std::map<std::string, std::vector<std::string>> adj;
    for (const auto& [a, b] : cpt.precedes) {
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    std::set<std::string> seen;
    std::vector<std::string> frontier{cpt.relations.front()};
    seen.insert(cpt.relations.front());
    while (!frontier.empty()) {
      std::string node = std::move(frontier.back());
      frontier.pop_back();
      for (const auto& next : adj[node])
        if (seen.insert(next).second) frontier.push_back(next);
    }
    for (const auto& r : cpt.relations)
      if (!seen.count(r))
        report.add_warning("cpt.disconnected",
                           "relation " + r +
                               " is not connected to the rest of the template");
  }

  // Causally ordered relations with one label would aggregate into a
  // self-loop, which the aggregate graph cannot represent.
  {
    auto succ = successors(cpt.precedes);
    for (const auto& a : cpt.relations) {
      const RelationSchema* sa = catalog.find_schema(a);
      if (!sa) continue;
      for (const auto& b : reachable(a, succ)) {
        const RelationSchema* sb = catalog.find_schema(b);
        if (sb && sa->label == sb->label)
          report.add_warning("cpt.label-collision",
                             "causally ordered relations " + a + " and " + b +
                                 " share the label \"" + sa->label +
                                 "\"; aggregation will reject this template");
      }
    }
  }
  return report;
}

std::vector<std::string> topo_order(const CausalProcessTemplate& cpt) {
  std::map<std::string, std::size_t> indegree;
  for (const auto& r : cpt.relations) indegree[r] = 0;
  auto succ = successors(cpt.precedes);
  for (const auto& [a, b] : cpt.precedes) ++indegree[b];

  std::set<std::string> ready;
  for (const auto& [r, d] : indegree)
    if (d == 0) ready.insert(r);
  std::vector<std::string> order;
  while (!ready.empty()) {
    std::string node = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(node);
    for (const auto& next : succ[node])
      if (--indegree[next] == 0) ready.insert(next);
  }
  if (order.size() != cpt.relations.size()) {
    auto cycle = find_cycle(cpt.relations, cpt.precedes);
    throw ValidationError("template is cyclic: " +
                          (cycle ? join_path(*cycle) : std::string("?")));
  }
  return order;
}

std::vector<std::pair<std::string, std::string>> effective_pairs(
    const CausalProcessTemplate& cpt) {
  if (!cpt.use_transitive_closure) return cpt.precedes;
  auto succ = successors(cpt.precedes);
  std::vector<Edge> pairs;
  for (const auto& a : cpt.relations)
    for (const auto& b : reachable(a, succ)) pairs.emplace_back(a, b);
  sort_unique(pairs);
  return pairs;
}

}  // namespace cegmine
