#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cegmine/catalog.hpp"
#include "cegmine/validation.hpp"

namespace cegmine {

// A causal process template is a strict partial order over relations: it
// names the relations taking part in graph construction and the direct
// (covering) causal precedences between them. Only covering pairs are
// stored; use_transitive_closure switches edge generation to the full
// order for experiments.
struct CausalProcessTemplate {
  std::vector<std::string> relations;                         // sorted
  std::vector<std::pair<std::string, std::string>> precedes;  // covering, sorted
  bool use_transitive_closure = false;

  bool has_relation(const std::string& name) const;
  bool has_edge(const std::string& from, const std::string& to) const;
};

struct CptSpec {
  std::vector<std::string> relations;
  std::vector<std::pair<std::string, std::string>> edges;
  bool use_transitive_closure = false;
};

// Builds a template from its declarative spec. Unknown relation names and
// self-edges are ConfigErrors. Transitive edges of an acyclic input are
// dropped with a warning (appended to *warnings when given); cycles are
// left for validate_cpt to report.
CausalProcessTemplate parse_cpt(const CptSpec& spec, const Catalog& catalog,
                                ValidationReport* warnings = nullptr);

// Fallback template derived from foreign keys: referenced relations
// precede referencing ones (row creation order), restricted to the given
// relations, reduced to covering pairs.
CausalProcessTemplate default_cpt(const Catalog& catalog,
                                  const std::vector<std::string>& relations);

// Reports cycles, relations without timestamp attributes, edges between
// relations that share no direct foreign key (warning: templates may
// deliberately rewire causality), disconnected relations (warning), and
// label collisions between causally ordered relations (warning; such
// templates cannot be aggregated).
ValidationReport validate_cpt(const CausalProcessTemplate& cpt,
                              const Catalog& catalog);

// Deterministic topological order (lexicographic tie-break).
// Throws ValidationError if the edges contain a cycle.
std::vector<std::string> topo_order(const CausalProcessTemplate& cpt);

// The ordered pairs used for edge generation: covering pairs, or the
// transitive closure when the template asks for it.
std::vector<std::pair<std::string, std::string>> effective_pairs(
    const CausalProcessTemplate& cpt);

}  // namespace cegmine
