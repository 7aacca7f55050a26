#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "cegmine/ceg.hpp"

namespace cegmine {

struct CardRange {
  std::uint64_t min = 0;
  std::uint64_t max = 0;

  bool operator==(const CardRange&) const = default;
};

struct AcegEdge {
  std::string from, to;        // event-type labels
  std::uint64_t quantity = 0;  // distinct event edges behind this type edge
  CardRange in;   // incoming-edge count range over events of type `to`
  CardRange out;  // outgoing-edge count range over events of type `from`
};

// Type-level summary of one or more views. Types are identified by their
// label; node quantities count distinct events, edge quantities distinct
// event edges, and the cardinality ranges aggregate per-event degrees
// across every contributing view.
struct AggregatedCeg {
  std::vector<std::string> types;  // sorted
  std::map<std::string, std::uint64_t> node_quantity;
  std::vector<AcegEdge> edges;  // sorted by (from, to)
  std::vector<std::string> source_views;

  const AcegEdge* find_edge(const std::string& from,
                            const std::string& to) const;
  std::uint64_t quantity_of(const std::string& type) const;
  bool has_type(const std::string& type) const;
};

// Counting primitives over an explicit event or edge collection.
std::uint64_t type_quantity(const CausalEventDatabase& db,
                            std::span<const EventIndex> events,
                            const std::string& label);
std::uint64_t edge_quantity(const CausalEventDatabase& db,
                            std::span<const EventEdge> edges,
                            const std::string& from, const std::string& to);
// Edges from v to events labelled `to`, respectively into w from events
// labelled `from`, within the given edge collection.
std::uint64_t out_degree(const CausalEventDatabase& db, EventIndex v,
                         const std::string& to,
                         std::span<const EventEdge> edges);
std::uint64_t in_degree(const CausalEventDatabase& db, const std::string& from,
                        EventIndex w, std::span<const EventEdge> edges);
// Degree ranges across all events of the source (out) or target (in) type
// in the view. Throws std::invalid_argument when the view has no event of
// that type.
CardRange min_max_out(const CausalEventDatabase& db, const CegView& view,
                      const std::string& from, const std::string& to);
CardRange min_max_in(const CausalEventDatabase& db, const CegView& view,
                     const std::string& from, const std::string& to);

// Level 1: one aggregate per view.
AggregatedCeg aggregate_level1(const CausalEventDatabase& db,
                               const CegView& view);

// Same types and same type edges; quantities and cardinalities may differ.
bool structurally_equal(const AggregatedCeg& a, const AggregatedCeg& b);

// Level 2: one aggregate per class of structurally equal level-1 results,
// in a deterministic class order.
std::vector<AggregatedCeg> aggregate_level2(const CausalEventDatabase& db,
                                            std::span<const CegView> views);

// Level 3: every view merged into a single aggregate.
AggregatedCeg aggregate_level3(const CausalEventDatabase& db,
                               std::span<const CegView> views);

}  // namespace cegmine
