#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cegmine/catalog.hpp"
#include "cegmine/cpt.hpp"

namespace cegmine {

using EventIndex = std::uint32_t;
using EventEdge = std::pair<EventIndex, EventIndex>;

// One event per row that took part in a join tuple. Identity is the
// namespaced pair (relation, key); the display id is "relation:key".
struct Event {
  std::uint32_t relation = 0;  // index into CausalEventDatabase::relations()
  std::string key;
  std::int64_t timestamp = 0;
};

struct RelationInfo {
  std::string name;
  std::string label;  // event-type label
};

// The events of one join tuple plus the key of the join root, when the
// tuple carried one.
struct Fragment {
  std::vector<EventIndex> events;  // sorted
  std::string root_key;
};

enum class ViewKind { fragment, component, case_projection };

// A subgraph of the database: an event subset with the edges induced on
// it. Fragments, connected components and case projections are all views.
struct CegView {
  ViewKind kind = ViewKind::fragment;
  std::string id;  // root key for projections, ordinal otherwise
  std::vector<EventIndex> events;  // sorted
  std::vector<EventEdge> edges;    // sorted

  bool contains(EventIndex e) const;
};

// Union of all fragment graphs built from the join tuples. Events and
// edges are deduplicated, so submitting a tuple twice changes nothing.
// Event and edge order is canonical (relation name, then key), which
// makes every derived artifact independent of input row order.
class CausalEventDatabase {
 public:
  static CausalEventDatabase build(
      const std::vector<CausallyConnectedTuple>& tuples,
      const CausalProcessTemplate& cpt, const Catalog& catalog,
      const std::map<std::string, RelationInstance>& instances,
      const std::string& root_relation);

  // Reassembles a database from previously exported parts; shares the
  // canonicalization and index construction with build().
  static CausalEventDatabase from_parts(std::vector<RelationInfo> relations,
                                        std::vector<Event> events,
                                        std::vector<EventEdge> edges,
                                        std::vector<Fragment> fragments,
                                        std::string root_relation);

  std::size_t event_count() const { return events_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t fragment_count() const { return fragments_.size(); }

  const std::vector<RelationInfo>& relations() const { return relations_; }
  const std::vector<Event>& events() const { return events_; }
  const std::vector<EventEdge>& edges() const { return edges_; }
  const std::vector<Fragment>& fragment_records() const { return fragments_; }
  const std::string& root_relation() const { return root_relation_; }

  const Event& event(EventIndex e) const { return events_[e]; }
  std::string event_id(EventIndex e) const;
  const std::string& type_of(EventIndex e) const;
  const std::string& relation_of(EventIndex e) const;
  std::int64_t timestamp_of(EventIndex e) const {
    return events_[e].timestamp;
  }

  std::optional<EventIndex> find_event(const std::string& relation,
                                       const std::string& key) const;
  std::span<const EventIndex> out_neighbors(EventIndex e) const;
  std::span<const EventIndex> in_neighbors(EventIndex e) const;
  // Fragment ordinals the event belongs to, ascending.
  std::span<const std::uint32_t> fragments_of(EventIndex e) const;

 private:
  std::vector<RelationInfo> relations_;
  std::vector<Event> events_;
  std::vector<EventEdge> edges_;
  std::vector<Fragment> fragments_;
  std::string root_relation_;

  // Compressed adjacency and fragment membership.
  std::vector<std::uint32_t> out_offsets_, in_offsets_, member_offsets_;
  std::vector<EventIndex> out_targets_, in_sources_;
  std::vector<std::uint32_t> member_fragments_;

  void finalize();  // sorts, dedups, builds indexes, checks acyclicity
};

// Graph of a single tuple: one event per pk pair, one edge per template
// pair present in the tuple.
CausalEventDatabase build_fragment(
    const CausallyConnectedTuple& tuple, const CausalProcessTemplate& cpt,
    const Catalog& catalog,
    const std::map<std::string, RelationInstance>& instances,
    const std::string& root_relation);

// Views, each deterministic and carrying induced edges.
std::vector<CegView> fragments(const CausalEventDatabase& db);
std::vector<CegView> components(const CausalEventDatabase& db);

// One view per distinct key of root_relation: the union of all fragments
// carrying that key. Events shared across keys appear in several views.
std::vector<CegView> case_projections(const CausalEventDatabase& db,
                                      const std::string& root_relation);

// Direct causes and effects, against the whole database or within a view.
std::vector<EventIndex> preset(const CausalEventDatabase& db, EventIndex e);
std::vector<EventIndex> postset(const CausalEventDatabase& db, EventIndex e);
std::vector<EventIndex> preset(const CausalEventDatabase& db,
                               const CegView& view, EventIndex e);
std::vector<EventIndex> postset(const CausalEventDatabase& db,
                                const CegView& view, EventIndex e);

// Events belonging to fragments of at least two distinct root keys, i.e.
// work shared across cases.
std::vector<EventIndex> batching_events(const CausalEventDatabase& db);

// Waiting time before e: t(e) minus the latest cause timestamp not after
// t(e); zero for events without such a cause.
std::int64_t cycle_time(const CausalEventDatabase& db, EventIndex e);
std::int64_t cycle_time(const CausalEventDatabase& db, const CegView& view,
                        EventIndex e);

}  // namespace cegmine
