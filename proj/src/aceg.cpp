#include "cegmine/aceg.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <stdexcept>

#include "cegmine/errors.hpp"

namespace cegmine {

const AcegEdge* AggregatedCeg::find_edge(const std::string& from,
                                         const std::string& to) const {
  for (const auto& e : edges)
    if (e.from == from && e.to == to) return &e;
  return nullptr;
}

std::uint64_t AggregatedCeg::quantity_of(const std::string& type) const {
  auto it = node_quantity.find(type);
  return it == node_quantity.end() ? 0 : it->second;
}

bool AggregatedCeg::has_type(const std::string& type) const {
  return std::binary_search(types.begin(), types.end(), type);
}

std::uint64_t type_quantity(const CausalEventDatabase& db,
                            std::span<const EventIndex> events,
                            const std::string& label) {
  std::uint64_t n = 0;
  for (EventIndex e : events)
    if (db.type_of(e) == label) ++n;
  return n;
}

std::uint64_t edge_quantity(const CausalEventDatabase& db,
                            std::span<const EventEdge> edges,
                            const std::string& from, const std::string& to) {
  std::uint64_t n = 0;
  for (const auto& [s, t] : edges)
    if (db.type_of(s) == from && db.type_of(t) == to) ++n;
  return n;
}

std::uint64_t out_degree(const CausalEventDatabase& db, EventIndex v,
                         const std::string& to,
                         std::span<const EventEdge> edges) {
  std::uint64_t n = 0;
  for (const auto& [s, t] : edges)
    if (s == v && db.type_of(t) == to) ++n;
  return n;
}

std::uint64_t in_degree(const CausalEventDatabase& db, const std::string& from,
                        EventIndex w, std::span<const EventEdge> edges) {
  std::uint64_t n = 0;
  for (const auto& [s, t] : edges)
    if (t == w && db.type_of(s) == from) ++n;
  return n;
}

CardRange min_max_out(const CausalEventDatabase& db, const CegView& view,
                      const std::string& from, const std::string& to) {
  CardRange r{std::numeric_limits<std::uint64_t>::max(), 0};
  bool any = false;
  for (EventIndex e : view.events) {
    if (db.type_of(e) != from) continue;
    any = true;
    std::uint64_t d = out_degree(db, e, to, view.edges);
    r.min = std::min(r.min, d);
    r.max = std::max(r.max, d);
  }
  if (!any)
    throw std::invalid_argument("view has no event of type " + from);
  return r;
}

CardRange min_max_in(const CausalEventDatabase& db, const CegView& view,
                     const std::string& from, const std::string& to) {
  CardRange r{std::numeric_limits<std::uint64_t>::max(), 0};
  bool any = false;
  for (EventIndex e : view.events) {
    if (db.type_of(e) != to) continue;
    any = true;
    std::uint64_t d = in_degree(db, from, e, view.edges);
    r.min = std::min(r.min, d);
    r.max = std::max(r.max, d);
  }
  if (!any)
    throw std::invalid_argument("view has no event of type " + to);
  return r;
}

namespace {

// Shared merge core. Quantities count the distinct union of events and
// edges, so a shared event contributes once no matter how many views hold
// it. Cardinality ranges aggregate per-event degrees view by view: each
// view reports the degree of every event it holds of the relevant type,
// including degree zero, and the range spans all reports.
AggregatedCeg merge_views(const CausalEventDatabase& db,
                          std::span<const CegView* const> views) {
  AggregatedCeg out;

  std::vector<EventIndex> union_events;
  std::vector<EventEdge> union_edges;
  for (const CegView* v : views) {
    union_events.insert(union_events.end(), v->events.begin(),
                        v->events.end());
    union_edges.insert(union_edges.end(), v->edges.begin(), v->edges.end());
    out.source_views.push_back(v->id);
  }
  std::sort(union_events.begin(), union_events.end());
  union_events.erase(std::unique(union_events.begin(), union_events.end()),
                     union_events.end());
  std::sort(union_edges.begin(), union_edges.end());
  union_edges.erase(std::unique(union_edges.begin(), union_edges.end()),
                    union_edges.end());

  for (EventIndex e : union_events) ++out.node_quantity[db.type_of(e)];
  for (const auto& [type, q] : out.node_quantity) out.types.push_back(type);

  std::map<std::pair<std::string, std::string>, std::uint64_t> edge_qty;
  for (const auto& [s, t] : union_edges) {
    const std::string& from = db.type_of(s);
    const std::string& to = db.type_of(t);
    if (from == to)
      throw ValidationError(
          "cannot aggregate: causally ordered events share the type \"" +
          from + "\", which would form a self-loop");
    ++edge_qty[{from, to}];
  }

  for (const auto& [pair, q] : edge_qty) {
    AcegEdge e;
    e.from = pair.first;
    e.to = pair.second;
    e.quantity = q;
    e.in = {std::numeric_limits<std::uint64_t>::max(), 0};
    e.out = {std::numeric_limits<std::uint64_t>::max(), 0};
    out.edges.push_back(std::move(e));
  }

  // Per-view degree reports.
  std::map<EventIndex, std::map<std::string, std::uint64_t>> out_counts,
      in_counts;
  for (const CegView* v : views) {
    out_counts.clear();
    in_counts.clear();
    for (const auto& [s, t] : v->edges) {
      ++out_counts[s][db.type_of(t)];
      ++in_counts[t][db.type_of(s)];
    }
    for (EventIndex e : v->events) {
      const std::string& type = db.type_of(e);
      auto oc = out_counts.find(e);
      auto ic = in_counts.find(e);
      for (auto& edge : out.edges) {
        if (edge.from == type) {
          std::uint64_t d = 0;
          if (oc != out_counts.end()) {
            auto it = oc->second.find(edge.to);
            if (it != oc->second.end()) d = it->second;
          }
          edge.out.min = std::min(edge.out.min, d);
          edge.out.max = std::max(edge.out.max, d);
        }
        if (edge.to == type) {
          std::uint64_t d = 0;
          if (ic != in_counts.end()) {
            auto it = ic->second.find(edge.from);
            if (it != ic->second.end()) d = it->second;
          }
          edge.in.min = std::min(edge.in.min, d);
          edge.in.max = std::max(edge.in.max, d);
        }
      }
    }
  }
  // Every witnessed type edge has at least one typed event on each side,
  // so the sentinels are always overwritten.
  return out;
}

}  // namespace

AggregatedCeg aggregate_level1(const CausalEventDatabase& db,
                               const CegView& view) {
  const CegView* p = &view;
  return merge_views(db, {&p, 1});
}

bool structurally_equal(const AggregatedCeg& a, const AggregatedCeg& b) {
  if (a.types != b.types) return false;
  if (a.edges.size() != b.edges.size()) return false;
  for (std::size_t i = 0; i < a.edges.size(); ++i)
    if (a.edges[i].from != b.edges[i].from || a.edges[i].to != b.edges[i].to)
      return false;
  return true;
}

std::vector<AggregatedCeg> aggregate_level2(const CausalEventDatabase& db,
                                            std::span<const CegView> views) {
  using Key = std::pair<std::vector<std::string>,
                        std::vector<std::pair<std::string, std::string>>>;
  std::map<Key, std::vector<const CegView*>> classes;
  for (const CegView& v : views) {
    Key key;
    std::set<std::string> types;
    std::set<std::pair<std::string, std::string>> pairs;
    for (EventIndex e : v.events) types.insert(db.type_of(e));
    for (const auto& [s, t] : v.edges)
      pairs.insert({db.type_of(s), db.type_of(t)});
    key.first.assign(types.begin(), types.end());
    key.second.assign(pairs.begin(), pairs.end());
    classes[key].push_back(&v);
  }
  std::vector<AggregatedCeg> out;
  out.reserve(classes.size());
  for (const auto& [key, members] : classes)
    out.push_back(merge_views(db, members));
  return out;
}

AggregatedCeg aggregate_level3(const CausalEventDatabase& db,
                               std::span<const CegView> views) {
  std::vector<const CegView*> all;
  all.reserve(views.size());
  for (const CegView& v : views) all.push_back(&v);
  return merge_views(db, all);
}

}  // namespace cegmine
