#include "cegmine/ceg.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

#include "cegmine/errors.hpp"

namespace cegmine {

namespace {

// Edges induced on a sorted event subset. Emitted in (source, target)
// order because events and adjacency lists are both ascending.
std::vector<EventEdge> induced_edges(const CausalEventDatabase& db,
                                     const std::vector<EventIndex>& events) {
  std::vector<EventEdge> out;
  for (EventIndex e : events)
    for (EventIndex n : db.out_neighbors(e))
      if (std::binary_search(events.begin(), events.end(), n))
        out.emplace_back(e, n);
  return out;
}

struct UnionFind {
  std::vector<EventIndex> parent;

  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  EventIndex find(EventIndex x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(EventIndex a, EventIndex b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent[b] = a;  // smaller index wins, keeps component order stable
  }
};

}  // namespace

bool CegView::contains(EventIndex e) const {
  return std::binary_search(events.begin(), events.end(), e);
}

std::string CausalEventDatabase::event_id(EventIndex e) const {
  return relations_[events_[e].relation].name + ":" + events_[e].key;
}

const std::string& CausalEventDatabase::type_of(EventIndex e) const {
  return relations_[events_[e].relation].label;
}

const std::string& CausalEventDatabase::relation_of(EventIndex e) const {
  return relations_[events_[e].relation].name;
}

std::optional<EventIndex> CausalEventDatabase::find_event(
    const std::string& relation, const std::string& key) const {
  std::uint32_t rel = 0;
  while (rel < relations_.size() && relations_[rel].name != relation) ++rel;
  if (rel == relations_.size()) return std::nullopt;
  Event probe{rel, key, 0};
  auto it = std::lower_bound(
      events_.begin(), events_.end(), probe,
      [](const Event& a, const Event& b) {
        return std::tie(a.relation, a.key) < std::tie(b.relation, b.key);
      });
  if (it == events_.end() || it->relation != rel || it->key != key)
    return std::nullopt;
  return static_cast<EventIndex>(it - events_.begin());
}

std::span<const EventIndex> CausalEventDatabase::out_neighbors(
    EventIndex e) const {
  return {out_targets_.data() + out_offsets_[e],
          out_targets_.data() + out_offsets_[e + 1]};
}

std::span<const EventIndex> CausalEventDatabase::in_neighbors(
    EventIndex e) const {
  return {in_sources_.data() + in_offsets_[e],
          in_sources_.data() + in_offsets_[e + 1]};
}

std::span<const std::uint32_t> CausalEventDatabase::fragments_of(
    EventIndex e) const {
  return {member_fragments_.data() + member_offsets_[e],
          member_fragments_.data() + member_offsets_[e + 1]};
}

void CausalEventDatabase::finalize() {
  const std::size_t n = events_.size();

  // Canonical event order: (relation, key).
  std::vector<EventIndex> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end(), [&](EventIndex a, EventIndex b) {
    return std::tie(events_[a].relation, events_[a].key) <
           std::tie(events_[b].relation, events_[b].key);
  });
  std::vector<EventIndex> pos(n);
  for (std::size_t i = 0; i < n; ++i) pos[perm[i]] = static_cast<EventIndex>(i);
  {
    std::vector<Event> sorted;
    sorted.reserve(n);
    for (EventIndex old : perm) sorted.push_back(std::move(events_[old]));
    events_ = std::move(sorted);
  }
  for (std::size_t i = 1; i < n; ++i)
    if (events_[i - 1].relation == events_[i].relation &&
        events_[i - 1].key == events_[i].key)
      throw DataError("duplicate event " + event_id(static_cast<EventIndex>(i)));

  for (auto& [s, t] : edges_) {
    s = pos[s];
    t = pos[t];
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  for (const auto& [s, t] : edges_)
    if (s == t)
      throw DataError("self edge on event " + event_id(s));

  for (auto& frag : fragments_) {
    for (auto& e : frag.events) e = pos[e];
    std::sort(frag.events.begin(), frag.events.end());
    frag.events.erase(std::unique(frag.events.begin(), frag.events.end()),
                      frag.events.end());
  }

  // Adjacency, both directions.
  out_offsets_.assign(n + 1, 0);
  in_offsets_.assign(n + 1, 0);
  for (const auto& [s, t] : edges_) {
    ++out_offsets_[s + 1];
    ++in_offsets_[t + 1];
  }
  for (std::size_t i = 0; i < n; ++i) {
    out_offsets_[i + 1] += out_offsets_[i];
    in_offsets_[i + 1] += in_offsets_[i];
  }
  out_targets_.resize(edges_.size());
  in_sources_.resize(edges_.size());
  {
    std::vector<std::uint32_t> ofill(out_offsets_.begin(),
                                     out_offsets_.end() - 1);
    std::vector<std::uint32_t> ifill(in_offsets_.begin(),
                                     in_offsets_.end() - 1);
    for (const auto& [s, t] : edges_) {
      out_targets_[ofill[s]++] = t;
      in_sources_[ifill[t]++] = s;
    }
  }
  for (std::size_t e = 0; e < n; ++e)
    std::sort(in_sources_.begin() + in_offsets_[e],
              in_sources_.begin() + in_offsets_[e + 1]);

  // Fragment membership.
  member_offsets_.assign(n + 1, 0);
  for (const auto& frag : fragments_)
    for (EventIndex e : frag.events) ++member_offsets_[e + 1];
  for (std::size_t i = 0; i < n; ++i)
    member_offsets_[i + 1] += member_offsets_[i];
  member_fragments_.resize(member_offsets_[n]);
  {
    std::vector<std::uint32_t> fill(member_offsets_.begin(),
                                    member_offsets_.end() - 1);
    for (std::uint32_t f = 0; f < fragments_.size(); ++f)
      for (EventIndex e : fragments_[f].events)
        member_fragments_[fill[e]++] = f;
  }

  // The union of acyclic fragments under an acyclic template must stay
  // acyclic; anything else is an internal fault, not bad input.
  {
    std::vector<std::uint32_t> indegree(n, 0);
    for (const auto& [s, t] : edges_) ++indegree[t];
    std::vector<EventIndex> queue;
    for (EventIndex e = 0; e < n; ++e)
      if (indegree[e] == 0) queue.push_back(e);
    std::size_t seen = 0;
    while (!queue.empty()) {
      EventIndex e = queue.back();
      queue.pop_back();
      ++seen;
      for (EventIndex t : out_neighbors(e))
        if (--indegree[t] == 0) queue.push_back(t);
    }
    if (seen != n)
      throw std::logic_error("event graph contains a cycle");
  }
}

CausalEventDatabase CausalEventDatabase::from_parts(
    std::vector<RelationInfo> relations, std::vector<Event> events,
    std::vector<EventEdge> edges, std::vector<Fragment> fragments,
    std::string root_relation) {
  CausalEventDatabase db;
  db.relations_ = std::move(relations);
  db.events_ = std::move(events);
  db.edges_ = std::move(edges);
  db.fragments_ = std::move(fragments);
  db.root_relation_ = std::move(root_relation);
  for (const auto& ev : db.events_)
    if (ev.relation >= db.relations_.size())
      throw DataError("event references relation index out of range");
  db.finalize();
  return db;
}

CausalEventDatabase CausalEventDatabase::build(
    const std::vector<CausallyConnectedTuple>& tuples,
    const CausalProcessTemplate& cpt, const Catalog& catalog,
    const std::map<std::string, RelationInstance>& instances,
    const std::string& root_relation) {
  CausalEventDatabase db;
  db.root_relation_ = root_relation;
  for (const auto& r : cpt.relations)
    db.relations_.push_back({r, catalog.label_of(r)});
  // cpt.relations is sorted, so relation indices follow name order.

  std::unordered_map<std::string, std::uint32_t> rel_index;
  for (std::uint32_t i = 0; i < db.relations_.size(); ++i)
    rel_index.emplace(db.relations_[i].name, i);

  // Distinct tuples only: resubmitting a tuple must not change anything.
  std::vector<const CausallyConnectedTuple*> order;
  order.reserve(tuples.size());
  for (const auto& t : tuples) order.push_back(&t);
  std::sort(order.begin(), order.end(),
            [](const CausallyConnectedTuple* a,
               const CausallyConnectedTuple* b) { return *a < *b; });
  order.erase(std::unique(order.begin(), order.end(),
                          [](const CausallyConnectedTuple* a,
                             const CausallyConnectedTuple* b) {
                            return *a == *b;
                          }),
              order.end());

  // Register events.
  std::vector<std::unordered_map<std::string, EventIndex>> event_index(
      db.relations_.size());
  for (const CausallyConnectedTuple* t : order) {
    for (const auto& [rel, key] : t->pk_pairs) {
      auto ri = rel_index.find(rel);
      if (ri == rel_index.end())
        throw DataError("tuple names relation " + rel +
                        " outside the template");
      auto& idx = event_index[ri->second];
      if (idx.count(key)) continue;
      auto inst = instances.find(rel);
      if (inst == instances.end())
        throw DataError("no instance loaded for relation " + rel);
      const Row* row = inst->second.row_by_pk(key);
      if (!row)
        throw DataError("tuple references missing row " + rel + ":" + key);
      idx.emplace(key, static_cast<EventIndex>(db.events_.size()));
      db.events_.push_back({ri->second, key, row->timestamp});
    }
  }

  // Template pairs as relation indices.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  for (const auto& [a, b] : effective_pairs(cpt))
    pairs.emplace_back(rel_index.at(a), rel_index.at(b));

  // Edges and fragments, one fragment per distinct tuple.
  const std::uint32_t root_rel =
      rel_index.count(root_relation) ? rel_index.at(root_relation)
                                     : std::numeric_limits<std::uint32_t>::max();
  for (const CausallyConnectedTuple* t : order) {
    Fragment frag;
    for (const auto& [rel, key] : t->pk_pairs) {
      std::uint32_t ri = rel_index.at(rel);
      EventIndex e = event_index[ri].at(key);
      frag.events.push_back(e);
      if (ri == root_rel) frag.root_key = key;
    }
    for (const auto& [ra, rb] : pairs) {
      const std::string* ka = t->key_for(db.relations_[ra].name);
      const std::string* kb = t->key_for(db.relations_[rb].name);
      if (ka && kb)
        db.edges_.emplace_back(event_index[ra].at(*ka),
                               event_index[rb].at(*kb));
    }
    db.fragments_.push_back(std::move(frag));
  }

  db.finalize();
  return db;
}

CausalEventDatabase build_fragment(
    const CausallyConnectedTuple& tuple, const CausalProcessTemplate& cpt,
    const Catalog& catalog,
    const std::map<std::string, RelationInstance>& instances,
    const std::string& root_relation) {
  return CausalEventDatabase::build({tuple}, cpt, catalog, instances,
                                    root_relation);
}

std::vector<CegView> fragments(const CausalEventDatabase& db) {
  std::vector<CegView> views;
  views.reserve(db.fragment_count());
  for (std::size_t i = 0; i < db.fragment_count(); ++i) {
    const Fragment& frag = db.fragment_records()[i];
    CegView v;
    v.kind = ViewKind::fragment;
    v.id = std::to_string(i);
    v.events = frag.events;
    v.edges = induced_edges(db, v.events);
    views.push_back(std::move(v));
  }
  return views;
}

std::vector<CegView> components(const CausalEventDatabase& db) {
  const std::size_t n = db.event_count();
  UnionFind uf(n);
  for (const auto& [s, t] : db.edges()) uf.unite(s, t);

  std::vector<std::uint32_t> comp_of(n);
  std::vector<CegView> views;
  std::unordered_map<EventIndex, std::uint32_t> comp_id;
  for (EventIndex e = 0; e < n; ++e) {
    EventIndex root = uf.find(e);
    auto [it, fresh] = comp_id.emplace(root, views.size());
    if (fresh) {
      CegView v;
      v.kind = ViewKind::component;
      v.id = std::to_string(views.size());
      views.push_back(std::move(v));
    }
    comp_of[e] = it->second;
    views[it->second].events.push_back(e);
  }
  for (const auto& edge : db.edges())
    views[comp_of[edge.first]].edges.push_back(edge);
  return views;
}

std::vector<CegView> case_projections(const CausalEventDatabase& db,
                                      const std::string& root_relation) {
  std::uint32_t root_rel = 0;
  while (root_rel < db.relations().size() &&
         db.relations()[root_rel].name != root_relation)
    ++root_rel;
  if (root_rel == db.relations().size())
    throw ConfigError("unknown projection root relation " + root_relation);

  std::map<std::string, std::vector<std::uint32_t>> groups;
  for (std::uint32_t f = 0; f < db.fragment_count(); ++f) {
    const Fragment& frag = db.fragment_records()[f];
    for (EventIndex e : frag.events) {
      if (db.event(e).relation == root_rel) {
        groups[db.event(e).key].push_back(f);
        break;  // at most one event per relation in a fragment
      }
    }
  }

  std::vector<CegView> views;
  views.reserve(groups.size());
  for (const auto& [key, frag_ids] : groups) {
    CegView v;
    v.kind = ViewKind::case_projection;
    v.id = key;
    for (std::uint32_t f : frag_ids) {
      const auto& evs = db.fragment_records()[f].events;
      v.events.insert(v.events.end(), evs.begin(), evs.end());
    }
    std::sort(v.events.begin(), v.events.end());
    v.events.erase(std::unique(v.events.begin(), v.events.end()),
                   v.events.end());
    v.edges = induced_edges(db, v.events);
    views.push_back(std::move(v));
  }
  return views;
}

std::vector<EventIndex> preset(const CausalEventDatabase& db, EventIndex e) {
  auto span = db.in_neighbors(e);
  return {span.begin(), span.end()};
}

std::vector<EventIndex> postset(const CausalEventDatabase& db, EventIndex e) {
  auto span = db.out_neighbors(e);
  return {span.begin(), span.end()};
}

std::vector<EventIndex> preset(const CausalEventDatabase& db,
                               const CegView& view, EventIndex e) {
  (void)db;
  std::vector<EventIndex> out;
  for (const auto& [s, t] : view.edges)
    if (t == e) out.push_back(s);
  return out;
}

std::vector<EventIndex> postset(const CausalEventDatabase& db,
                                const CegView& view, EventIndex e) {
  (void)db;
  auto lo = std::lower_bound(view.edges.begin(), view.edges.end(),
                             EventEdge{e, 0});
  std::vector<EventIndex> out;
  for (auto it = lo; it != view.edges.end() && it->first == e; ++it)
    out.push_back(it->second);
  return out;
}

std::vector<EventIndex> batching_events(const CausalEventDatabase& db) {
  std::vector<EventIndex> out;
  for (EventIndex e = 0; e < db.event_count(); ++e) {
    const std::string* first = nullptr;
    bool batched = false;
    for (std::uint32_t f : db.fragments_of(e)) {
      const std::string& key = db.fragment_records()[f].root_key;
      if (key.empty()) continue;  // fragment without a root cannot vouch
      if (!first) {
        first = &key;
      } else if (key != *first) {
        batched = true;
        break;
      }
    }
    if (batched) out.push_back(e);
  }
  return out;
}

namespace {

template <typename Range>
std::int64_t cycle_time_over(const CausalEventDatabase& db, EventIndex e,
                             const Range& causes) {
  const std::int64_t te = db.timestamp_of(e);
  bool found = false;
  std::int64_t best = 0;
  for (EventIndex c : causes) {
    const std::int64_t tc = db.timestamp_of(c);
    if (tc > te) continue;  // late-recorded causes do not wait
    if (!found || tc > best) {
      best = tc;
      found = true;
    }
  }
  return found ? te - best : 0;
}

}  // namespace

std::int64_t cycle_time(const CausalEventDatabase& db, EventIndex e) {
  return cycle_time_over(db, e, db.in_neighbors(e));
}

std::int64_t cycle_time(const CausalEventDatabase& db, const CegView& view,
                        EventIndex e) {
  return cycle_time_over(db, e, preset(db, view, e));
}

}  // namespace cegmine
