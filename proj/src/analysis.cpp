#include "cegmine/analysis.hpp"

#include <algorithm>
#include <limits>
#include <tuple>

#include "cegmine/errors.hpp"

namespace cegmine {

namespace {

struct StatsAccumulator {
  std::int64_t min = std::numeric_limits<std::int64_t>::max();
  std::int64_t max = std::numeric_limits<std::int64_t>::min();
  double sum = 0.0;
  std::uint64_t count = 0;

  void add(std::int64_t v) {
    min = std::min(min, v);
    max = std::max(max, v);
    sum += static_cast<double>(v);
    ++count;
  }
  std::optional<CycleTimeStats> finish() const {
    if (count == 0) return std::nullopt;
    return CycleTimeStats{min, max, sum / static_cast<double>(count), count};
  }
};

}  // namespace

std::optional<CycleTimeStats> event_type_cycle_stats(
    const CausalEventDatabase& db, std::span<const CegView> views,
    const std::string& label, bool include_start_events) {
  StatsAccumulator acc;
  for (const CegView& view : views) {
    for (EventIndex e : view.events) {
      if (db.type_of(e) != label) continue;
      if (!include_start_events && preset(db, view, e).empty()) continue;
      acc.add(cycle_time(db, view, e));
    }
  }
  return acc.finish();
}

namespace {

std::optional<CycleTimeStats> span_stats(const CausalEventDatabase& db,
                                         std::span<const CegView> views) {
  StatsAccumulator acc;
  for (const CegView& view : views) {
    if (view.events.empty()) continue;
    std::int64_t lo = std::numeric_limits<std::int64_t>::max();
    std::int64_t hi = std::numeric_limits<std::int64_t>::min();
    for (EventIndex e : view.events) {
      lo = std::min(lo, db.timestamp_of(e));
      hi = std::max(hi, db.timestamp_of(e));
    }
    acc.add(hi - lo);
  }
  return acc.finish();
}

}  // namespace

std::optional<CycleTimeStats> ceg_cycle_stats(const CausalEventDatabase& db,
                                              std::span<const CegView> views) {
  return span_stats(db, views);
}

std::optional<CycleTimeStats> fragment_cycle_stats(
    const CausalEventDatabase& db, std::span<const CegView> views) {
  return span_stats(db, views);
}

std::vector<TemporalViolation> temporal_violations(
    const CausalEventDatabase& db) {
  std::vector<TemporalViolation> out;
  for (const auto& [cause, effect] : db.edges()) {
    const std::int64_t tc = db.timestamp_of(cause);
    const std::int64_t te = db.timestamp_of(effect);
    if (tc > te) out.push_back({cause, effect, tc, te});
  }
  return out;
}

std::map<std::string, Distribution> end_event_distribution(
    const AggregatedCeg& level3) {
  std::set<std::string> has_successor;
  for (const auto& e : level3.edges) has_successor.insert(e.from);

  std::map<std::string, Distribution> out;
  std::uint64_t total = 0;
  for (const auto& type : level3.types) {
    if (has_successor.count(type)) continue;
    std::uint64_t q = level3.quantity_of(type);
    out[type].absolute = q;
    total += q;
  }
  for (auto& [type, dist] : out)
    dist.relative =
        total == 0 ? 0.0
                   : static_cast<double>(dist.absolute) /
                         static_cast<double>(total);
  return out;
}

std::map<std::string, Distribution> batching_type_distribution(
    const CausalEventDatabase& db) {
  std::map<std::string, Distribution> out;
  std::uint64_t total = 0;
  for (EventIndex e : batching_events(db)) {
    ++out[db.type_of(e)].absolute;
    ++total;
  }
  for (auto& [type, dist] : out)
    dist.relative = static_cast<double>(dist.absolute) /
                    static_cast<double>(total);
  return out;
}

std::vector<EventLogRow> flatten_to_event_log(
    const CausalEventDatabase& db, const std::string& root_relation) {
  std::vector<EventLogRow> rows;
  for (const CegView& view : case_projections(db, root_relation)) {
    for (EventIndex e : view.events)
      rows.push_back(
          {view.id, db.type_of(e), db.timestamp_of(e), db.event_id(e)});
  }
  std::sort(rows.begin(), rows.end(),
            [](const EventLogRow& a, const EventLogRow& b) {
              return std::tie(a.case_id, a.timestamp, a.event_id) <
                     std::tie(b.case_id, b.timestamp, b.event_id);
            });
  return rows;
}

std::uint64_t DirectlyFollowsGraph::count(const std::string& a,
                                          const std::string& b) const {
  auto it = df_counts.find({a, b});
  return it == df_counts.end() ? 0 : it->second;
}

DirectlyFollowsGraph mine_dfg(std::span<const EventLogRow> rows) {
  DirectlyFollowsGraph dfg;
  std::set<std::string> acts{kStartActivity, kEndActivity};
  std::size_t i = 0;
  while (i < rows.size()) {
    std::size_t j = i;
    while (j < rows.size() && rows[j].case_id == rows[i].case_id) ++j;
    // Rows within a case arrive ordered by (timestamp, event id).
    ++dfg.df_counts[{kStartActivity, rows[i].activity}];
    for (std::size_t k = i + 1; k < j; ++k)
      ++dfg.df_counts[{rows[k - 1].activity, rows[k].activity}];
    ++dfg.df_counts[{rows[j - 1].activity, kEndActivity}];
    for (std::size_t k = i; k < j; ++k) acts.insert(rows[k].activity);
    i = j;
  }
  dfg.activities.assign(acts.begin(), acts.end());
  return dfg;
}

TypeFlowGraph flow_from_dfg(const DirectlyFollowsGraph& dfg) {
  TypeFlowGraph flow;
  for (const auto& a : dfg.activities)
    if (a != kStartActivity && a != kEndActivity) flow.activities.push_back(a);
  flow.quantity = dfg.df_counts;
  return flow;
}

TypeFlowGraph flow_from_aceg(const CausalEventDatabase& db,
                             const AggregatedCeg& level3,
                             std::span<const CegView> views) {
  TypeFlowGraph flow;
  flow.activities = level3.types;
  for (const auto& e : level3.edges) flow.quantity[{e.from, e.to}] = e.quantity;

  // Start/End flows from the projected events themselves: an event with
  // no cause among projected events starts a flow, one with no effect
  // ends it.
  std::vector<EventIndex> projected;
  for (const CegView& v : views)
    projected.insert(projected.end(), v.events.begin(), v.events.end());
  std::sort(projected.begin(), projected.end());
  projected.erase(std::unique(projected.begin(), projected.end()),
                  projected.end());
  for (EventIndex e : projected) {
    bool has_cause = false;
    for (EventIndex c : db.in_neighbors(e))
      if (std::binary_search(projected.begin(), projected.end(), c)) {
        has_cause = true;
        break;
      }
    bool has_effect = false;
    for (EventIndex t : db.out_neighbors(e))
      if (std::binary_search(projected.begin(), projected.end(), t)) {
        has_effect = true;
        break;
      }
    if (!has_cause) ++flow.quantity[{kStartActivity, db.type_of(e)}];
    if (!has_effect) ++flow.quantity[{db.type_of(e), kEndActivity}];
  }
  return flow;
}

ExpectedModel expected_from_cpt(const CausalProcessTemplate& cpt,
                                const Catalog& catalog) {
  ExpectedModel model;
  std::set<std::string> sources_done, sinks_done, seen_labels;
  std::set<std::string> has_pred, has_succ;
  for (const auto& [a, b] : cpt.precedes) {
    has_succ.insert(a);
    has_pred.insert(b);
  }
  for (const auto& rel : topo_order(cpt)) {
    const std::string& label = catalog.label_of(rel);
    if (seen_labels.insert(label).second) model.activities.push_back(label);
    if (!has_pred.count(rel))
      model.edges.insert({kStartActivity, label});
    if (!has_succ.count(rel))
      model.edges.insert({label, kEndActivity});
  }
  for (const auto& [a, b] : cpt.precedes)
    model.edges.insert({catalog.label_of(a), catalog.label_of(b)});
  return model;
}

ConformanceTable conformance_table(const TypeFlowGraph& flow,
                                   const ExpectedModel& expected) {
  ConformanceTable table;
  table.quantities = flow.quantity;

  table.activity_order.push_back(kStartActivity);
  std::set<std::string> listed{kStartActivity, kEndActivity};
  for (const auto& a : expected.activities)
    if (listed.insert(a).second) table.activity_order.push_back(a);
  for (const auto& a : flow.activities)
    if (listed.insert(a).second) table.activity_order.push_back(a);
  table.activity_order.push_back(kEndActivity);

  // Per-source flow split into sanctioned and unsanctioned parts.
  std::map<std::string, std::uint64_t> expected_by_source, unexpected_by_source;
  for (const auto& [pair, q] : flow.quantity) {
    if (expected.edges.count(pair))
      expected_by_source[pair.first] += q;
    else
      unexpected_by_source[pair.first] += q;
  }

  for (const auto& source : table.activity_order) {
    const std::uint64_t row_unexpected =
        unexpected_by_source.count(source) ? unexpected_by_source[source] : 0;
    bool any_expected = false;
    for (const auto& target : table.activity_order) {
      if (!expected.edges.count({source, target})) continue;
      any_expected = true;
      ConformanceCell cell;
      cell.source = source;
      cell.target = target;
      auto it = flow.quantity.find({source, target});
      cell.expected_quantity = it == flow.quantity.end() ? 0 : it->second;
      cell.unexpected_quantity = row_unexpected;
      cell.ratio_percent =
          cell.expected_quantity == 0
              ? (row_unexpected == 0
                     ? 0.0
                     : std::numeric_limits<double>::infinity())
              : 100.0 * static_cast<double>(row_unexpected) /
                    static_cast<double>(cell.expected_quantity);
      table.cells.push_back(std::move(cell));
    }
    const std::uint64_t row_expected =
        expected_by_source.count(source) ? expected_by_source[source] : 0;
    if (any_expected || row_expected > 0 || row_unexpected > 0) {
      ConformanceSourceRow total;
      total.source = source;
      total.expected_total = row_expected;
      total.unexpected_total = row_unexpected;
      total.ratio_percent =
          row_expected == 0
              ? (row_unexpected == 0
                     ? 0.0
                     : std::numeric_limits<double>::infinity())
              : 100.0 * static_cast<double>(row_unexpected) /
                    static_cast<double>(row_expected);
      table.totals.push_back(std::move(total));
      table.cumulative_unexpected += row_unexpected;
    }
  }
  return table;
}

std::uint64_t conformance_score(const ConformanceTable& table) {
  return table.cumulative_unexpected;
}

std::uint64_t conformance_score(
    const ConformanceTable& table, const ExpectedModel& expected,
    const std::map<std::pair<std::string, std::string>, std::uint64_t>&
        violation_counts) {
  std::uint64_t score = table.cumulative_unexpected;
  for (const auto& [pair, count] : violation_counts)
    if (expected.edges.count(pair)) score += count;
  return score;
}

std::map<std::pair<std::string, std::string>, std::uint64_t>
violation_counts_by_type(const CausalEventDatabase& db,
                         std::span<const TemporalViolation> violations) {
  std::map<std::pair<std::string, std::string>, std::uint64_t> out;
  for (const auto& v : violations)
    ++out[{db.type_of(v.cause), db.type_of(v.effect)}];
  return out;
}

}  // namespace cegmine
