#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "cegmine/aceg.hpp"
#include "cegmine/ceg.hpp"

namespace cegmine {

inline constexpr const char* kStartActivity = "Start";
inline constexpr const char* kEndActivity = "End";

struct CycleTimeStats {
  std::int64_t min = 0;
  std::int64_t max = 0;
  double avg = 0.0;
  std::uint64_t count = 0;  // samples behind the stats
};

// Cycle-time stats of all events with the given label, measured inside
// each view (a shared event reports once per view holding it). Events
// without causes count as zero unless include_start_events is false.
// Returns nullopt when no sample exists.
std::optional<CycleTimeStats> event_type_cycle_stats(
    const CausalEventDatabase& db, std::span<const CegView> views,
    const std::string& label, bool include_start_events = true);

// Stats over the time span (max minus min timestamp) of each view.
std::optional<CycleTimeStats> ceg_cycle_stats(const CausalEventDatabase& db,
                                              std::span<const CegView> views);
std::optional<CycleTimeStats> fragment_cycle_stats(
    const CausalEventDatabase& db, std::span<const CegView> views);

struct TemporalViolation {
  EventIndex cause = 0;
  EventIndex effect = 0;
  std::int64_t cause_timestamp = 0;
  std::int64_t effect_timestamp = 0;
};

// Edges whose cause is recorded strictly after its effect. Equal
// timestamps are fine: instantaneous succession is not a violation.
std::vector<TemporalViolation> temporal_violations(
    const CausalEventDatabase& db);

struct Distribution {
  std::uint64_t absolute = 0;
  double relative = 0.0;
};

// How cases end: node quantities of the types without outgoing type
// edges in a level-3 aggregate.
std::map<std::string, Distribution> end_event_distribution(
    const AggregatedCeg& level3);

// Batching events counted per event type.
std::map<std::string, Distribution> batching_type_distribution(
    const CausalEventDatabase& db);

struct EventLogRow {
  std::string case_id;
  std::string activity;
  std::int64_t timestamp = 0;
  std::string event_id;
};

// Classical flattening: one trace per case projection of root_relation.
// Shared events are duplicated into every case holding them. Rows are
// ordered by case, then timestamp, then event id.
std::vector<EventLogRow> flatten_to_event_log(const CausalEventDatabase& db,
                                              const std::string& root_relation);

struct DirectlyFollowsGraph {
  std::vector<std::string> activities;  // sorted, includes Start and End
  std::map<std::pair<std::string, std::string>, std::uint64_t> df_counts;

  std::uint64_t count(const std::string& a, const std::string& b) const;
};

// Start -> first activity, every adjacent pair, last activity -> End,
// per case.
DirectlyFollowsGraph mine_dfg(std::span<const EventLogRow> rows);

// Common shape both comparison inputs reduce to: activity-pair flow
// quantities, with synthetic Start and End flows.
struct TypeFlowGraph {
  std::vector<std::string> activities;  // without Start/End, sorted
  std::map<std::pair<std::string, std::string>, std::uint64_t> quantity;
};

TypeFlowGraph flow_from_dfg(const DirectlyFollowsGraph& dfg);
// Type-edge quantities from the aggregate; Start/End flows count the
// distinct projected events without causes respectively effects.
TypeFlowGraph flow_from_aceg(const CausalEventDatabase& db,
                             const AggregatedCeg& level3,
                             std::span<const CegView> views);

// What the template sanctions: its label pairs, Start into source labels,
// sink labels into End.
struct ExpectedModel {
  std::vector<std::string> activities;  // labels in template order
  std::set<std::pair<std::string, std::string>> edges;
};

ExpectedModel expected_from_cpt(const CausalProcessTemplate& cpt,
                                const Catalog& catalog);

struct ConformanceCell {
  std::string source, target;
  std::uint64_t expected_quantity = 0;    // flow on this sanctioned edge
  std::uint64_t unexpected_quantity = 0;  // flow leaving source unsanctioned
  double ratio_percent = 0.0;             // unexpected over expected
};

struct ConformanceSourceRow {
  std::string source;
  std::uint64_t expected_total = 0;
  std::uint64_t unexpected_total = 0;
  double ratio_percent = 0.0;
};

struct ConformanceTable {
  std::vector<std::string> activity_order;  // Start, ..., End grid order
  std::vector<ConformanceCell> cells;       // one per sanctioned edge
  std::vector<ConformanceSourceRow> totals;
  std::map<std::pair<std::string, std::string>, std::uint64_t> quantities;
  std::uint64_t cumulative_unexpected = 0;
};

ConformanceTable conformance_table(const TypeFlowGraph& flow,
                                   const ExpectedModel& expected);

// Conformance scores, lower is better. The plain score sums unsanctioned
// flow; the violation-aware score additionally counts temporal violations
// on sanctioned edges.
std::uint64_t conformance_score(const ConformanceTable& table);
std::uint64_t conformance_score(
    const ConformanceTable& table, const ExpectedModel& expected,
    const std::map<std::pair<std::string, std::string>, std::uint64_t>&
        violation_counts);

std::map<std::pair<std::string, std::string>, std::uint64_t>
violation_counts_by_type(const CausalEventDatabase& db,
                         std::span<const TemporalViolation> violations);

}  // namespace cegmine
