#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "cegmine/aceg.hpp"
#include "cegmine/analysis.hpp"
#include "cegmine/ceg.hpp"

namespace cegmine {

// Cycle-time cutoffs for node coloring: green up to green_max, orange up
// to orange_max, red beyond. Always strictly increasing.
struct TrafficLight {
  std::int64_t green_max = 0;
  std::int64_t orange_max = 1;
};

// Empirical tertiles of the sample; degenerate samples widen to keep the
// cutoffs strictly increasing.
TrafficLight tertile_thresholds(std::vector<std::int64_t> samples);

// DOT graph of a view (or the whole database), nodes colored by the
// cycle-time traffic light, violation edges drawn red.
std::string export_ceg_dot(const CausalEventDatabase& db, const CegView& view,
                           const TrafficLight& thresholds,
                           std::span<const TemporalViolation> violations);
std::string export_ceg_dot(const CausalEventDatabase& db,
                           const TrafficLight& thresholds,
                           std::span<const TemporalViolation> violations);

// JSON graph: nodes carry id, type, timestamp, fragment-ids; edges carry
// source and target ids.
std::string export_ceg_json(const CausalEventDatabase& db, const CegView& view);
std::string export_ceg_json(const CausalEventDatabase& db);

// DOT graph of an aggregate; edge labels read
// "inMin..inMax : outMin..outMax (quantity)". Type edges listed in
// `violating` are drawn red.
std::string export_aceg_dot(
    const AggregatedCeg& aceg,
    const std::set<std::pair<std::string, std::string>>& violating = {});

std::string export_aceg_json(const AggregatedCeg& aceg);

std::string violations_csv(const CausalEventDatabase& db,
                           std::span<const TemporalViolation> violations);

// Activity-pair grid. Sanctioned cells hold "expected / unexpected",
// everything else "0 / 0"; the Total column holds
// "expected-sum / unexpected (ratio%)".
std::string conformance_csv(const ConformanceTable& table);

std::string kpi_report_json(const CausalEventDatabase& db,
                            std::span<const CegView> projections,
                            std::span<const CegView> fragment_views,
                            const AggregatedCeg& level3,
                            std::span<const TemporalViolation> violations,
                            bool include_start_events = true);

}  // namespace cegmine
