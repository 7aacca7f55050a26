#include "cegmine/export.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "cegmine/timestamp.hpp"

namespace cegmine {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string dot_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

const char* light_color(const TrafficLight& t, std::int64_t cyc) {
  if (cyc <= t.green_max) return "palegreen";
  if (cyc <= t.orange_max) return "orange";
  return "tomato";
}

CegView whole_database_view(const CausalEventDatabase& db) {
  CegView v;
  v.kind = ViewKind::component;
  v.id = "db";
  v.events.resize(db.event_count());
  for (EventIndex e = 0; e < db.event_count(); ++e) v.events[e] = e;
  v.edges = db.edges();
  return v;
}

std::string format_ratio(double percent) {
  if (std::isinf(percent)) return "inf";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.2f%%", percent);
  return buf;
}

ordered_json stats_json(const std::optional<CycleTimeStats>& stats) {
  if (!stats) return nullptr;
  ordered_json j;
  j["min_us"] = stats->min;
  j["avg_us"] = stats->avg;
  j["max_us"] = stats->max;
  j["count"] = stats->count;
  return j;
}

ordered_json distribution_json(const std::map<std::string, Distribution>& d) {
  ordered_json j = ordered_json::object();
  for (const auto& [type, dist] : d) {
    j[type] = ordered_json{{"absolute", dist.absolute},
                           {"relative", dist.relative}};
  }
  return j;
}

}  // namespace

TrafficLight tertile_thresholds(std::vector<std::int64_t> samples) {
  TrafficLight t;
  if (samples.empty()) return t;
  std::sort(samples.begin(), samples.end());
  const std::size_t n = samples.size();
  t.green_max = samples[(n - 1) / 3];
  t.orange_max = samples[(2 * (n - 1)) / 3];
  if (t.orange_max <= t.green_max) t.orange_max = t.green_max + 1;
  return t;
}

std::string export_ceg_dot(const CausalEventDatabase& db, const CegView& view,
                           const TrafficLight& thresholds,
                           std::span<const TemporalViolation> violations) {
  std::set<EventEdge> bad;
  for (const auto& v : violations) bad.insert({v.cause, v.effect});

  std::string out;
  out += "digraph ceg {\n";
  out += "  rankdir=LR;\n";
  out += "  node [shape=ellipse, style=filled];\n";
  for (EventIndex e : view.events) {
    const std::int64_t cyc = cycle_time(db, view, e);
    out += "  \"" + dot_escape(db.event_id(e)) + "\" [label=\"" +
           dot_escape(db.event(e).key) + "\\n" + dot_escape(db.type_of(e)) +
           "\", fillcolor=" + light_color(thresholds, cyc) + ", tooltip=\"" +
           dot_escape(format_timestamp(db.timestamp_of(e))) + "\"];\n";
  }
  for (const auto& [s, t] : view.edges) {
    out += "  \"" + dot_escape(db.event_id(s)) + "\" -> \"" +
           dot_escape(db.event_id(t)) + "\"";
    if (bad.count({s, t})) out += " [color=red, penwidth=2]";
    out += ";\n";
  }
  out += "}\n";
  return out;
}

std::string export_ceg_dot(const CausalEventDatabase& db,
                           const TrafficLight& thresholds,
                           std::span<const TemporalViolation> violations) {
  return export_ceg_dot(db, whole_database_view(db), thresholds, violations);
}

std::string export_ceg_json(const CausalEventDatabase& db,
                            const CegView& view) {
  ordered_json doc;
  doc["nodes"] = ordered_json::array();
  doc["edges"] = ordered_json::array();
  for (EventIndex e : view.events) {
    ordered_json node;
    node["id"] = db.event_id(e);
    node["type"] = db.type_of(e);
    node["timestamp"] = format_timestamp(db.timestamp_of(e));
    auto frags = db.fragments_of(e);
    node["fragment-ids"] = std::vector<std::uint32_t>(frags.begin(),
                                                      frags.end());
    doc["nodes"].push_back(std::move(node));
  }
  for (const auto& [s, t] : view.edges) {
    doc["edges"].push_back(ordered_json{{"source", db.event_id(s)},
                                        {"target", db.event_id(t)}});
  }
  return doc.dump(2) + "\n";
}

std::string export_ceg_json(const CausalEventDatabase& db) {
  return export_ceg_json(db, whole_database_view(db));
}

std::string export_aceg_dot(
    const AggregatedCeg& aceg,
    const std::set<std::pair<std::string, std::string>>& violating) {
  std::string out;
  out += "digraph aceg {\n";
  out += "  rankdir=LR;\n";
  out += "  node [shape=box, style=rounded];\n";
  for (const auto& type : aceg.types) {
    out += "  \"" + dot_escape(type) + "\" [label=\"" + dot_escape(type) +
           "\\n(" + std::to_string(aceg.quantity_of(type)) + ")\"];\n";
  }
  for (const auto& e : aceg.edges) {
    out += "  \"" + dot_escape(e.from) + "\" -> \"" + dot_escape(e.to) +
           "\" [label=\"" + std::to_string(e.in.min) + ".." +
           std::to_string(e.in.max) + " : " + std::to_string(e.out.min) +
           ".." + std::to_string(e.out.max) + " (" +
           std::to_string(e.quantity) + ")\"";
    if (violating.count({e.from, e.to})) out += ", color=red, penwidth=2";
    out += "];\n";
  }
  out += "}\n";
  return out;
}

std::string export_aceg_json(const AggregatedCeg& aceg) {
  ordered_json doc;
  doc["types"] = ordered_json::array();
  for (const auto& type : aceg.types) {
    doc["types"].push_back(ordered_json{
        {"id", type}, {"label", type}, {"quantity", aceg.quantity_of(type)}});
  }
  doc["edges"] = ordered_json::array();
  for (const auto& e : aceg.edges) {
    doc["edges"].push_back(
        ordered_json{{"from", e.from},
                     {"to", e.to},
                     {"quantity", e.quantity},
                     {"in", ordered_json::array({e.in.min, e.in.max})},
                     {"out", ordered_json::array({e.out.min, e.out.max})}});
  }
  doc["views"] = aceg.source_views;
  return doc.dump(2) + "\n";
}

std::string violations_csv(const CausalEventDatabase& db,
                           std::span<const TemporalViolation> violations) {
  std::string out =
      "cause_id,cause_type,cause_timestamp,effect_id,effect_type,"
      "effect_timestamp\n";
  for (const auto& v : violations) {
    out += db.event_id(v.cause) + "," + db.type_of(v.cause) + "," +
           format_timestamp(v.cause_timestamp) + "," + db.event_id(v.effect) +
           "," + db.type_of(v.effect) + "," +
           format_timestamp(v.effect_timestamp) + "\n";
  }
  return out;
}

std::string conformance_csv(const ConformanceTable& table) {
  // Grid rows are flow sources (no End), columns flow targets (no Start).
  std::vector<std::string> columns;
  for (const auto& a : table.activity_order)
    if (a != kStartActivity) columns.push_back(a);

  std::map<std::pair<std::string, std::string>, const ConformanceCell*> cells;
  for (const auto& c : table.cells) cells[{c.source, c.target}] = &c;
  std::map<std::string, const ConformanceSourceRow*> totals;
  for (const auto& t : table.totals) totals[t.source] = &t;

  std::string out = "source";
  for (const auto& c : columns) out += "," + c;
  out += ",Total\n";
  for (const auto& source : table.activity_order) {
    if (source == kEndActivity) continue;
    out += source;
    for (const auto& target : columns) {
      auto it = cells.find({source, target});
      if (it == cells.end())
        out += ",0 / 0";
      else
        out += "," + std::to_string(it->second->expected_quantity) + " / " +
               std::to_string(it->second->unexpected_quantity);
    }
    auto tt = totals.find(source);
    if (tt == totals.end()) {
      out += ",0 / 0 (0.00%)\n";
    } else {
      out += "," + std::to_string(tt->second->expected_total) + " / " +
             std::to_string(tt->second->unexpected_total) + " (" +
             format_ratio(tt->second->ratio_percent) + ")\n";
    }
  }
  return out;
}

std::string kpi_report_json(const CausalEventDatabase& db,
                            std::span<const CegView> projections,
                            std::span<const CegView> fragment_views,
                            const AggregatedCeg& level3,
                            std::span<const TemporalViolation> violations,
                            bool include_start_events) {
  ordered_json doc;
  doc["event_type_cycle_times"] = ordered_json::object();
  std::set<std::string> labels;
  for (const auto& rel : db.relations()) labels.insert(rel.label);
  for (const auto& label : labels) {
    doc["event_type_cycle_times"][label] = stats_json(
        event_type_cycle_stats(db, projections, label, include_start_events));
  }
  doc["ceg_cycle_time"] = stats_json(ceg_cycle_stats(db, projections));
  doc["fragment_cycle_time"] =
      stats_json(fragment_cycle_stats(db, fragment_views));
  doc["end_event_distribution"] =
      distribution_json(end_event_distribution(level3));
  doc["batching_distribution"] =
      distribution_json(batching_type_distribution(db));
  doc["temporal_violations"] = violations.size();
  return doc.dump(2) + "\n";
}

}  // namespace cegmine
