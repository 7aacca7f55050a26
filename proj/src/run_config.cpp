#include "cegmine/run_config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cegmine/errors.hpp"

namespace cegmine {

namespace {

using json = nlohmann::json;

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  throw ConfigError("config " + where + ": " + what);
}

const json& member(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) bad(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) bad(where, std::string("missing key \"") + key + "\"");
  return *it;
}

std::string as_string(const json& v, const std::string& where) {
  if (!v.is_string()) bad(where, "expected a string");
  return v.get<std::string>();
}

double as_probability(const json& v, const std::string& where) {
  if (!v.is_number()) bad(where, "expected a number");
  double p = v.get<double>();
  if (p < 0.0 || p > 1.0) bad(where, "probability must lie in [0, 1]");
  return p;
}

SourceSpec parse_source(const json& j) {
  SourceSpec spec;
  spec.root = as_string(member(j, "root", "source"), "source.root");
  const json& tables = member(j, "tables", "source");
  if (!tables.is_object() || tables.empty())
    bad("source.tables", "expected a non-empty object");
  for (auto it = tables.begin(); it != tables.end(); ++it) {
    const std::string where = "source.tables." + it.key();
    const json& t = it.value();
    TableSpec table;
    table.file = as_string(member(t, "file", where), where + ".file");
    table.pk = as_string(member(t, "pk", where), where + ".pk");
    table.timestamp =
        as_string(member(t, "timestamp", where), where + ".timestamp");
    if (t.contains("label"))
      table.label = as_string(t.at("label"), where + ".label");
    if (t.contains("fks")) {
      const json& fks = t.at("fks");
      if (!fks.is_array()) bad(where + ".fks", "expected an array");
      for (const json& fk : fks) {
        FkSpec f;
        f.column = as_string(member(fk, "column", where + ".fks"),
                             where + ".fks.column");
        f.references = as_string(member(fk, "references", where + ".fks"),
                                 where + ".fks.references");
        table.fks.push_back(std::move(f));
      }
    }
    spec.tables.emplace(it.key(), std::move(table));
  }
  return spec;
}

CptSpec parse_cpt_section(const json& j) {
  CptSpec spec;
  const json& rels = member(j, "relations", "cpt");
  if (!rels.is_array()) bad("cpt.relations", "expected an array");
  for (const json& r : rels)
    spec.relations.push_back(as_string(r, "cpt.relations"));
  if (j.contains("edges")) {
    const json& edges = j.at("edges");
    if (!edges.is_array()) bad("cpt.edges", "expected an array");
    for (const json& e : edges)
      spec.edges.emplace_back(as_string(member(e, "from", "cpt.edges"),
                                        "cpt.edges.from"),
                              as_string(member(e, "to", "cpt.edges"),
                                        "cpt.edges.to"));
  }
  if (j.contains("use_transitive_closure")) {
    const json& f = j.at("use_transitive_closure");
    if (!f.is_boolean()) bad("cpt.use_transitive_closure", "expected a bool");
    spec.use_transitive_closure = f.get<bool>();
  }
  return spec;
}

GeneratorSpec parse_generator(const json& j) {
  GeneratorSpec spec;
  if (j.contains("orders")) {
    if (!j.at("orders").is_number_unsigned())
      bad("generator.orders", "expected a non-negative integer");
    spec.orders = j.at("orders").get<std::uint64_t>();
  }
  if (j.contains("items_per_order")) {
    const json& r = j.at("items_per_order");
    if (!r.is_array() || r.size() != 2 || !r.at(0).is_number_integer() ||
        !r.at(1).is_number_integer())
      bad("generator.items_per_order", "expected [min, max]");
    spec.items_min = r.at(0).get<int>();
    spec.items_max = r.at(1).get<int>();
    if (spec.items_min < 1 || spec.items_min > spec.items_max)
      bad("generator.items_per_order", "needs 1 <= min <= max");
  }
  if (j.contains("batching_probability"))
    spec.batching_probability =
        as_probability(j.at("batching_probability"),
                       "generator.batching_probability");
  if (j.contains("pickup_probability"))
    spec.pickup_probability = as_probability(j.at("pickup_probability"),
                                             "generator.pickup_probability");
  if (j.contains("anomaly_rate"))
    spec.anomaly_rate =
        as_probability(j.at("anomaly_rate"), "generator.anomaly_rate");
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned())
      bad("generator.seed", "expected a non-negative integer");
    spec.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("start_time"))
    spec.start_time = as_string(j.at("start_time"), "generator.start_time");
  return spec;
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text,
                           const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config syntax error: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config: expected a JSON object");

  RunConfig config;
  config.base_dir = base_dir;
  if (doc.contains("source")) config.source = parse_source(doc.at("source"));
  if (doc.contains("cpt")) config.cpt = parse_cpt_section(doc.at("cpt"));
  if (doc.contains("generator"))
    config.generator = parse_generator(doc.at("generator"));
  if (doc.contains("output")) {
    const json& out = doc.at("output");
    if (out.contains("dir"))
      config.output.dir = as_string(out.at("dir"), "output.dir");
    if (out.contains("format")) {
      config.output.format = as_string(out.at("format"), "output.format");
      if (config.output.format != "json" && config.output.format != "dot" &&
          config.output.format != "csv")
        bad("output.format", "expected one of json, dot, csv");
    }
  }
  if (doc.contains("thresholds")) {
    const json& th = doc.at("thresholds");
    if (th.contains("cycle_time")) {
      const json& ct = th.at("cycle_time");
      const json& green = member(ct, "green_max_us", "thresholds.cycle_time");
      const json& orange =
          member(ct, "orange_max_us", "thresholds.cycle_time");
      if (!green.is_number_integer() || !orange.is_number_integer())
        bad("thresholds.cycle_time", "expected integer microseconds");
      config.thresholds.cycle_green_max = green.get<std::int64_t>();
      config.thresholds.cycle_orange_max = orange.get<std::int64_t>();
      if (*config.thresholds.cycle_orange_max <=
          *config.thresholds.cycle_green_max)
        bad("thresholds.cycle_time",
            "orange_max_us must exceed green_max_us");
    }
  }
  return config;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str(), path.parent_path());
}

}  // namespace cegmine
