#include "cegmine/artifact.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "cegmine/errors.hpp"

namespace cegmine {

namespace {

constexpr const char* kFormatTag = "ceg-db-v1";

void append_json_string(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

void flush_chunk(std::ostream& os, std::string& buf, std::size_t limit) {
  if (buf.size() < limit) return;
  os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  buf.clear();
}

}  // namespace

void write_artifact(const CausalEventDatabase& db, std::ostream& os) {
  constexpr std::size_t kChunk = 1 << 20;
  std::string buf;
  buf.reserve(kChunk + 4096);

  buf += "{\"format\":\"";
  buf += kFormatTag;
  buf += "\",\"root_relation\":";
  append_json_string(buf, db.root_relation());

  buf += ",\"relations\":[";
  for (std::size_t i = 0; i < db.relations().size(); ++i) {
    if (i) buf += ',';
    buf += "{\"name\":";
    append_json_string(buf, db.relations()[i].name);
    buf += ",\"label\":";
    append_json_string(buf, db.relations()[i].label);
    buf += '}';
  }
  buf += ']';

  buf += ",\"events\":[";
  for (std::size_t i = 0; i < db.events().size(); ++i) {
    const Event& e = db.events()[i];
    if (i) buf += ',';
    buf += '[';
    buf += std::to_string(e.relation);
    buf += ',';
    append_json_string(buf, e.key);
    buf += ',';
    buf += std::to_string(e.timestamp);
    buf += ']';
    flush_chunk(os, buf, kChunk);
  }
  buf += ']';

  buf += ",\"edges\":[";
  for (std::size_t i = 0; i < db.edges().size(); ++i) {
    if (i) buf += ',';
    buf += '[';
    buf += std::to_string(db.edges()[i].first);
    buf += ',';
    buf += std::to_string(db.edges()[i].second);
    buf += ']';
    flush_chunk(os, buf, kChunk);
  }
  buf += ']';

  buf += ",\"fragments\":[";
  for (std::size_t i = 0; i < db.fragment_records().size(); ++i) {
    const Fragment& f = db.fragment_records()[i];
    if (i) buf += ',';
    buf += "{\"root\":";
    append_json_string(buf, f.root_key);
    buf += ",\"events\":[";
    for (std::size_t k = 0; k < f.events.size(); ++k) {
      if (k) buf += ',';
      buf += std::to_string(f.events[k]);
    }
    buf += "]}";
    flush_chunk(os, buf, kChunk);
  }
  buf += "]}\n";
  os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  os.flush();
}

void write_artifact_file(const CausalEventDatabase& db,
                         const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot write artifact file " + path.string());
  write_artifact(db, os);
  if (!os) throw DataError("failed writing artifact file " + path.string());
}

CausalEventDatabase read_artifact_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open artifact file " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw DataError("artifact " + path.string() + ": " + e.what());
  }
  try {
    if (!doc.is_object() || doc.value("format", "") != kFormatTag)
      throw DataError("artifact " + path.string() +
                      ": unknown format, expected " + kFormatTag);
    std::vector<RelationInfo> relations;
    for (const auto& r : doc.at("relations"))
      relations.push_back({r.at("name").get<std::string>(),
                           r.at("label").get<std::string>()});
    std::vector<Event> events;
    events.reserve(doc.at("events").size());
    for (const auto& e : doc.at("events"))
      events.push_back({e.at(0).get<std::uint32_t>(),
                        e.at(1).get<std::string>(),
                        e.at(2).get<std::int64_t>()});
    std::vector<EventEdge> edges;
    edges.reserve(doc.at("edges").size());
    for (const auto& e : doc.at("edges"))
      edges.emplace_back(e.at(0).get<EventIndex>(),
                         e.at(1).get<EventIndex>());
    std::vector<Fragment> fragments;
    fragments.reserve(doc.at("fragments").size());
    for (const auto& f : doc.at("fragments")) {
      Fragment frag;
      frag.root_key = f.at("root").get<std::string>();
      for (const auto& e : f.at("events"))
        frag.events.push_back(e.get<EventIndex>());
      fragments.push_back(std::move(frag));
    }
    const std::size_t n = events.size();
    for (const auto& [s, t] : edges)
      if (s >= n || t >= n)
        throw DataError("artifact " + path.string() +
                        ": edge references event out of range");
    for (const auto& f : fragments)
      for (EventIndex e : f.events)
        if (e >= n)
          throw DataError("artifact " + path.string() +
                          ": fragment references event out of range");
    return CausalEventDatabase::from_parts(
        std::move(relations), std::move(events), std::move(edges),
        std::move(fragments), doc.at("root_relation").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw DataError("artifact " + path.string() + ": " + e.what());
  }
}

}  // namespace cegmine
