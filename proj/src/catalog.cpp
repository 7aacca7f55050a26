#include "cegmine/catalog.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <tuple>

#include "cegmine/errors.hpp"
#include "cegmine/timestamp.hpp"

namespace cegmine {

const Attribute* RelationSchema::find_attr(const std::string& attr_name) const {
  for (const auto& a : attrs)
    if (a.name == attr_name) return &a;
  return nullptr;
}

const RelationSchema* Catalog::find_schema(const std::string& name) const {
  for (const auto& s : schemas)
    if (s.name == name) return &s;
  return nullptr;
}

const std::string& Catalog::label_of(const std::string& relation) const {
  const RelationSchema* s = find_schema(relation);
  if (!s) throw ConfigError("unknown relation: " + relation);
  return s->label;
}

const Row* RelationInstance::row_by_pk(const std::string& pk) const {
  auto it = pk_index.find(pk);
  return it == pk_index.end() ? nullptr : &rows[it->second];
}

void RelationInstance::reindex() {
  pk_index.clear();
  pk_index.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) pk_index.emplace(rows[i].pk, i);
}

const std::string* CausallyConnectedTuple::key_for(
    const std::string& relation) const {
  for (const auto& [rel, key] : pk_pairs)
    if (rel == relation) return &key;
  return nullptr;
}

ValidationReport validate_catalog(const Catalog& catalog) {
  ValidationReport report;
  std::map<std::string, std::vector<std::string>> domain_owners;
  for (const auto& s : catalog.schemas) {
    if (s.attrs.empty()) {
      report.add_error("catalog.empty-relation",
                       "relation " + s.name + " has no attributes");
      continue;
    }
    const Attribute& pk = s.attrs.front();
    if (pk.kind != AttrKind::identifier)
      report.add_error("catalog.pk-not-identifier",
                       "relation " + s.name + ": first attribute " + pk.name +
                           " must be identifier-typed");
    else
      domain_owners[pk.id_domain].push_back(s.name);
    if (s.timestamp_attr.empty()) {
      report.add_error("catalog.no-timestamp",
                       "relation " + s.name + " has no timestamp attribute");
    } else {
      const Attribute* ts = s.find_attr(s.timestamp_attr);
      if (!ts)
        report.add_error("catalog.no-timestamp",
                         "relation " + s.name + ": timestamp attribute " +
                             s.timestamp_attr + " not found");
      else if (ts->kind != AttrKind::timestamp)
        report.add_error("catalog.no-timestamp",
                         "relation " + s.name + ": attribute " +
                             s.timestamp_attr + " is not timestamp-typed");
    }
  }
  for (const auto& [domain, owners] : domain_owners) {
    if (owners.size() < 2) continue;
    std::string names;
    for (const auto& n : owners) names += (names.empty() ? "" : ", ") + n;
    report.add_error("catalog.shared-key-domain",
                     "relations " + names +
                         " share the primary-key domain " + domain);
  }
  for (const auto& fk : catalog.foreign_keys) {
    const RelationSchema* from = catalog.find_schema(fk.from_relation);
    if (!from) {
      report.add_error("catalog.fk-unknown-relation",
                       "foreign key on unknown relation " + fk.from_relation);
      continue;
    }
    const Attribute* attr = from->find_attr(fk.from_attr);
    if (!attr) {
      report.add_error("catalog.fk-unknown-attr",
                       fk.from_relation + "." + fk.from_attr +
                           " not found for foreign key");
      continue;
    }
    if (!from->attrs.empty() && from->attrs.front().name == fk.from_attr)
      report.add_error("catalog.fk-on-pk",
                       fk.from_relation + "." + fk.from_attr +
                           ": primary key cannot be a foreign key");
    if (attr->kind != AttrKind::identifier)
      report.add_error("catalog.fk-not-identifier",
                       fk.from_relation + "." + fk.from_attr +
                           " must be identifier-typed to reference " +
                           fk.to_relation);
    if (!catalog.find_schema(fk.to_relation))
      report.add_error("catalog.fk-dangling",
                       fk.from_relation + "." + fk.from_attr +
                           " references unknown relation " + fk.to_relation);
  }
  return report;
}

namespace {

// Minimal delimited-text reader: comma separator, optional double-quote
// quoting with "" escapes, tolerant of CRLF line ends.
std::vector<std::string> split_csv_line(const std::string& line,
                                        const std::string& context) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
    } else if (ch == '\r' && i + 1 == line.size()) {
      // drop trailing CR
    } else {
      cell += ch;
    }
  }
  if (quoted) throw DataError(context + ": unterminated quote");
  cells.push_back(std::move(cell));
  return cells;
}

std::size_t require_column(const std::vector<std::string>& header,
                           const std::string& name,
                           const std::string& context) {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw DataError(context + ": missing column " + name);
}

RelationInstance load_table(const std::string& name, const TableSpec& spec,
                            const std::filesystem::path& base_dir) {
  std::filesystem::path path(spec.file);
  if (path.is_relative()) path = base_dir / path;
  std::ifstream in(path);
  if (!in) throw DataError("cannot open table file " + path.string());

  std::string line;
  if (!std::getline(in, line))
    throw DataError(path.string() + ": empty file, header row required");
  const auto header = split_csv_line(line, path.string());
  const std::size_t pk_col = require_column(header, spec.pk, path.string());
  const std::size_t ts_col =
      require_column(header, spec.timestamp, path.string());
  std::vector<std::size_t> fk_cols;
  RelationInstance inst;
  inst.relation = name;
  for (const auto& fk : spec.fks) {
    fk_cols.push_back(require_column(header, fk.column, path.string()));
    inst.fk_attrs.push_back(fk.column);
  }

  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const std::string context = path.string() + ":" + std::to_string(lineno);
    auto cells = split_csv_line(line, context);
    if (cells.size() < header.size())
      throw DataError(context + ": expected " +
                      std::to_string(header.size()) + " columns, got " +
                      std::to_string(cells.size()));
    Row row;
    row.pk = cells[pk_col];
    if (row.pk.empty()) throw DataError(context + ": empty primary key");
    try {
      row.timestamp = parse_timestamp(cells[ts_col]);
    } catch (const DataError& e) {
      throw DataError(context + ": " + e.what());
    }
    for (std::size_t f = 0; f < fk_cols.size(); ++f) {
      const std::string& v = cells[fk_cols[f]];
      row.fk_values.push_back(v.empty()
                                  ? std::optional<std::string>{}
                                  : std::optional<std::string>{v});
    }
    inst.rows.push_back(std::move(row));
  }
  inst.reindex();
  if (inst.pk_index.size() != inst.rows.size()) {
    std::set<std::string> seen;
    for (const auto& r : inst.rows)
      if (!seen.insert(r.pk).second)
        throw DataError(path.string() + ": duplicate primary key " + r.pk);
  }
  return inst;
}

}  // namespace

Catalog catalog_from_spec(const SourceSpec& spec) {
  if (spec.tables.empty()) throw ConfigError("source has no tables");
  Catalog catalog;
  for (const auto& [name, table] : spec.tables) {
    if (table.pk.empty() || table.timestamp.empty())
      throw ConfigError("table " + name + " needs pk and timestamp columns");
    for (const auto& fk : table.fks) {
      if (spec.tables.find(fk.references) == spec.tables.end())
        throw ConfigError("table " + name + ": fk column " + fk.column +
                          " references unknown table " + fk.references);
      if (fk.column == table.pk)
        throw ConfigError("table " + name + ": primary key " + table.pk +
                          " cannot be a foreign-key column");
    }
    RelationSchema schema;
    schema.name = name;
    // Primary keys draw from a per-relation domain, which keeps key
    // domains of distinct relations logically distinct.
    schema.attrs.push_back({table.pk, AttrKind::identifier, name});
    for (const auto& fk : table.fks)
      schema.attrs.push_back({fk.column, AttrKind::identifier, fk.references});
    schema.attrs.push_back({table.timestamp, AttrKind::timestamp, ""});
    schema.timestamp_attr = table.timestamp;
    schema.label = table.label.empty() ? name : table.label;
    catalog.schemas.push_back(std::move(schema));
    for (const auto& fk : table.fks)
      catalog.foreign_keys.push_back({name, fk.column, fk.references});
  }
  std::sort(catalog.schemas.begin(), catalog.schemas.end(),
            [](const auto& a, const auto& b) { return a.name < b.name; });
  std::sort(catalog.foreign_keys.begin(), catalog.foreign_keys.end(),
            [](const auto& a, const auto& b) {
              return std::tie(a.from_relation, a.from_attr, a.to_relation) <
                     std::tie(b.from_relation, b.from_attr, b.to_relation);
            });
  return catalog;
}

LoadedSource load_catalog(const SourceSpec& spec,
                          const std::filesystem::path& base_dir) {
  if (spec.tables.find(spec.root) == spec.tables.end())
    throw ConfigError("root relation " + spec.root +
                      " is not a configured table");

  LoadedSource out;
  out.root = spec.root;
  out.catalog = catalog_from_spec(spec);

  for (const auto& [name, table] : spec.tables) {
    RelationInstance inst = load_table(name, table, base_dir);
    out.row_counts[name] = inst.rows.size();
    out.instances.emplace(name, std::move(inst));
  }
  return out;
}

namespace {

struct JoinEdge {
  std::string from, to;    // traversal direction
  std::string child;       // relation owning the fk column
  std::string attr;        // fk column name
  bool expand = false;     // true: to-side rows matched on attr == from pk
};

}  // namespace

std::vector<CausallyConnectedTuple> left_outer_join(
    const Catalog& catalog,
    const std::map<std::string, RelationInstance>& instances,
    const std::vector<std::string>& relations, const std::string& root) {
  if (relations.size() < 2)
    throw ConfigError("join needs at least two relations");
  std::set<std::string> z(relations.begin(), relations.end());
  if (z.size() != relations.size())
    throw ConfigError("duplicate relation in join set");
  if (!z.count(root))
    throw ConfigError("join root " + root + " is not in the relation set");
  for (const auto& r : z) {
    const RelationSchema* s = catalog.find_schema(r);
    if (!s) throw ConfigError("unknown relation in join set: " + r);
    if (s->timestamp_attr.empty())
      throw ConfigError("relation " + r + " has no timestamp attribute");
    if (instances.find(r) == instances.end())
      throw ConfigError("no instance loaded for relation " + r);
  }

  // Candidate traversal edges, both directions of every in-set fk.
  std::vector<JoinEdge> candidates;
  for (const auto& fk : catalog.foreign_keys) {
    if (!z.count(fk.from_relation) || !z.count(fk.to_relation)) continue;
    candidates.push_back(
        {fk.to_relation, fk.from_relation, fk.from_relation, fk.from_attr,
         true});
    candidates.push_back(
        {fk.from_relation, fk.to_relation, fk.from_relation, fk.from_attr,
         false});
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const JoinEdge& a, const JoinEdge& b) {
              return std::tie(a.from, a.to, a.attr) <
                     std::tie(b.from, b.to, b.attr);
            });

  // Breadth-first spanning tree from the root.
  std::vector<JoinEdge> plan;
  std::set<std::string> reached{root};
  std::vector<std::string> frontier{root};
  while (!frontier.empty()) {
    std::vector<std::string> next;
    for (const auto& rel : frontier) {
      for (const auto& e : candidates) {
        if (e.from != rel || reached.count(e.to)) continue;
        reached.insert(e.to);
        plan.push_back(e);
        next.push_back(e.to);
      }
    }
    frontier = std::move(next);
  }
  for (const auto& r : z)
    if (!reached.count(r))
      throw ConfigError("relation " + r +
                        " is not connected to the join root " + root +
                        " via foreign keys");

  // Dense index per relation for partial-tuple slots.
  std::map<std::string, std::size_t> slot;
  for (const auto& r : z) slot.emplace(r, slot.size());
  const std::size_t nslots = slot.size();

  // Per (relation, fk attr) match index: fk value -> pk list.
  std::map<std::pair<std::string, std::string>,
           std::unordered_map<std::string, std::vector<const std::string*>>>
      match_index;
  for (const auto& e : plan) {
    if (!e.expand) continue;
    auto key = std::make_pair(e.child, e.attr);
    if (match_index.count(key)) continue;
    const RelationInstance& inst = instances.at(e.child);
    std::size_t fi = 0;
    while (fi < inst.fk_attrs.size() && inst.fk_attrs[fi] != e.attr) ++fi;
    if (fi == inst.fk_attrs.size())
      throw ConfigError("relation " + e.child + " has no loaded fk column " +
                        e.attr);
    auto& idx = match_index[key];
    for (const auto& row : inst.rows)
      if (row.fk_values[fi]) idx[*row.fk_values[fi]].push_back(&row.pk);
    for (auto& [v, pks] : idx)
      std::sort(pks.begin(), pks.end(),
                [](const std::string* a, const std::string* b) {
                  return *a < *b;
                });
  }

  using Partial = std::vector<const std::string*>;  // pk per slot, null=absent
  std::vector<Partial> tuples;
  {
    const RelationInstance& root_inst = instances.at(root);
    tuples.reserve(root_inst.rows.size());
    for (const auto& row : root_inst.rows) {
      Partial t(nslots, nullptr);
      t[slot.at(root)] = &row.pk;
      tuples.push_back(std::move(t));
    }
  }

  for (const auto& e : plan) {
    const std::size_t from_slot = slot.at(e.from);
    const std::size_t to_slot = slot.at(e.to);
    std::vector<Partial> next;
    next.reserve(tuples.size());
    if (e.expand) {
      const auto& idx = match_index.at({e.child, e.attr});
      for (auto& t : tuples) {
        const std::string* from_pk = t[from_slot];
        if (!from_pk) {
          next.push_back(std::move(t));
          continue;
        }
        auto hit = idx.find(*from_pk);
        if (hit == idx.end() || hit->second.empty()) {
          next.push_back(std::move(t));
          continue;
        }
        for (const std::string* pk : hit->second) {
          Partial copy = t;
          copy[to_slot] = pk;
          next.push_back(std::move(copy));
        }
      }
    } else {
      const RelationInstance& inst = instances.at(e.child);
      const RelationInstance& target = instances.at(e.to);
      std::size_t fi = 0;
      while (fi < inst.fk_attrs.size() && inst.fk_attrs[fi] != e.attr) ++fi;
      if (fi == inst.fk_attrs.size())
        throw ConfigError("relation " + e.child + " has no loaded fk column " +
                          e.attr);
      for (auto& t : tuples) {
        const std::string* from_pk = t[from_slot];
        if (from_pk) {
          const Row* row = inst.row_by_pk(*from_pk);
          if (row && row->fk_values[fi]) {
            // Dangling values behave like nulls: the right side stays absent.
            const Row* hit = target.row_by_pk(*row->fk_values[fi]);
            if (hit) t[to_slot] = &hit->pk;
          }
        }
        next.push_back(std::move(t));
      }
    }
    tuples = std::move(next);
  }

  std::vector<std::string> slot_names(nslots);
  for (const auto& [name, i] : slot) slot_names[i] = name;
  std::vector<CausallyConnectedTuple> out;
  out.reserve(tuples.size());
  for (const auto& t : tuples) {
    CausallyConnectedTuple tuple;
    for (std::size_t i = 0; i < nslots; ++i)
      if (t[i]) tuple.pk_pairs.emplace_back(slot_names[i], *t[i]);
    out.push_back(std::move(tuple));
  }
  // slot order is already relation-name order (map iteration), so pk_pairs
  // are sorted; canonicalize the tuple set itself.
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace cegmine
