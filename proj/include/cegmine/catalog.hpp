#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cegmine/validation.hpp"

namespace cegmine {

// Relational model of an event source. The first attribute of every
// relation is its primary key; identifier attributes draw values from a
// key domain, and a foreign key ties a non-key identifier attribute to
// the relation owning that domain. Every relation carries one timestamp
// attribute, so each row can become an event.

enum class AttrKind { identifier, timestamp, text };

struct Attribute {
  std::string name;
  AttrKind kind = AttrKind::text;
  std::string id_domain;  // identifier attrs only: the key domain drawn from
};

struct RelationSchema {
  std::string name;
  std::vector<Attribute> attrs;  // attrs[0] is the primary key
  std::string timestamp_attr;
  std::string label;  // event-type label for rows of this relation

  const Attribute* find_attr(const std::string& attr_name) const;
  const std::string& id_attr() const { return attrs.front().name; }
};

struct ForeignKey {
  std::string from_relation;
  std::string from_attr;
  std::string to_relation;
};

struct Catalog {
  std::vector<RelationSchema> schemas;  // sorted by name
  std::vector<ForeignKey> foreign_keys;

  const RelationSchema* find_schema(const std::string& name) const;
  const std::string& label_of(const std::string& relation) const;
};

// Checks schema well-formedness: primary keys first and identifier-typed,
// key domains distinct across relations, timestamp attribute present,
// foreign keys resolvable. Reports all violations, throws nothing.
ValidationReport validate_catalog(const Catalog& catalog);

struct Row {
  std::string pk;
  std::int64_t timestamp = 0;  // microseconds since epoch
  // Parallel to RelationInstance::fk_attrs; nullopt for empty cells.
  std::vector<std::optional<std::string>> fk_values;
};

struct RelationInstance {
  std::string relation;
  std::vector<std::string> fk_attrs;  // foreign-key column names, schema order
  std::vector<Row> rows;
  std::unordered_map<std::string, std::size_t> pk_index;

  const Row* row_by_pk(const std::string& pk) const;
  void reindex();  // rebuilds pk_index after manual row edits
};

// One row of the left outer join: the non-null (relation, pk) pairs,
// sorted by relation name, at most one per relation.
struct CausallyConnectedTuple {
  std::vector<std::pair<std::string, std::string>> pk_pairs;

  const std::string* key_for(const std::string& relation) const;
  auto operator<=>(const CausallyConnectedTuple&) const = default;
};

inline const std::vector<std::pair<std::string, std::string>>& pk_pairs(
    const CausallyConnectedTuple& t) {
  return t.pk_pairs;
}

// Declarative source description, normally parsed from the JSON config.
struct FkSpec {
  std::string column;
  std::string references;
};

struct TableSpec {
  std::string file;  // delimited text with a header row
  std::string pk;
  std::string timestamp;
  std::string label;
  std::vector<FkSpec> fks;
};

struct SourceSpec {
  std::string root;
  std::map<std::string, TableSpec> tables;  // keyed by relation name
};

struct LoadedSource {
  Catalog catalog;
  std::map<std::string, RelationInstance> instances;
  std::string root;
  std::map<std::string, std::size_t> row_counts;
};

// Schemas and foreign keys from the declarative description alone, no
// file access. Throws ConfigError on inconsistent specs.
Catalog catalog_from_spec(const SourceSpec& spec);

// Reads every configured table into memory. Relative file paths resolve
// against base_dir. Throws ConfigError for spec-level problems (unknown
// root, missing columns in the spec) and DataError for broken files
// (missing file, duplicate pk, bad timestamp).
LoadedSource load_catalog(const SourceSpec& spec,
                          const std::filesystem::path& base_dir);

// Left outer join over the fk-connected relations in `relations`,
// starting from `root`. Every returned tuple contains the root key;
// keys of unmatched relations are simply absent. Throws ConfigError if
// fewer than two relations are given, the root is not among them, or
// the set is not connected via foreign keys.
std::vector<CausallyConnectedTuple> left_outer_join(
    const Catalog& catalog,
    const std::map<std::string, RelationInstance>& instances,
    const std::vector<std::string>& relations, const std::string& root);

}  // namespace cegmine
