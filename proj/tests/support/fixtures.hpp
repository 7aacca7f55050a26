#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "cegmine/catalog.hpp"
#include "cegmine/ceg.hpp"
#include "cegmine/cpt.hpp"

namespace fixtures {

class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

void write_file(const std::filesystem::path& path, const std::string& text);
std::string read_file(const std::filesystem::path& path);

struct CommandResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr interleaved
};

CommandResult run_command(const std::string& command);

// Order fulfillment example used throughout the tests: three purchase
// orders, five picked items, two shipments (one serving two orders) and
// one customer pickup. Timestamps are small integers so expected cycle
// times stay readable.
cegmine::SourceSpec order_source_spec();
cegmine::CptSpec order_cpt_spec();
void write_order_csvs(const std::filesystem::path& dir);
std::string order_run_config_json();

struct Pipeline {
  cegmine::LoadedSource loaded;
  cegmine::CausalProcessTemplate cpt;
  std::vector<cegmine::CausallyConnectedTuple> tuples;
  cegmine::CausalEventDatabase db;
};

// Writes the example CSVs into dir and runs load, join and build.
Pipeline build_order_pipeline(const std::filesystem::path& dir);

// A random fk-connected source: 2..5 relations wired as a random tree,
// random row counts, nulls and dangling references mixed in, template
// edges randomly oriented along the tree (hence always acyclic).
struct SyntheticSource {
  cegmine::Catalog catalog;
  std::map<std::string, cegmine::RelationInstance> instances;
  cegmine::CausalProcessTemplate cpt;
  std::string root;
};

SyntheticSource random_source(std::mt19937_64& rng);

}  // namespace fixtures
