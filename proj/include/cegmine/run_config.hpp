#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "cegmine/catalog.hpp"
#include "cegmine/cpt.hpp"
#include "cegmine/generator.hpp"

namespace cegmine {

struct OutputSpec {
  std::string dir = ".";
  std::string format = "json";  // json, dot or csv
};

struct ThresholdsSpec {
  // Cycle-time traffic-light cutoffs in microseconds; both or neither.
  std::optional<std::int64_t> cycle_green_max;
  std::optional<std::int64_t> cycle_orange_max;
};

// A whole run configuration file. Sections are optional; each subcommand
// checks for the ones it needs.
struct RunConfig {
  std::optional<SourceSpec> source;
  std::optional<CptSpec> cpt;
  OutputSpec output;
  ThresholdsSpec thresholds;
  std::optional<GeneratorSpec> generator;
  std::filesystem::path base_dir;  // directory the config lives in
};

// Throws ConfigError on syntax errors (with location), unknown enum
// values, bad probability or threshold ranges.
RunConfig parse_run_config(const std::string& json_text,
                           const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace cegmine
