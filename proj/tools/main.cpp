// Command-line front end: generate synthetic data, build the causal event
// database from relational tables, aggregate, analyze and export it.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cegmine/aceg.hpp"
#include "cegmine/analysis.hpp"
#include "cegmine/artifact.hpp"
#include "cegmine/catalog.hpp"
#include "cegmine/ceg.hpp"
#include "cegmine/cpt.hpp"
#include "cegmine/errors.hpp"
#include "cegmine/export.hpp"
#include "cegmine/generator.hpp"
#include "cegmine/run_config.hpp"
#include "cegmine/timestamp.hpp"

namespace {

using namespace cegmine;

struct CommonOpts {
  std::string config_path;
  std::string out_dir;  // overrides output.dir when set
  std::string root;     // overrides the projection root when set
  std::string format;   // overrides output.format when set
};

void print_issues(const ValidationReport& report) {
  for (const auto& issue : report.issues) {
    std::cerr << (issue.severity == Severity::error ? "error" : "warning")
              << ": [" << issue.code << "] " << issue.message << "\n";
  }
}

std::filesystem::path resolve_out_dir(const RunConfig& config,
                                      const CommonOpts& opts) {
  std::filesystem::path dir =
      opts.out_dir.empty() ? config.base_dir / config.output.dir
                           : std::filesystem::path(opts.out_dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::filesystem::path artifact_path(const RunConfig& config,
                                    const CommonOpts& opts) {
  return resolve_out_dir(config, opts) / "cegdb.json";
}

std::string effective_format(const RunConfig& config, const CommonOpts& opts,
                             const char* fallback) {
  if (!opts.format.empty()) return opts.format;
  if (!config.output.format.empty()) return config.output.format;
  return fallback;
}

const SourceSpec& require_source(const RunConfig& config) {
  if (!config.source)
    throw ConfigError("config has no \"source\" section");
  return *config.source;
}

CausalProcessTemplate make_template(const RunConfig& config,
                                    const Catalog& catalog) {
  ValidationReport warnings;
  CausalProcessTemplate cpt;
  if (config.cpt) {
    cpt = parse_cpt(*config.cpt, catalog, &warnings);
  } else {
    std::vector<std::string> all;
    for (const auto& schema : catalog.schemas) all.push_back(schema.name);
    cpt = default_cpt(catalog, all);
    std::cerr << "note: no template configured, derived one from foreign keys\n";
  }
  ValidationReport report = validate_cpt(cpt, catalog);
  warnings.merge(report);
  print_issues(warnings);
  warnings.throw_if_errors();
  return cpt;
}

CausalEventDatabase build_database(const RunConfig& config, bool verbose) {
  const SourceSpec& source = require_source(config);
  LoadedSource loaded = load_catalog(source, config.base_dir);
  ValidationReport catalog_report = validate_catalog(loaded.catalog);
  print_issues(catalog_report);
  catalog_report.throw_if_errors();
  if (verbose)
    for (const auto& [name, count] : loaded.row_counts)
      std::cout << "loaded " << name << ": " << count << " rows\n";

  CausalProcessTemplate cpt = make_template(config, loaded.catalog);
  auto tuples = left_outer_join(loaded.catalog, loaded.instances,
                                cpt.relations, loaded.root);
  return CausalEventDatabase::build(tuples, cpt, loaded.catalog,
                                    loaded.instances, loaded.root);
}

CausalEventDatabase load_database(const RunConfig& config,
                                  const CommonOpts& opts) {
  std::filesystem::path path = artifact_path(config, opts);
  if (!std::filesystem::exists(path))
    throw ConfigError("no database artifact at " + path.string() +
                      "; run the build subcommand first");
  return read_artifact_file(path);
}

std::string projection_root(const RunConfig&, const CommonOpts& opts,
                            const CausalEventDatabase& db) {
  return opts.root.empty() ? db.root_relation() : opts.root;
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot write " + path.string());
  os.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!os) throw DataError("failed writing " + path.string());
}

int run_generate(const CommonOpts& opts, std::optional<std::uint64_t> seed,
                 std::optional<std::uint64_t> orders) {
  RunConfig config = load_run_config(opts.config_path);
  if (!config.generator)
    throw ConfigError("config has no \"generator\" section");
  GeneratorSpec spec = *config.generator;
  if (seed) spec.seed = *seed;
  if (orders) spec.orders = *orders;
  std::filesystem::path dir = resolve_out_dir(config, opts);
  GeneratorResult result = generate_dataset(spec, dir);
  std::cout << "generated " << result.orders << " orders, " << result.items
            << " items, " << result.shipments << " shipments, "
            << result.pickups << " pickups, " << result.invoices
            << " invoices -> " << dir.string() << "\n";
  std::cout << "shared shipments: " << result.shared_shipments
            << ", anomalies injected: " << result.injected_anomalies << " of "
            << result.eligible_anomaly_edges << " eligible edges\n";
  std::cout << "run config: " << result.config_path.string() << "\n";
  return 0;
}

int run_build(const CommonOpts& opts) {
  RunConfig config = load_run_config(opts.config_path);
  CausalEventDatabase db = build_database(config, true);
  std::filesystem::path path = artifact_path(config, opts);
  write_artifact_file(db, path);
  const std::size_t n_components = components(db).size();
  const std::size_t n_projections =
      case_projections(db, db.root_relation()).size();
  std::cout << db.event_count() << " events, " << db.edge_count()
            << " edges, " << db.fragment_count() << " fragments, "
            << n_components << " components, " << n_projections
            << " projections\n";
  std::cout << "artifact: " << path.string() << "\n";
  return 0;
}

int run_aggregate(const CommonOpts& opts, int level) {
  RunConfig config = load_run_config(opts.config_path);
  CausalEventDatabase db = load_database(config, opts);
  const std::string format = effective_format(config, opts, "json");
  if (format != "json" && format != "dot")
    throw ConfigError("aggregate supports json or dot output");
  std::filesystem::path dir = resolve_out_dir(config, opts);
  auto views = case_projections(db, projection_root(config, opts, db));

  auto render = [&](const AggregatedCeg& aceg) {
    return format == "dot" ? export_aceg_dot(aceg) : export_aceg_json(aceg);
  };
  std::size_t written = 0;
  if (level == 1) {
    for (const auto& view : views) {
      AggregatedCeg aceg = aggregate_level1(db, view);
      write_text_file(dir / ("aceg_l1_" + view.id + "." + format),
                      render(aceg));
      ++written;
    }
  } else if (level == 2) {
    auto classes = aggregate_level2(db, views);
    for (std::size_t i = 0; i < classes.size(); ++i) {
      write_text_file(dir / ("aceg_l2_" + std::to_string(i) + "." + format),
                      render(classes[i]));
      ++written;
    }
  } else {
    AggregatedCeg aceg = aggregate_level3(db, views);
    write_text_file(dir / ("aceg_l3." + format), render(aceg));
    ++written;
  }
  std::cout << "wrote " << written << " aggregate file(s) to " << dir.string()
            << "\n";
  return 0;
}

int run_kpi(const CommonOpts& opts, bool no_start_events) {
  RunConfig config = load_run_config(opts.config_path);
  CausalEventDatabase db = load_database(config, opts);
  auto views = case_projections(db, projection_root(config, opts, db));
  auto frag_views = fragments(db);
  AggregatedCeg level3 = aggregate_level3(db, views);
  auto violations = temporal_violations(db);
  std::filesystem::path dir = resolve_out_dir(config, opts);
  std::string report = kpi_report_json(db, views, frag_views, level3,
                                       violations, !no_start_events);
  write_text_file(dir / "kpi.json", report);
  std::cout << "kpi report: " << (dir / "kpi.json").string() << "\n";
  std::cout << "cases: " << views.size() << ", temporal violations: "
            << violations.size() << "\n";
  return 0;
}

int run_violations(const CommonOpts& opts) {
  RunConfig config = load_run_config(opts.config_path);
  CausalEventDatabase db = load_database(config, opts);
  auto violations = temporal_violations(db);
  std::filesystem::path dir = resolve_out_dir(config, opts);
  write_text_file(dir / "violations.csv", violations_csv(db, violations));
  std::cout << violations.size() << " temporal violations -> "
            << (dir / "violations.csv").string() << "\n";
  return 0;
}

int run_compare(const CommonOpts& opts) {
  RunConfig config = load_run_config(opts.config_path);
  CausalEventDatabase db = load_database(config, opts);
  Catalog catalog = catalog_from_spec(require_source(config));
  CausalProcessTemplate cpt = make_template(config, catalog);
  ExpectedModel expected = expected_from_cpt(cpt, catalog);

  const std::string root = projection_root(config, opts, db);
  auto views = case_projections(db, root);

  auto log = flatten_to_event_log(db, root);
  DirectlyFollowsGraph dfg = mine_dfg(log);
  ConformanceTable dfg_table = conformance_table(flow_from_dfg(dfg), expected);

  AggregatedCeg level3 = aggregate_level3(db, views);
  ConformanceTable aceg_table =
      conformance_table(flow_from_aceg(db, level3, views), expected);
  auto violations = temporal_violations(db);
  auto violation_counts = violation_counts_by_type(db, violations);

  const std::uint64_t dfg_score = conformance_score(dfg_table);
  const std::uint64_t aceg_score =
      conformance_score(aceg_table, expected, violation_counts);

  std::filesystem::path dir = resolve_out_dir(config, opts);
  write_text_file(dir / "conformance_dfg.csv", conformance_csv(dfg_table));
  write_text_file(dir / "conformance_aceg.csv", conformance_csv(aceg_table));
  {
    nlohmann::ordered_json doc;
    doc["baseline"] = {{"unexpected", dfg_table.cumulative_unexpected},
                       {"score", dfg_score}};
    std::uint64_t on_expected = aceg_score - aceg_table.cumulative_unexpected;
    doc["causal"] = {{"unexpected", aceg_table.cumulative_unexpected},
                     {"violations_on_sanctioned_edges", on_expected},
                     {"score", aceg_score}};
    write_text_file(dir / "compare.json", doc.dump(2) + "\n");
  }
  std::cout << "baseline (flattened) score: " << dfg_score << "\n";
  std::cout << "causal graph score: " << aceg_score << "\n";
  return 0;
}

int run_export(const CommonOpts& opts, const std::string& view_key) {
  RunConfig config = load_run_config(opts.config_path);
  CausalEventDatabase db = load_database(config, opts);
  const std::string format = effective_format(config, opts, "dot");
  if (format != "json" && format != "dot")
    throw ConfigError("export supports json or dot output");
  std::filesystem::path dir = resolve_out_dir(config, opts);

  std::optional<CegView> view;
  if (!view_key.empty()) {
    auto views = case_projections(db, projection_root(config, opts, db));
    for (auto& v : views)
      if (v.id == view_key) {
        view = std::move(v);
        break;
      }
    if (!view)
      throw ConfigError("no case projection with root key " + view_key);
  }

  auto violations = temporal_violations(db);
  std::string text;
  if (format == "json") {
    text = view ? export_ceg_json(db, *view) : export_ceg_json(db);
  } else {
    TrafficLight thresholds;
    if (config.thresholds.cycle_green_max) {
      thresholds.green_max = *config.thresholds.cycle_green_max;
      thresholds.orange_max = *config.thresholds.cycle_orange_max;
    } else {
      std::vector<std::int64_t> samples;
      if (view) {
        for (EventIndex e : view->events)
          samples.push_back(cycle_time(db, *view, e));
      } else {
        for (EventIndex e = 0; e < db.event_count(); ++e)
          samples.push_back(cycle_time(db, e));
      }
      thresholds = tertile_thresholds(std::move(samples));
    }
    text = view ? export_ceg_dot(db, *view, thresholds, violations)
                : export_ceg_dot(db, thresholds, violations);
  }
  std::filesystem::path path = dir / ("ceg." + format);
  write_text_file(path, text);
  std::cout << "exported " << (view ? "projection " + view->id : "database")
            << " -> " << path.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"causal event graph mining over relational event sources"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::optional<std::uint64_t> seed_override, orders_override;
  int level = 3;
  bool no_start_events = false;
  std::string view_key;

  auto add_common = [&](CLI::App* cmd, bool with_root = true) {
    cmd->add_option("--config", opts.config_path, "run configuration file")
        ->required();
    cmd->add_option("--out", opts.out_dir,
                    "output directory (overrides output.dir)");
    if (with_root)
      cmd->add_option("--root", opts.root,
                      "projection root relation (default: join root)");
  };

  CLI::App* generate =
      app.add_subcommand("generate", "write a synthetic dataset");
  add_common(generate, false);
  generate->add_option("--seed", seed_override, "override generator seed");
  generate->add_option("--orders", orders_override,
                       "override generated order count");

  CLI::App* build =
      app.add_subcommand("build", "join tables and build the event graph");
  add_common(build, false);

  CLI::App* aggregate =
      app.add_subcommand("aggregate", "aggregate case graphs by type");
  add_common(aggregate);
  aggregate->add_option("--level", level, "aggregation level")
      ->check(CLI::Range(1, 3));
  aggregate->add_option("--format", opts.format, "output format")
      ->check(CLI::IsMember({"json", "dot"}));

  CLI::App* kpi = app.add_subcommand("kpi", "cycle-time and batching report");
  add_common(kpi);
  kpi->add_flag("--no-start-events", no_start_events,
                "exclude events without causes from cycle-time stats");

  CLI::App* violations =
      app.add_subcommand("violations", "list temporal violations");
  add_common(violations, false);

  CLI::App* compare = app.add_subcommand(
      "compare", "conformance of flattened baseline vs causal graph");
  add_common(compare);

  CLI::App* exp = app.add_subcommand("export", "export the event graph");
  add_common(exp);
  exp->add_option("--view", view_key, "export one case projection");
  exp->add_option("--format", opts.format, "output format")
      ->check(CLI::IsMember({"json", "dot"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (generate->parsed())
      return run_generate(opts, seed_override, orders_override);
    if (build->parsed()) return run_build(opts);
    if (aggregate->parsed()) return run_aggregate(opts, level);
    if (kpi->parsed()) return run_kpi(opts, no_start_events);
    if (violations->parsed()) return run_violations(opts);
    if (compare->parsed()) return run_compare(opts);
    if (exp->parsed()) return run_export(opts, view_key);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 3;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
