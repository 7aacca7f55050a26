#include "support/fixtures.hpp"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <sys/wait.h>
#include <unistd.h>

namespace fixtures {

using namespace cegmine;

TempDir::TempDir() {
  static std::atomic<unsigned> counter{0};
  const auto base = std::filesystem::temp_directory_path();
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::filesystem::path candidate =
        base / ("cegmine-test-" + std::to_string(::getpid()) + "-" +
                std::to_string(counter.fetch_add(1)));
    std::error_code ec;
    if (std::filesystem::create_directory(candidate, ec) && !ec) {
      path_ = candidate;
      return;
    }
  }
  throw std::runtime_error("could not create a temporary directory");
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << text;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << is.rdbuf();
  return buf.str();
}

CommandResult run_command(const std::string& command) {
  CommandResult result;
  std::string wrapped = "( " + command + " ) 2>&1";
  FILE* pipe = ::popen(wrapped.c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed for: " + command);
  char buffer[4096];
  std::size_t n;
  while ((n = ::fread(buffer, 1, sizeof buffer, pipe)) > 0)
    result.output.append(buffer, n);
  int status = ::pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

SourceSpec order_source_spec() {
  SourceSpec spec;
  spec.root = "purchase_orders";
  spec.tables["purchase_orders"] = {"purchase_orders.csv", "po_id", "po_ts",
                                    "Receive Purchase Order", {}};
  spec.tables["order_items"] = {"order_items.csv",
                                "oi_id",
                                "oi_ts",
                                "Pick Order Item",
                                {{"po_id", "purchase_orders"},
                                 {"sh_id", "shipments"},
                                 {"cu_id", "customer_pickups"}}};
  spec.tables["shipments"] = {"shipments.csv", "sh_id", "sh_ts",
                              "Register Shipment", {}};
  spec.tables["customer_pickups"] = {"customer_pickups.csv", "cu_id", "cu_ts",
                                     "Register Customer Pickup", {}};
  return spec;
}

CptSpec order_cpt_spec() {
  CptSpec spec;
  spec.relations = {"purchase_orders", "order_items", "shipments",
                    "customer_pickups"};
  spec.edges = {{"purchase_orders", "order_items"},
                {"order_items", "shipments"},
                {"order_items", "customer_pickups"}};
  return spec;
}

void write_order_csvs(const std::filesystem::path& dir) {
  write_file(dir / "purchase_orders.csv",
             "po_id,po_ts\n"
             "or1,100\n"
             "or2,200\n"
             "or3,300\n");
  write_file(dir / "order_items.csv",
             "oi_id,po_id,sh_id,cu_id,oi_ts\n"
             "pi1,or1,sh1,,160\n"
             "pi2,or1,sh1,,170\n"
             "pi3,or1,sh2,,180\n"
             "pi4,or2,sh2,,260\n"
             "pi5,or3,,cu1,360\n");
  write_file(dir / "shipments.csv",
             "sh_id,sh_ts\n"
             "sh1,250\n"
             "sh2,400\n");
  write_file(dir / "customer_pickups.csv",
             "cu_id,cu_ts\n"
             "cu1,420\n");
}

std::string order_run_config_json() {
  return R"({
  "source": {
    "root": "purchase_orders",
    "tables": {
      "purchase_orders": {"file": "purchase_orders.csv", "pk": "po_id",
                          "timestamp": "po_ts",
                          "label": "Receive Purchase Order"},
      "order_items": {"file": "order_items.csv", "pk": "oi_id",
                      "timestamp": "oi_ts", "label": "Pick Order Item",
                      "fks": [{"column": "po_id",
                               "references": "purchase_orders"},
                              {"column": "sh_id", "references": "shipments"},
                              {"column": "cu_id",
                               "references": "customer_pickups"}]},
      "shipments": {"file": "shipments.csv", "pk": "sh_id",
                    "timestamp": "sh_ts", "label": "Register Shipment"},
      "customer_pickups": {"file": "customer_pickups.csv", "pk": "cu_id",
                           "timestamp": "cu_ts",
                           "label": "Register Customer Pickup"}
    }
  },
  "cpt": {
    "relations": ["purchase_orders", "order_items", "shipments",
                  "customer_pickups"],
    "edges": [{"from": "purchase_orders", "to": "order_items"},
              {"from": "order_items", "to": "shipments"},
              {"from": "order_items", "to": "customer_pickups"}]
  },
  "output": {"dir": "out", "format": "json"}
}
)";
}

Pipeline build_order_pipeline(const std::filesystem::path& dir) {
  write_order_csvs(dir);
  Pipeline p;
  p.loaded = load_catalog(order_source_spec(), dir);
  p.cpt = parse_cpt(order_cpt_spec(), p.loaded.catalog);
  p.tuples = left_outer_join(p.loaded.catalog, p.loaded.instances,
                             p.cpt.relations, p.loaded.root);
  p.db = CausalEventDatabase::build(p.tuples, p.cpt, p.loaded.catalog,
                                    p.loaded.instances, p.loaded.root);
  return p;
}

SyntheticSource random_source(std::mt19937_64& rng) {
  const std::size_t n_rel = 2 + rng() % 4;

  // Tree shape: parent[i] < i, plus the side holding the fk column.
  std::vector<std::size_t> parent(n_rel, 0);
  std::vector<bool> child_holds_fk(n_rel, true);
  for (std::size_t i = 1; i < n_rel; ++i) {
    parent[i] = rng() % i;
    child_holds_fk[i] = rng() % 2 == 0;
  }

  auto rel_name = [](std::size_t i) { return "r" + std::to_string(i); };

  SourceSpec spec;
  spec.root = rel_name(0);
  for (std::size_t i = 0; i < n_rel; ++i) {
    TableSpec table;
    table.file = rel_name(i) + ".csv";  // never read, instances are in memory
    table.pk = "id";
    table.timestamp = "ts";
    table.label = "T" + std::to_string(i);
    spec.tables[rel_name(i)] = std::move(table);
  }
  for (std::size_t i = 1; i < n_rel; ++i) {
    const std::string holder = child_holds_fk[i] ? rel_name(i) : rel_name(parent[i]);
    const std::string target = child_holds_fk[i] ? rel_name(parent[i]) : rel_name(i);
    spec.tables[holder].fks.push_back({"ref_" + target, target});
  }

  SyntheticSource source;
  source.root = spec.root;
  source.catalog = catalog_from_spec(spec);

  // Rows first, so fk values can point at real keys (or deliberately not).
  std::vector<std::vector<std::string>> pks(n_rel);
  for (std::size_t i = 0; i < n_rel; ++i) {
    const std::size_t n_rows = 1 + rng() % 25;
    for (std::size_t j = 0; j < n_rows; ++j)
      pks[i].push_back(rel_name(i) + "k" + std::to_string(j));
  }

  for (std::size_t i = 0; i < n_rel; ++i) {
    RelationInstance inst;
    inst.relation = rel_name(i);
    for (const auto& fk : spec.tables[inst.relation].fks)
      inst.fk_attrs.push_back(fk.column);
    for (const auto& pk : pks[i]) {
      Row row;
      row.pk = pk;
      row.timestamp = static_cast<std::int64_t>(rng() % 1000000);
      for (const auto& fk : spec.tables[inst.relation].fks) {
        std::size_t target = 0;
        while (rel_name(target) != fk.references) ++target;
        const std::uint64_t roll = rng() % 100;
        if (roll < 80)
          row.fk_values.push_back(pks[target][rng() % pks[target].size()]);
        else if (roll < 90)
          row.fk_values.push_back(std::nullopt);
        else
          row.fk_values.push_back("zz" + std::to_string(rng() % 5));
      }
      inst.rows.push_back(std::move(row));
    }
    inst.reindex();
    source.instances.emplace(inst.relation, std::move(inst));
  }

  // Random orientation of tree edges can never build a cycle.
  CptSpec cpt_spec;
  for (std::size_t i = 0; i < n_rel; ++i)
    cpt_spec.relations.push_back(rel_name(i));
  for (std::size_t i = 1; i < n_rel; ++i) {
    if (rng() % 2 == 0)
      cpt_spec.edges.emplace_back(rel_name(parent[i]), rel_name(i));
    else
      cpt_spec.edges.emplace_back(rel_name(i), rel_name(parent[i]));
  }
  source.cpt = parse_cpt(cpt_spec, source.catalog);
  return source;
}

}  // namespace fixtures
