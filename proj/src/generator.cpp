#include "cegmine/generator.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include <json.hpp>

#include "cegmine/errors.hpp"
#include "cegmine/timestamp.hpp"

namespace cegmine {

namespace {

constexpr std::int64_t kSecond = 1000000;
constexpr std::int64_t kMinute = 60 * kSecond;

// Distribution helpers are hand-rolled on the raw engine so the byte
// output is stable across standard-library implementations.
struct Rand {
  std::mt19937_64 rng;

  explicit Rand(std::uint64_t seed) : rng(seed) {}

  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(
                    rng() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  bool chance(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p;
  }
};

std::string padded_id(const char* prefix, std::uint64_t n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%08llu", prefix,
                static_cast<unsigned long long>(n));
  return buf;
}

struct OrderRec {
  std::string id;
  std::int64_t ts = 0;
  bool pickup = false;
};

struct ItemRec {
  std::string id;
  std::size_t order = 0;
  std::optional<std::size_t> shipment;
  std::optional<std::size_t> pickup;
  std::int64_t picked_at = 0;
};

struct ShipmentRec {
  std::string id;
  std::vector<std::size_t> items;
  std::int64_t jitter = 0;
  std::int64_t ts = 0;
  std::size_t first_order = 0;
  bool shared = false;
};

struct PickupRec {
  std::string id;
  std::int64_t ts = 0;
};

struct InvoiceRec {
  std::string id;
  std::size_t order = 0;
  std::int64_t jitter = 0;
  std::int64_t ts = 0;
};

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot write " + path.string());
  os.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!os) throw DataError("failed writing " + path.string());
}

nlohmann::ordered_json run_config_json() {
  using oj = nlohmann::ordered_json;
  oj tables;
  tables["orders"] = oj{{"file", "orders.csv"},
                        {"pk", "order_id"},
                        {"timestamp", "received_at"},
                        {"label", "Receive Order"}};
  tables["items"] =
      oj{{"file", "items.csv"},
         {"pk", "item_id"},
         {"timestamp", "picked_at"},
         {"label", "Pick Order Item"},
         {"fks", oj::array({oj{{"column", "order_id"}, {"references", "orders"}},
                            oj{{"column", "shipment_id"},
                               {"references", "shipments"}},
                            oj{{"column", "pickup_id"},
                               {"references", "pickups"}}})}};
  tables["shipments"] = oj{{"file", "shipments.csv"},
                           {"pk", "shipment_id"},
                           {"timestamp", "shipped_at"},
                           {"label", "Register Shipment"}};
  tables["pickups"] = oj{{"file", "pickups.csv"},
                         {"pk", "pickup_id"},
                         {"timestamp", "picked_up_at"},
                         {"label", "Register Customer Pickup"}};
  tables["invoices"] =
      oj{{"file", "invoices.csv"},
         {"pk", "invoice_id"},
         {"timestamp", "invoiced_at"},
         {"label", "Post Invoice"},
         {"fks",
          oj::array({oj{{"column", "order_id"}, {"references", "orders"}}})}};

  oj cpt;
  cpt["relations"] =
      oj::array({"orders", "items", "shipments", "pickups", "invoices"});
  cpt["edges"] =
      oj::array({oj{{"from", "orders"}, {"to", "items"}},
                 oj{{"from", "items"}, {"to", "shipments"}},
                 oj{{"from", "items"}, {"to", "pickups"}},
                 oj{{"from", "shipments"}, {"to", "invoices"}},
                 oj{{"from", "pickups"}, {"to", "invoices"}}});

  oj doc;
  doc["source"] = oj{{"root", "orders"}, {"tables", std::move(tables)}};
  doc["cpt"] = std::move(cpt);
  doc["output"] = oj{{"dir", "out"}, {"format", "json"}};
  return doc;
}

}  // namespace

GeneratorResult generate_dataset(const GeneratorSpec& spec,
                                 const std::filesystem::path& out_dir) {
  if (spec.orders == 0) throw ConfigError("generator needs orders >= 1");
  if (spec.items_min < 1 || spec.items_min > spec.items_max)
    throw ConfigError("generator items range must satisfy 1 <= min <= max");
  for (double p : {spec.batching_probability, spec.pickup_probability,
                   spec.anomaly_rate})
    if (p < 0.0 || p > 1.0)
      throw ConfigError("generator probabilities must lie in [0, 1]");
  std::int64_t base;
  try {
    base = parse_timestamp(spec.start_time.empty() ? "2024-01-06T08:00:00Z"
                                                   : spec.start_time);
  } catch (const DataError& e) {
    throw ConfigError(std::string("generator start_time: ") + e.what());
  }

  Rand rand(spec.seed);
  // Anomaly injection draws from its own stream, so the base timeline of
  // a seed is identical with and without anomalies.
  Rand anomaly_rand(spec.seed ^ 0x9e3779b97f4a7c15ULL);

  std::vector<OrderRec> orders;
  std::vector<ItemRec> items;
  std::vector<ShipmentRec> shipments;
  std::vector<PickupRec> pickups;
  std::vector<InvoiceRec> invoices;
  orders.reserve(spec.orders);

  std::optional<std::size_t> pending_batch;  // open group offered onward
  std::int64_t order_clock = base;
  for (std::uint64_t i = 0; i < spec.orders; ++i) {
    if (i > 0) order_clock += 60 * kSecond + rand.range(0, 10 * kSecond);
    OrderRec order;
    order.id = padded_id("o", i + 1);
    order.ts = order_clock;
    order.pickup = rand.chance(spec.pickup_probability);
    const std::size_t order_idx = orders.size();
    orders.push_back(order);

    const int n_items =
        static_cast<int>(rand.range(spec.items_min, spec.items_max));
    std::int64_t clock = order.ts;

    if (order.pickup) {
      pending_batch.reset();  // pickups do not carry shipment groups
      std::size_t pickup_idx = pickups.size();
      for (int j = 0; j < n_items; ++j) {
        clock += 30 * kSecond + rand.range(0, 10 * kSecond);
        ItemRec item;
        item.id = padded_id("it", items.size() + 1);
        item.order = order_idx;
        item.pickup = pickup_idx;
        item.picked_at = clock;
        items.push_back(std::move(item));
      }
      PickupRec pickup;
      pickup.id = padded_id("pu", pickups.size() + 1);
      pickup.ts = clock + 30 * kMinute + rand.range(0, 5 * kMinute);
      pickups.push_back(std::move(pickup));
    } else {
      std::optional<std::size_t> group;
      if (pending_batch) {
        group = pending_batch;  // first group continues the offered one
        if (!shipments[*group].shared) {
          shipments[*group].shared = true;
        }
        pending_batch.reset();
      }
      for (int j = 0; j < n_items; ++j) {
        clock += 30 * kSecond + rand.range(0, 10 * kSecond);
        if (!group) {
          ShipmentRec sh;
          sh.id = padded_id("sh", shipments.size() + 1);
          sh.jitter = rand.range(0, 10 * kMinute);
          sh.first_order = order_idx;
          group = shipments.size();
          shipments.push_back(std::move(sh));
        }
        ItemRec item;
        item.id = padded_id("it", items.size() + 1);
        item.order = order_idx;
        item.shipment = group;
        item.picked_at = clock;
        items.push_back(std::move(item));
        shipments[*group].items.push_back(items.size() - 1);
        // Close the group before the next pick, sometimes.
        if (j + 1 < n_items && rand.chance(0.45)) {
          clock += 20 * kMinute + shipments[*group].jitter;
          group.reset();
        }
      }
      if (group && rand.chance(spec.batching_probability))
        pending_batch = group;
    }

    InvoiceRec invoice;
    invoice.id = padded_id("inv", invoices.size() + 1);
    invoice.order = order_idx;
    invoice.jitter = rand.range(0, 30 * kMinute);
    invoices.push_back(std::move(invoice));
  }

  // Shipment times depend on every covered pick, including picks a later
  // order contributed, so they settle after the main sweep.
  for (auto& sh : shipments) {
    std::int64_t last_pick = std::numeric_limits<std::int64_t>::min();
    for (std::size_t it : sh.items)
      last_pick = std::max(last_pick, items[it].picked_at);
    sh.ts = last_pick + 20 * kMinute + sh.jitter;
  }
  {
    std::vector<std::int64_t> last_terminal(
        orders.size(), std::numeric_limits<std::int64_t>::min());
    for (const auto& item : items) {
      std::int64_t terminal = item.shipment ? shipments[*item.shipment].ts
                                            : pickups[*item.pickup].ts;
      last_terminal[item.order] = std::max(last_terminal[item.order], terminal);
    }
    for (auto& inv : invoices)
      inv.ts = last_terminal[inv.order] + 60 * kMinute + inv.jitter;
  }

  GeneratorResult result;
  result.orders = orders.size();
  result.items = items.size();
  result.shipments = shipments.size();
  result.pickups = pickups.size();
  result.invoices = invoices.size();
  for (const auto& sh : shipments)
    if (sh.shared) ++result.shared_shipments;

  // Back-date picks after the fact: the recorded cause lands after its
  // effect, which downstream analysis must flag as exactly one violating
  // edge per injected item.
  for (auto& item : items) {
    ++result.eligible_anomaly_edges;
    if (!anomaly_rand.chance(spec.anomaly_rate)) continue;
    const std::int64_t terminal = item.shipment ? shipments[*item.shipment].ts
                                                : pickups[*item.pickup].ts;
    item.picked_at = terminal + 10 * kSecond + anomaly_rand.range(0, kMinute);
    ++result.injected_anomalies;
  }

  std::filesystem::create_directories(out_dir);
  {
    std::string csv = "order_id,received_at\n";
    for (const auto& o : orders)
      csv += o.id + "," + format_timestamp(o.ts) + "\n";
    write_file(out_dir / "orders.csv", csv);
  }
  {
    std::string csv = "item_id,order_id,shipment_id,pickup_id,picked_at\n";
    for (const auto& it : items) {
      csv += it.id + "," + orders[it.order].id + ",";
      if (it.shipment) csv += shipments[*it.shipment].id;
      csv += ",";
      if (it.pickup) csv += pickups[*it.pickup].id;
      csv += "," + format_timestamp(it.picked_at) + "\n";
    }
    write_file(out_dir / "items.csv", csv);
  }
  {
    std::string csv = "shipment_id,shipped_at\n";
    for (const auto& sh : shipments)
      csv += sh.id + "," + format_timestamp(sh.ts) + "\n";
    write_file(out_dir / "shipments.csv", csv);
  }
  {
    std::string csv = "pickup_id,picked_up_at\n";
    for (const auto& pu : pickups)
      csv += pu.id + "," + format_timestamp(pu.ts) + "\n";
    write_file(out_dir / "pickups.csv", csv);
  }
  {
    std::string csv = "invoice_id,order_id,invoiced_at\n";
    for (const auto& inv : invoices)
      csv += inv.id + "," + orders[inv.order].id + "," +
             format_timestamp(inv.ts) + "\n";
    write_file(out_dir / "invoices.csv", csv);
  }

  write_file(out_dir / "config.json", run_config_json().dump(2) + "\n");
  result.config_path = out_dir / "config.json";

  {
    using oj = nlohmann::ordered_json;
    oj manifest;
    manifest["seed"] = spec.seed;
    manifest["orders"] = result.orders;
    manifest["items"] = result.items;
    manifest["shipments"] = result.shipments;
    manifest["pickups"] = result.pickups;
    manifest["invoices"] = result.invoices;
    manifest["shared_shipments"] = result.shared_shipments;
    manifest["eligible_anomaly_edges"] = result.eligible_anomaly_edges;
    manifest["injected_anomalies"] = result.injected_anomalies;
    manifest["items_per_order"] =
        oj::array({spec.items_min, spec.items_max});
    manifest["batching_probability"] = spec.batching_probability;
    manifest["pickup_probability"] = spec.pickup_probability;
    manifest["anomaly_rate"] = spec.anomaly_rate;
    write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
  }
  return result;
}

}  // namespace cegmine
