#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

namespace cegmine {

// Synthetic order-to-cash dataset: orders receive items, items leave via
// grouped shipments or a customer pickup, and an invoice closes the order
// after its last outgoing goods. Shipment groups may be shared with the
// following order (batching), and a fraction of item picks can be
// re-dated after their shipment or pickup to inject temporal anomalies.
struct GeneratorSpec {
  std::uint64_t orders = 100;
  int items_min = 2;
  int items_max = 5;
  double batching_probability = 0.2;  // share the open group with next order
  double pickup_probability = 0.15;   // order leaves via customer pickup
  double anomaly_rate = 0.0;          // per item: back-date its pick
  std::uint64_t seed = 1;
  std::string start_time;  // ISO-8601; empty means 2024-01-06T08:00:00Z
};

struct GeneratorResult {
  std::uint64_t orders = 0;
  std::uint64_t items = 0;
  std::uint64_t shipments = 0;
  std::uint64_t pickups = 0;
  std::uint64_t invoices = 0;
  std::uint64_t eligible_anomaly_edges = 0;  // item-to-terminal edges
  std::uint64_t injected_anomalies = 0;      // back-dated picks
  std::uint64_t shared_shipments = 0;        // shipments serving >1 order
  std::filesystem::path config_path;         // ready-to-build run config
};

// Writes orders.csv, items.csv, shipments.csv, pickups.csv, invoices.csv,
// a matching run config (config.json) and a manifest.json with the result
// counts into out_dir. Same spec, same files, byte for byte.
GeneratorResult generate_dataset(const GeneratorSpec& spec,
                                 const std::filesystem::path& out_dir);

}  // namespace cegmine
