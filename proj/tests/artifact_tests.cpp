#include <doctest.h>

#include <json.hpp>

#include "cegmine/artifact.hpp"
#include "cegmine/errors.hpp"
#include "support/fixtures.hpp"

using namespace cegmine;
using nlohmann::json;

TEST_CASE("databases survive the write and read round trip") {
  fixtures::TempDir dir;
  auto p = fixtures::build_order_pipeline(dir.path());
  const auto path = dir.path() / "db.json";

  write_artifact_file(p.db, path);
  CausalEventDatabase back = read_artifact_file(path);

  CHECK(back.event_count() == p.db.event_count());
  CHECK(back.edges() == p.db.edges());
  CHECK(back.root_relation() == p.db.root_relation());
  REQUIRE(back.relations().size() == p.db.relations().size());
  for (std::size_t i = 0; i < back.relations().size(); ++i) {
    CHECK(back.relations()[i].name == p.db.relations()[i].name);
    CHECK(back.relations()[i].label == p.db.relations()[i].label);
  }
  REQUIRE(back.fragment_count() == p.db.fragment_count());
  for (std::size_t i = 0; i < back.fragment_count(); ++i) {
    CHECK(back.fragment_records()[i].events == p.db.fragment_records()[i].events);
    CHECK(back.fragment_records()[i].root_key ==
          p.db.fragment_records()[i].root_key);
  }
  for (EventIndex e = 0; e < back.event_count(); ++e) {
    CHECK(back.event_id(e) == p.db.event_id(e));
    CHECK(back.timestamp_of(e) == p.db.timestamp_of(e));
  }
}

TEST_CASE("the artifact layout is stable json") {
  fixtures::TempDir dir;
  auto p = fixtures::build_order_pipeline(dir.path());
  const auto path = dir.path() / "db.json";
  write_artifact_file(p.db, path);

  json doc = json::parse(fixtures::read_file(path));
  CHECK(doc["format"] == "ceg-db-v1");
  CHECK(doc["root_relation"] == "purchase_orders");
  REQUIRE(doc["relations"].size() == 4);
  CHECK(doc["relations"][0]["name"] == "customer_pickups");
  CHECK(doc["relations"][0]["label"] == "Register Customer Pickup");
  REQUIRE(doc["events"].size() == 11);
  CHECK(doc["events"][0] == json::array({0, "cu1", 420}));
  REQUIRE(doc["edges"].size() == 10);
  CHECK(doc["edges"][0] == json::array({1, 9}));
  REQUIRE(doc["fragments"].size() == 5);
  CHECK(doc["fragments"][0]["root"] == "or3");
}

TEST_CASE("equal databases produce byte-identical artifacts") {
  fixtures::TempDir a_dir, b_dir;
  auto a = fixtures::build_order_pipeline(a_dir.path());

  // Same data, different physical row order.
  fixtures::write_file(b_dir.path() / "purchase_orders.csv",
                       "po_id,po_ts\nor2,200\nor3,300\nor1,100\n");
  fixtures::write_file(b_dir.path() / "order_items.csv",
                       "oi_id,po_id,sh_id,cu_id,oi_ts\n"
                       "pi5,or3,,cu1,360\n"
                       "pi2,or1,sh1,,170\n"
                       "pi4,or2,sh2,,260\n"
                       "pi1,or1,sh1,,160\n"
                       "pi3,or1,sh2,,180\n");
  fixtures::write_file(b_dir.path() / "shipments.csv",
                       "sh_id,sh_ts\nsh2,400\nsh1,250\n");
  fixtures::write_file(b_dir.path() / "customer_pickups.csv",
                       "cu_id,cu_ts\ncu1,420\n");
  auto loaded = load_catalog(fixtures::order_source_spec(), b_dir.path());
  auto cpt = parse_cpt(fixtures::order_cpt_spec(), loaded.catalog);
  auto tuples = left_outer_join(loaded.catalog, loaded.instances,
                                cpt.relations, loaded.root);
  auto b = CausalEventDatabase::build(tuples, cpt, loaded.catalog,
                                      loaded.instances, loaded.root);

  write_artifact_file(a.db, a_dir.path() / "a.json");
  write_artifact_file(b, b_dir.path() / "b.json");
  CHECK(fixtures::read_file(a_dir.path() / "a.json") ==
        fixtures::read_file(b_dir.path() / "b.json"));
}

TEST_CASE("broken artifacts are data errors") {
  fixtures::TempDir dir;

  SUBCASE("missing file") {
    CHECK_THROWS_AS(read_artifact_file(dir.path() / "nope.json"), DataError);
  }
  SUBCASE("invalid json") {
    fixtures::write_file(dir.path() / "bad.json", "{not json");
    CHECK_THROWS_AS(read_artifact_file(dir.path() / "bad.json"), DataError);
  }
  SUBCASE("unknown format tag") {
    fixtures::write_file(dir.path() / "bad.json", R"({"format":"nope"})");
    CHECK_THROWS_AS(read_artifact_file(dir.path() / "bad.json"), DataError);
  }
  SUBCASE("event index out of range") {
    fixtures::write_file(
        dir.path() / "bad.json",
        R"({"format":"ceg-db-v1","root_relation":"x",)"
        R"("relations":[{"name":"x","label":"X"}],)"
        R"("events":[[0,"a",1]],"edges":[[0,5]],"fragments":[]})");
    CHECK_THROWS_AS(read_artifact_file(dir.path() / "bad.json"), DataError);
  }
  SUBCASE("relation index out of range") {
    fixtures::write_file(
        dir.path() / "bad.json",
        R"({"format":"ceg-db-v1","root_relation":"x",)"
        R"("relations":[{"name":"x","label":"X"}],)"
        R"("events":[[7,"a",1]],"edges":[],"fragments":[]})");
    CHECK_THROWS_AS(read_artifact_file(dir.path() / "bad.json"), DataError);
  }
}
