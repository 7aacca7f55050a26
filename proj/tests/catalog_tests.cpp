#include <doctest.h>

#include <vector>

#include "cegmine/catalog.hpp"
#include "cegmine/errors.hpp"
#include "support/fixtures.hpp"

using namespace cegmine;

namespace {

CausallyConnectedTuple tuple_of(
    std::vector<std::pair<std::string, std::string>> pairs) {
  CausallyConnectedTuple t;
  t.pk_pairs = std::move(pairs);
  std::sort(t.pk_pairs.begin(), t.pk_pairs.end());
  return t;
}

}  // namespace

TEST_CASE("the example source loads with labels and row counts") {
  fixtures::TempDir dir;
  fixtures::write_order_csvs(dir.path());
  LoadedSource loaded = load_catalog(fixtures::order_source_spec(), dir.path());

  CHECK(loaded.root == "purchase_orders");
  CHECK(loaded.row_counts.at("purchase_orders") == 3);
  CHECK(loaded.row_counts.at("order_items") == 5);
  CHECK(loaded.row_counts.at("shipments") == 2);
  CHECK(loaded.row_counts.at("customer_pickups") == 1);
  CHECK(loaded.catalog.label_of("order_items") == "Pick Order Item");
  CHECK(validate_catalog(loaded.catalog).ok());

  const RelationInstance& items = loaded.instances.at("order_items");
  const Row* pi5 = items.row_by_pk("pi5");
  REQUIRE(pi5 != nullptr);
  CHECK(pi5->timestamp == 360);
  CHECK(pi5->fk_values[0] == "or3");
  CHECK_FALSE(pi5->fk_values[1].has_value());  // no shipment
  CHECK(pi5->fk_values[2] == "cu1");
}

TEST_CASE("quoted cells, crlf and blank lines are tolerated") {
  fixtures::TempDir dir;
  fixtures::write_file(dir.path() / "t.csv",
                       "id,name,ts\r\n"
                       "a1,\"hello, \"\"world\"\"\",100\r\n"
                       "\r\n"
                       "a2,plain,200\n");
  SourceSpec spec;
  spec.root = "t";
  spec.tables["t"] = {"t.csv", "id", "ts", "", {}};
  LoadedSource loaded = load_catalog(spec, dir.path());
  CHECK(loaded.row_counts.at("t") == 2);
  CHECK(loaded.catalog.label_of("t") == "t");  // label defaults to the name
}

TEST_CASE("broken table files raise data errors") {
  fixtures::TempDir dir;
  SourceSpec spec;
  spec.root = "t";
  spec.tables["t"] = {"t.csv", "id", "ts", "", {}};

  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_catalog(spec, dir.path()), DataError);
  }
  SUBCASE("empty file") {
    fixtures::write_file(dir.path() / "t.csv", "");
    CHECK_THROWS_AS(load_catalog(spec, dir.path()), DataError);
  }
  SUBCASE("missing column") {
    fixtures::write_file(dir.path() / "t.csv", "id,other\na1,x\n");
    CHECK_THROWS_AS(load_catalog(spec, dir.path()), DataError);
  }
  SUBCASE("short row") {
    fixtures::write_file(dir.path() / "t.csv", "id,ts\na1\n");
    CHECK_THROWS_AS(load_catalog(spec, dir.path()), DataError);
  }
  SUBCASE("empty primary key") {
    fixtures::write_file(dir.path() / "t.csv", "id,ts\n,100\n");
    CHECK_THROWS_AS(load_catalog(spec, dir.path()), DataError);
  }
  SUBCASE("duplicate primary key") {
    fixtures::write_file(dir.path() / "t.csv", "id,ts\na1,100\na1,200\n");
    CHECK_THROWS_AS(load_catalog(spec, dir.path()), DataError);
  }
  SUBCASE("bad timestamp names file and line") {
    fixtures::write_file(dir.path() / "t.csv", "id,ts\na1,soon\n");
    try {
      load_catalog(spec, dir.path());
      FAIL("expected DataError");
    } catch (const DataError& e) {
      CHECK(std::string(e.what()).find("t.csv:2") != std::string::npos);
    }
  }
  SUBCASE("unterminated quote") {
    fixtures::write_file(dir.path() / "t.csv", "id,ts\n\"a1,100\n");
    CHECK_THROWS_AS(load_catalog(spec, dir.path()), DataError);
  }
}

TEST_CASE("spec-level problems raise config errors") {
  SourceSpec spec;
  SUBCASE("no tables") {
    CHECK_THROWS_AS(catalog_from_spec(spec), ConfigError);
  }
  SUBCASE("unknown root") {
    spec.root = "nope";
    spec.tables["t"] = {"t.csv", "id", "ts", "", {}};
    CHECK_THROWS_AS(load_catalog(spec, "."), ConfigError);
  }
  SUBCASE("fk references unknown table") {
    spec.tables["t"] = {"t.csv", "id", "ts", "", {{"ref", "ghost"}}};
    CHECK_THROWS_AS(catalog_from_spec(spec), ConfigError);
  }
  SUBCASE("fk on the primary key") {
    spec.tables["t"] = {"t.csv", "id", "ts", "", {{"id", "u"}}};
    spec.tables["u"] = {"u.csv", "id", "ts", "", {}};
    CHECK_THROWS_AS(catalog_from_spec(spec), ConfigError);
  }
  SUBCASE("missing pk or timestamp column name") {
    spec.tables["t"] = {"t.csv", "", "ts", "", {}};
    CHECK_THROWS_AS(catalog_from_spec(spec), ConfigError);
  }
}

TEST_CASE("catalog validation reports each violation") {
  Catalog catalog;
  RelationSchema a;
  a.name = "a";
  a.attrs = {{"id", AttrKind::identifier, "a"},
             {"ts", AttrKind::timestamp, ""}};
  a.timestamp_attr = "ts";
  a.label = "A";
  catalog.schemas.push_back(a);

  SUBCASE("well-formed passes") { CHECK(validate_catalog(catalog).ok()); }

  SUBCASE("first attribute must be an identifier") {
    catalog.schemas[0].attrs[0].kind = AttrKind::text;
    CHECK(validate_catalog(catalog).has("catalog.pk-not-identifier"));
  }
  SUBCASE("relations cannot share a key domain") {
    RelationSchema b = a;
    b.name = "b";  // still draws ids from domain "a"
    catalog.schemas.push_back(b);
    CHECK(validate_catalog(catalog).has("catalog.shared-key-domain"));
  }
  SUBCASE("every relation needs a timestamp attribute") {
    catalog.schemas[0].timestamp_attr = "";
    CHECK(validate_catalog(catalog).has("catalog.no-timestamp"));
    catalog.schemas[0].timestamp_attr = "missing";
    CHECK(validate_catalog(catalog).has("catalog.no-timestamp"));
  }
  SUBCASE("timestamp attribute must be timestamp-typed") {
    catalog.schemas[0].timestamp_attr = "id";
    CHECK(validate_catalog(catalog).has("catalog.no-timestamp"));
  }
  SUBCASE("empty relation") {
    catalog.schemas[0].attrs.clear();
    CHECK(validate_catalog(catalog).has("catalog.empty-relation"));
  }
  SUBCASE("foreign key problems") {
    catalog.foreign_keys.push_back({"ghost", "ref", "a"});
    CHECK(validate_catalog(catalog).has("catalog.fk-unknown-relation"));
    catalog.foreign_keys = {{"a", "ghost_attr", "a"}};
    CHECK(validate_catalog(catalog).has("catalog.fk-unknown-attr"));
    catalog.foreign_keys = {{"a", "id", "a"}};
    CHECK(validate_catalog(catalog).has("catalog.fk-on-pk"));
    catalog.foreign_keys = {{"a", "ts", "a"}};
    CHECK(validate_catalog(catalog).has("catalog.fk-not-identifier"));
    catalog.schemas[0].attrs.push_back({"ref", AttrKind::identifier, "b"});
    catalog.foreign_keys = {{"a", "ref", "b"}};
    CHECK(validate_catalog(catalog).has("catalog.fk-dangling"));
  }
}

TEST_CASE("the join produces exactly the connected tuples") {
  fixtures::TempDir dir;
  fixtures::write_order_csvs(dir.path());
  LoadedSource loaded = load_catalog(fixtures::order_source_spec(), dir.path());
  std::vector<std::string> all = {"purchase_orders", "order_items",
                                  "shipments", "customer_pickups"};

  auto tuples =
      left_outer_join(loaded.catalog, loaded.instances, all, loaded.root);

  std::vector<CausallyConnectedTuple> expected = {
      tuple_of({{"customer_pickups", "cu1"},
                {"order_items", "pi5"},
                {"purchase_orders", "or3"}}),
      tuple_of({{"order_items", "pi1"},
                {"purchase_orders", "or1"},
                {"shipments", "sh1"}}),
      tuple_of({{"order_items", "pi2"},
                {"purchase_orders", "or1"},
                {"shipments", "sh1"}}),
      tuple_of({{"order_items", "pi3"},
                {"purchase_orders", "or1"},
                {"shipments", "sh2"}}),
      tuple_of({{"order_items", "pi4"},
                {"purchase_orders", "or2"},
                {"shipments", "sh2"}}),
  };
  CHECK(tuples == expected);
}

TEST_CASE("joining from the shipment side expands items backwards") {
  fixtures::TempDir dir;
  fixtures::write_order_csvs(dir.path());
  LoadedSource loaded = load_catalog(fixtures::order_source_spec(), dir.path());
  std::vector<std::string> all = {"purchase_orders", "order_items",
                                  "shipments", "customer_pickups"};

  auto tuples =
      left_outer_join(loaded.catalog, loaded.instances, all, "shipments");

  // pi5 and cu1 hang off no shipment, so they never appear here.
  REQUIRE(tuples.size() == 4);
  for (const auto& t : tuples) {
    CHECK(t.key_for("shipments") != nullptr);
    CHECK(t.key_for("customer_pickups") == nullptr);
  }
}

TEST_CASE("unmatched root rows still produce a tuple") {
  fixtures::TempDir dir;
  fixtures::write_file(dir.path() / "orders.csv",
                       "id,ts\no1,100\no2,200\n");
  fixtures::write_file(dir.path() / "items.csv",
                       "id,order_id,ts\ni1,o1,150\ni2,zz9,160\ni3,,170\n");
  SourceSpec spec;
  spec.root = "orders";
  spec.tables["orders"] = {"orders.csv", "id", "ts", "", {}};
  spec.tables["items"] = {"items.csv", "id", "ts", "", {{"order_id", "orders"}}};
  LoadedSource loaded = load_catalog(spec, dir.path());

  auto tuples = left_outer_join(loaded.catalog, loaded.instances,
                                {"orders", "items"}, "orders");

  // o1 matched i1; o2 matched nothing; dangling and null fks match nothing.
  std::vector<CausallyConnectedTuple> expected = {
      tuple_of({{"orders", "o1"}, {"items", "i1"}}),
      tuple_of({{"orders", "o2"}}),
  };
  CHECK(tuples == expected);
}

TEST_CASE("join preconditions are config errors") {
  fixtures::TempDir dir;
  fixtures::write_order_csvs(dir.path());
  LoadedSource loaded = load_catalog(fixtures::order_source_spec(), dir.path());
  const Catalog& cat = loaded.catalog;
  const auto& inst = loaded.instances;

  CHECK_THROWS_AS(left_outer_join(cat, inst, {"purchase_orders"},
                                  "purchase_orders"),
                  ConfigError);
  CHECK_THROWS_AS(left_outer_join(cat, inst, {"purchase_orders", "order_items"},
                                  "shipments"),
                  ConfigError);
  CHECK_THROWS_AS(left_outer_join(cat, inst, {"purchase_orders", "ghost"},
                                  "purchase_orders"),
                  ConfigError);
  // No fk path between purchase_orders and shipments without order_items.
  CHECK_THROWS_AS(left_outer_join(cat, inst, {"purchase_orders", "shipments"},
                                  "purchase_orders"),
                  ConfigError);
}

TEST_CASE("join output is independent of row order") {
  fixtures::TempDir a_dir, b_dir;
  fixtures::write_order_csvs(a_dir.path());
  fixtures::write_file(b_dir.path() / "purchase_orders.csv",
                       "po_id,po_ts\nor3,300\nor1,100\nor2,200\n");
  fixtures::write_file(b_dir.path() / "order_items.csv",
                       "oi_id,po_id,sh_id,cu_id,oi_ts\n"
                       "pi4,or2,sh2,,260\n"
                       "pi1,or1,sh1,,160\n"
                       "pi5,or3,,cu1,360\n"
                       "pi3,or1,sh2,,180\n"
                       "pi2,or1,sh1,,170\n");
  fixtures::write_file(b_dir.path() / "shipments.csv",
                       "sh_id,sh_ts\nsh2,400\nsh1,250\n");
  fixtures::write_file(b_dir.path() / "customer_pickups.csv",
                       "cu_id,cu_ts\ncu1,420\n");

  SourceSpec spec = fixtures::order_source_spec();
  LoadedSource a = load_catalog(spec, a_dir.path());
  LoadedSource b = load_catalog(spec, b_dir.path());
  std::vector<std::string> all = {"purchase_orders", "order_items",
                                  "shipments", "customer_pickups"};
  CHECK(left_outer_join(a.catalog, a.instances, all, "purchase_orders") ==
        left_outer_join(b.catalog, b.instances, all, "purchase_orders"));
}
