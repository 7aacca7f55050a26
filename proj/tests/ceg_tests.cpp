#include <doctest.h>

#include <stdexcept>

#include "cegmine/ceg.hpp"
#include "cegmine/errors.hpp"
#include "support/fixtures.hpp"

using namespace cegmine;

namespace {

// Event indices in the canonical (relation, key) order of the example db:
// customer_pickups:cu1, order_items:pi1..pi5, purchase_orders:or1..or3,
// shipments:sh1, sh2.
enum : EventIndex { CU1 = 0, PI1, PI2, PI3, PI4, PI5, OR1, OR2, OR3, SH1, SH2 };

std::vector<EventIndex> sorted_events(const CegView& v) { return v.events; }

}  // namespace

TEST_CASE("the example database has the expected shape") {
  fixtures::TempDir dir;
  auto p = fixtures::build_order_pipeline(dir.path());
  const CausalEventDatabase& db = p.db;

  CHECK(db.event_count() == 11);
  CHECK(db.edge_count() == 10);
  CHECK(db.fragment_count() == 5);
  CHECK(db.root_relation() == "purchase_orders");

  CHECK(db.event_id(CU1) == "customer_pickups:cu1");
  CHECK(db.event_id(SH2) == "shipments:sh2");
  CHECK(db.type_of(PI1) == "Pick Order Item");
  CHECK(db.relation_of(OR2) == "purchase_orders");
  CHECK(db.timestamp_of(SH1) == 250);
  CHECK(db.find_event("order_items", "pi3") == PI3);
  CHECK_FALSE(db.find_event("order_items", "ghost").has_value());

  std::vector<EventEdge> expected_edges = {
      {PI1, SH1}, {PI2, SH1}, {PI3, SH2}, {PI4, SH2}, {PI5, CU1},
      {OR1, PI1}, {OR1, PI2}, {OR1, PI3}, {OR2, PI4}, {OR3, PI5}};
  CHECK(db.edges() == expected_edges);
}

TEST_CASE("resubmitting tuples changes nothing") {
  fixtures::TempDir dir;
  auto p = fixtures::build_order_pipeline(dir.path());

  auto doubled = p.tuples;
  doubled.insert(doubled.end(), p.tuples.begin(), p.tuples.end());
  CausalEventDatabase again = CausalEventDatabase::build(
      doubled, p.cpt, p.loaded.catalog, p.loaded.instances, p.loaded.root);

  CHECK(again.event_count() == p.db.event_count());
  CHECK(again.edge_count() == p.db.edge_count());
  CHECK(again.fragment_count() == p.db.fragment_count());
  CHECK(again.edges() == p.db.edges());
}

TEST_CASE("a single tuple builds a fragment graph") {
  fixtures::TempDir dir;
  auto p = fixtures::build_order_pipeline(dir.path());
  // Tuples are sorted; index 1 is (pi1, or1, sh1).
  CausalEventDatabase frag =
      build_fragment(p.tuples[1], p.cpt, p.loaded.catalog, p.loaded.instances,
                     p.loaded.root);
  CHECK(frag.event_count() == 3);
  CHECK(frag.edge_count() == 2);
  CHECK(frag.fragment_count() == 1);
  CHECK(frag.fragment_records()[0].root_key == "or1");
}

TEST_CASE("fragment views carry their tuple's edges") {
  fixtures::TempDir dir;
  auto p = fixtures::build_order_pipeline(dir.path());
  auto views = fragments(p.db);

  REQUIRE(views.size() == 5);
  // Tuple order is canonical, so the pickup tuple sorts first.
  CHECK(sorted_events(views[0]) == std::vector<EventIndex>{CU1, PI5, OR3});
  CHECK(views[0].edges ==
        std::vector<EventEdge>{{PI5, CU1}, {OR3, PI5}});
  CHECK(sorted_events(views[4]) == std::vector<EventIndex>{PI4, OR2, SH2});
  CHECK(views[4].kind == ViewKind::fragment);
  CHECK(p.db.fragment_records()[4].root_key == "or2");
}

TEST_CASE("connected components split the pickup order off") {
  fixtures::TempDir dir;
  auto p = fixtures::build_order_pipeline(dir.path());
  auto comps = components(p.db);

  REQUIRE(comps.size() == 2);
  CHECK(sorted_events(comps[0]) == std::vector<EventIndex>{CU1, PI5, OR3});
  CHECK(sorted_events(comps[1]) ==
        std::vector<EventIndex>{PI1, PI2, PI3, PI4, OR1, OR2, SH1, SH2});
  CHECK(comps[1].edges.size() == 8);
  CHECK(comps[0].kind == ViewKind::component);
}

TEST_CASE("case projections per purchase order") {
  fixtures::TempDir dir;
  auto p = fixtures::build_order_pipeline(dir.path());
  auto views = case_projections(p.db, "purchase_orders");

  REQUIRE(views.size() == 3);
  CHECK(views[0].id == "or1");
  CHECK(sorted_events(views[0]) ==
        std::vector<EventIndex>{PI1, PI2, PI3, OR1, SH1, SH2});
  CHECK(views[0].edges ==
        std::vector<EventEdge>{{PI1, SH1},
                               {PI2, SH1},
                               {PI3, SH2},
                               {OR1, PI1},
                               {OR1, PI2},
                               {OR1, PI3}});
  CHECK(views[1].id == "or2");
  CHECK(sorted_events(views[1]) == std::vector<EventIndex>{PI4, OR2, SH2});
  CHECK(views[2].id == "or3");
  CHECK(sorted_events(views[2]) == std::vector<EventIndex>{CU1, PI5, OR3});
  CHECK(views[0].contains(SH2));
  CHECK_FALSE(views[1].contains(PI1));
  CHECK(views[0].kind == ViewKind::case_projection);
}

TEST_CASE("case projections work from any relation") {
  fixtures::TempDir dir;
  auto p = fixtures::build_order_pipeline(dir.path());
  auto views = case_projections(p.db, "shipments");

  REQUIRE(views.size() == 2);
  CHECK(views[0].id == "sh1");
  CHECK(sorted_events(views[0]) ==
        std::vector<EventIndex>{PI1, PI2, OR1, SH1});
  CHECK(views[1].id == "sh2");
  // sh2 collects items and orders from two different purchase orders.
  CHECK(sorted_events(views[1]) ==
        std::vector<EventIndex>{PI3, PI4, OR1, OR2, SH2});

  CHECK_THROWS_AS(case_projections(p.db, "ghost"), ConfigError);
}

TEST_CASE("presets and postsets against database and view") {
  fixtures::TempDir dir;
  auto p = fixtures::build_order_pipeline(dir.path());
  auto views = case_projections(p.db, "purchase_orders");

  CHECK(preset(p.db, SH2) == std::vector<EventIndex>{PI3, PI4});
  CHECK(postset(p.db, OR1) == std::vector<EventIndex>{PI1, PI2, PI3});
  CHECK(postset(p.db, PI5) == std::vector<EventIndex>{CU1});
  CHECK(preset(p.db, OR1).empty());

  // Inside the sh1 projection the shared shipment loses its or2 item.
  auto sh_views = case_projections(p.db, "shipments");
  CHECK(preset(p.db, sh_views[1], SH2) == std::vector<EventIndex>{PI3, PI4});
  CHECK(preset(p.db, views[0], SH1) == std::vector<EventIndex>{PI1, PI2});
  CHECK(preset(p.db, views[1], SH2) == std::vector<EventIndex>{PI4});
}

TEST_CASE("batching events span multiple cases") {
  fixtures::TempDir dir;
  auto p = fixtures::build_order_pipeline(dir.path());
  CHECK(batching_events(p.db) == std::vector<EventIndex>{SH2});
}

TEST_CASE("cycle times take the latest earlier cause") {
  fixtures::TempDir dir;
  auto p = fixtures::build_order_pipeline(dir.path());

  CHECK(cycle_time(p.db, PI1) == 60);   // or1 at 100, pick at 160
  CHECK(cycle_time(p.db, SH1) == 80);   // latest of pi1@160, pi2@170
  CHECK(cycle_time(p.db, SH2) == 140);  // latest of pi3@180, pi4@260
  CHECK(cycle_time(p.db, CU1) == 60);
  CHECK(cycle_time(p.db, OR1) == 0);  // no causes

  // Within the or2 projection sh2 only waits for pi4.
  auto views = case_projections(p.db, "purchase_orders");
  CHECK(cycle_time(p.db, views[1], SH2) == 140);
  CHECK(cycle_time(p.db, views[0], SH2) == 220);  // only pi3 in view or1
}

TEST_CASE("causes recorded after the effect never count") {
  std::vector<RelationInfo> rels = {{"x", "X"}, {"y", "Y"}};
  // Already in canonical order, so indices survive finalization:
  // x:a=0, x:c=1, x:e=2, y:b=3, y:d=4, y:f=5.
  std::vector<Event> events = {{0, "a", 100}, {0, "c", 100}, {0, "e", 150},
                               {1, "b", 50},  {1, "d", 100}, {1, "f", 140}};
  std::vector<EventEdge> edges = {{0, 3}, {1, 4}, {2, 5}};
  CausalEventDatabase db = CausalEventDatabase::from_parts(
      rels, events, edges, {Fragment{{0, 3}, ""}}, "x");

  CHECK(cycle_time(db, 3) == 0);    // only cause is later, waits for nothing
  CHECK(cycle_time(db, 4) == 0);    // simultaneous cause gives zero wait
  CHECK(cycle_time(db, 5) == 0);    // 150 > 140, skipped
}

TEST_CASE("malformed parts are rejected") {
  std::vector<RelationInfo> rels = {{"x", "X"}};

  SUBCASE("duplicate event") {
    std::vector<Event> events = {{0, "a", 1}, {0, "a", 2}};
    CHECK_THROWS_AS(
        CausalEventDatabase::from_parts(rels, events, {}, {}, "x"),
        DataError);
  }
  SUBCASE("self edge") {
    std::vector<Event> events = {{0, "a", 1}};
    CHECK_THROWS_AS(
        CausalEventDatabase::from_parts(rels, events, {{0, 0}}, {}, "x"),
        DataError);
  }
  SUBCASE("cyclic edges are an internal fault") {
    std::vector<Event> events = {{0, "a", 1}, {0, "b", 2}};
    CHECK_THROWS_AS(
        CausalEventDatabase::from_parts(rels, events, {{0, 1}, {1, 0}}, {},
                                        "x"),
        std::logic_error);
  }
}

TEST_CASE("events of relations outside the template are data errors") {
  fixtures::TempDir dir;
  auto p = fixtures::build_order_pipeline(dir.path());

  CptSpec narrow;
  narrow.relations = {"purchase_orders", "order_items"};
  narrow.edges = {{"purchase_orders", "order_items"}};
  CausalProcessTemplate cpt = parse_cpt(narrow, p.loaded.catalog);

  // Tuples still mention shipments, which the template does not cover.
  CHECK_THROWS_AS(
      CausalEventDatabase::build(p.tuples, cpt, p.loaded.catalog,
                                 p.loaded.instances, p.loaded.root),
      DataError);
}
