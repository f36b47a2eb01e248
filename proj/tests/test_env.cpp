#include <doctest.h>

#include <filesystem>
#include <random>

#include "retarget/env.hpp"
#include "retarget/errors.hpp"

using namespace retarget;
using namespace retarget::env;

namespace {

const std::filesystem::path kFixtures = RETARGET_FIXTURES_DIR;

std::string simple_doc(const std::string& objects) {
  return R"({"name":"t","footprint":[{"x_min":0,"y_min":0,"x_max":10,"y_max":10}],)"
         R"("objects":[)" + objects + R"(],"main_object_id":"table"})";
}

const char* kTable =
    R"({"id":"table","label":"main_object","rect":{"x_min":4,"y_min":4,"x_max":6,"y_max":6}})";

}  // namespace

TEST_CASE("fixture loads with the published dimensions") {
  Environment e = load_environment_file(kFixtures / "xr_studio.json");
  CHECK(e.footprint_area() == doctest::Approx(50.4));
  CHECK(e.main_object().rect.width() == doctest::Approx(4.10));
  CHECK(e.main_object().rect.height() == doctest::Approx(0.80));
  CHECK(e.name() == "XR Studio");
}

TEST_CASE("load diagnostics are specific") {
  SUBCASE("duplicate main object") {
    std::string doc = simple_doc(
        std::string(kTable) + "," +
        R"({"id":"t2","label":"main_object","rect":{"x_min":1,"y_min":1,"x_max":2,"y_max":2}})");
    CHECK_THROWS_WITH_AS(load_environment(doc), "duplicate main object",
                         ValidationError);
  }
  SUBCASE("object outside footprint") {
    std::string doc = simple_doc(
        std::string(kTable) + "," +
        R"({"id":"o","label":"obstacle","rect":{"x_min":9,"y_min":9,"x_max":11,"y_max":10}})");
    CHECK_THROWS_WITH_AS(load_environment(doc), "object 'o' outside footprint",
                         ValidationError);
  }
  SUBCASE("zero extent rect") {
    std::string doc = simple_doc(
        R"({"id":"table","label":"main_object","rect":{"x_min":4,"y_min":4,"x_max":4,"y_max":6}})");
    CHECK_THROWS_AS(load_environment(doc), ValidationError);
  }
  SUBCASE("missing main object") {
    std::string doc = simple_doc(
        R"({"id":"o","label":"obstacle","rect":{"x_min":1,"y_min":1,"x_max":2,"y_max":2}})");
    CHECK_THROWS_WITH_AS(load_environment(doc), "missing main object",
                         ValidationError);
  }
  SUBCASE("main id mismatch") {
    std::string doc =
        R"({"name":"t","footprint":[{"x_min":0,"y_min":0,"x_max":10,"y_max":10}],)"
        R"("objects":[)" + std::string(kTable) + R"(],"main_object_id":"nope"})";
    CHECK_THROWS_AS(load_environment(doc), ValidationError);
  }
  SUBCASE("bad JSON") {
    CHECK_THROWS_AS(load_environment("{nope"), ValidationError);
  }
  SUBCASE("floor-labeled object") {
    std::string doc = simple_doc(
        std::string(kTable) + "," +
        R"({"id":"f","label":"floor","rect":{"x_min":1,"y_min":1,"x_max":2,"y_max":2}})");
    CHECK_THROWS_AS(load_environment(doc), ValidationError);
  }
}

TEST_CASE("free_space subtracts object ground") {
  SUBCASE("main object only") {
    Environment e = load_environment(simple_doc(kTable));
    CHECK(geom::region_area(e.free_space()) == doctest::Approx(96.0));
  }
  SUBCASE("overlapping obstacles counted once") {
    std::string doc =
        R"({"name":"t","footprint":[{"x_min":0,"y_min":0,"x_max":4,"y_max":4}],)"
        R"("objects":[)"
        R"({"id":"m","label":"main_object","rect":{"x_min":3,"y_min":3,"x_max":4,"y_max":4}},)"
        R"({"id":"a","label":"obstacle","rect":{"x_min":1,"y_min":1,"x_max":2,"y_max":2}},)"
        R"({"id":"b","label":"obstacle","rect":{"x_min":1,"y_min":1,"x_max":2,"y_max":2}})"
        R"(],"main_object_id":"m"})";
    Environment e = load_environment(doc);
    CHECK(geom::region_area(e.free_space()) == doctest::Approx(14.0));
  }
}

TEST_CASE("label regions partition the footprint") {
  Environment e = load_environment_file(kFixtures / "office.json");
  geom::Region floor = e.label_region(SemanticLabel::kFloor);
  geom::Region main = e.label_region(SemanticLabel::kMainObject);
  geom::Region obstacles = e.label_region(SemanticLabel::kObstacle);

  double total = geom::region_area(floor) + geom::region_area(main) +
                 geom::region_area(obstacles);
  CHECK(total == doctest::Approx(e.footprint_area()).epsilon(1e-9));
  CHECK(geom::region_area(geom::region_intersection(floor, main)) == 0.0);
  CHECK(geom::region_area(geom::region_intersection(floor, obstacles)) == 0.0);
  CHECK(geom::region_area(geom::region_intersection(main, obstacles)) == 0.0);

  SUBCASE("main object area matches the table dims") {
    CHECK(geom::region_area(main) == doctest::Approx(2.0 * 0.9));
  }
  SUBCASE("no obstacles yields an empty region") {
    Environment simple = load_environment_file(kFixtures / "simple.json");
    CHECK(simple.label_region(SemanticLabel::kObstacle).empty());
  }
}

TEST_CASE("wall segments") {
  Environment e = load_environment_file(kFixtures / "xr_studio.json");
  CHECK(e.wall_segments().size() == 4);
  CHECK(geom::total_length(e.wall_segments()) == doctest::Approx(28.8));

  SUBCASE("vertical plane set can include object boundaries") {
    std::vector<std::string> ids = {"monitor_wall"};
    auto planes = vertical_plane_segments(e, ids);
    CHECK(planes.size() == 8);
    CHECK_THROWS_AS(
        vertical_plane_segments(e, std::vector<std::string>{"nope"}),
        ValidationError);
  }
}

TEST_CASE("load-serialize-load round trip") {
  for (const char* name : {"xr_studio.json", "xr_lab.json", "meeting_room.json",
                           "home.json", "office.json", "simple.json"}) {
    Environment a = load_environment_file(kFixtures / name);
    Environment b = load_environment(serialize_environment(a));
    CHECK(a.name() == b.name());
    CHECK(a.main_object_id() == b.main_object_id());
    REQUIRE(a.footprint().rects().size() == b.footprint().rects().size());
    for (std::size_t i = 0; i < a.footprint().rects().size(); ++i) {
      CHECK(a.footprint().rects()[i].x_min == b.footprint().rects()[i].x_min);
      CHECK(a.footprint().rects()[i].y_max == b.footprint().rects()[i].y_max);
    }
    REQUIRE(a.objects().size() == b.objects().size());
    for (std::size_t i = 0; i < a.objects().size(); ++i) {
      CHECK(a.objects()[i].id == b.objects()[i].id);
      CHECK(a.objects()[i].label == b.objects()[i].label);
      CHECK(a.objects()[i].rect.x_min == b.objects()[i].rect.x_min);
      CHECK(a.objects()[i].rect.y_min == b.objects()[i].rect.y_min);
      CHECK(a.objects()[i].rect.x_max == b.objects()[i].rect.x_max);
      CHECK(a.objects()[i].rect.y_max == b.objects()[i].rect.y_max);
    }
  }
}

TEST_CASE("free space plus clipped objects equals the footprint") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> pos(0, 70);
  std::uniform_int_distribution<int> ext(5, 25);
  for (int trial = 0; trial < 25; ++trial) {
    // Objects on a 0.1 m lattice inside a 10x10 room, non-overlapping by
    // rejection.
    std::vector<SceneObject> objects;
    auto try_add = [&](SemanticLabel label, const std::string& id) {
      geom::Rect r{pos(rng) / 10.0, pos(rng) / 10.0, 0, 0};
      r.x_max = r.x_min + ext(rng) / 10.0;
      r.y_max = r.y_min + ext(rng) / 10.0;
      for (const SceneObject& o : objects)
        if (geom::Rect::overlap_area(o.rect, r) > 0.0) return;
      objects.push_back(SceneObject{id, label, r});
    };
    try_add(SemanticLabel::kMainObject, "m");
    if (objects.empty()) continue;
    for (int i = 0; i < 4; ++i) try_add(SemanticLabel::kObstacle, "o" + std::to_string(i));

    Environment e("rand", geom::Region({geom::Rect{0, 0, 10, 10}}), objects,
                  "m");
    std::vector<geom::Rect> object_rects;
    for (const SceneObject& o : e.objects()) object_rects.push_back(o.rect);
    double clipped = geom::region_area(geom::region_intersection(
        e.footprint(), geom::Region(object_rects)));
    CHECK(geom::region_area(e.free_space()) + clipped ==
          doctest::Approx(e.footprint_area()).epsilon(1e-9));
  }
}
