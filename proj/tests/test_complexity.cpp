#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "retarget/complexity.hpp"
#include "retarget/env.hpp"
#include "retarget/errors.hpp"

using namespace retarget;
using namespace retarget::complexity;

namespace {

const std::filesystem::path kFixtures = RETARGET_FIXTURES_DIR;

env::Environment room_with_centers(
    const std::vector<geom::Point>& centers, double half = 0.2,
    double room = 20.0) {
  std::vector<env::SceneObject> objects;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    geom::Rect r{centers[i].x - half, centers[i].y - half, centers[i].x + half,
                 centers[i].y + half};
    objects.push_back({i == 0 ? "main" : "o" + std::to_string(i),
                       i == 0 ? env::SemanticLabel::kMainObject
                              : env::SemanticLabel::kObstacle,
                       r});
  }
  return env::Environment("t", geom::Region::from_rect({0, 0, room, room}),
                          objects, "main");
}

}  // namespace

TEST_CASE("object scatteredness") {
  SUBCASE("single object") {
    CHECK(object_scatteredness(room_with_centers({{5, 5}})) == 0.0);
  }
  SUBCASE("two objects 4 m apart") {
    CHECK(object_scatteredness(room_with_centers({{3, 5}, {7, 5}})) ==
          doctest::Approx(4.0));
  }
  SUBCASE("three collinear objects at 0, 3, 6") {
    CHECK(object_scatteredness(
              room_with_centers({{1, 5}, {4, 5}, {7, 5}})) ==
          doctest::Approx(16.0));
  }
  SUBCASE("translation and mirroring invariance") {
    double a = object_scatteredness(room_with_centers({{3, 4}, {6, 8}, {2, 9}}));
    double b = object_scatteredness(
        room_with_centers({{3 + 5, 4 + 3}, {6 + 5, 8 + 3}, {2 + 5, 9 + 3}}));
    double c = object_scatteredness(
        room_with_centers({{20 - 3, 4}, {20 - 6, 8}, {20 - 2, 9}}));
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
    CHECK(a == doctest::Approx(c).epsilon(1e-12));
  }
}

TEST_CASE("fixture layouts reproduce the published scatteredness") {
  struct Row {
    const char* file;
    double os;
  };
  for (Row row : {Row{"xr_studio.json", 69.18}, Row{"xr_lab.json", 6.68},
                  Row{"meeting_room.json", 14.56}, Row{"home.json", 7.27},
                  Row{"office.json", 9.27}}) {
    env::Environment e = env::load_environment_file(kFixtures / row.file);
    CHECK(object_scatteredness(e) == doctest::Approx(row.os).epsilon(1e-4));
  }
  env::Environment simple = env::load_environment_file(kFixtures / "simple.json");
  CHECK(object_scatteredness(simple) == 0.0);
}

TEST_CASE("spatial complexity with injected kernels") {
  SUBCASE("meeting room row") {
    env::Environment e =
        env::load_environment_file(kFixtures / "meeting_room.json");
    ComplexityReport r = spatial_complexity(e, constant_kernel(6.64));
    CHECK(r.area == doctest::Approx(26.6));
    CHECK(r.os == doctest::Approx(14.56).epsilon(1e-4));
    CHECK(r.sc == doctest::Approx(48.81).epsilon(2e-4));
    CHECK(r.sc == doctest::Approx(std::sqrt(r.area) * r.c + r.os));
  }
  SUBCASE("studio row") {
    env::Environment e =
        env::load_environment_file(kFixtures / "xr_studio.json");
    ComplexityReport r = spatial_complexity(e, constant_kernel(6.50));
    CHECK(r.sc == doctest::Approx(115.33).epsilon(1e-4));
  }
  SUBCASE("unit room with one object and a constant kernel") {
    std::vector<env::SceneObject> objects = {
        {"m", env::SemanticLabel::kMainObject, geom::Rect{0.4, 0.4, 0.6, 0.6}}};
    env::Environment e("unit", geom::Region::from_rect({0, 0, 1, 1}), objects,
                       "m");
    ComplexityReport r = spatial_complexity(e, constant_kernel(3.7));
    CHECK(r.sc == doctest::Approx(3.7));  // sqrt(1) * c + 0
  }
  SUBCASE("kernel must be positive") {
    CHECK_THROWS_AS(constant_kernel(0.0), ValidationError);
    CHECK_THROWS_AS(constant_kernel(-1.0), ValidationError);
  }
}

TEST_CASE("scaling behavior of SC") {
  env::Environment small = room_with_centers({{4, 4}, {6, 6}}, 0.2, 10.0);
  env::Environment large = room_with_centers({{4, 4}, {6, 6}}, 0.2, 20.0);
  ComplexityReport rs = spatial_complexity(small, constant_kernel(5.0));
  ComplexityReport rl = spatial_complexity(large, constant_kernel(5.0));
  // Same C and OS: SC scales with sqrt(area).
  CHECK(rl.sc - rl.os ==
        doctest::Approx((rs.sc - rs.os) * std::sqrt(400.0 / 100.0)));
  CHECK(rl.sc > rs.sc);
}

TEST_CASE("spatial dissimilarity") {
  auto report_with_sc = [](double sc) {
    ComplexityReport r;
    r.sc = sc;
    return r;
  };
  SUBCASE("published table rows") {
    CHECK(spatial_dissimilarity(report_with_sc(115.30), report_with_sc(48.80)) ==
          doctest::Approx(0.8598).epsilon(1e-4));
    CHECK(spatial_dissimilarity(report_with_sc(115.30), report_with_sc(17.42)) ==
          doctest::Approx(1.8900).epsilon(1e-4));
  }
  SUBCASE("identical reports give zero and order does not matter") {
    CHECK(spatial_dissimilarity(report_with_sc(48.8), report_with_sc(48.8)) ==
          0.0);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> sc(1.0, 200.0);
    for (int i = 0; i < 50; ++i) {
      double a = sc(rng), b = sc(rng);
      CHECK(spatial_dissimilarity(report_with_sc(a), report_with_sc(b)) ==
            doctest::Approx(spatial_dissimilarity(report_with_sc(b),
                                                  report_with_sc(a)))
                .epsilon(1e-12));
    }
  }
  SUBCASE("non-positive SC is rejected") {
    CHECK_THROWS_AS(
        spatial_dissimilarity(report_with_sc(0.0), report_with_sc(1.0)),
        ValidationError);
  }
}

TEST_CASE("spatial matching difficulty") {
  SUBCASE("published rows") {
    CHECK(spatial_matching_difficulty(0.6884, 3.28, 1.445).value ==
          doctest::Approx(0.4464).epsilon(1e-4));
    CHECK(spatial_matching_difficulty(1.8900, 3.28, 1.80).value ==
          doctest::Approx(1.2367).epsilon(1e-4));
  }
  SUBCASE("sd of one with equal areas is zero") {
    SmdResult r = spatial_matching_difficulty(1.0, 2.5, 2.5);
    CHECK(r.value == 0.0);
    CHECK(!r.degenerate);
  }
  SUBCASE("vanishing sd is clamped and flagged") {
    SmdResult r = spatial_matching_difficulty(0.0, 2.5, 2.5);
    CHECK(r.degenerate);
    CHECK(r.value == doctest::Approx(std::abs(std::log(1e-9))));
  }
  SUBCASE("invalid areas are rejected") {
    CHECK_THROWS_AS(spatial_matching_difficulty(0.5, 0.0, 1.0),
                    ValidationError);
  }
}

TEST_CASE("complexity ratio") {
  CHECK(complexity_ratio(6.50, 7.36) == doctest::Approx(1.1323).epsilon(1e-4));
  CHECK(complexity_ratio(6.50, 3.30) == doctest::Approx(0.5077).epsilon(1e-4));
  CHECK(complexity_ratio(4.2, 4.2) == 1.0);
  CHECK_THROWS_AS(complexity_ratio(0.0, 1.0), ValidationError);
}

TEST_CASE("clearance kernel") {
  SUBCASE("empty room clearance equals the mean wall distance") {
    // 10x10 room, table in the center: clearance at the sampled points is
    // min(wall distance, table distance); all positive and below half the
    // room size.
    env::Environment e = env::load_environment_file(kFixtures / "simple.json");
    double c = clearance_kernel(0.2)(e);
    CHECK(c > 0.0);
    CHECK(c < 5.0);
  }
  SUBCASE("deterministic") {
    env::Environment e = env::load_environment_file(kFixtures / "office.json");
    CHECK(clearance_kernel(0.2)(e) == clearance_kernel(0.2)(e));
  }
  SUBCASE("removing an interior obstacle never decreases clearance") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> pos(2.0, 8.0);
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<env::SceneObject> objects = {
          {"m", env::SemanticLabel::kMainObject, geom::Rect{1.0, 1.0, 2.0, 2.0}}};
      double x = pos(rng), y = pos(rng);
      std::vector<env::SceneObject> with = objects;
      with.push_back({"o", env::SemanticLabel::kObstacle,
                      geom::Rect{x, y, x + 0.8, y + 0.8}});
      env::Environment base("b", geom::Region::from_rect({0, 0, 10, 10}),
                            objects, "m");
      env::Environment more("m", geom::Region::from_rect({0, 0, 10, 10}),
                            with, "m");
      CHECK(clearance_kernel(0.2)(base) >= clearance_kernel(0.2)(more));
    }
  }
}

TEST_CASE("pair report combines the pieces") {
  env::Environment V = env::load_environment_file(kFixtures / "xr_studio.json");
  env::Environment P = env::load_environment_file(kFixtures / "office.json");
  PairReport r = compare_environments(V, P, constant_kernel(6.50),
                                      constant_kernel(3.30));
  CHECK(r.cr == doctest::Approx(3.30 / 6.50));
  CHECK(r.sd == doctest::Approx(std::abs(std::log(r.virt.sc / r.phys.sc))));
  CHECK(r.smd ==
        doctest::Approx(std::abs(std::log(r.sd * 3.28 / 1.80))).epsilon(1e-9));
  CHECK(!r.smd_degenerate);

  SUBCASE("same environment twice is degenerate") {
    PairReport same = compare_environments(V, V, constant_kernel(6.50),
                                           constant_kernel(6.50));
    CHECK(same.sd == 0.0);
    CHECK(same.smd_degenerate);
  }
}
