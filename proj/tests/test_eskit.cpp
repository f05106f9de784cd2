#include <doctest.h>

#include <algorithm>

#include "esflats/error.hpp"
#include "esflats/eskit.hpp"
#include "esflats/instances.hpp"
#include "oracles.hpp"

using namespace esflats;
using eskit::ExtractionResult;

namespace {

RVec p2(long x, long y) { return {Rat(x), Rat(y)}; }

void check_result(const ExtractionResult& r, std::size_t n, std::size_t total) {
  CHECK(r.chosen_indices.size() == n);
  CHECK(std::is_sorted(r.chosen_indices.begin(), r.chosen_indices.end()));
  for (auto i : r.chosen_indices) CHECK(i < total);
  CHECK(r.certificate.flats.size() == n);
  const auto v = convexpos::verify_certificate(r.certificate);
  CHECK_MESSAGE(v.ok, v.message);
}

}  // namespace

TEST_CASE("largest convex subset on small examples") {
  CHECK(eskit::largest_convex_subset_2d({p2(0, 0), p2(1, 0), p2(1, 1), p2(0, 1)}).size() == 4);
  const auto sq = eskit::largest_convex_subset_2d({p2(0, 0), p2(4, 0), {Rat(2), Rat(3, 2)}, p2(4, 4), p2(0, 4)});
  CHECK(sq == std::vector<std::size_t>{0, 1, 3, 4});
  CHECK(eskit::largest_convex_subset_2d({p2(0, 0), p2(1, 5)}).size() == 2);
  CHECK(eskit::largest_convex_subset_2d({}).empty());
  CHECK_THROWS_AS(eskit::largest_convex_subset_2d({p2(0, 0), p2(1, 1), p2(2, 2), p2(0, 1)}), GeneralPositionError);
  CHECK_THROWS_AS(eskit::largest_convex_subset_2d({RVec{Rat(1)}}), InputError);
}

TEST_CASE("largest convex subset equals the exhaustive oracle") {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const std::size_t n = 3 + seed % 7;
    const auto pts = instances::random_points(2, n, seed);
    const auto y = eskit::largest_convex_subset_2d(pts);
    REQUIRE(y.size() == oracle::largest_convex_subset_exhaustive(pts));
    std::vector<RVec> sub;
    for (auto i : y) sub.push_back(pts[i]);
    CHECK(oracle::planar_convex_by_triangles(sub));
  }
}

TEST_CASE("adding a point never shrinks the largest convex subset") {
  for (std::uint64_t seed = 300; seed < 340; ++seed) {
    const auto pts = instances::random_points(2, 12, seed);
    std::size_t last = 0;
    for (std::size_t m = 3; m <= pts.size(); ++m) {
      const auto sz = eskit::largest_convex_subset_2d({pts.begin(), pts.begin() + static_cast<long>(m)}).size();
      CHECK(sz >= last);
      last = sz;
    }
  }
}

TEST_CASE("generic projection") {
  SUBCASE("planar input comes back unchanged") {
    const auto pts = instances::random_points(2, 6, 4);
    CHECK(eskit::generic_projection(pts) == pts);
  }
  SUBCASE("points in R^3 keep no collinear triple") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const auto pts = instances::random_points(3, 5, seed);
      const auto q = eskit::generic_projection(pts, seed);
      REQUIRE(q.size() == 5);
      for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = i + 1; j < 5; ++j)
          for (std::size_t l = j + 1; l < 5; ++l) CHECK_FALSE(collinear(q[i], q[j], q[l]));
    }
  }
  SUBCASE("points on a 2-plane in R^3 keep convex position") {
    std::vector<RVec> pts{{Rat(0), Rat(0), Rat(1)}, {Rat(3), Rat(0), Rat(1)}, {Rat(3), Rat(2), Rat(1)},
                          {Rat(0), Rat(2), Rat(1)}};
    const auto q = eskit::generic_projection(pts, 2);
    CHECK(oracle::planar_convex_by_triangles(q));
    CHECK(oracle::hull_size(q) == 4);
  }
  SUBCASE("collinear input is rejected") {
    std::vector<RVec> pts{{Rat(0), Rat(0), Rat(0)}, {Rat(1), Rat(1), Rat(1)}, {Rat(2), Rat(2), Rat(2)}};
    CHECK_THROWS_AS(eskit::generic_projection(pts), GeneralPositionError);
  }
}

TEST_CASE("extraction pipeline on flats") {
  SUBCASE("k = 0 gives singleton touch sets") {
    const auto pts = instances::random_points(3, 9, 5);
    std::vector<geom::Flat> flats;
    for (const auto& p : pts) flats.push_back(geom::Flat::point(p));
    const auto r = eskit::extract_convex_flats(flats, 4, {.seed = 5});
    check_result(r, 4, 9);
    CHECK_FALSE(r.transversal.has_value());
    for (const auto& t : r.certificate.touch_sets) CHECK(t.size() == 1);
  }
  SUBCASE("five lines in R^3 give four") {
    const auto flats = instances::random_flats(3, 1, 5, 8);
    const auto r = eskit::extract_convex_flats(flats, 4, {.seed = 8});
    check_result(r, 4, 5);
    REQUIRE(r.transversal.has_value());
    CHECK(r.transversal->dim() == 2);
    CHECK(convexpos::points_convex_position(r.points));
  }
  SUBCASE("five 2-flats in R^4 give four") {
    const auto flats = instances::random_flats(4, 2, 5, 9);
    check_result(eskit::extract_convex_flats(flats, 4, {.seed = 9}), 4, 5);
  }
  SUBCASE("too few flats is reported as exhausted") {
    const auto flats = instances::random_flats(3, 1, 4, 2);
    CHECK_THROWS_AS(eskit::extract_convex_flats(flats, 5), SearchExhausted);
  }
  SUBCASE("hyperplanes are redirected") {
    const auto flats = instances::random_flats(3, 1, 5, 3);
    std::vector<geom::Flat> planes{convexpos::hyperplane_as_flat(geom::Hyperplane({Rat(1), Rat(0), Rat(0)}, Rat(0)))};
    CHECK_THROWS_AS(eskit::extract_convex_flats(planes, 4), InputError);
  }
}

TEST_CASE("pipeline soundness over random configurations") {
  struct Config {
    std::size_t d, k, n, total;
  };
  for (const auto c : {Config{3, 1, 4, 5}, Config{3, 1, 5, 9}, Config{4, 1, 4, 5}, Config{4, 2, 4, 5}}) {
    int ok = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const auto flats = instances::random_flats(c.d, c.k, c.total, seed);
      const auto r = eskit::extract_convex_flats(flats, c.n, {.seed = seed});
      ok += convexpos::verify_certificate(r.certificate).ok;
    }
    CHECK(ok == 20);
  }
}

TEST_CASE("certify_from_anchors rejects anchors off their flats") {
  const auto flats = instances::random_flats(3, 1, 4, 4);
  std::vector<RVec> anchors(4, zeros(3));
  CHECK_THROWS_AS(eskit::certify_from_anchors(flats, anchors), InputError);
}

TEST_CASE("hyperplane pipeline") {
  SUBCASE("four lines in the plane") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const auto lines = instances::random_hyperplanes(2, 4, seed);
      const auto r = eskit::hyperplane_pipeline(lines, 4, {.seed = seed});
      check_result(r, 4, 4);
    }
  }
  SUBCASE("tetrahedron facets return themselves") {
    std::vector<geom::Hyperplane> tet{{{Rat(1), Rat(0), Rat(0)}, Rat(0)},
                                      {{Rat(0), Rat(1), Rat(0)}, Rat(0)},
                                      {{Rat(0), Rat(0), Rat(1)}, Rat(0)},
                                      {{Rat(1), Rat(1), Rat(1)}, Rat(1)}};
    const auto r = eskit::hyperplane_pipeline(tet, 4);
    CHECK(r.chosen_indices == std::vector<std::size_t>{0, 1, 2, 3});
    check_result(r, 4, 4);
  }
  SUBCASE("six planes in R^3") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto hps = instances::random_hyperplanes(3, 6, seed);
      check_result(eskit::hyperplane_pipeline(hps, 4, {.seed = seed}), 4, 6);
    }
  }
  SUBCASE("subset cap") {
    const auto hps = instances::random_hyperplanes(2, 6, 3);
    CHECK_THROWS_AS(eskit::hyperplane_pipeline(hps, 7), SearchExhausted);
  }
}
