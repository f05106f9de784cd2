#include <doctest.h>

#include "esflats/convexpos.hpp"
#include "esflats/error.hpp"
#include "esflats/random.hpp"
#include "oracles.hpp"

using namespace esflats;
using convexpos::ConvexityCertificate;
using geom::Flat;
using geom::Hyperplane;

namespace {

RVec v(std::initializer_list<long> xs) {
  RVec out;
  for (long x : xs) out.emplace_back(x);
  return out;
}

RVec q(std::initializer_list<Rat> xs) { return RVec(xs); }

ConvexityCertificate unit_square_certificate() {
  ConvexityCertificate c;
  c.d = 2;
  c.k = 1;
  const RVec p00 = v({0, 0}), p10 = v({1, 0}), p01 = v({0, 1}), p11 = v({1, 1});
  const std::vector<std::pair<RVec, RVec>> edges{{p00, p10}, {p10, p11}, {p11, p01}, {p01, p00}};
  for (const auto& [a, b] : edges) {
    c.flats.emplace_back(a, RMat{sub(b, a)});
    c.touch_sets.push_back({a, b});
    const RVec dir = sub(b, a);
    const RVec n{-dir[1], dir[0]};
    c.supports.emplace_back(n, dot(n, a));
  }
  const Rat lo(1, 4), hi(3, 4);
  c.interior_block = {q({lo, lo}), q({hi, lo}), q({lo, hi}), q({hi, hi})};
  return c;
}

std::vector<Hyperplane> random_lines(RatSampler& rs, std::size_t n) {
  for (;;) {
    std::vector<Hyperplane> out;
    for (std::size_t i = 0; i < n; ++i) {
      RVec nrm = rs.vector(2, -5, 5);
      if (is_zero(nrm)) nrm[0] = 1;
      out.emplace_back(nrm, rs.uniform(-5, 5));
    }
    if (n < 2 || convexpos::general_position_hyperplanes(out).ok) return out;
  }
}

/// Independent oracle for planar arrangements: clip every cell with a large box,
/// get its polygon from pairwise line intersections, and require each line to
/// contain two distinct polygon vertices.
bool cell_has_all_edges(const std::vector<Hyperplane>& lines, const convexpos::SignVector& sigma) {
  Rat big = 1;
  for (std::size_t i = 0; i < lines.size(); ++i)
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      const auto& a = lines[i].normal();
      const auto& b = lines[j].normal();
      const Rat det = a[0] * b[1] - a[1] * b[0];
      const Rat x = (lines[i].offset() * b[1] - a[1] * lines[j].offset()) / det;
      const Rat y = (a[0] * lines[j].offset() - lines[i].offset() * b[0]) / det;
      big = std::max(big, Rat(abs(x) + abs(y) + 1));
    }
  big *= 4;
  std::vector<geom::Halfspace> hs;
  for (std::size_t i = 0; i < lines.size(); ++i)
    hs.push_back({scale(Rat(-sigma[i]), lines[i].normal()), Rat(-sigma[i] * lines[i].offset())});
  for (std::size_t j = 0; j < 2; ++j) {
    hs.push_back({unit_vector(2, j), big});
    hs.push_back({scale(-1, unit_vector(2, j)), big});
  }
  const auto verts = oracle::pairwise_line_vertices(hs);
  if (verts.size() < 3) return false;
  for (const auto& line : lines) {
    int on = 0;
    for (const auto& p : verts)
      if (line.contains(p)) ++on;
    if (on < 2) return false;
  }
  return true;
}

std::optional<convexpos::SignVector> oracle_lines(const std::vector<Hyperplane>& lines) {
  const std::size_t n = lines.size();
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    convexpos::SignVector s(n);
    // lexicographic over {-1, +1}^n: bit set means +1, most significant first
    for (std::size_t i = 0; i < n; ++i) s[i] = (mask >> (n - 1 - i)) & 1u ? 1 : -1;
    if (cell_has_all_edges(lines, s)) return s;
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("verify_certificate accepts the unit square") {
  const auto v1 = convexpos::verify_certificate(unit_square_certificate());
  CHECK(v1.ok);
  CHECK(v1.clause.empty());
}

TEST_CASE("verify_certificate rejects the diagonal at clause c") {
  auto c = unit_square_certificate();
  c.flats[0] = Flat(v({0, 0}), {v({1, 1})});
  c.touch_sets[0] = {v({0, 0}), v({1, 1})};
  c.supports[0] = Hyperplane(v({1, -1}), 0);
  const auto r = convexpos::verify_certificate(c);
  CHECK_FALSE(r.ok);
  CHECK(r.clause == "c");
}

TEST_CASE("verify_certificate reports each clause") {
  SUBCASE("touch point off its flat") {
    auto c = unit_square_certificate();
    c.touch_sets[0][1] = v({1, 1});
    CHECK(convexpos::verify_certificate(c).clause == "a");
  }
  SUBCASE("support not containing the flat") {
    auto c = unit_square_certificate();
    c.supports[0] = Hyperplane(v({0, 1}), 1);
    CHECK(convexpos::verify_certificate(c).clause == "b");
  }
  SUBCASE("touch set too small") {
    auto c = unit_square_certificate();
    c.touch_sets[0] = {v({0, 0})};
    const auto r = convexpos::verify_certificate(c);
    CHECK_FALSE(r.ok);
  }
  SUBCASE("flat interior block") {
    auto c = unit_square_certificate();
    c.interior_block = {q({Rat(1, 4), Rat(1, 4)}), q({Rat(1, 2), Rat(1, 2)}), q({Rat(3, 4), Rat(3, 4)})};
    const auto r = convexpos::verify_certificate(c);
    CHECK_FALSE(r.ok);
  }
}

TEST_CASE("points_convex_position") {
  CHECK(convexpos::points_convex_position({v({0, 0}), v({1, 0}), v({0, 1}), v({1, 1})}));
  CHECK_FALSE(convexpos::points_convex_position({v({0, 0}), v({2, 0}), v({0, 2}), v({2, 2}), v({1, 1})}));
  CHECK_THROWS_AS(convexpos::points_convex_position({v({0, 0}), v({0, 0}), v({1, 1})}), InputError);
  // points of a 2-plane inside R^3
  CHECK(convexpos::points_convex_position({v({0, 0, 1}), v({1, 0, 1}), v({0, 1, 1}), v({1, 1, 1})}));

  RatSampler rs(5);
  for (int t = 0; t < 60; ++t) {
    std::vector<RVec> pts;
    for (int i = 0; i < 6; ++i) pts.push_back(rs.vector(2, -10, 10));
    CHECK(convexpos::points_convex_position(pts) == oracle::planar_convex_by_triangles(pts));
    CHECK(convexpos::points_convex_position(pts) == (oracle::hull_size(pts) == pts.size()));
  }
}

TEST_CASE("two points of a triangle plus an inside point are not in convex position") {
  CHECK_FALSE(convexpos::points_convex_position({v({0, 0}), v({4, 0}), v({0, 4}), v({1, 1})}));
}

TEST_CASE("lines_convex_position_2d agrees with a box-clipping oracle") {
  RatSampler rs(99, 20);
  for (std::size_t n = 3; n <= 6; ++n) {
    for (int t = 0; t < 25; ++t) {
      const auto lines = random_lines(rs, n);
      const auto got = convexpos::lines_convex_position_2d(lines);
      const auto want = oracle_lines(lines);
      CHECK(got.convex == want.has_value());
      if (got.convex && want) CHECK(*got.witness == *want);
    }
  }
}

TEST_CASE("four lines in general position are always convex") {
  RatSampler rs(4);
  for (int t = 0; t < 200; ++t) CHECK(convexpos::lines_convex_position_2d(random_lines(rs, 4)).convex);
}

TEST_CASE("lines_convex_position_2d edge cases") {
  CHECK(convexpos::lines_convex_position_2d({}).convex);
  CHECK(convexpos::lines_convex_position_2d({Hyperplane(v({1, 0}), 0)}).convex);
  // parallel lines violate general position
  CHECK_THROWS_AS(convexpos::lines_convex_position_2d({Hyperplane(v({1, 0}), 0), Hyperplane(v({1, 0}), 1),
                                                       Hyperplane(v({0, 1}), 0)}),
                  GeneralPositionError);
  // three concurrent lines
  CHECK_THROWS_AS(convexpos::lines_convex_position_2d({Hyperplane(v({1, 0}), 0), Hyperplane(v({0, 1}), 0),
                                                       Hyperplane(v({1, 1}), 0)}),
                  GeneralPositionError);
}

TEST_CASE("planar witnesses lift to verified certificates") {
  RatSampler rs(31);
  for (int t = 0; t < 30; ++t) {
    const auto lines = random_lines(rs, 5);
    const auto lv = convexpos::lines_convex_position_2d(lines);
    if (!lv.convex) continue;
    const auto cert = convexpos::lift_cell_certificate(lines, *lv.witness);
    CHECK(convexpos::verify_certificate(cert).ok);
  }
}

TEST_CASE("hyperplanes: tetrahedron facets are certified convex") {
  const std::vector<Hyperplane> tet{Hyperplane(v({1, 0, 0}), 0), Hyperplane(v({0, 1, 0}), 0),
                                    Hyperplane(v({0, 0, 1}), 0), Hyperplane(v({1, 1, 1}), 1)};
  const auto r = convexpos::hyperplanes_convex_position(tet);
  REQUIRE(r.convex);
  CHECK(r.certified);
  REQUIRE(r.certificate);
  CHECK(convexpos::verify_certificate(*r.certificate).ok);
}

TEST_CASE("hyperplanes: cube faces violate general position") {
  std::vector<Hyperplane> cube;
  for (std::size_t j = 0; j < 3; ++j) {
    cube.emplace_back(unit_vector(3, j), 0);
    cube.emplace_back(unit_vector(3, j), 1);
  }
  CHECK_THROWS_AS(convexpos::hyperplanes_convex_position(cube), GeneralPositionError);
}

TEST_CASE("hyperplanes: a slightly tilted hexahedron is certified convex") {
  const std::vector<Hyperplane> hex{
      Hyperplane(v({1, 0, 0}), 0),
      Hyperplane(q({1, Rat(1, 17), Rat(1, 23)}), 1),
      Hyperplane(v({0, 1, 0}), 0),
      Hyperplane(q({Rat(1, 19), 1, Rat(-1, 29)}), 1),
      Hyperplane(v({0, 0, 1}), 0),
      Hyperplane(q({Rat(-1, 31), Rat(1, 37), 1}), 1),
  };
  const auto r = convexpos::hyperplanes_convex_position(hex, {.seed = 3, .retries = 64});
  REQUIRE(r.convex);
  REQUIRE(r.certificate);
  CHECK(convexpos::verify_certificate(*r.certificate).ok);
}

TEST_CASE("section_lines reports parallel hyperplanes") {
  const std::vector<Hyperplane> hps{Hyperplane(v({0, 0, 1}), 1), Hyperplane(v({1, 0, 0}), 0)};
  CHECK_FALSE(convexpos::section_lines(hps, v({0, 0, 0}), v({1, 0, 0}), v({0, 1, 0})).has_value());
  const auto ok = convexpos::section_lines(hps, v({0, 0, 0}), v({1, 0, 1}), v({0, 1, 0}));
  REQUIRE(ok.has_value());
  CHECK(ok->size() == 2);
}

TEST_CASE("general_position_flats") {
  RatSampler rs(8);
  std::vector<Flat> lines;
  for (int i = 0; i < 5; ++i) lines.emplace_back(rs.vector(3, -5, 5), RMat{rs.vector(3, -5, 5)});
  const auto gp = convexpos::general_position_flats(lines);
  REQUIRE(gp.ok);
  REQUIRE(gp.transversal);
  CHECK(gp.transversal->dim() == 2);
  CHECK(gp.points.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(geom::flat_contains(lines[i], gp.points[i]));
    CHECK(geom::flat_contains(*gp.transversal, gp.points[i]));
  }

  // k = 0: points themselves, no transversal needed
  std::vector<Flat> pts;
  for (const auto& p : {v({0, 0, 0}), v({1, 0, 0}), v({0, 1, 0}), v({0, 0, 1})}) pts.emplace_back(p, RMat{});
  const auto g0 = convexpos::general_position_flats(pts);
  CHECK(g0.ok);
  CHECK_FALSE(g0.transversal.has_value());

  // three collinear points fail
  std::vector<Flat> bad;
  for (const auto& p : {v({0, 0, 0}), v({1, 0, 0}), v({2, 0, 0}), v({0, 0, 1})}) bad.emplace_back(p, RMat{});
  CHECK_FALSE(convexpos::general_position_flats(bad).ok);

  // hyperplanes are routed elsewhere
  std::vector<Flat> planes;
  for (int i = 0; i < 4; ++i) planes.emplace_back(rs.vector(3, -5, 5), RMat{rs.vector(3, -5, 5), rs.vector(3, -5, 5)});
  CHECK_THROWS_AS(convexpos::general_position_flats(planes), InputError);
}
