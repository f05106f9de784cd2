#include <doctest.h>

#include <random>

#include "esflats/error.hpp"
#include "esflats/geom.hpp"
#include "esflats/lp.hpp"
#include "esflats/polytope.hpp"
#include "esflats/random.hpp"
#include "esflats/rational.hpp"
#include "oracles.hpp"

using namespace esflats;
using geom::Flat;
using geom::Hyperplane;
using lp::Constraint;
using lp::Rel;

namespace {

RVec v(std::initializer_list<long> xs) {
  RVec out;
  for (long x : xs) out.emplace_back(x);
  return out;
}

}  // namespace

TEST_CASE("rational literals parse into canonical form") {
  CHECK(parse_rat("6/4") == Rat(3, 2));
  CHECK(format_rat(parse_rat("6/4")) == "3/2");
  CHECK(parse_rat("-0.125") == Rat(-1, 8));
  CHECK(parse_rat("7") == Rat(7));
  CHECK_THROWS_AS(parse_rat("1/0"), InputError);
  CHECK_THROWS_AS(parse_rat("abc"), InputError);
  CHECK(rat_from_double(0.1).get_d() == 0.1);
}

TEST_CASE("flat_contains") {
  const Flat xaxis(v({0, 0}), {v({1, 0})});
  CHECK(geom::flat_contains(xaxis, v({5, 0})));
  CHECK_FALSE(geom::flat_contains(xaxis, v({0, 1})));
  const Flat line(v({0, 0, 1}), {v({1, 1, 0})});
  CHECK(geom::flat_contains(line, v({2, 2, 1})));
  CHECK_THROWS_AS(geom::flat_contains(xaxis, v({1, 2, 3})), InputError);
}

TEST_CASE("flat_contains does not depend on the chosen direction basis") {
  RatSampler rs(11);
  for (int t = 0; t < 50; ++t) {
    RMat dirs{rs.vector(4, -3, 3), rs.vector(4, -3, 3)};
    if (rank(dirs) < 2) continue;
    const RVec base = rs.vector(4, -3, 3);
    const Flat f(base, dirs);
    // re-span: (d0 + 2 d1, -d1)
    const Flat g(axpy(base, 3, dirs[0]), {axpy(dirs[0], 2, dirs[1]), scale(-1, dirs[1])});
    const RVec on = axpy(axpy(base, rs.uniform(-2, 2), dirs[0]), rs.uniform(-2, 2), dirs[1]);
    const RVec off = rs.vector(4, -3, 3);
    CHECK(geom::flat_contains(f, on) == geom::flat_contains(g, on));
    CHECK(geom::flat_contains(f, off) == geom::flat_contains(g, off));
    CHECK(geom::flat_contains(g, on));
  }
}

TEST_CASE("degenerate flats are rejected at construction") {
  CHECK_THROWS_AS(Flat(v({0, 0, 0}), {v({1, 1, 0}), v({2, 2, 0})}), InputError);
  CHECK_THROWS_AS(Flat(v({0, 0}), {v({1, 0}), v({0, 1})}), InputError);
  CHECK_THROWS_AS(Hyperplane(v({0, 0}), 1), InputError);
}

TEST_CASE("intersect_flat_hyperplane") {
  const Hyperplane z1(v({0, 0, 1}), 1);
  const auto r1 = geom::intersect_flat_hyperplane(Flat(v({0, 0, 0}), {v({0, 0, 1})}), z1);
  REQUIRE(std::holds_alternative<Flat>(r1));
  CHECK(std::get<Flat>(r1).dim() == 0);
  CHECK(std::get<Flat>(r1).base() == v({0, 0, 1}));

  const Flat xaxis(v({0, 0, 0}), {v({1, 0, 0})});
  CHECK(std::holds_alternative<geom::EmptyIntersection>(geom::intersect_flat_hyperplane(xaxis, z1)));
  CHECK(std::holds_alternative<geom::ContainedIntersection>(
      geom::intersect_flat_hyperplane(xaxis, Hyperplane(v({0, 1, 0}), 0))));

  // A plane meeting a hyperplane transversally gives a line on both.
  const Flat plane(v({1, 2, 3}), {v({1, 0, 1}), v({0, 1, 2})});
  const Hyperplane h(v({1, 1, 1}), 4);
  const auto r = geom::intersect_flat_hyperplane(plane, h);
  REQUIRE(std::holds_alternative<Flat>(r));
  const Flat& line = std::get<Flat>(r);
  CHECK(line.dim() == 1);
  CHECK(h.contains(line.base()));
  CHECK(geom::flat_contains(plane, line.base()));
  CHECK(geom::flat_contains(plane, add(line.base(), line.dirs()[0])));
  CHECK(h.contains(add(line.base(), line.dirs()[0])));
}

TEST_CASE("lp_feasible on small systems") {
  const std::vector<Constraint> contra{{v({1}), Rel::Ge, 0}, {v({1}), Rel::Le, -1}};
  CHECK_FALSE(lp::lp_feasible(contra, 1).is_feasible());

  const std::vector<Constraint> open{{v({1}), Rel::Gt, 0}, {v({1}), Rel::Lt, 1}};
  const auto st = lp::lp_feasible(open, 1);
  REQUIRE(st.is_feasible());
  CHECK(st.witness()[0] > 0);
  CHECK(st.witness()[0] < 1);

  // open quadrant against the line -x - y = 1
  const std::vector<Constraint> octa{{v({1, 0}), Rel::Gt, 0}, {v({0, 1}), Rel::Gt, 0}, {v({-1, -1}), Rel::Eq, 1}};
  CHECK_FALSE(lp::lp_feasible(octa, 2).is_feasible());

  const auto empty = lp::lp_feasible(std::vector<Constraint>{}, 3);
  REQUIRE(empty.is_feasible());
  CHECK(empty.witness() == zeros(3));

  // x > 0 with x <= 0 closed: infeasible only because of strictness
  const std::vector<Constraint> touch{{v({1}), Rel::Gt, 0}, {v({1}), Rel::Le, 0}};
  CHECK_FALSE(lp::lp_feasible(touch, 1).is_feasible());
  // unbounded strict region: gap capped at 1
  const std::vector<Constraint> ray{{v({1, -1}), Rel::Gt, 5}};
  CHECK(lp::lp_feasible(ray, 2).is_feasible());
  CHECK_THROWS_AS(lp::lp_feasible(ray, 3), InputError);
}

TEST_CASE("lp_maximize") {
  const std::vector<Constraint> box{{v({1, 0}), Rel::Le, 2}, {v({0, 1}), Rel::Le, 3}, {v({1, 1}), Rel::Ge, -10}};
  const auto r = lp::lp_maximize(v({1, 1}), box, 2);
  REQUIRE(r.status == lp::OptStatus::Optimal);
  CHECK(r.value == 5);
  CHECK(lp::lp_maximize(v({-1, 0}), box, 2).value == 13);
  const std::vector<Constraint> half{{v({1, 0}), Rel::Le, 2}};
  CHECK(lp::lp_maximize(v({-1, 0}), half, 2).status == lp::OptStatus::Unbounded);
  const std::vector<Constraint> none{{v({1, 0}), Rel::Le, 2}, {v({1, 0}), Rel::Ge, 3}};
  CHECK(lp::lp_maximize(v({1, 0}), none, 2).status == lp::OptStatus::Infeasible);
}

TEST_CASE("lp_feasible witnesses satisfy every constraint, and agree with Fourier-Motzkin") {
  RatSampler rs(2024, 8);
  int feasible = 0, infeasible = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t d = 1 + static_cast<std::size_t>(rs.integer(0, 2));
    const std::size_t m = 2 + static_cast<std::size_t>(rs.integer(0, 6));
    std::vector<Constraint> cons;
    bool strict = trial % 2 == 1;
    for (std::size_t i = 0; i < m; ++i) {
      const long r = rs.integer(0, strict ? 4 : 2);
      const Rel rel = r == 0 ? Rel::Le : r == 1 ? Rel::Ge : r == 2 ? Rel::Eq : r == 3 ? Rel::Lt : Rel::Gt;
      if (rel == Rel::Eq && rs.integer(0, 2) != 0) {
        cons.push_back({rs.vector(d, -3, 3), Rel::Le, rs.uniform(-3, 3)});
        continue;
      }
      cons.push_back({rs.vector(d, -3, 3), rel, rs.uniform(-3, 3)});
    }
    const auto st = lp::lp_feasible(cons, d);
    if (st.is_feasible()) {
      ++feasible;
      for (const auto& c : cons) CHECK(lp::satisfies(c, st.witness()));
    } else {
      ++infeasible;
    }
    CHECK(st.is_feasible() == oracle::fourier_motzkin_feasible(cons, d));
  }
  CHECK(feasible > 20);
  CHECK(infeasible > 20);
}

TEST_CASE("vertex_enumeration") {
  using geom::Halfspace;
  const std::vector<Halfspace> square{{v({-1, 0}), 0}, {v({1, 0}), 1}, {v({0, -1}), 0}, {v({0, 1}), 1}};
  const auto sq = geom::vertex_enumeration(square, 2);
  CHECK(sq == std::vector<RVec>{v({0, 0}), v({0, 1}), v({1, 0}), v({1, 1})});

  const std::vector<Halfspace> simplex{{v({-1, 0}), 0}, {v({0, -1}), 0}, {v({1, 1}), 1}};
  CHECK(geom::vertex_enumeration(simplex, 2) == std::vector<RVec>{v({0, 0}), v({0, 1}), v({1, 0})});

  // quadrant cell of the d=2 octahedron family, cut by the four lines +-x +-y = 1
  std::vector<Halfspace> cell{{v({-1, 0}), 0}, {v({0, -1}), 0}};
  for (int a : {1, -1})
    for (int b : {1, -1}) cell.push_back({v({a, b}), 1});
  const auto verts = geom::vertex_enumeration(cell, 2);
  CHECK(verts == oracle::pairwise_line_vertices(cell));
  CHECK(verts == std::vector<RVec>{v({0, 0}), v({0, 1}), v({1, 0})});

  const std::vector<Halfspace> empty{{v({1}), -1}, {v({-1}), -1}};
  CHECK(geom::vertex_enumeration(empty, 1).empty());
}

TEST_CASE("vertex_enumeration output lies on d bounding hyperplanes and inside") {
  RatSampler rs(77, 10);
  for (int t = 0; t < 40; ++t) {
    std::vector<geom::Halfspace> hs;
    for (std::size_t j = 0; j < 3; ++j) {
      hs.push_back({unit_vector(3, j), 2});
      hs.push_back({scale(-1, unit_vector(3, j)), 2});
    }
    for (int i = 0; i < 4; ++i) hs.push_back({rs.vector(3, -2, 2), rs.uniform(0, 2)});
    for (const auto& p : geom::vertex_enumeration(hs, 3)) {
      int tight = 0;
      for (const auto& h : hs) {
        CHECK(dot(h.normal, p) <= h.bound);
        if (dot(h.normal, p) == h.bound) ++tight;
      }
      CHECK(tight >= 3);
    }
  }
}
