// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <variant>

#include "esflats/convexpos.hpp"
#include "esflats/error.hpp"
#include "esflats/eskit.hpp"
#include "esflats/grassmann.hpp"
#include "esflats/instances.hpp"
#include "esflats/nonconvex.hpp"
#include "oracles.hpp"

using namespace esflats;
using Eigen::MatrixXd;
using Eigen::VectorXd;
namespace nc = esflats::nonconvex;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail << "first failure: " << what << "; ";
    }
  }
};

int failures = 0;

void criterion(int id, const std::string& title, double limit_s, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.ok = false;
    o.detail << "exception: " << e.what() << "; ";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs >= limit_s) {
    o.ok = false;
    o.detail << "runtime over the " << limit_s << " s limit; ";
  }
  if (!o.ok) ++failures;
  std::cout << (o.ok ? "PASS" : "FAIL") << " criterion " << id << ": " << title << " [" << std::fixed
            << std::setprecision(2) << secs << " s] " << o.detail.str() << std::endl;
}

VectorXd vec3(double a, double b, double c) {
  VectorXd v(3);
  v << a, b, c;
  return v;
}

nc::Cone random_cone(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::uniform_int_distribution<int> count(4, 8);
  const VectorXd axis = vec3(g(rng), g(rng), g(rng)).normalized();
  std::vector<VectorXd> gens;
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    VectorXd v = axis + 0.8 * vec3(g(rng), g(rng), g(rng));
    if (v.dot(axis) < 0.1) v += axis;
    gens.push_back(v);
  }
  return nc::Cone::from_generators(gens);
}

// Linear plane in R^3 whose section with {z = 1} is the line n . (x, y) = c.
gr::Subspace homogenize(const geom::Hyperplane& line) {
  const VectorXd nu = vec3(to_double(line.normal()[0]), to_double(line.normal()[1]), -to_double(line.offset()));
  Eigen::FullPivLU<MatrixXd> lu(nu.transpose());
  return gr::Subspace::spanned_by(lu.kernel());
}

void es_base_case(Outcome& o) {
  std::size_t below = 0;
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
    const auto pts = instances::random_points(2, 5, seed);
    if (eskit::largest_convex_subset_2d(pts).size() < 4) ++below;
  }
  o.require(below == 0, std::to_string(below) + " five-point sets without a convex 4-subset");
  std::size_t mismatches = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const auto pts = instances::random_points(2, 3 + seed % 7, 10000 + seed);
    if (eskit::largest_convex_subset_2d(pts).size() != oracle::largest_convex_subset_exhaustive(pts)) ++mismatches;
  }
  o.require(mismatches == 0, std::to_string(mismatches) + " disagreements with the exhaustive oracle");
  o.detail << "1000/1000 sets have a convex 4-subset, 200/200 match the oracle";
}

void four_lines(Outcome& o) {
  std::size_t convex = 0;
  for (std::uint64_t seed = 1; seed <= 1000; ++seed)
    convex += convexpos::lines_convex_position_2d(instances::random_hyperplanes(2, 4, seed)).convex;
  o.require(convex == 1000, std::to_string(1000 - convex) + " non-convex 4-line instances");
  o.detail << convex << "/1000 convex";
}

void octahedron(Outcome& o) {
  for (std::size_t d : {2, 3}) {
    const auto fam = nc::octa_family(d, 1);
    o.require(fam.hyperplanes.size() == d + (std::size_t{1} << d), "family size");
    const auto v = nc::verify_octa_nonconvex(fam);
    o.require(v.certified, "verify_octa_nonconvex failed for d = " + std::to_string(d));
    o.require(v.log.size() == (std::size_t{1} << d), "expected one LP check per sign pattern");
    if (d == 2) {
      o.require(!convexpos::lines_convex_position_2d(fam.hyperplanes).convex, "planar decider says convex");
    } else {
      o.require(!convexpos::hyperplanes_convex_position(fam.hyperplanes).convex, "section decider says convex");
    }
  }
  o.detail << "d=2 (6 lines) and d=3 (11 planes) certified, deciders negative";
}

void pipeline(Outcome& o) {
  struct Config {
    std::size_t d, k, n;
  };
  for (const auto c : {Config{3, 1, 4}, Config{3, 1, 5}, Config{4, 1, 4}, Config{4, 2, 4}}) {
    const std::size_t big_n = (std::size_t{1} << (c.n - 2)) + 1;
    std::size_t ok = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      const auto flats = instances::random_flats(c.d, c.k, big_n, seed);
      try {
        const auto r = eskit::extract_convex_flats(flats, c.n, {.seed = seed});
        ok += r.chosen_indices.size() == c.n && convexpos::verify_certificate(r.certificate).ok;
      } catch (const SearchExhausted&) {
      }
    }
    std::ostringstream name;
    name << "(" << c.d << "," << c.k << "," << c.n << ") N=" << big_n;
    o.require(ok == 100, name.str() + ": " + std::to_string(ok) + "/100");
    o.detail << name.str() << " " << ok << "/100; ";
  }
}

void cone_refutation(Outcome& o) {
  const double eps = 1.0 / 40;
  o.require(eps < nc::eps_threshold(3), "eps is not below the threshold");
  const auto net = gr::build_eps_net(3, 1, eps, 11);
  o.require(net.audit.max_observed_gap < eps, "net audit gap exceeds eps");
  std::mt19937_64 rng(2024);
  std::size_t full = 0, early = 0;
  auto check_full = [&](const nc::RefutationCertificate& c) {
    o.require(c.margin_interior > 0, "margin_interior <= 0");
    o.require(c.membership_residual <= 1e-6, "membership residual above 1e-6");
    o.require(c.trace.det_mtm > 0.25, "det(M^T M) <= 1/4");
    o.require(c.trace.det_mstar_tmstar > 0.25, "det(M*^T M*) <= 1/4");
    for (const auto* vs : {&c.trace.a_vectors, &c.trace.b_vectors})
      for (std::size_t i = 0; i < vs->size(); ++i)
        for (std::size_t h = i + 1; h < vs->size(); ++h)
          o.require(std::abs((*vs)[i].dot((*vs)[h])) < eps, "pairwise inner product not below eps");
    for (double y : c.trace.y_j) o.require(std::abs(y) < 0.25, "|y_i| >= 1/4");
    for (double x : c.trace.x) {
      o.require(x > 0.5, "x_i <= 1/2");
      o.require(std::abs(x - c.trace.y) <= 0.25, "|x_i - y| > 1/4");
    }
  };
  for (int t = 0; t < 100; ++t) {
    const auto cone = random_cone(rng);
    const auto r = nc::refute_cone(cone, net);
    if (const auto* c = std::get_if<nc::RefutationCertificate>(&r)) {
      ++full;
      check_full(*c);
    } else {
      const auto& e = std::get<nc::EarlyRefutation>(r);
      ++early;
      if (e.condition == 2) o.require(e.witness_z && cone.margin(*e.witness_z) > 0, "early witness outside the open cone");
    }
  }
  o.require(full + early == 100, "some cone was not refuted");
  // The orthant exercises the full construction.
  const auto orthant = nc::Cone::from_generators({vec3(1, 0, 0), vec3(0, 1, 0), vec3(0, 0, 1)});
  const auto r = nc::refute_cone(orthant, net);
  const auto* c = std::get_if<nc::RefutationCertificate>(&r);
  o.require(c != nullptr, "orthant did not give a full certificate");
  if (c) check_full(*c);
  o.detail << "net size " << net.elements.size() << ", random cones: " << full << " full, " << early
           << " early; orthant: full certificate";
}

void metric_suite(Outcome& o) {
  constexpr double kPi = std::numbers::pi;
  std::mt19937_64 rng(99);
  std::size_t bad = 0;
  for (auto [d, k] : {std::pair<int, int>{3, 1}, {4, 2}}) {
    for (int t = 0; t < 10000; ++t) {
      const auto u = gr::random_subspace(d, k, rng), v = gr::random_subspace(d, k, rng), w = gr::random_subspace(d, k, rng);
      const double duv = gr::gr_distance(u, v), ang = gr::max_angle(u, v);
      bad += !(2 / kPi * ang <= duv + 1e-9 && duv <= ang + 1e-9);
      bad += std::abs(duv - gr::gr_distance(v, u)) > 1e-9;
      bad += duv > gr::gr_distance(u, w) + gr::gr_distance(w, v) + 1e-9;
    }
  }
  o.require(bad == 0, std::to_string(bad) + " metric violations");
  std::uniform_int_distribution<int> size(2, 6);
  std::uniform_real_distribution<double> unit(-1, 1);
  std::size_t det_fail = 0;
  for (int t = 0; t < 1000; ++t) {
    const int n = size(rng);
    const double fact = std::tgamma(n + 1.0);
    const double delta = 1 / (2 * fact) * (0.1 + 0.9 * (unit(rng) + 1) / 2);
    MatrixXd m = MatrixXd::Identity(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) m(i, j) = delta * unit(rng);
    det_fail += !nc::det_bound_check(m, delta);
  }
  o.require(det_fail == 0, std::to_string(det_fail) + " determinant bound failures");
  o.detail << "2x10^4 pairs, 10^3 matrices";
}

void section_consistency(Outcome& o) {
  const auto net = gr::build_eps_net(3, 2, 0.05, 5);
  const auto sec = nc::section_to_affine(net);
  o.require(!sec.flats.empty(), "empty section");
  for (const auto& f : sec.flats) o.require(f.ambient_dim() == 2 && f.dim() == 1, "section is not made of planar lines");
  std::vector<geom::Hyperplane> lines;
  for (const auto& f : sec.flats) lines.push_back(convexpos::flat_as_hyperplane(f));

  // Net lines nearest to the unperturbed planar octahedron family, in its order.
  const auto octa = nc::octa_family(2, 0, Rat(0));
  std::vector<std::size_t> section_of(net.elements.size(), static_cast<std::size_t>(-1));
  for (std::size_t i = 0; i < sec.net_index.size(); ++i) section_of[sec.net_index[i]] = i;
  nc::OctaFamily near{2, 0, Rat(0), {}};
  std::vector<std::size_t> core;
  for (const auto& h : octa.hyperplanes) {
    const auto hit = gr::nearest_in_net(net, homogenize(h));
    o.require(hit.angle < net.eps, "octahedron plane not covered by the net");
    const std::size_t s = section_of[hit.index];
    o.require(s != static_cast<std::size_t>(-1), "nearest element is parallel to the section plane");
    if (s == static_cast<std::size_t>(-1)) return;
    core.push_back(s);
    near.hyperplanes.push_back(lines[s]);
  }
  o.require(nc::verify_octa_nonconvex(near).certified, "near-octahedron net lines are not certified non-convex");

  // Supersets up to size 12 stay non-convex under the exhaustive cell search.
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> pick(0, lines.size() - 1);
  std::size_t checked = 0;
  for (int t = 0; t < 40; ++t) {
    std::vector<std::size_t> ids = core;
    const std::size_t target = 7 + static_cast<std::size_t>(t) % 6;
    while (ids.size() < target) {
      const auto c = pick(rng);
      if (std::find(ids.begin(), ids.end(), c) == ids.end()) ids.push_back(c);
    }
    std::vector<geom::Hyperplane> family;
    for (auto i : ids) family.push_back(lines[i]);
    if (!convexpos::general_position_hyperplanes(family).ok) continue;
    ++checked;
    o.require(!convexpos::lines_convex_position_2d(family).convex, "a sectioned subfamily is convex");
  }
  o.require(checked >= 30, "too few subfamilies in general position");
  o.detail << "net size " << net.elements.size() << ", " << sec.flats.size() << " lines, core certified, " << checked
           << " supersets of size 7..12 non-convex";
}

}  // namespace

int main() {
  criterion(1, "Erdos-Szekeres base case", 10, es_base_case);
  criterion(2, "four lines always convex", 10, four_lines);
  criterion(3, "octahedron family certified non-convex", 30, octahedron);
  criterion(4, "flats pipeline certificates", 120, pipeline);
  criterion(5, "cone refutation at eps = 1/40", 600, cone_refutation);
  criterion(6, "Grassmannian metric suite", 30, metric_suite);
  criterion(7, "section consistency", 120, section_consistency);
  std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " criteria FAILED") << std::endl;
  return failures == 0 ? 0 : 1;
}
