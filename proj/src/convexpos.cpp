#include "esflats/convexpos.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "esflats/error.hpp"
#include "esflats/polytope.hpp"
#include "esflats/random.hpp"

namespace esflats::convexpos {

namespace {

std::string idx(std::size_t i) { return std::to_string(i); }

bool contains_point(const std::vector<RVec>& set, const RVec& p) {
  return std::find(set.begin(), set.end(), p) != set.end();
}

Verdict fail(std::string clause, std::string message) { return {false, std::move(clause), std::move(message)}; }

// Calls f(subset) for every k-subset of {0..n-1} in lexicographic order until f returns false.
template <typename F>
void for_each_subset(std::size_t n, std::size_t k, F&& f) {
  if (k > n) return;
  std::vector<std::size_t> s(k);
  for (std::size_t i = 0; i < k; ++i) s[i] = i;
  while (true) {
    if (!f(s)) return;
    std::size_t pos = k;
    while (pos > 0 && s[pos - 1] == n - k + pos - 1) --pos;
    if (pos == 0) return;
    ++s[pos - 1];
    for (std::size_t j = pos; j < k; ++j) s[j] = s[j - 1] + 1;
  }
}

std::vector<RVec> arrangement_vertices(const std::vector<Hyperplane>& hps) {
  const std::size_t d = hps.front().ambient_dim();
  std::vector<RVec> pts;
  for_each_subset(hps.size(), d, [&](const std::vector<std::size_t>& s) {
    std::vector<const Hyperplane*> sel;
    for (auto i : s) sel.push_back(&hps[i]);
    if (auto p = geom::intersect_hyperplanes(sel)) pts.push_back(std::move(*p));
    return true;
  });
  return pts;
}

}  // namespace

Flat hyperplane_as_flat(const Hyperplane& h) {
  const std::size_t d = h.ambient_dim();
  const auto& n = h.normal();
  std::size_t piv = 0;
  while (sgn(n[piv]) == 0) ++piv;
  RVec base = zeros(d);
  base[piv] = h.offset() / n[piv];
  return Flat(std::move(base), nullspace(RMat{n}, d));
}

Hyperplane flat_as_hyperplane(const Flat& f) {
  if (f.dim() + 1 != f.ambient_dim()) throw InputError("flat is not a hyperplane");
  const RMat ns = nullspace(f.dirs(), f.ambient_dim());
  const RVec& n = ns.front();
  return Hyperplane(n, dot(n, f.base()));
}

Verdict verify_certificate(const ConvexityCertificate& c) {
  const std::size_t d = c.d;
  const std::size_t n = c.flats.size();
  if (c.touch_sets.size() != n || c.supports.size() != n) {
    return fail("shape", "flats, touch_sets and supports must have equal length");
  }
  if (d == 0 || c.k >= d) return fail("shape", "need 0 <= k < d");
  for (std::size_t i = 0; i < n; ++i) {
    if (c.flats[i].ambient_dim() != d || c.flats[i].dim() != c.k) {
      return fail("shape", "flat " + idx(i) + " has wrong dimensions");
    }
    if (c.supports[i].ambient_dim() != d) return fail("shape", "support " + idx(i) + " has wrong dimension");
    if (c.touch_sets[i].size() < c.k + 1) {
      return fail("shape", "touch set " + idx(i) + " has fewer than k+1 points");
    }
    for (const auto& p : c.touch_sets[i]) {
      if (p.size() != d) return fail("shape", "touch set " + idx(i) + " has a point of wrong dimension");
    }
  }
  for (const auto& p : c.interior_block) {
    if (p.size() != d) return fail("shape", "interior block point of wrong dimension");
  }

  std::vector<RVec> all = c.interior_block;
  for (const auto& ts : c.touch_sets) all.insert(all.end(), ts.begin(), ts.end());
  geom::sort_unique(all);

  for (std::size_t i = 0; i < n; ++i) {
    const auto& ts = c.touch_sets[i];
    for (std::size_t j = 0; j < ts.size(); ++j) {
      if (!geom::flat_contains(c.flats[i], ts[j])) {
        return fail("a", "touch point " + idx(j) + " of flat " + idx(i) + " is not on the flat");
      }
    }
    if (!geom::hyperplane_contains_flat(c.supports[i], c.flats[i])) {
      return fail("b", "support " + idx(i) + " does not contain flat " + idx(i));
    }
    int side = 0;
    for (std::size_t v = 0; v < all.size(); ++v) {
      if (contains_point(ts, all[v])) continue;
      const int s = c.supports[i].side(all[v]);
      if (s == 0) return fail("c", "point " + idx(v) + " lies on support " + idx(i));
      if (side == 0) side = s;
      if (s != side) return fail("c", "points on both sides of support " + idx(i) + " (point " + idx(v) + ")");
    }
    if (affine_dimension(ts) != static_cast<int>(c.k)) {
      return fail("d", "touch set " + idx(i) + " does not span a " + idx(c.k) + "-dimensional affine hull");
    }
  }
  if (affine_dimension(c.interior_block) != static_cast<int>(d)) {
    return fail("interior", "interior block does not affinely span R^" + idx(d));
  }
  return {};
}

bool points_convex_position(const std::vector<RVec>& pts) {
  if (pts.size() < 3) throw InputError("points_convex_position needs at least 3 points");
  const std::size_t d = pts.front().size();
  for (const auto& p : pts) {
    if (p.size() != d) throw InputError("points of mixed dimension");
  }
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      if (pts[i] == pts[j]) throw InputError("duplicate points " + idx(i) + " and " + idx(j));
    }
  }
  const std::size_t m = pts.size() - 1;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    // lambda >= 0, sum lambda = 1, sum lambda_j p_j = p_i over the others
    std::vector<lp::Constraint> cons;
    for (std::size_t j = 0; j < m; ++j) cons.push_back({scale(-1, unit_vector(m, j)), lp::Rel::Le, 0});
    cons.push_back({RVec(m, Rat(1)), lp::Rel::Eq, 1});
    for (std::size_t r = 0; r < d; ++r) {
      RVec row(m);
      std::size_t col = 0;
      for (std::size_t j = 0; j < pts.size(); ++j) {
        if (j != i) row[col++] = pts[j][r];
      }
      cons.push_back({std::move(row), lp::Rel::Eq, pts[i][r]});
    }
    if (lp::lp_feasible(cons, m).is_feasible()) return false;
  }
  return true;
}

GeneralPositionReport general_position_hyperplanes(const std::vector<Hyperplane>& hps) {
  if (hps.empty()) return {false, "no hyperplanes"};
  const std::size_t d = hps.front().ambient_dim();
  for (const auto& h : hps) {
    if (h.ambient_dim() != d) throw InputError("hyperplanes of mixed dimension");
  }
  if (hps.size() < d) return {false, "fewer than d hyperplanes"};
  GeneralPositionReport rep;
  std::vector<std::pair<RVec, std::vector<std::size_t>>> pts;
  for_each_subset(hps.size(), d, [&](const std::vector<std::size_t>& s) {
    std::vector<const Hyperplane*> sel;
    for (auto i : s) sel.push_back(&hps[i]);
    auto p = geom::intersect_hyperplanes(sel);
    if (!p) {
      std::ostringstream os;
      os << "hyperplanes {";
      for (std::size_t t = 0; t < s.size(); ++t) os << (t ? "," : "") << s[t];
      os << "} do not meet in a single point";
      rep = {false, os.str()};
      return false;
    }
    pts.emplace_back(std::move(*p), s);
    return true;
  });
  if (!rep.ok) return rep;
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return geom::lex_less(a.first, b.first); });
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i].first == pts[i - 1].first) {
      std::ostringstream os;
      os << "intersection points coincide for subsets {";
      for (std::size_t t = 0; t < pts[i - 1].second.size(); ++t) os << (t ? "," : "") << pts[i - 1].second[t];
      os << "} and {";
      for (std::size_t t = 0; t < pts[i].second.size(); ++t) os << (t ? "," : "") << pts[i].second[t];
      os << "}";
      return {false, os.str()};
    }
  }
  return rep;
}

std::vector<lp::Constraint> cell_constraints(const std::vector<Hyperplane>& hps, const SignVector& sigma,
                                             std::optional<std::size_t> on_line) {
  std::vector<lp::Constraint> cons;
  cons.reserve(hps.size());
  for (std::size_t i = 0; i < hps.size(); ++i) {
    if (on_line && *on_line == i) {
      cons.push_back({hps[i].normal(), lp::Rel::Eq, hps[i].offset()});
    } else if (sigma[i] > 0) {
      cons.push_back({hps[i].normal(), lp::Rel::Gt, hps[i].offset()});
    } else {
      cons.push_back({hps[i].normal(), lp::Rel::Lt, hps[i].offset()});
    }
  }
  return cons;
}

bool cell_touches_all(const std::vector<Hyperplane>& hps, const SignVector& sigma) {
  if (hps.empty()) return true;
  const std::size_t d = hps.front().ambient_dim();
  if (!lp::lp_feasible(cell_constraints(hps, sigma), d).is_feasible()) return false;
  for (std::size_t i = 0; i < hps.size(); ++i) {
    // Equality on i with the others strict is relatively open in h_i, so a
    // nonempty solution set already has full dimension d-1 there.
    if (!lp::lp_feasible(cell_constraints(hps, sigma, i), d).is_feasible()) return false;
  }
  return true;
}

namespace {

/// Planar version of cell_touches_all without LPs: on each line, the other sign
/// conditions cut out an interval of the line parameter, and the line carries
/// an edge exactly when that interval has positive length. Lines must pairwise cross.
bool planar_cell_has_all_edges(const std::vector<Hyperplane>& lines, const SignVector& sigma) {
  for (std::size_t l = 0; l < lines.size(); ++l) {
    const RVec& n = lines[l].normal();
    const RVec p0 = sign(n[0]) != 0 ? RVec{lines[l].offset() / n[0], 0} : RVec{0, lines[l].offset() / n[1]};
    const RVec dir{-n[1], n[0]};
    std::optional<Rat> lo, hi;
    for (std::size_t m = 0; m < lines.size(); ++m) {
      if (m == l) continue;
      const Rat a = sigma[m] * dot(lines[m].normal(), dir);
      const Rat b = sigma[m] * (dot(lines[m].normal(), p0) - lines[m].offset());
      const Rat t = -b / a;  // a != 0 since the lines cross
      if (sign(a) > 0) {
        if (!lo || t > *lo) lo = t;
      } else if (!hi || t < *hi) {
        hi = t;
      }
    }
    if (lo && hi && *lo >= *hi) return false;
  }
  return true;
}

}  // namespace

LinesVerdict lines_convex_position_2d(const std::vector<Hyperplane>& lines) {
  for (const auto& l : lines) {
    if (l.ambient_dim() != 2) throw InputError("lines_convex_position_2d needs lines in R^2");
  }
  const std::size_t n = lines.size();
  if (n == 0) return {true, SignVector{}};
  if (n >= 2) {
    const auto gp = general_position_hyperplanes(lines);
    if (!gp.ok) throw GeneralPositionError(gp.reason);
  }
  // Every cell of an arrangement of n >= 2 pairwise crossing lines has a vertex,
  // so the four cells around each vertex enumerate all cells.
  std::set<SignVector> candidates;
  if (n == 1) {
    candidates = {SignVector{-1}, SignVector{1}};
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto v = geom::intersect_hyperplanes({&lines[i], &lines[j]});
      SignVector base(n);
      for (std::size_t m = 0; m < n; ++m) base[m] = (m == i || m == j) ? 0 : lines[m].side(*v);
      for (int si : {-1, 1}) {
        for (int sj : {-1, 1}) {
          SignVector s = base;
          s[i] = si;
          s[j] = sj;
          candidates.insert(std::move(s));
        }
      }
    }
  }
  for (const auto& sigma : candidates) {
    if (planar_cell_has_all_edges(lines, sigma)) return {true, sigma};
  }
  return {false, std::nullopt};
}

ConvexityCertificate lift_cell_certificate(const std::vector<Hyperplane>& hps, const SignVector& sigma) {
  const std::size_t d = hps.front().ambient_dim();
  Rat max_abs = 0;
  for (const auto& v : arrangement_vertices(hps)) {
    for (const auto& x : v) max_abs = std::max(max_abs, Rat(abs(x)));
  }
  const Rat box = std::max(Rat(1), Rat(2 * max_abs));
  std::vector<geom::Halfspace> hs;
  for (std::size_t i = 0; i < hps.size(); ++i) {
    // sigma_i (n.x - c) >= 0  <=>  -sigma_i n.x <= -sigma_i c
    const Rat s = -sigma[i];
    hs.push_back({scale(s, hps[i].normal()), s * hps[i].offset()});
  }
  for (std::size_t j = 0; j < d; ++j) {
    hs.push_back({unit_vector(d, j), box});
    hs.push_back({scale(-1, unit_vector(d, j)), box});
  }
  const auto verts = geom::vertex_enumeration(hs, d);
  if (verts.size() < d + 1) throw ConstructionError("cell closure inside the box is not full-dimensional");

  ConvexityCertificate cert;
  cert.d = d;
  cert.k = d - 1;
  for (std::size_t i = 0; i < hps.size(); ++i) {
    std::vector<RVec> touch;
    for (const auto& v : verts) {
      if (hps[i].contains(v)) touch.push_back(v);
    }
    if (affine_dimension(touch) != static_cast<int>(d) - 1) {
      throw ConstructionError("hyperplane " + idx(i) + " does not carry a facet of the lifted cell");
    }
    cert.flats.push_back(hyperplane_as_flat(hps[i]));
    cert.touch_sets.push_back(std::move(touch));
    cert.supports.push_back(hps[i]);
  }
  const RVec c = centroid(verts);
  for (const auto& v : verts) cert.interior_block.push_back(scale(Rat(1, 2), add(v, c)));
  return cert;
}

std::optional<std::vector<Hyperplane>> section_lines(const std::vector<Hyperplane>& hps, const RVec& p,
                                                     const RVec& r1, const RVec& r2) {
  std::vector<Hyperplane> out;
  for (const auto& h : hps) {
    RVec n{dot(h.normal(), r1), dot(h.normal(), r2)};
    if (is_zero(n)) return std::nullopt;
    out.emplace_back(std::move(n), h.offset() - dot(h.normal(), p));
  }
  return out;
}

HyperplanesVerdict hyperplanes_convex_position(const std::vector<Hyperplane>& hps, const SectionOptions& opts) {
  const auto gp = general_position_hyperplanes(hps);
  if (!gp.ok) throw GeneralPositionError(gp.reason);
  const std::size_t d = hps.front().ambient_dim();
  HyperplanesVerdict out;
  auto finish = [&](const SignVector& sigma) {
    out.convex = true;
    out.certified = true;
    out.witness = sigma;
    out.certificate = lift_cell_certificate(hps, sigma);
    const auto v = verify_certificate(*out.certificate);
    if (!v.ok) throw ConstructionError("lifted certificate rejected: " + v.message);
    return out;
  };
  if (d == 2) {
    const auto lv = lines_convex_position_2d(hps);
    if (lv.convex) return finish(*lv.witness);
    out.certified = true;  // the planar decider is exact
    out.note = "no arrangement cell has every line as an edge";
    return out;
  }
  const RVec center = centroid(arrangement_vertices(hps));
  RatSampler rs(opts.seed);
  int degenerate = 0;
  for (int attempt = 0; attempt < opts.retries; ++attempt) {
    const RVec p = add(center, rs.vector(d, -1, 1));
    const RVec r1 = rs.vector(d, -1, 1);
    const RVec r2 = rs.vector(d, -1, 1);
    if (rank(RMat{r1, r2}) < 2) {
      ++degenerate;
      continue;
    }
    const auto lines = section_lines(hps, p, r1, r2);
    if (!lines || !general_position_hyperplanes(*lines).ok) {
      ++degenerate;
      continue;
    }
    const auto lv = lines_convex_position_2d(*lines);
    if (lv.convex) return finish(*lv.witness);
  }
  out.note = "no witness found in " + std::to_string(opts.retries) + " random 2-plane sections (" +
             std::to_string(degenerate) + " degenerate); not certified";
  return out;
}

bool transversal_ok(const std::vector<Flat>& flats, const Flat& a, std::vector<RVec>* points) {
  std::vector<RVec> pts;
  for (const auto& f : flats) {
    auto p = geom::intersect_complementary(f, a);
    if (!p) return false;
    pts.push_back(std::move(*p));
  }
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      for (std::size_t l = j + 1; l < pts.size(); ++l)
        if (collinear(pts[i], pts[j], pts[l])) return false;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if (pts[i] == pts[j]) return false;
  if (affine_dimension(pts) != static_cast<int>(a.dim())) return false;
  if (points) *points = std::move(pts);
  return true;
}

FlatsGeneralPosition general_position_flats(const std::vector<Flat>& flats, const SectionOptions& opts) {
  if (flats.empty()) throw InputError("no flats");
  const std::size_t d = flats.front().ambient_dim();
  const std::size_t k = flats.front().dim();
  for (const auto& f : flats) {
    if (f.ambient_dim() != d || f.dim() != k) throw InputError("flats of mixed dimensions");
  }
  if (k + 1 == d) throw InputError("k = d-1: use general_position_hyperplanes for hyperplanes");
  if (flats.size() < d - k + 1) throw InputError("need at least d-k+1 flats");

  FlatsGeneralPosition out;
  if (k == 0) {
    std::vector<RVec> pts;
    for (const auto& f : flats) pts.push_back(f.base());
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j)
        for (std::size_t l = j + 1; l < pts.size(); ++l)
          if (collinear(pts[i], pts[j], pts[l])) {
            out.note = "points " + idx(i) + ", " + idx(j) + ", " + idx(l) + " are collinear";
            return out;
          }
    if (affine_dimension(pts) != static_cast<int>(d)) {
      out.note = "points do not affinely span R^" + idx(d);
      return out;
    }
    out.ok = true;
    out.points = std::move(pts);
    return out;
  }
  RatSampler rs(opts.seed);
  for (int attempt = 0; attempt < opts.retries; ++attempt) {
    RVec base = rs.vector(d, -4, 4);
    RMat dirs;
    for (std::size_t j = 0; j < d - k; ++j) dirs.push_back(rs.vector(d, -1, 1));
    if (rank(dirs) != d - k) continue;
    Flat a(std::move(base), std::move(dirs));
    std::vector<RVec> pts;
    if (transversal_ok(flats, a, &pts)) {
      out.ok = true;
      out.transversal = std::move(a);
      out.points = std::move(pts);
      return out;
    }
  }
  out.note = "no transversal found in " + std::to_string(opts.retries) + " random tries; not certified";
  return out;
}

}  // namespace esflats::convexpos
