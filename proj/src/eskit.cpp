#include "esflats/eskit.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "esflats/error.hpp"
#include "esflats/lp.hpp"
#include "esflats/random.hpp"

namespace esflats::eskit {

namespace {

// Twice the signed area of (o, a, b); positive for a counter-clockwise turn.
Rat cross(const RVec& o, const RVec& a, const RVec& b) {
  return Rat((a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]));
}

void require_no_collinear(const std::vector<RVec>& pts) {
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      for (std::size_t l = j + 1; l < pts.size(); ++l)
        if (collinear(pts[i], pts[j], pts[l]))
          throw GeneralPositionError("points " + std::to_string(i) + ", " + std::to_string(j) + ", " +
                                     std::to_string(l) + " are collinear");
}

// (y, x) lexicographic order, so the anchor is the lowest point of its polygon.
bool below(const RVec& a, const RVec& b) { return a[1] < b[1] || (a[1] == b[1] && a[0] < b[0]); }

// Longest convex polygon with `anchor` as its lowest vertex.
std::vector<std::size_t> best_polygon_at(const std::vector<RVec>& pts, std::size_t anchor) {
  const RVec& p = pts[anchor];
  std::vector<std::size_t> q;
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (i != anchor && below(p, pts[i])) q.push_back(i);
  // All of q lies in a half-plane seen from p, so the angular order is a strict order.
  std::stable_sort(q.begin(), q.end(), [&](std::size_t a, std::size_t b) { return sgn(cross(p, pts[a], pts[b])) > 0; });
  const std::size_t m = q.size();
  if (m < 2) {
    std::vector<std::size_t> out{anchor};
    out.insert(out.end(), q.begin(), q.end());
    return out;
  }
  // len[i][j]: vertices of the best convex chain p, ..., q_i, q_j; prev[i][j] is the vertex before q_i.
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::vector<int>> len(m, std::vector<int>(m, 0));
  std::vector<std::vector<std::size_t>> prev(m, std::vector<std::size_t>(m, kNone));
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < j; ++i) {
      len[i][j] = 3;
      for (std::size_t h = 0; h < i; ++h) {
        if (len[h][i] + 1 > len[i][j] && sgn(cross(pts[q[h]], pts[q[i]], pts[q[j]])) > 0) {
          len[i][j] = len[h][i] + 1;
          prev[i][j] = h;
        }
      }
    }
  int best = 0;
  std::size_t bi = 0, bj = 0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      if (len[i][j] > best && sgn(cross(pts[q[i]], pts[q[j]], p)) > 0) {
        best = len[i][j];
        bi = i;
        bj = j;
      }
  std::vector<std::size_t> out{anchor, q[bj]};
  for (std::size_t i = bi, j = bj; i != kNone;) {
    out.push_back(q[i]);
    const std::size_t h = prev[i][j];
    j = i;
    i = h;
  }
  return out;
}

// Linearly independent subset of the rows, in order.
RMat independent_rows(const RMat& rows) {
  RMat out;
  for (const auto& r : rows) {
    out.push_back(r);
    if (rank(out) < out.size()) out.pop_back();
  }
  return out;
}

// Extends `basis` by vectors from `pool` until it has `target` independent rows.
RMat extend_basis(RMat basis, const RMat& pool, std::size_t target) {
  for (const auto& v : pool) {
    if (basis.size() >= target) break;
    basis.push_back(v);
    if (rank(basis) < basis.size()) basis.pop_back();
  }
  return basis;
}

// Coordinates of v in the basis given by the rows of e (v must lie in their span).
RVec coords_in(const RMat& e, const RVec& v) {
  const std::size_t d = v.size(), m = e.size();
  RMat a(d, RVec(m));
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < m; ++c) a[r][c] = e[c][r];
  auto x = solve_any(a, v, m);
  if (!x) throw ConstructionError("vector outside the affine hull of the chosen points");
  return *x;
}

// Normal beta (in coordinates of e) of a hyperplane of aff(Y) that meets conv(Y)
// only at anchors[i], maximizing the smallest margin with beta in [-1, 1]^m.
RVec tangent_coefficients(const std::vector<RVec>& anchors, std::size_t i, const RMat& e) {
  const std::size_t m = e.size();
  std::vector<lp::Constraint> cons;
  for (std::size_t j = 0; j < anchors.size(); ++j) {
    if (j == i) continue;
    RVec row = coords_in(e, sub(anchors[i], anchors[j]));
    row.push_back(Rat(-1));  // sum beta_l gamma_l - mu >= 0
    cons.push_back({std::move(row), lp::Rel::Ge, Rat(0)});
  }
  for (std::size_t l = 0; l < m; ++l) {
    RVec row = zeros(m + 1);
    row[l] = 1;
    cons.push_back({row, lp::Rel::Le, Rat(1)});
    cons.push_back({row, lp::Rel::Ge, Rat(-1)});
  }
  cons.push_back({unit_vector(m + 1, m), lp::Rel::Le, Rat(1)});
  const auto res = lp::lp_maximize(unit_vector(m + 1, m), cons, m + 1);
  if (res.status != lp::OptStatus::Optimal || sgn(res.value) <= 0)
    throw ConstructionError("anchor " + std::to_string(i) + " is not a strict vertex of the chosen polygon");
  return RVec(res.x.begin(), res.x.begin() + static_cast<std::ptrdiff_t>(m));
}

template <class F>
bool for_each_subset(std::size_t n, std::size_t k, std::size_t cap, F&& f) {
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t seen = 0; seen < cap; ++seen) {
    if (f(idx)) return true;
    std::size_t p = k;
    while (p > 0 && idx[p - 1] == n - k + p - 1) --p;
    if (p == 0) return false;
    ++idx[p - 1];
    for (std::size_t q = p; q < k; ++q) idx[q] = idx[q - 1] + 1;
  }
  return false;
}

}  // namespace

std::vector<std::size_t> largest_convex_subset_2d(const std::vector<RVec>& pts) {
  for (const auto& p : pts)
    if (p.size() != 2) throw InputError("largest_convex_subset_2d expects points in R^2");
  require_no_collinear(pts);
  std::vector<std::size_t> best;
  if (pts.size() <= 3) {
    best.resize(pts.size());
    std::iota(best.begin(), best.end(), 0);
    return best;
  }
  for (std::size_t a = 0; a < pts.size(); ++a) {
    auto cand = best_polygon_at(pts, a);
    if (cand.size() > best.size()) best = std::move(cand);
  }
  std::sort(best.begin(), best.end());
  return best;
}

std::vector<RVec> generic_projection(const std::vector<RVec>& pts, std::uint64_t seed, int retries) {
  if (pts.empty()) return {};
  const std::size_t d = pts.front().size();
  for (const auto& p : pts)
    if (p.size() != d) throw InputError("points have mixed dimensions");
  if (d < 2) throw InputError("generic_projection needs d >= 2");
  require_no_collinear(pts);
  if (d == 2) return pts;
  RatSampler rs(seed, 1000);
  for (int attempt = 0; attempt < retries; ++attempt) {
    const RVec r1 = rs.vector(d, -1, 1), r2 = rs.vector(d, -1, 1);
    std::vector<RVec> out;
    out.reserve(pts.size());
    for (const auto& p : pts) out.push_back({dot(r1, p), dot(r2, p)});
    bool ok = true;
    for (std::size_t i = 0; ok && i < out.size(); ++i)
      for (std::size_t j = i + 1; ok && j < out.size(); ++j)
        for (std::size_t l = j + 1; ok && l < out.size(); ++l) ok = !collinear(out[i], out[j], out[l]);
    if (ok) return out;
  }
  throw ResourceError("no generic projection found in " + std::to_string(retries) + " attempts");
}

ConvexityCertificate certify_from_anchors(const std::vector<Flat>& flats, const std::vector<RVec>& anchors,
                                          const RMat& transversal_dirs) {
  if (flats.size() != anchors.size() || flats.size() < 3)
    throw InputError("need at least three flats with one anchor each");
  const std::size_t d = flats.front().ambient_dim();
  const std::size_t k = flats.front().dim();
  for (std::size_t i = 0; i < flats.size(); ++i)
    if (!geom::flat_contains(flats[i], anchors[i]))
      throw InputError("anchor " + std::to_string(i) + " is not on its flat");

  RMat diffs;
  for (std::size_t j = 1; j < anchors.size(); ++j) diffs.push_back(sub(anchors[j], anchors[0]));
  const RMat e = independent_rows(diffs);  // directions of aff(Y)
  RMat pool = transversal_dirs;
  if (pool.empty())
    for (std::size_t c = 0; c < d; ++c) pool.push_back(unit_vector(d, c));
  const RMat a_dirs = extend_basis(e, pool, d - k);
  if (a_dirs.size() != d - k) throw InputError("transversal directions do not reach dimension d - k");

  const std::size_t n = flats.size();
  const RVec b0 = centroid(anchors);
  std::vector<geom::Hyperplane> supports;
  supports.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const RVec beta = tangent_coefficients(anchors, i, e);
    // N . dir = 0 on the flat, N . e_l = beta_l on aff(Y), N . rest = 0 elsewhere in A.
    RMat sys = flats[i].dirs();
    RVec rhs(sys.size(), Rat(0));
    for (std::size_t l = 0; l < a_dirs.size(); ++l) {
      sys.push_back(a_dirs[l]);
      rhs.push_back(l < e.size() ? beta[l] : Rat(0));
    }
    auto normal = solve_unique(sys, rhs);
    if (!normal) throw InputError("flat " + std::to_string(i) + " is not complementary to the transversal");
    // orient so that conv(Y) lies on the negative side
    Rat off = dot(*normal, anchors[i]);
    supports.emplace_back(std::move(*normal), off);
  }

  // delta: a rational lower bound on the distance from every b_j (and b_0) to every h_i, i != j.
  Rat delta = -1;
  for (std::size_t i = 0; i < n; ++i) {
    const Rat l1 = norm1(supports[i].normal());
    for (std::size_t j = 0; j <= n; ++j) {
      if (j == i) continue;
      const RVec& p = j == n ? b0 : anchors[j];
      const Rat dist = Rat(abs(supports[i].eval(p)) / l1);
      if (sgn(dist) <= 0) throw ConstructionError("anchor lies on a foreign support hyperplane");
      if (delta < 0 || dist < delta) delta = dist;
    }
  }
  const Rat rho = Rat(delta / 2);
  const Rat rho_sq = Rat(rho * rho);

  ConvexityCertificate cert;
  cert.d = d;
  cert.k = k;
  cert.flats = flats;
  cert.supports = supports;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<RVec> touch;
    if (k == 0) {
      touch.push_back(anchors[j]);
    } else {
      const RMat o = gram_schmidt(flats[j].dirs());
      RVec sum = zeros(d);
      for (const auto& g : o) {
        const Rat s = Rat(rho / (Rat(static_cast<long>(k)) * norm1(g)));
        touch.push_back(axpy(anchors[j], s, g));
        sum = axpy(sum, s, g);
      }
      touch.push_back(sub(anchors[j], sum));
    }
    for (const auto& t : touch)
      if (norm_sq(sub(t, anchors[j])) > rho_sq) throw ConstructionError("touch vertex leaves the delta ball");
    cert.touch_sets.push_back(std::move(touch));
  }
  const Rat step = Rat(rho / Rat(static_cast<long>(d)));
  RVec sum = zeros(d);
  for (std::size_t c = 0; c < d; ++c) {
    cert.interior_block.push_back(axpy(b0, step, unit_vector(d, c)));
    sum[c] = step;
  }
  cert.interior_block.push_back(sub(b0, sum));

  const auto v = convexpos::verify_certificate(cert);
  if (!v.ok) throw ConstructionError("constructed certificate rejected (" + v.clause + "): " + v.message);
  return cert;
}

AnchorSearch find_convex_anchors(const std::vector<Flat>& flats, const ExtractOptions& opts) {
  if (flats.empty()) throw InputError("no flats given");
  const std::size_t d = flats.front().ambient_dim();
  const std::size_t k = flats.front().dim();
  for (const auto& f : flats)
    if (f.ambient_dim() != d || f.dim() != k) throw InputError("flats have mixed dimensions");
  if (k + 1 >= d) throw InputError("hyperplanes go through hyperplane_pipeline; need k < d - 1");

  AnchorSearch out;
  out.general_position = convexpos::general_position_flats(flats, {opts.seed, opts.retries});
  const auto& gp = out.general_position;
  if (!gp.ok) throw GeneralPositionError(gp.note);
  std::vector<RVec> coords;
  if (gp.transversal) {
    for (const auto& p : gp.points) coords.push_back(geom::coordinates_in(*gp.transversal, p));
  } else {
    coords = gp.points;
  }
  out.convex = largest_convex_subset_2d(generic_projection(coords, opts.seed, opts.retries));
  return out;
}

ExtractionResult extract_convex_flats(const std::vector<Flat>& flats, std::size_t n, const ExtractOptions& opts) {
  if (n < 3) throw InputError("n must be at least 3");
  const auto found = find_convex_anchors(flats, opts);
  const auto& y = found.convex;
  const auto& gp = found.general_position;
  if (y.size() < n)
    throw SearchExhausted("largest convex subset has " + std::to_string(y.size()) + " points, fewer than " +
                          std::to_string(n));

  ExtractionResult out;
  out.chosen_indices.assign(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n));
  out.transversal = gp.transversal;
  std::vector<Flat> chosen;
  for (auto i : out.chosen_indices) {
    chosen.push_back(flats[i]);
    out.points.push_back(gp.points[i]);
  }
  out.certificate = certify_from_anchors(chosen, out.points, gp.transversal ? gp.transversal->dirs() : RMat{});
  return out;
}

ExtractionResult hyperplane_pipeline(const std::vector<Hyperplane>& hps, std::size_t n, const ExtractOptions& opts) {
  if (n < 3) throw InputError("n must be at least 3");
  const auto gp = convexpos::general_position_hyperplanes(hps);
  if (!gp.ok) throw GeneralPositionError(gp.reason);
  if (hps.size() < n) throw SearchExhausted("fewer hyperplanes than n");
  const std::size_t d = hps.front().ambient_dim();

  auto search = [&](const std::vector<Hyperplane>& lines) -> std::optional<ExtractionResult> {
    std::optional<ExtractionResult> found;
    for_each_subset(lines.size(), n, opts.subset_cap, [&](const std::vector<std::size_t>& idx) {
      std::vector<Hyperplane> sub_lines;
      for (auto i : idx) sub_lines.push_back(lines[i]);
      const auto lv = convexpos::lines_convex_position_2d(sub_lines);
      if (!lv.convex) return false;
      std::vector<Hyperplane> chosen;
      for (auto i : idx) chosen.push_back(hps[i]);
      ExtractionResult r;
      r.chosen_indices = idx;
      r.certificate = convexpos::lift_cell_certificate(chosen, *lv.witness);
      const auto v = convexpos::verify_certificate(r.certificate);
      if (!v.ok) throw ConstructionError("lifted certificate rejected: " + v.message);
      found = std::move(r);
      return true;
    });
    return found;
  };

  if (d == 2) {
    if (auto r = search(hps)) return std::move(*r);
    throw SearchExhausted("no " + std::to_string(n) + " lines in convex position within the subset cap");
  }

  // Section planes pass near the arrangement's vertices.
  std::vector<RVec> verts;
  for_each_subset(hps.size(), d, 64, [&](const std::vector<std::size_t>& idx) {
    std::vector<const Hyperplane*> hs;
    for (auto i : idx) hs.push_back(&hps[i]);
    if (auto v = geom::intersect_hyperplanes(hs)) verts.push_back(std::move(*v));
    return false;
  });
  const RVec center = centroid(verts);
  RatSampler rs(opts.seed);
  for (int attempt = 0; attempt < opts.retries; ++attempt) {
    const RVec p = add(center, rs.vector(d, -1, 1));
    const RVec r1 = rs.vector(d, -1, 1), r2 = rs.vector(d, -1, 1);
    if (rank(RMat{r1, r2}) < 2) continue;
    const auto lines = convexpos::section_lines(hps, p, r1, r2);
    if (!lines || !convexpos::general_position_hyperplanes(*lines).ok) continue;
    if (auto r = search(*lines)) return std::move(*r);
  }
  throw SearchExhausted("no " + std::to_string(n) + " hyperplanes in convex position found in " +
                        std::to_string(opts.retries) + " sections");
}

}  // namespace esflats::eskit
