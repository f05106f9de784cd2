#include "esflats/nonconvex.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <sstream>

#include "esflats/error.hpp"
#include "esflats/lp.hpp"
#include "esflats/random.hpp"

namespace esflats::nonconvex {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using lp::Constraint;
using lp::Rel;

namespace {

RVec to_rvec(const VectorXd& v) {
  RVec out(static_cast<std::size_t>(v.size()));
  for (Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v(i))) throw InputError("non-finite coordinate");
    out[static_cast<std::size_t>(i)] = rat_from_double(v(i));
  }
  return out;
}

VectorXd to_eigen(const RVec& v) {
  VectorXd out(static_cast<Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Index>(i)) = to_double(v[i]);
  return out;
}

/// Scales a nonzero vector so its l1 norm is 1, giving one representative per ray.
RVec ray_key(const RVec& v) { return scale(1 / norm1(v), v); }

double factorial(int t) {
  double f = 1;
  for (int i = 2; i <= t; ++i) f *= i;
  return f;
}

std::string fmt_vec(const VectorXd& v) {
  std::ostringstream os;
  os << "(";
  for (Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v(i);
  os << ")";
  return os.str();
}

void subsets(std::size_t n, std::size_t r, std::size_t start, std::vector<std::size_t>& cur,
             const std::function<void(const std::vector<std::size_t>&)>& fn) {
  if (cur.size() == r) {
    fn(cur);
    return;
  }
  for (std::size_t i = start; i < n; ++i) {
    cur.push_back(i);
    subsets(n, r, i + 1, cur, fn);
    cur.pop_back();
  }
}

}  // namespace

double eps_threshold(int d) {
  if (d < 2) throw InputError("eps_threshold needs d >= 2");
  return std::min(1.0 / (12.0 * d), 1.0 / (4.0 * factorial(d)));
}

bool det_bound_check(const MatrixXd& m, double delta) {
  if (m.rows() != m.cols() || m.rows() == 0) throw InputError("det_bound_check needs a nonempty square matrix");
  const Index t = m.rows();
  for (Index i = 0; i < t; ++i)
    for (Index j = 0; j < t; ++j) {
      if (i == j && std::abs(m(i, j) - 1) > 1e-9)
        throw InputError("diagonal entry " + std::to_string(i) + " is not 1");
      if (i != j && std::abs(m(i, j)) > delta + 1e-12)
        throw InputError("entry (" + std::to_string(i) + "," + std::to_string(j) + ") exceeds delta");
    }
  return m.determinant() >= 1 - factorial(static_cast<int>(t)) * delta - 1e-9;
}

// ---------------------------------------------------------------- Cone

Cone Cone::from_generators(const std::vector<VectorXd>& gens) {
  if (gens.empty()) throw InputError("cone needs at least one generator");
  Cone c;
  c.d_ = static_cast<std::size_t>(gens.front().size());
  if (c.d_ < 2) throw InputError("cone dimension must be at least 2");
  RMat g;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (static_cast<std::size_t>(gens[i].size()) != c.d_) throw InputError("generator " + std::to_string(i) + " has wrong dimension");
    g.push_back(to_rvec(gens[i]));
    if (is_zero(g.back())) throw InputError("generator " + std::to_string(i) + " is zero");
  }
  if (rank(g) < c.d_) throw InputError("cone has empty interior: generators do not span R^" + std::to_string(c.d_));
  c.gens_ = gens;

  std::set<RVec> seen;
  std::vector<std::size_t> cur;
  subsets(g.size(), c.d_ - 1, 0, cur, [&](const std::vector<std::size_t>& s) {
    RMat rows;
    for (auto i : s) rows.push_back(g[i]);
    if (rank(rows) != c.d_ - 1) return;
    RVec n = nullspace(rows, c.d_).front();
    int pos = 0, neg = 0;
    for (const auto& x : g) {
      const int sg = sign(dot(n, x));
      pos += sg > 0;
      neg += sg < 0;
    }
    if (pos && neg) return;
    if (neg) n = scale(-1, n);
    RVec key = ray_key(n);
    if (seen.insert(key).second) c.facets_.push_back(std::move(key));
  });
  c.finish();
  return c;
}

Cone Cone::from_halfspaces(const std::vector<VectorXd>& normals) {
  if (normals.empty()) throw InputError("cone needs at least one halfspace");
  Cone c;
  c.d_ = static_cast<std::size_t>(normals.front().size());
  if (c.d_ < 2) throw InputError("cone dimension must be at least 2");
  std::set<RVec> seen;
  for (std::size_t i = 0; i < normals.size(); ++i) {
    if (static_cast<std::size_t>(normals[i].size()) != c.d_) throw InputError("normal " + std::to_string(i) + " has wrong dimension");
    RVec n = to_rvec(normals[i]);
    if (is_zero(n)) throw InputError("normal " + std::to_string(i) + " is zero");
    RVec key = ray_key(n);
    if (seen.insert(key).second) c.facets_.push_back(std::move(key));
  }
  c.halfspaces_ = normals;
  c.finish();
  return c;
}

void Cone::finish() {
  unit_facets_.clear();
  for (const auto& n : facets_) unit_facets_.push_back(to_eigen(n).normalized());
  if (facets_.empty()) {
    interior_ = VectorXd::Unit(static_cast<Index>(d_), 0);
    return;
  }
  // maximize m subject to n_i . x >= m, -1 <= x <= 1, m <= 1
  const std::size_t nv = d_ + 1;
  std::vector<Constraint> cons;
  for (const auto& n : facets_) {
    RVec row = n;
    row.push_back(-1);
    cons.push_back({row, Rel::Ge, 0});
  }
  for (std::size_t i = 0; i < nv; ++i) {
    cons.push_back({unit_vector(nv, i), Rel::Le, 1});
    if (i < d_) cons.push_back({unit_vector(nv, i), Rel::Ge, -1});
  }
  const auto r = lp::lp_maximize(unit_vector(nv, d_), cons, nv);
  if (r.status != lp::OptStatus::Optimal || sign(r.value) <= 0) throw InputError("cone has empty interior");
  interior_ = to_eigen(RVec(r.x.begin(), r.x.begin() + static_cast<long>(d_))).normalized();
}

double Cone::margin(const VectorXd& z) const {
  if (unit_facets_.empty()) return 1;
  const VectorXd u = z.normalized();
  double m = std::numeric_limits<double>::infinity();
  for (const auto& n : unit_facets_) m = std::min(m, n.dot(u));
  return m;
}

// ---------------------------------------------------------------- probing

Probe probe_subspace(const Cone& cone, const gr::Subspace& u, double tau) {
  if (static_cast<std::size_t>(u.ambient_dim()) != cone.dim()) throw InputError("subspace and cone dimensions differ");
  Probe out;
  const MatrixXd& basis = u.basis();
  const std::size_t k = static_cast<std::size_t>(basis.cols());
  if (cone.facets().empty()) {
    out.contact = Contact::Interior;
    out.point = basis.col(0);
    out.margin = 1;
    return out;
  }
  // rows of (unit facet normals) * basis, exactly rationalized
  RMat a;
  for (const auto& n : cone.facets()) {
    const VectorXd row = basis.transpose() * to_eigen(n).normalized();
    a.push_back(to_rvec(row));
  }
  auto point_from = [&](const RVec& t) {
    VectorXd tv(static_cast<Index>(k));
    for (std::size_t l = 0; l < k; ++l) tv(static_cast<Index>(l)) = to_double(t[l]);
    return VectorXd((basis * tv).normalized());
  };

  {
    const std::size_t nv = k + 1;
    std::vector<Constraint> cons;
    for (const auto& row : a) {
      RVec r = row;
      r.push_back(-1);
      cons.push_back({r, Rel::Ge, 0});
    }
    for (std::size_t l = 0; l < nv; ++l) {
      cons.push_back({unit_vector(nv, l), Rel::Le, 1});
      if (l < k) cons.push_back({unit_vector(nv, l), Rel::Ge, -1});
    }
    const auto r = lp::lp_maximize(unit_vector(nv, k), cons, nv);
    if (r.status != lp::OptStatus::Optimal) throw ConstructionError("probe LP did not reach an optimum");
    if (to_double(r.value) > tau) {
      out.contact = Contact::Interior;
      out.point = point_from(r.x);
      out.margin = cone.margin(out.point);
      return out;
    }
  }
  std::vector<Constraint> cons;
  for (const auto& row : a) cons.push_back({row, Rel::Ge, 0});
  for (std::size_t l = 0; l < k; ++l) {
    cons.push_back({unit_vector(k, l), Rel::Le, 1});
    cons.push_back({unit_vector(k, l), Rel::Ge, -1});
  }
  for (std::size_t l = 0; l < k; ++l) {
    for (int s : {1, -1}) {
      const auto r = lp::lp_maximize(scale(Rat(s), unit_vector(k, l)), cons, k);
      if (r.status == lp::OptStatus::Optimal && sign(r.value) > 0) {
        out.contact = Contact::Boundary;
        out.point = point_from(r.x);
        out.margin = cone.margin(out.point);
        return out;
      }
    }
  }
  out.contact = Contact::Disjoint;
  return out;
}

// ---------------------------------------------------------------- refutation

namespace {

EarlyRefutation early_from(const Probe& p, std::size_t index, const std::string& where) {
  EarlyRefutation e;
  e.net_index = index;
  if (p.contact == Contact::Interior) {
    e.condition = 2;
    e.witness_z = p.point;
    e.margin = p.margin;
    e.notes.push_back(where + ": net element " + std::to_string(index) + " meets the open cone");
  } else {
    e.condition = 1;
    e.notes.push_back(where + ": net element " + std::to_string(index) + " meets the cone only at the origin");
  }
  return e;
}

/// A unit vector on the boundary of the cone.
VectorXd boundary_start(const Cone& cone) {
  for (const auto& g : cone.generators()) {
    const RVec gr = to_rvec(g);
    for (const auto& n : cone.facets())
      if (sign(dot(n, gr)) == 0) return g.normalized();
  }
  const Index d = static_cast<Index>(cone.dim());
  for (const auto& n : cone.facets()) {
    // nonzero point of the cone inside the facet hyperplane
    Eigen::JacobiSVD<MatrixXd> svd(to_eigen(n).transpose(), Eigen::ComputeFullV);
    const gr::Subspace facet_plane(svd.matrixV().rightCols(d - 1));
    const Probe p = probe_subspace(cone, facet_plane);
    if (p.contact != Contact::Disjoint) return p.point;
  }
  throw ConstructionError("no boundary point found on any facet");
}

double det_of_gram(const MatrixXd& m) { return (m.transpose() * m).determinant(); }

}  // namespace

Refutation refute_cone(const Cone& cone, const gr::EpsNet& net, const RefuteOptions& opts) {
  if (net.elements.empty()) throw InputError("empty net");
  if (static_cast<std::size_t>(net.d) != cone.dim()) throw InputError("net and cone dimensions differ");
  const Index d = net.d;
  const Index k = net.k;
  const double eps = net.eps;
  const double thr = eps_threshold(static_cast<int>(d));
  const bool guarded = eps < thr;
  std::vector<std::string> notes;
  if (!guarded) {
    std::ostringstream os;
    os << "net eps " << eps << " is not below the threshold " << thr << "; proceeding without guarantees";
    notes.push_back(os.str());
  }
  auto early = [&](const Probe& p, std::size_t index, const std::string& where) -> Refutation {
    EarlyRefutation e = early_from(p, index, where);
    e.notes.insert(e.notes.begin(), notes.begin(), notes.end());
    return e;
  };

  if (opts.full_scan) {
    for (std::size_t i = 0; i < net.elements.size(); ++i) {
      const Probe p = probe_subspace(cone, net.elements[i], opts.tau);
      if (p.contact != Contact::Boundary) return early(p, i, "scan");
    }
  }
  if (cone.facets().empty()) return early(probe_subspace(cone, net.elements.front(), opts.tau), 0, "whole space");

  RefutationTrace tr;
  tr.a_vectors.push_back(boundary_start(cone));
  for (Index j = 1; j <= d - k; ++j) {
    const auto pick = gr::near_orthogonal_pick(net, tr.a_vectors);
    if (!(pick.max_inner < eps))
      throw ConstructionError("net element " + std::to_string(pick.index) + " is not almost orthogonal (" +
                              std::to_string(pick.max_inner) + " >= eps); net coverage is insufficient");
    const Probe p = probe_subspace(cone, net.elements[pick.index], opts.tau);
    if (p.contact != Contact::Boundary) return early(p, pick.index, "step " + std::to_string(j));
    for (const auto& a : tr.a_vectors)
      if (!(std::abs(a.dot(p.point)) < eps)) throw ConstructionError("boundary vectors are not almost orthogonal");
    tr.a_vectors.push_back(p.point);
    tr.a_net_indices.push_back(pick.index);
  }

  // interior perturbation
  const std::size_t nb = tr.a_vectors.size();
  const VectorXd& g = cone.interior_direction();
  double eta = eps / (8.0 * static_cast<double>(d + 1));
  bool ok = false;
  for (int attempt = 0; attempt < 40 && !ok; ++attempt, eta /= 2) {
    tr.b_vectors.clear();
    ok = true;
    for (const auto& a : tr.a_vectors) {
      tr.b_vectors.push_back((a + eta * g).normalized());
      ok = ok && cone.margin(tr.b_vectors.back()) > 0;
    }
    for (std::size_t i = 0; i < nb && ok; ++i)
      for (std::size_t h = i + 1; h < nb && ok; ++h) ok = std::abs(tr.b_vectors[i].dot(tr.b_vectors[h])) < eps;
    if (ok) tr.eta = eta;
  }
  if (!ok) throw ConstructionError("could not move the boundary vectors into the open cone");

  MatrixXd bm(d, static_cast<Index>(nb));
  for (std::size_t i = 0; i < nb; ++i) bm.col(static_cast<Index>(i)) = tr.b_vectors[i];
  tr.b = bm.rowwise().sum();
  Eigen::JacobiSVD<MatrixXd> svd(bm, Eigen::ComputeFullU);
  if (svd.singularValues().minCoeff() < 1e-9) throw ConstructionError("b vectors are linearly dependent");
  MatrixXd cm = svd.matrixU().rightCols(k - 1);

  MatrixXd m(d, d);
  m << bm, cm;
  tr.det_m = m.determinant();
  if (tr.det_m < 0 && k >= 2) {
    cm.col(0) = -cm.col(0);
    m.col(static_cast<Index>(nb)) = cm.col(0);
    tr.det_m = -tr.det_m;
  }
  tr.det_mtm = det_of_gram(m);
  if (!det_bound_check(m.transpose() * m, eps)) throw ConstructionError("det(M^T M) violates the Leibniz bound");
  if (guarded && !(tr.det_mtm > 0.25)) throw ConstructionError("det(M^T M) <= 1/4");
  for (Index j = 0; j < cm.cols(); ++j) tr.c_vectors.push_back(cm.col(j));

  MatrixXd wcols(d, k);
  wcols << cm, tr.b;
  const gr::Subspace w = gr::Subspace::spanned_by(wcols);
  const auto hit = gr::nearest_in_net(net, w);
  tr.w_angle = hit.angle;
  if (!(hit.angle < eps)) throw ConstructionError("no net element within eps of W; net coverage is insufficient");
  const gr::Subspace& u = net.elements[hit.index];

  MatrixXd ms(d, d);
  ms.leftCols(static_cast<Index>(nb)) = bm;
  for (Index j = 0; j < cm.cols(); ++j) {
    VectorXd cs = u.project(cm.col(j)).normalized();
    if (!((cs - cm.col(j)).norm() < eps)) throw ConstructionError("projected c_j is not within eps");
    ms.col(static_cast<Index>(nb) + j) = cs;
    tr.c_star.push_back(cs);
  }
  tr.b_star = u.project(tr.b).normalized() * tr.b.norm();
  tr.det_mstar_tmstar = det_of_gram(ms);
  if (!det_bound_check(ms.transpose() * ms, 3 * eps)) throw ConstructionError("det(M*^T M*) violates the Leibniz bound");
  if (guarded && !(tr.det_mstar_tmstar > 0.25)) throw ConstructionError("det(M*^T M*) <= 1/4");

  // M* (x, y_j) = y b* with y = 1, then rescale so the entry of largest magnitude is +1
  const VectorXd sol = ms.fullPivLu().solve(tr.b_star);
  std::vector<double> s(sol.data(), sol.data() + sol.size());
  s.push_back(1.0);
  const double top = *std::max_element(s.begin(), s.end(), [](double p, double q) { return std::abs(p) < std::abs(q); });
  for (double& v : s) v /= top;
  tr.x.assign(s.begin(), s.begin() + static_cast<long>(nb));
  tr.y_j.assign(s.begin() + static_cast<long>(nb), s.end() - 1);
  tr.y = s.back();

  auto fail = [&](const std::string& what) {
    if (guarded) throw ConstructionError(what + " although eps is below the threshold");
    throw ConstructionError(what + " (eps above threshold)");
  };
  for (double yj : tr.y_j)
    if (!(std::abs(yj) < 0.25)) fail("|y_j| >= 1/4");
  for (double xi : tr.x) {
    if (!(std::abs(xi - tr.y) <= 0.25)) fail("|x_i - y| > 1/4");
    if (!(xi > 0.5)) fail("x_i <= 1/2");
  }

  RefutationCertificate cert;
  cert.net_index = hit.index;
  cert.witness_z = VectorXd::Zero(d);
  for (std::size_t i = 0; i < nb; ++i) cert.witness_z += tr.x[i] * tr.b_vectors[i];
  cert.margin_interior = cone.margin(cert.witness_z);
  cert.membership_residual = (cert.witness_z - u.project(cert.witness_z)).norm();
  if (!(cert.margin_interior > 0)) throw ConstructionError("witness z is not interior: margin " + std::to_string(cert.margin_interior));
  if (!(cert.membership_residual <= opts.tau)) throw ConstructionError("witness z is not on the net element");
  cert.trace = std::move(tr);
  cert.notes = std::move(notes);
  cert.notes.push_back("z = " + fmt_vec(cert.witness_z) + " lies in net element " + std::to_string(hit.index) +
                       " and in the open cone");
  return cert;
}

// ---------------------------------------------------------------- octahedron family

std::size_t delta_index(std::size_t d, const convexpos::SignVector& delta) {
  if (delta.size() != d) throw InputError("sign vector length differs from d");
  std::size_t t = 0;
  for (std::size_t i = 0; i < d; ++i) {
    if (delta[i] == -1) t |= std::size_t{1} << i;
    else if (delta[i] != 1) throw InputError("sign vector entries must be +1 or -1");
  }
  return d + t;
}

OctaFamily octa_family(std::size_t d, std::uint64_t seed, const Rat& magnitude) {
  if (d < 2 || d > 4) throw InputError("octahedron family supports 2 <= d <= 4, got d = " + std::to_string(d));
  if (sign(magnitude) < 0) throw InputError("perturbation magnitude must be nonnegative");
  RatSampler rs(seed);
  constexpr long kGrid = 1000;
  auto jitter = [&] {
    Rat q(rs.integer(-kGrid, kGrid), kGrid);
    q.canonicalize();
    return Rat(magnitude * q);
  };
  constexpr int kRetries = 32;
  for (int attempt = 0; attempt < kRetries; ++attempt) {
    OctaFamily fam{d, seed, magnitude, {}};
    for (std::size_t i = 0; i < d; ++i) {
      RVec n = unit_vector(d, i);
      for (auto& x : n) x += jitter();
      fam.hyperplanes.emplace_back(n, jitter());
    }
    for (std::size_t t = 0; t < (std::size_t{1} << d); ++t) {
      RVec n(d);
      for (std::size_t i = 0; i < d; ++i) n[i] = ((t >> i) & 1u) ? -1 : 1;
      for (auto& x : n) x += jitter();
      fam.hyperplanes.emplace_back(n, Rat(1) + jitter());
    }
    if (sign(magnitude) == 0 || convexpos::general_position_hyperplanes(fam.hyperplanes).ok) return fam;
  }
  throw ResourceError("no general-position octahedron family after " + std::to_string(kRetries) + " attempts");
}

OctaVerdict verify_octa_nonconvex(const OctaFamily& fam) {
  const std::size_t d = fam.d;
  if (fam.hyperplanes.size() != d + (std::size_t{1} << d)) throw InputError("family has the wrong number of hyperplanes");
  OctaVerdict out;
  out.certified = true;
  for (std::size_t t = 0; t < (std::size_t{1} << d); ++t) {
    convexpos::SignVector sigma(d), opposite(d);
    for (std::size_t i = 0; i < d; ++i) {
      sigma[i] = ((t >> i) & 1u) ? -1 : 1;
      opposite[i] = -sigma[i];
    }
    std::vector<Constraint> cons;
    for (std::size_t i = 0; i < d; ++i) {
      const auto& h = fam.hyperplanes[i];
      cons.push_back({scale(Rat(sigma[i]), h.normal()), Rel::Gt, Rat(sigma[i]) * h.offset()});
    }
    const auto& hd = fam.hyperplanes[delta_index(d, opposite)];
    cons.push_back({hd.normal(), Rel::Eq, hd.offset()});
    const auto st = lp::lp_feasible(cons, d);
    std::string label;
    for (int s : sigma) label += s > 0 ? '+' : '-';
    std::string opp;
    for (int s : opposite) opp += s > 0 ? '+' : '-';
    if (st.is_feasible()) {
      out.certified = false;
      std::string w;
      for (const auto& x : st.witness()) w += (w.empty() ? "" : ", ") + format_rat(x);
      out.log.push_back("cone " + label + " meets h_delta " + opp + " at (" + w + ")");
    } else {
      out.log.push_back("cone " + label + " misses h_delta " + opp + ": infeasible");
    }
  }
  return out;
}

// ---------------------------------------------------------------- section

SectionResult section_to_affine(const gr::EpsNet& net) {
  if (net.elements.empty()) throw InputError("empty net");
  const Index dd = net.d;  // ambient dimension d + 1
  const Index kk = net.k;  // subspace dimension k + 1
  if (dd < 2) throw InputError("section needs an ambient dimension of at least 2");
  SectionResult out;
  for (std::size_t idx = 0; idx < net.elements.size(); ++idx) {
    const MatrixXd& b = net.elements[idx].basis();
    const Eigen::RowVectorXd r = b.row(dd - 1);
    if (r.norm() < 1e-9) {
      out.parallel.push_back(idx);
      continue;
    }
    const VectorXd p = b * (r.transpose() / r.squaredNorm());
    RVec base(static_cast<std::size_t>(dd - 1));
    for (Index i = 0; i + 1 < dd; ++i) base[static_cast<std::size_t>(i)] = rat_from_double(p(i));
    RMat dirs;
    if (kk > 1) {
      Eigen::JacobiSVD<MatrixXd> svd(r, Eigen::ComputeFullV);
      const MatrixXd dm = b * svd.matrixV().rightCols(kk - 1);
      for (Index j = 0; j < dm.cols(); ++j) {
        RVec dir(static_cast<std::size_t>(dd - 1));
        for (Index i = 0; i + 1 < dd; ++i) dir[static_cast<std::size_t>(i)] = rat_from_double(dm(i, j));
        dirs.push_back(std::move(dir));
      }
    }
    out.flats.emplace_back(std::move(base), std::move(dirs));
    out.net_index.push_back(idx);
  }
  if (out.parallel.size() * 100 > net.elements.size())
    throw InputError(std::to_string(out.parallel.size()) + " of " + std::to_string(net.elements.size()) +
                     " net elements are parallel to the section hyperplane; re-seed the net");
  return out;
}

}  // namespace esflats::nonconvex
