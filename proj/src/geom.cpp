#include "esflats/geom.hpp"

#include <string>

#include "esflats/error.hpp"

namespace esflats::geom {

namespace {

void require_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw InputError(std::string("dimension mismatch in ") + what + ": " + std::to_string(a) +
                     " vs " + std::to_string(b));
  }
}

}  // namespace

Flat::Flat(RVec base, RMat dirs) : base_(std::move(base)), dirs_(std::move(dirs)) {
  if (base_.empty()) throw InputError("flat ambient dimension must be positive");
  for (const auto& v : dirs_) require_dim(v.size(), base_.size(), "flat direction");
  if (dirs_.size() >= base_.size()) throw InputError("flat dimension must be below the ambient dimension");
  if (rank(dirs_) != dirs_.size()) throw InputError("flat directions are linearly dependent");
}

RVec Flat::at(const RVec& coords) const {
  require_dim(coords.size(), dirs_.size(), "flat coordinates");
  RVec p = base_;
  for (std::size_t j = 0; j < dirs_.size(); ++j) p = axpy(p, coords[j], dirs_[j]);
  return p;
}

Hyperplane::Hyperplane(RVec normal, Rat offset) : normal_(std::move(normal)), offset_(std::move(offset)) {
  if (normal_.empty()) throw InputError("hyperplane ambient dimension must be positive");
  if (is_zero(normal_)) throw InputError("hyperplane normal is zero");
}

Rat Hyperplane::eval(const RVec& x) const {
  require_dim(x.size(), normal_.size(), "hyperplane evaluation");
  return dot(normal_, x) - offset_;
}

bool flat_contains(const Flat& f, const RVec& p) {
  require_dim(p.size(), f.ambient_dim(), "flat_contains");
  const RVec diff = sub(p, f.base());
  if (is_zero(diff)) return true;
  RMat rows = f.dirs();
  rows.push_back(diff);
  return rank(std::move(rows)) == f.dim();
}

bool hyperplane_contains_flat(const Hyperplane& h, const Flat& f) {
  require_dim(h.ambient_dim(), f.ambient_dim(), "hyperplane_contains_flat");
  if (!h.contains(f.base())) return false;
  for (const auto& v : f.dirs()) {
    if (sgn(dot(h.normal(), v)) != 0) return false;
  }
  return true;
}

FlatHyperplaneIntersection intersect_flat_hyperplane(const Flat& f, const Hyperplane& h) {
  require_dim(h.ambient_dim(), f.ambient_dim(), "intersect_flat_hyperplane");
  const Rat residual = h.offset() - dot(h.normal(), f.base());
  std::size_t pivot = f.dim();
  std::vector<Rat> slopes(f.dim());
  for (std::size_t j = 0; j < f.dim(); ++j) {
    slopes[j] = dot(h.normal(), f.dirs()[j]);
    if (pivot == f.dim() && sgn(slopes[j]) != 0) pivot = j;
  }
  if (pivot == f.dim()) {
    if (sgn(residual) == 0) return ContainedIntersection{};
    return EmptyIntersection{};
  }
  const RVec& pd = f.dirs()[pivot];
  RVec base = axpy(f.base(), residual / slopes[pivot], pd);
  RMat dirs;
  for (std::size_t j = 0; j < f.dim(); ++j) {
    if (j == pivot) continue;
    dirs.push_back(axpy(f.dirs()[j], -slopes[j] / slopes[pivot], pd));
  }
  return Flat(std::move(base), std::move(dirs));
}

std::optional<RVec> intersect_complementary(const Flat& u, const Flat& a) {
  require_dim(u.ambient_dim(), a.ambient_dim(), "intersect_complementary");
  const std::size_t d = u.ambient_dim();
  if (u.dim() + a.dim() != d) throw InputError("flats are not of complementary dimension");
  // u.base + D s = a.base + E t  <=>  [D | -E] (s,t) = a.base - u.base
  RMat m(d, RVec(d));
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t j = 0; j < u.dim(); ++j) m[r][j] = u.dirs()[j][r];
    for (std::size_t j = 0; j < a.dim(); ++j) m[r][u.dim() + j] = -a.dirs()[j][r];
  }
  const auto st = solve_unique(m, sub(a.base(), u.base()));
  if (!st) return std::nullopt;
  RVec s(st->begin(), st->begin() + static_cast<std::ptrdiff_t>(u.dim()));
  return u.at(s);
}

RVec coordinates_in(const Flat& a, const RVec& p) {
  const std::size_t d = a.ambient_dim();
  RMat m(d, RVec(a.dim()));
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t j = 0; j < a.dim(); ++j) m[r][j] = a.dirs()[j][r];
  auto t = solve_any(m, sub(p, a.base()), a.dim());
  if (!t) throw InputError("point does not lie on the flat");
  return *t;
}

std::optional<RVec> intersect_hyperplanes(const std::vector<const Hyperplane*>& hs) {
  if (hs.empty()) return std::nullopt;
  const std::size_t d = hs.front()->ambient_dim();
  if (hs.size() != d) throw InputError("need exactly d hyperplanes to intersect in a point");
  RMat m;
  RVec b;
  for (const auto* h : hs) {
    require_dim(h->ambient_dim(), d, "intersect_hyperplanes");
    m.push_back(h->normal());
    b.push_back(h->offset());
  }
  return solve_unique(m, b);
}

}  // namespace esflats::geom
