#pragma once

// Affine flats and hyperplanes over Q, with exact incidence predicates.

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "esflats/rational.hpp"

namespace esflats::geom {

/// An affine k-flat {base + sum t_j dirs_j} in R^d. The directions are
/// linearly independent; rank-deficient input is rejected at construction.
class Flat {
 public:
  Flat(RVec base, RMat dirs);

  static Flat point(RVec p) { return Flat(std::move(p), {}); }

  std::size_t ambient_dim() const { return base_.size(); }
  std::size_t dim() const { return dirs_.size(); }
  const RVec& base() const { return base_; }
  const RMat& dirs() const { return dirs_; }

  /// base + sum coords_j dirs_j
  RVec at(const RVec& coords) const;

  friend bool operator==(const Flat&, const Flat&) = default;

 private:
  RVec base_;
  RMat dirs_;
};

/// {x : normal . x = offset}, normal nonzero.
class Hyperplane {
 public:
  Hyperplane(RVec normal, Rat offset);

  std::size_t ambient_dim() const { return normal_.size(); }
  const RVec& normal() const { return normal_; }
  const Rat& offset() const { return offset_; }

  /// normal . x - offset; its sign tells the side of x.
  Rat eval(const RVec& x) const;
  int side(const RVec& x) const { return sgn(eval(x)); }
  bool contains(const RVec& x) const { return side(x) == 0; }

  friend bool operator==(const Hyperplane&, const Hyperplane&) = default;

 private:
  RVec normal_;
  Rat offset_;
};

bool flat_contains(const Flat& f, const RVec& p);

/// True iff every point of `f` lies on `h`.
bool hyperplane_contains_flat(const Hyperplane& h, const Flat& f);

struct EmptyIntersection {};
struct ContainedIntersection {};
using FlatHyperplaneIntersection = std::variant<Flat, EmptyIntersection, ContainedIntersection>;

/// Transversal case gives a flat of dimension f.dim() - 1.
FlatHyperplaneIntersection intersect_flat_hyperplane(const Flat& f, const Hyperplane& h);

/// Intersection point of two flats of complementary dimension, if it is a single point.
std::optional<RVec> intersect_complementary(const Flat& u, const Flat& a);

/// Coordinates t with a.at(t) == p, assuming p lies on a.
RVec coordinates_in(const Flat& a, const RVec& p);

/// The single common point of d hyperplanes in R^d, or nullopt when they are not independent.
std::optional<RVec> intersect_hyperplanes(const std::vector<const Hyperplane*>& hs);

}  // namespace esflats::geom
