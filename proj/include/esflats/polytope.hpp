#pragma once

#include <vector>

#include "esflats/rational.hpp"

namespace esflats::geom {

/// Closed halfspace {x : normal . x <= bound}.
struct Halfspace {
  RVec normal;
  Rat bound;
};

/// All vertices of the polyhedron cut out by the halfspaces, exactly: every
/// d-subset of bounding hyperplanes with a unique common point is solved and
/// kept if it satisfies all halfspaces. Output sorted lexicographically, no duplicates.
/// Meant for desk-scale inputs (binom(m, d) subsets).
std::vector<RVec> vertex_enumeration(const std::vector<Halfspace>& halfspaces, std::size_t dim);

/// Lexicographic order on equal-length rational vectors.
bool lex_less(const RVec& a, const RVec& b);

/// Sorts and removes duplicates.
void sort_unique(std::vector<RVec>& pts);

}  // namespace esflats::geom
