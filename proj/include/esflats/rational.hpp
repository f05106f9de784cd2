#pragma once

// Exact rational scalars and the dense linear algebra over Q built on them.

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace esflats {

using Rat = mpq_class;
using RVec = std::vector<Rat>;
using RMat = std::vector<RVec>;  // row-major, every row the same length

/// Parses "p/q", "p" or a plain decimal such as "-0.125" into a canonical rational.
Rat parse_rat(std::string_view text);
/// Canonical text form, "p/q" or "p" for integers.
std::string format_rat(const Rat& q);
/// Exact conversion; every finite double is a dyadic rational.
Rat rat_from_double(double v);
double to_double(const Rat& q);

inline int sign(const Rat& q) { return sgn(q); }

RVec zeros(std::size_t n);
RVec unit_vector(std::size_t n, std::size_t i);
RVec add(const RVec& a, const RVec& b);
RVec sub(const RVec& a, const RVec& b);
RVec scale(const Rat& s, const RVec& a);
/// a + s*b
RVec axpy(const RVec& a, const Rat& s, const RVec& b);
Rat dot(const RVec& a, const RVec& b);
Rat norm_sq(const RVec& a);
Rat norm1(const RVec& a);
bool is_zero(const RVec& a);
RVec centroid(std::span<const RVec> pts);

std::vector<double> to_doubles(const RVec& v);
RVec from_doubles(std::span<const double> v);

/// Reduced row echelon form; returns pivot column per pivot row.
std::vector<std::size_t> rref(RMat& m);

std::size_t rank(RMat rows);
Rat determinant(RMat m);
/// Basis of {x : A x = 0}; `cols` is needed when A has no rows.
RMat nullspace(const RMat& a, std::size_t cols);
/// Unique solution of the square system A x = b, or nullopt when singular.
std::optional<RVec> solve_unique(const RMat& a, const RVec& b);
/// Some solution of A x = b (free variables set to zero), or nullopt when inconsistent.
std::optional<RVec> solve_any(const RMat& a, const RVec& b, std::size_t cols);

/// Dimension of the affine hull of the points (-1 for an empty set).
int affine_dimension(std::span<const RVec> pts);

/// Rank of {p_j - p_0} equals 2 test for three points.
bool collinear(const RVec& a, const RVec& b, const RVec& c);

/// Pairwise orthogonal (not normalized) basis of span(vs), Gram-Schmidt over Q.
RMat gram_schmidt(const RMat& vs);

}  // namespace esflats
