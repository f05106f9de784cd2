#pragma once

// Deciding and certifying convex position, from planar points up to k-flats in R^d.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "esflats/geom.hpp"
#include "esflats/lp.hpp"

namespace esflats::convexpos {

using geom::Flat;
using geom::Hyperplane;

/// Entries in {+1, -1}.
using SignVector = std::vector<int>;

/// Witness that a family of k-flats in R^d is in convex position.
///
/// With V = interior_block plus all touch points and P = conv(V), the certificate
/// is valid when for every flat i: the touch set lies in the flat, the support
/// hyperplane contains the flat, every point of V outside the touch set is
/// strictly on one side of the support, and the touch set spans a k-dimensional
/// affine hull. The interior block must span R^d. Then flat_i meets P exactly in
/// conv(touch_set_i), a k-face of the d-polytope P.
struct ConvexityCertificate {
  std::size_t d = 0;
  std::size_t k = 0;
  std::vector<Flat> flats;
  std::vector<std::vector<RVec>> touch_sets;
  std::vector<Hyperplane> supports;
  std::vector<RVec> interior_block;
};

struct Verdict {
  bool ok = true;
  std::string clause;   // "a".."d", "interior", "shape"; empty when ok
  std::string message;  // first violation with indices
};

Verdict verify_certificate(const ConvexityCertificate& cert);

/// Every point is a vertex of the hull of all points. Needs at least three pairwise distinct points.
bool points_convex_position(const std::vector<RVec>& pts);

struct GeneralPositionReport {
  bool ok = true;
  std::string reason;
};

/// Every d of the hyperplanes meet in one point and those binom(n, d) points are distinct.
GeneralPositionReport general_position_hyperplanes(const std::vector<Hyperplane>& hps);

/// Strict sign constraints describing the open arrangement cell with sign vector sigma:
/// sigma_i (n_i . x - c_i) > 0. When `on_line` is set, that hyperplane becomes an equality.
std::vector<lp::Constraint> cell_constraints(const std::vector<Hyperplane>& hps, const SignVector& sigma,
                                             std::optional<std::size_t> on_line = std::nullopt);

/// True iff the open cell is nonempty and each hyperplane carries a facet of its closure.
bool cell_touches_all(const std::vector<Hyperplane>& hps, const SignVector& sigma);

struct LinesVerdict {
  bool convex = false;
  std::optional<SignVector> witness;  // lexicographically smallest qualifying cell
};

/// Lines in the plane in general position (pairwise non-parallel, no three concurrent).
/// Convex iff some arrangement cell has every line as an edge.
LinesVerdict lines_convex_position_2d(const std::vector<Hyperplane>& lines);

/// Builds the certificate for the closure of the cell `sigma` cut by a box, with the
/// hyperplanes themselves as supports. Throws ConstructionError when a hyperplane
/// does not carry a facet.
ConvexityCertificate lift_cell_certificate(const std::vector<Hyperplane>& hps, const SignVector& sigma);

struct HyperplanesVerdict {
  bool convex = false;
  bool certified = false;  // true answers are certified; false ones are not
  std::optional<SignVector> witness;
  std::optional<ConvexityCertificate> certificate;
  std::string note;
};

struct SectionOptions {
  std::uint64_t seed = 1;
  int retries = 32;
};

/// Random 2-plane sections reduce to the planar decider; a planar witness is
/// lifted to a certificate. Negative answers are "no witness found".
HyperplanesVerdict hyperplanes_convex_position(const std::vector<Hyperplane>& hps,
                                               const SectionOptions& opts = {});

/// Lines cut out on the 2-plane {p + s r1 + t r2} in (s, t) coordinates; nullopt
/// when some hyperplane is parallel to the plane.
std::optional<std::vector<Hyperplane>> section_lines(const std::vector<Hyperplane>& hps, const RVec& p,
                                                     const RVec& r1, const RVec& r2);

struct FlatsGeneralPosition {
  bool ok = false;
  std::optional<Flat> transversal;  // the (d-k)-flat A; absent for k = 0 (A is all of R^d)
  std::vector<RVec> points;         // U_i meet A
  std::string note;
};

/// Samples rational (d-k)-flats A until one meets every flat in a single point
/// with those points affinely spanning A and free of collinear triples (exact checks).
/// A negative answer is probabilistic.
FlatsGeneralPosition general_position_flats(const std::vector<Flat>& flats, const SectionOptions& opts = {});

/// Checks the three transversal conditions for a given A.
bool transversal_ok(const std::vector<Flat>& flats, const Flat& a, std::vector<RVec>* points = nullptr);

/// Hyperplane {normal . x = offset} as a (d-1)-flat.
Flat hyperplane_as_flat(const Hyperplane& h);
/// A (d-1)-flat as a hyperplane.
Hyperplane flat_as_hyperplane(const Flat& f);

}  // namespace esflats::convexpos
