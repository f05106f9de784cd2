#pragma once

// Largest convex subsets of planar point sets, and extraction of certified
// convex subfamilies of flats built on top of them.

#include <cstdint>
#include <optional>
#include <vector>

#include "esflats/convexpos.hpp"

namespace esflats::eskit {

using convexpos::ConvexityCertificate;
using geom::Flat;
using geom::Hyperplane;

/// Indices (ascending) of a maximum subset in convex position. Among optimal
/// subsets the first anchor in input order wins, then the smallest predecessor.
/// Throws GeneralPositionError naming a collinear triple.
std::vector<std::size_t> largest_convex_subset_2d(const std::vector<RVec>& pts);

/// Image of the points under a seeded random rational linear map to R^2 that keeps
/// them free of collinear triples. For d = 2 the points are returned unchanged.
std::vector<RVec> generic_projection(const std::vector<RVec>& pts, std::uint64_t seed = 1, int retries = 32);

struct ExtractOptions {
  std::uint64_t seed = 1;
  int retries = 32;
  /// n-subsets examined per section by the hyperplane pipeline.
  std::size_t subset_cap = 20000;
};

struct ExtractionResult {
  std::vector<std::size_t> chosen_indices;
  std::optional<Flat> transversal;  // absent for points and hyperplanes
  std::vector<RVec> points;         // flat i meets the transversal at points[i]
  ConvexityCertificate certificate;
};

struct AnchorSearch {
  convexpos::FlatsGeneralPosition general_position;
  std::vector<std::size_t> convex;  // largest convex subset of the anchors found, ascending
};

/// Meets the flats with a transversal and runs the planar search on a generic
/// projection of the anchors. Throws GeneralPositionError when no transversal is found.
AnchorSearch find_convex_anchors(const std::vector<Flat>& flats, const ExtractOptions& opts = {});

/// Builds a certificate for flats whose anchors b_i (b_i on flat i) are in convex
/// position, with `transversal_dirs` spanning a complement of every flat's directions
/// (empty means R^d). Throws ConstructionError if the result does not verify.
ConvexityCertificate certify_from_anchors(const std::vector<Flat>& flats, const std::vector<RVec>& anchors,
                                          const RMat& transversal_dirs = {});

/// n flats in convex position out of a family of k-flats, 0 <= k < d - 1.
/// Throws SearchExhausted when fewer than n convex points are found; bad input
/// raises InputError or its GeneralPositionError subclass.
ExtractionResult extract_convex_flats(const std::vector<Flat>& flats, std::size_t n, const ExtractOptions& opts = {});

/// n hyperplanes in convex position, found on a random 2-plane section.
/// Throws SearchExhausted when the capped search finds none.
ExtractionResult hyperplane_pipeline(const std::vector<Hyperplane>& hps, std::size_t n,
                                     const ExtractOptions& opts = {});

}  // namespace esflats::eskit
