#pragma once

// Seeded random families in general position for tests and experiments.

#include <cstdint>
#include <vector>

#include "esflats/geom.hpp"

namespace esflats::instances {

/// n points in R^d with small rational coordinates, no three collinear.
std::vector<RVec> random_points(std::size_t d, std::size_t n, std::uint64_t seed);

/// n random k-flats in R^d that admit a transversal (general_position_flats succeeds).
/// Requires k < d - 1.
std::vector<geom::Flat> random_flats(std::size_t d, std::size_t k, std::size_t n, std::uint64_t seed);

/// n hyperplanes in R^d in general position.
std::vector<geom::Hyperplane> random_hyperplanes(std::size_t d, std::size_t n, std::uint64_t seed);

}  // namespace esflats::instances
